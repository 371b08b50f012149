#include "isodiff/orbits.hpp"

#include <cmath>
#include <numbers>

#include "isodiff/errors.hpp"
#include "isodiff/fd.hpp"
#include "isodiff/separatrix.hpp"
#include "isodiff/torus.hpp"

namespace isodiff {

namespace {

using std::numbers::pi;

std::vector<double> phases_at(const FrequencyVector& omega,
                              const std::vector<double>& A, double t) {
  std::vector<double> phi(A.size());
  for (std::size_t i = 0; i < A.size(); ++i)
    phi[i] = omega.omega[i] * t + A[i];
  return phi;
}

void check_preconditions(double mu, const std::vector<double>& A,
                         const FrequencyVector& omega,
                         const PerturbationSeries& f,
                         const OrbitOptions& opts, bool need_factor_mode) {
  if (std::fabs(mu) > opts.mu_max)
    throw ConfigError("heteroclinic solver: mu above smallness threshold");
  if (static_cast<int>(A.size()) != omega.n() || omega.n() != f.n)
    throw ConfigError("heteroclinic solver: dimension mismatch");
  if (need_factor_mode &&
      f.q_mode != PerturbationSeries::QMode::FactorOneMinusCosQ)
    throw ConfigError("heteroclinic solver: FactorOneMinusCosQ mode required");
}

struct HalfGrids {
  BvpGrid left, right;
  double h, T;
  std::size_t M;  // nodes per half minus one
};

HalfGrids make_grids(double theta, const OrbitOptions& opts) {
  HalfGrids g;
  g.T = opts.effective_T_cut();
  g.M = static_cast<std::size_t>(std::ceil(g.T / opts.h));
  g.h = g.T / static_cast<double>(g.M);
  g.left = {theta - g.T, g.h, g.M + 1};
  g.right = {theta, g.h, g.M + 1};
  return g;
}

void check_boundaries(double q_left, double q_right, double eps_bc) {
  // two-sided: rounding can place the endpoint a few ulps past the equilibrium
  if (!(std::abs(q_left) < eps_bc))
    throw SolverError("heteroclinic solver: left asymptotic boundary value "
                      "not within eps_bc of 0", q_left);
  if (!(std::abs(q_right - 2.0 * pi) < eps_bc))
    throw SolverError("heteroclinic solver: right asymptotic boundary value "
                      "not within eps_bc of 2pi", q_right);
}

PseudoOrbit assemble_glued(double mu, const std::vector<double>& A,
                           double theta, const HalfGrids& g,
                           const BvpResult& left, const BvpResult& right) {
  PseudoOrbit orb;
  orb.mu = mu;
  orb.A = A;
  orb.theta = theta;
  orb.h = g.h;
  orb.T_cut = g.T;
  orb.theta_index = g.M;
  const std::size_t total = 2 * g.M + 1;
  orb.t.resize(total);
  orb.q.resize(total);
  for (std::size_t i = 0; i <= g.M; ++i) {
    orb.t[i] = g.left.t(i);
    orb.q[i] = left.q[i];
  }
  for (std::size_t i = 1; i <= g.M; ++i) {
    orb.t[g.M + i] = g.right.t(i);
    orb.q[g.M + i] = right.q[i];
  }
  auto dl = fd_derivative_uniform(left.q, g.h, 1);
  auto dr = fd_derivative_uniform(right.q, g.h, 1);
  orb.qdot.resize(total);
  for (std::size_t i = 0; i <= g.M; ++i) orb.qdot[i] = dl[i];
  for (std::size_t i = 1; i <= g.M; ++i) orb.qdot[g.M + i] = dr[i];
  orb.qdot_right_at_theta = dr[0];
  orb.qdot_jump = dr[0] - dl[g.M];
  orb.residual = std::max(left.residual, right.residual);
  return orb;
}

}  // namespace

double OrbitOptions::effective_T_cut() const {
  if (T_cut > 0) return T_cut;
  return std::max(std::fabs(std::log(tol)) + 5.0, 20.0);
}

PseudoOrbit solve_glued_heteroclinic(double mu, const std::vector<double>& A,
                                     double theta, const FrequencyVector& omega,
                                     const PerturbationSeries& f,
                                     const OrbitOptions& opts) {
  check_preconditions(mu, A, omega, f, opts, true);
  const HalfGrids g = make_grids(theta, opts);

  auto rhs = [&](double t, double q) {
    const auto phi = phases_at(omega, A, t);
    return std::sin(q) * (1.0 - mu * f.phi_sum(phi));
  };
  auto rhs_q = [&](double t, double q) {
    const auto phi = phases_at(omega, A, t);
    return std::cos(q) * (1.0 - mu * f.phi_sum(phi));
  };

  BvpOptions bopts{opts.tol, opts.max_iter, pi / 2.0};
  auto init_on = [&](const BvpGrid& gr) {
    std::vector<double> q(gr.size);
    for (std::size_t i = 0; i < gr.size; ++i)
      q[i] = separatrix_q(gr.t(i), theta);
    return q;
  };
  auto left = solve_bvp(g.left, BvpBc::RobinZero, BvpBc::DirichletPi, rhs,
                        rhs_q, init_on(g.left), bopts);
  auto right = solve_bvp(g.right, BvpBc::DirichletPi, BvpBc::RobinTwoPi, rhs,
                         rhs_q, init_on(g.right), bopts);
  check_boundaries(left.q.front(), right.q.back(), opts.eps_bc);
  return assemble_glued(mu, A, theta, g, left, right);
}

PseudoOrbit solve_constrained_heteroclinic(double mu,
                                           const std::vector<double>& A,
                                           double theta,
                                           const FrequencyVector& omega,
                                           const PerturbationSeries& f,
                                           const OrbitOptions& opts) {
  check_preconditions(mu, A, omega, f, opts, true);
  const HalfGrids g = make_grids(theta, opts);
  const std::size_t total = 2 * g.M + 1;
  BvpGrid grid{theta - g.T, g.h, total};

  auto rhs = [&](double t, double q) {
    const auto phi = phases_at(omega, A, t);
    return std::sin(q) * (1.0 - mu * f.phi_sum(phi));
  };
  auto rhs_q = [&](double t, double q) {
    const auto phi = phases_at(omega, A, t);
    return std::cos(q) * (1.0 - mu * f.phi_sum(phi));
  };

  std::vector<double> psi(total), qref(total);
  for (std::size_t i = 0; i < total; ++i) {
    psi[i] = constraint_weight(grid.t(i) - theta);
    qref[i] = separatrix_q(grid.t(i), theta);
  }

  BvpOptions bopts{opts.tol, opts.max_iter, pi / 2.0};
  auto res = solve_bvp_constrained(grid, BvpBc::RobinZero, BvpBc::RobinTwoPi,
                                   rhs, rhs_q, psi, qref, bopts);
  check_boundaries(res.q.front(), res.q.back(), opts.eps_bc);

  PseudoOrbit orb;
  orb.mu = mu;
  orb.A = A;
  orb.theta = theta;
  orb.h = g.h;
  orb.T_cut = g.T;
  orb.theta_index = g.M;
  orb.t.resize(total);
  for (std::size_t i = 0; i < total; ++i) orb.t[i] = grid.t(i);
  orb.q = std::move(res.q);
  orb.qdot = fd_derivative_uniform(orb.q, g.h, 1);
  orb.qdot_right_at_theta = orb.qdot[g.M];
  orb.qdot_jump = 0.0;
  orb.residual = res.residual;
  orb.multiplier = res.multiplier;
  return orb;
}

PseudoOrbit solve_general_heteroclinic(double mu, const std::vector<double>& A,
                                       double theta,
                                       const FrequencyVector& omega,
                                       const InvariantTorus& torus,
                                       const PerturbationSeries& f,
                                       const OrbitOptions& opts) {
  check_preconditions(mu, A, omega, f, opts, false);
  if (torus.mu != mu)
    throw ConfigError("solve_general_heteroclinic: torus solved for a "
                      "different mu");
  const HalfGrids g = make_grids(theta, opts);

  // -u'' + sin u = dP0/du reduces to
  // u'' = sin(Q + u) - sin Q - mu (df/dq(psi, Q+u) - df/dq(psi, Q)).
  auto rhs = [&](double t, double u) {
    const auto phi = phases_at(omega, A, t);
    const double Q = torus.Q_at(phi);
    return std::sin(Q + u) - std::sin(Q) -
           mu * (f.dq(phi, Q + u) - f.dq(phi, Q));
  };
  auto rhs_u = [&](double t, double u) {
    const auto phi = phases_at(omega, A, t);
    const double Q = torus.Q_at(phi);
    return std::cos(Q + u) - mu * f.dqq(phi, Q + u);
  };

  BvpOptions bopts{opts.tol, opts.max_iter, pi / 2.0};
  auto init_on = [&](const BvpGrid& gr) {
    std::vector<double> u(gr.size);
    for (std::size_t i = 0; i < gr.size; ++i)
      u[i] = separatrix_q(gr.t(i), theta);
    return u;
  };
  auto left = solve_bvp(g.left, BvpBc::RobinZero, BvpBc::DirichletPi, rhs,
                        rhs_u, init_on(g.left), bopts);
  auto right = solve_bvp(g.right, BvpBc::DirichletPi, BvpBc::RobinTwoPi, rhs,
                         rhs_u, init_on(g.right), bopts);
  check_boundaries(left.q.front(), right.q.back(), opts.eps_bc);
  return assemble_glued(mu, A, theta, g, left, right);
}

}  // namespace isodiff
