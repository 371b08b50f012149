#include "isodiff/bvp.hpp"

#include <Eigen/Sparse>
#include <cmath>
#include <numbers>
#include <tuple>

#include "isodiff/errors.hpp"
#include "isodiff/fd.hpp"
#include "isodiff/quadrature.hpp"

namespace isodiff {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplets = std::vector<Eigen::Triplet<double>>;

// Precomputed stencils for a uniform grid of spacing h.
struct Stencils {
  // second derivative at node i: centered 5-point in the interior, skewed
  // 6-point (same order) at the nodes next to the boundary.
  std::vector<double> d2_center;        // offsets -2..2
  std::vector<double> d2_left;          // at i=1, offsets -1..4
  std::vector<double> d2_right;         // at i=n-2, offsets -4..1
  std::vector<double> d1_fwd;           // first derivative at i=0, offsets 0..4
  std::vector<double> d1_bwd;           // at i=n-1, offsets -4..0

  explicit Stencils(double h) {
    auto nodes = [h](int lo, int hi) {
      std::vector<double> x;
      for (int j = lo; j <= hi; ++j) x.push_back(j * h);
      return x;
    };
    d2_center = fd_weights(0.0, nodes(-2, 2), 2);
    d2_left = fd_weights(0.0, nodes(-1, 4), 2);
    d2_right = fd_weights(0.0, nodes(-4, 1), 2);
    d1_fwd = fd_weights(0.0, nodes(0, 4), 1);
    d1_bwd = fd_weights(0.0, nodes(-4, 0), 1);
  }
};

struct Row {
  int lo;  // first column
  const std::vector<double>* w;
};

Row d2_row(const Stencils& st, int i, int n) {
  if (i == 1) return {0, &st.d2_left};
  if (i == n - 2) return {n - 6, &st.d2_right};
  return {i - 2, &st.d2_center};
}

// Residual rows 0..n-1 for the ODE part; bc rows included.
void assemble_residual(const BvpGrid& grid, const Stencils& st, BvpBc left,
                       BvpBc right,
                       const std::function<double(double, double)>& g,
                       const std::vector<double>& q, double alpha,
                       const std::vector<double>& psi,
                       std::vector<double>& F) {
  const int n = static_cast<int>(grid.size);
  F.assign(n, 0.0);
  // boundary rows
  auto bc_row = [&](int i, BvpBc bc, const std::vector<double>& d1, int lo) {
    switch (bc) {
      case BvpBc::RobinZero: {
        double dq = 0;
        for (std::size_t j = 0; j < d1.size(); ++j) dq += d1[j] * q[lo + j];
        return dq - q[i];
      }
      case BvpBc::RobinTwoPi: {
        double dq = 0;
        for (std::size_t j = 0; j < d1.size(); ++j) dq += d1[j] * q[lo + j];
        return dq + q[i] - 2.0 * std::numbers::pi;
      }
      case BvpBc::DirichletPi:
        return q[i] - std::numbers::pi;
    }
    return 0.0;
  };
  F[0] = bc_row(0, left, st.d1_fwd, 0);
  F[n - 1] = bc_row(n - 1, right, st.d1_bwd, n - 5);
  for (int i = 1; i < n - 1; ++i) {
    const Row r = d2_row(st, i, n);
    double d2 = 0;
    for (std::size_t j = 0; j < r.w->size(); ++j) d2 += (*r.w)[j] * q[r.lo + j];
    F[i] = -d2 + g(grid.t(i), q[i]);
    if (!psi.empty()) F[i] -= alpha * psi[i];
  }
}

void assemble_jacobian(const BvpGrid& grid, const Stencils& st, BvpBc left,
                       BvpBc right,
                       const std::function<double(double, double)>& g_q,
                       const std::vector<double>& q,
                       const std::vector<double>& psi,
                       const std::vector<double>& cw, Triplets& T) {
  const int n = static_cast<int>(grid.size);
  T.clear();
  auto bc_jac = [&](int row, BvpBc bc, const std::vector<double>& d1, int lo) {
    if (bc == BvpBc::DirichletPi) {
      T.emplace_back(row, row, 1.0);
      return;
    }
    for (std::size_t j = 0; j < d1.size(); ++j)
      T.emplace_back(row, lo + static_cast<int>(j), d1[j]);
    T.emplace_back(row, row, bc == BvpBc::RobinZero ? -1.0 : 1.0);
  };
  bc_jac(0, left, st.d1_fwd, 0);
  bc_jac(n - 1, right, st.d1_bwd, n - 5);
  for (int i = 1; i < n - 1; ++i) {
    const Row r = d2_row(st, i, n);
    for (std::size_t j = 0; j < r.w->size(); ++j)
      T.emplace_back(i, r.lo + static_cast<int>(j), -(*r.w)[j]);
    T.emplace_back(i, i, g_q(grid.t(i), q[i]));
    if (!psi.empty()) T.emplace_back(i, n, -psi[i]);
  }
  if (!psi.empty()) {
    // constraint row: sum_i cw_i psi_i q_i = sum_i cw_i psi_i qref_i
    for (int i = 0; i < n; ++i)
      if (cw[i] * psi[i] != 0.0) T.emplace_back(n, i, cw[i] * psi[i]);
  }
}

BvpResult newton_solve(const BvpGrid& grid, BvpBc left, BvpBc right,
                       const std::function<double(double, double)>& g,
                       const std::function<double(double, double)>& g_q,
                       const std::vector<double>& init,
                       const std::vector<double>& psi,
                       const std::vector<double>& qref,
                       const BvpOptions& opts) {
  const int n = static_cast<int>(grid.size);
  if (n < 8) throw ConfigError("solve_bvp: grid too small");
  const bool constrained = !psi.empty();
  const int dim = constrained ? n + 1 : n;
  const Stencils st(grid.h);

  std::vector<double> cw;
  double rhs_con = 0;
  if (constrained) {
    cw = gregory_weights(grid.size, grid.h);
    for (int i = 0; i < n; ++i) rhs_con += cw[i] * psi[i] * qref[i];
  }

  std::vector<double> q = init;
  double alpha = 0.0;
  std::vector<double> F;
  Triplets T;
  Eigen::VectorXd Fv(dim), delta(dim);
  SpMat J(dim, dim);
  Eigen::SparseLU<SpMat> lu;

  auto full_residual = [&](const std::vector<double>& qq, double aa) {
    assemble_residual(grid, st, left, right, g, qq, aa, psi, F);
    double con = 0;
    if (constrained) {
      for (int i = 0; i < n; ++i) con += cw[i] * psi[i] * qq[i];
      con -= rhs_con;
    }
    double norm2 = 0, sup = 0;
    for (double v : F) {
      norm2 += v * v;
      sup = std::max(sup, std::fabs(v));
    }
    if (constrained) {
      norm2 += con * con;
      sup = std::max(sup, std::fabs(con));
    }
    return std::tuple{std::sqrt(norm2), sup, con};
  };

  auto [norm2, sup, con] = full_residual(q, alpha);
  for (int iter = 0; iter < opts.max_iter; ++iter) {
    if (sup < opts.tol) break;
    assemble_jacobian(grid, st, left, right, g_q, q, psi, cw, T);
    J.setFromTriplets(T.begin(), T.end());
    lu.compute(J);
    if (lu.info() != Eigen::Success)
      throw SolverError("solve_bvp: singular Jacobian", sup);
    for (int i = 0; i < n; ++i) Fv[i] = F[i];
    if (constrained) Fv[n] = con;
    delta = lu.solve(Fv);

    // backtracking line search on the 2-norm
    double lam = 1.0;
    std::vector<double> q_try(n);
    bool accepted = false;
    for (int ls = 0; ls < 25; ++ls) {
      for (int i = 0; i < n; ++i) q_try[i] = q[i] - lam * delta[i];
      const double a_try = constrained ? alpha - lam * delta[n] : 0.0;
      auto [n2, s2, c2] = full_residual(q_try, a_try);
      if (n2 < norm2 * (1.0 - 0.25 * lam) || s2 < opts.tol) {
        q = q_try;
        alpha = a_try;
        norm2 = n2;
        sup = s2;
        con = c2;
        accepted = true;
        break;
      }
      lam *= 0.5;
    }
    if (!accepted)
      throw SolverError("solve_bvp: Newton line search stalled", sup);
    if (iter == opts.max_iter - 1 && sup >= opts.tol)
      throw SolverError("solve_bvp: Newton did not converge", sup);
  }
  if (sup >= opts.tol)
    throw SolverError("solve_bvp: Newton did not converge", sup);

  if (opts.max_dev > 0) {
    double dev = 0;
    for (int i = 0; i < n; ++i) dev = std::max(dev, std::fabs(q[i] - init[i]));
    if (dev > opts.max_dev)
      throw SolverError("solve_bvp: solution left the local uniqueness "
                        "neighborhood", dev);
  }

  BvpResult out;
  out.q = std::move(q);
  out.residual = sup;
  if (constrained) out.multiplier = alpha;
  return out;
}

}  // namespace

BvpResult solve_bvp(const BvpGrid& grid, BvpBc left, BvpBc right,
                    const std::function<double(double, double)>& g,
                    const std::function<double(double, double)>& g_q,
                    const std::vector<double>& init, const BvpOptions& opts) {
  return newton_solve(grid, left, right, g, g_q, init, {}, {}, opts);
}

BvpResult solve_bvp_constrained(
    const BvpGrid& grid, BvpBc left, BvpBc right,
    const std::function<double(double, double)>& g,
    const std::function<double(double, double)>& g_q,
    const std::vector<double>& psi, const std::vector<double>& qref,
    const BvpOptions& opts) {
  return newton_solve(grid, left, right, g, g_q, qref, psi, qref, opts);
}

}  // namespace isodiff
