#include "isodiff/melnikov.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "isodiff/angles.hpp"
#include "isodiff/errors.hpp"
#include "isodiff/fourier.hpp"
#include "isodiff/parallel.hpp"
#include "isodiff/quadrature.hpp"
#include "isodiff/separatrix.hpp"

namespace isodiff {

namespace {

using std::numbers::pi;

std::vector<double> phases_at(const FrequencyVector& omega,
                              std::span<const double> A, double t) {
  std::vector<double> phi(A.size());
  for (std::size_t i = 0; i < A.size(); ++i)
    phi[i] = omega.omega[i] * t + A[i];
  return phi;
}

double lagrangian(double mu, const FrequencyVector& omega,
                  const PerturbationSeries& f, std::span<const double> A,
                  double t, double q, double qdot) {
  // The mu-term carries the sign making G_mu = const + mu Gamma + O(mu^2)
  // hold with the positive normalization Gamma_0 = 4 f_0.
  const auto phi = phases_at(omega, A, t);
  return 0.5 * qdot * qdot + (1.0 - std::cos(q)) + mu * f.eval(phi, q);
}

}  // namespace

std::string to_string(GridKind k) {
  switch (k) {
    case GridKind::Glued: return "glued";
    case GridKind::Reduced: return "reduced";
    case GridKind::General: return "general";
    case GridKind::MelnikovGamma: return "melnikov_gamma";
    case GridKind::MelnikovM: return "melnikov_m";
  }
  return "?";
}

GridKind grid_kind_from_string(const std::string& s) {
  if (s == "glued") return GridKind::Glued;
  if (s == "reduced") return GridKind::Reduced;
  if (s == "general") return GridKind::General;
  if (s == "melnikov_gamma") return GridKind::MelnikovGamma;
  if (s == "melnikov_m") return GridKind::MelnikovM;
  throw ConfigError("unknown grid kind: " + s);
}

std::size_t HomoclinicGrid::size() const {
  std::size_t total = 1;
  for (int s : shape) total *= static_cast<std::size_t>(s);
  return total;
}

std::size_t HomoclinicGrid::flat_index(const std::vector<int>& idx) const {
  std::size_t flat = 0;
  for (int d = 0; d < dim(); ++d) {
    int i = ((idx[d] % shape[d]) + shape[d]) % shape[d];
    flat = flat * static_cast<std::size_t>(shape[d]) + i;
  }
  return flat;
}

std::vector<double> HomoclinicGrid::angle(const std::vector<int>& idx) const {
  std::vector<double> A(dim());
  for (int d = 0; d < dim(); ++d) A[d] = two_pi * idx[d] / shape[d];
  return A;
}

double& HomoclinicGrid::at(const std::vector<int>& idx) {
  return values[flat_index(idx)];
}

double HomoclinicGrid::at(const std::vector<int>& idx) const {
  return values[flat_index(idx)];
}

double HomoclinicGrid::interp(std::span<const double> A) const {
  const int n = dim();
  std::vector<int> base(n);
  std::vector<double> frac(n);
  for (int d = 0; d < n; ++d) {
    const double x = wrap_angle(A[d]) / two_pi * shape[d];
    base[d] = static_cast<int>(std::floor(x));
    frac[d] = x - base[d];
  }
  double out = 0;
  std::vector<int> idx(n);
  for (int corner = 0; corner < (1 << n); ++corner) {
    double w = 1;
    for (int d = 0; d < n; ++d) {
      const bool hi = corner & (1 << d);
      idx[d] = base[d] + (hi ? 1 : 0);
      w *= hi ? frac[d] : 1.0 - frac[d];
    }
    if (w != 0) out += w * at(idx);
  }
  return out;
}

double HomoclinicGrid::min_value() const {
  double m = values.front();
  for (double v : values) m = std::min(m, v);
  return m;
}

double HomoclinicGrid::max_value() const {
  double m = values.front();
  for (double v : values) m = std::max(m, v);
  return m;
}

void HomoclinicGrid::save(std::ostream& os) const {
  os << "# kind " << to_string(kind) << " mu ";
  os.precision(17);
  os << std::scientific << mu << " shape";
  for (int s : shape) os << ' ' << s;
  os << " meta " << (meta.empty() ? "-" : meta) << '\n';
  for (std::size_t i = 0; i < values.size(); ++i)
    os << values[i] << ((i + 1) % shape.back() == 0 ? '\n' : ' ');
}

HomoclinicGrid HomoclinicGrid::load(std::istream& is) {
  HomoclinicGrid g;
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("HomoclinicGrid: empty input");
  std::istringstream h(line);
  std::string hash, tag, kind_s;
  h >> hash >> tag >> kind_s;
  if (hash != "#" || tag != "kind")
    throw ConfigError("HomoclinicGrid: bad header: " + line);
  g.kind = grid_kind_from_string(kind_s);
  h >> tag >> g.mu >> tag;
  int s;
  while (h >> s) g.shape.push_back(s);
  if (h.fail()) {
    h.clear();
    h >> tag >> g.meta;  // "meta <hash>"
    if (g.meta == "-") g.meta.clear();
  }
  if (g.shape.empty()) throw ConfigError("HomoclinicGrid: no shape");
  double v;
  while (is >> v) g.values.push_back(v);
  if (g.values.size() != g.size())
    throw ConfigError("HomoclinicGrid: value count does not match shape");
  return g;
}

double action_of_orbit(const PseudoOrbit& orbit, const FrequencyVector& omega,
                       const PerturbationSeries& f) {
  const std::size_t m = orbit.theta_index;
  std::vector<double> integrand;
  double total = 0;
  if (orbit.multiplier.has_value() || orbit.qdot_jump == 0.0) {
    // smooth full-line orbit
    integrand.resize(orbit.t.size());
    for (std::size_t i = 0; i < orbit.t.size(); ++i)
      integrand[i] = lagrangian(orbit.mu, omega, f, orbit.A, orbit.t[i],
                                orbit.q[i], orbit.qdot[i]);
    total = integrate_uniform(integrand, orbit.h);
  } else {
    integrand.resize(m + 1);
    for (std::size_t i = 0; i <= m; ++i)
      integrand[i] = lagrangian(orbit.mu, omega, f, orbit.A, orbit.t[i],
                                orbit.q[i], orbit.qdot[i]);
    total = integrate_uniform(integrand, orbit.h);
    for (std::size_t i = m; i < orbit.t.size(); ++i) {
      const double qd =
          i == m ? orbit.qdot_right_at_theta : orbit.qdot[i];
      integrand[i - m] = lagrangian(orbit.mu, omega, f, orbit.A, orbit.t[i],
                                    orbit.q[i], qd);
    }
    total += integrate_uniform(integrand, orbit.h);
  }
  // exponential tail corrections beyond the truncated line
  const double ql = orbit.q.front();
  const double qr = two_pi - orbit.q.back();
  total += 0.5 * ql * ql + 0.5 * qr * qr;
  return total;
}

double action_glued(double mu, const std::vector<double>& A, double theta,
                    const FrequencyVector& omega, const PerturbationSeries& f,
                    const OrbitOptions& opts) {
  return action_of_orbit(solve_glued_heteroclinic(mu, A, theta, omega, f, opts),
                         omega, f);
}

double action_reduced(double mu, const std::vector<double>& A, double theta,
                      const FrequencyVector& omega,
                      const PerturbationSeries& f, const OrbitOptions& opts) {
  return action_of_orbit(
      solve_constrained_heteroclinic(mu, A, theta, omega, f, opts), omega, f);
}

double action_general(double mu, const std::vector<double>& A, double theta,
                      const FrequencyVector& omega, const InvariantTorus& torus,
                      const PerturbationSeries& f, const OrbitOptions& opts) {
  const PseudoOrbit orbit =
      solve_general_heteroclinic(mu, A, theta, omega, torus, f, opts);
  const std::size_t m = orbit.theta_index;

  auto integrand_at = [&](std::size_t i, double u, double udot, bool upper) {
    const auto phi = phases_at(omega, A, orbit.t[i]);
    const double Q = torus.Q_at(phi);
    const double shift = upper ? u - two_pi : u;
    const double p_geo = std::cos(Q + u) - std::cos(Q) +
                         std::sin(Q) * shift + 1.0 - std::cos(u);
    const double p_per =
        mu * (f.eval(phi, Q + u) - f.eval(phi, Q) - f.dq(phi, Q) * shift);
    return 0.5 * udot * udot + (1.0 - std::cos(u)) - p_geo + p_per;
  };

  std::vector<double> integrand(m + 1);
  for (std::size_t i = 0; i <= m; ++i)
    integrand[i] = integrand_at(i, orbit.q[i], orbit.qdot[i], false);
  double total = integrate_uniform(integrand, orbit.h);
  for (std::size_t i = m; i < orbit.t.size(); ++i) {
    const double ud = i == m ? orbit.qdot_right_at_theta : orbit.qdot[i];
    integrand[i - m] = integrand_at(i, orbit.q[i], ud, true);
  }
  total += integrate_uniform(integrand, orbit.h);

  const double ul = orbit.q.front();
  const double ur = two_pi - orbit.q.back();
  total += 0.5 * ul * ul + 0.5 * ur * ur;

  // correction for non-exactness of the stable/unstable manifolds
  const auto phi_theta = phases_at(omega, A, theta);
  total += two_pi * torus.P_at(phi_theta);
  return total;
}

double melnikov_primitive(const std::vector<double>& A,
                          const FrequencyVector& omega,
                          const PerturbationSeries& f, double tol) {
  if (f.q_mode != PerturbationSeries::QMode::FactorOneMinusCosQ)
    throw ConfigError("melnikov_primitive: FactorOneMinusCosQ mode required");
  const double L =
      std::max(15.0, 0.5 * std::log(8.0 * std::max(1.0, f.sup_norm()) / tol) +
                         2.0);
  auto g = [&](double t) {
    const double s = 1.0 / std::cosh(t);
    return 2.0 * s * s * f.phi_sum(phases_at(omega, A, t));
  };
  return adaptive_simpson(g, -L, L, tol);
}

Complex melnikov_coefficient(const ModeKey& k, const FrequencyVector& omega,
                             Complex f_k) {
  const double x = omega.dot(k);
  const double z = 0.5 * pi * x;
  double factor;
  if (std::fabs(z) < 1e-5) {
    factor = 4.0 / (1.0 + z * z / 6.0);
  } else if (std::fabs(z) < 30.0) {
    factor = 2.0 * pi * x / std::sinh(z);
  } else {
    // 2*pi*x/sinh(z) = 4*pi*|x| e^{-|z|} / (1 - e^{-2|z|})
    factor = 4.0 * pi * std::fabs(x) * std::exp(-std::fabs(z));
  }
  return f_k * factor;
}

std::map<ModeKey, Complex> melnikov_coefficients(const FrequencyVector& omega,
                                                 const PerturbationSeries& f) {
  std::map<ModeKey, Complex> out;
  for (const auto& [k, c] : f.coeffs)
    out[k] = melnikov_coefficient(k, omega, c);
  return out;
}

std::vector<double> melnikov_gradient(const std::vector<double>& A,
                                      const FrequencyVector& omega,
                                      const PerturbationSeries& f) {
  const int n = omega.n();
  std::vector<double> g(n, 0.0);
  for (const auto& [k, c] : f.coeffs) {
    const Complex gk = melnikov_coefficient(k, omega, c);
    double ph = 0;
    for (int i = 0; i < n; ++i) ph += k[i] * A[i];
    // Re(i k_j Gamma_k e^{i ph})
    for (int j = 0; j < n; ++j)
      g[j] += k[j] * (-gk.real() * std::sin(ph) - gk.imag() * std::cos(ph));
  }
  return g;
}

double melnikov_general(const std::vector<double>& A,
                        const FrequencyVector& omega,
                        const PerturbationSeries& f, double tol) {
  if (f.q_mode != PerturbationSeries::QMode::GeneralInQ)
    throw ConfigError("melnikov_general: GeneralInQ mode required");
  const double L =
      std::max(25.0, std::log(8.0 * std::max(1.0, f.sup_norm()) / tol) + 3.0);
  auto g = [&](double t) {
    const auto phi = phases_at(omega, A, t);
    return f.eval(phi, separatrix_q(t)) - f.eval(phi, 0.0);
  };
  return adaptive_simpson(g, -L, L, tol);
}

GridFourier fourier_of_grid(const HomoclinicGrid& grid) {
  if (!grid.uniform)
    throw ConfigError("fourier_of_grid: grid is not uniform");
  GridFourier out;
  out.coeffs = dft_grid(grid.values, grid.shape);
  for (const auto& [k, c] : out.coeffs) {
    for (int d = 0; d < grid.dim(); ++d) {
      if (std::abs(k[d]) >= grid.shape[d] / 2 && k[d] != 0) {
        out.aliasing_bound = std::max(out.aliasing_bound, std::abs(c));
        break;
      }
    }
  }
  return out;
}

HomoclinicGrid compute_homoclinic_grid(GridKind kind, double mu,
                                       const FrequencyVector& omega,
                                       const PerturbationSeries& f,
                                       const std::vector<int>& shape,
                                       const OrbitOptions& opts, int workers) {
  HomoclinicGrid g;
  g.kind = kind;
  g.mu = mu;
  g.shape = shape;
  g.values.assign(g.size(), 0.0);
  {
    std::ostringstream meta;
    meta << to_string(kind) << ':' << mu << ':' << opts.tol << ':' << opts.h
         << ':' << opts.effective_T_cut();
    g.meta = meta.str();
  }
  InvariantTorus torus = InvariantTorus::make_trivial(omega.n(), mu);
  if (kind == GridKind::General &&
      f.q_mode == PerturbationSeries::QMode::GeneralInQ)
    torus = solve_invariant_torus(mu, omega, f, 8);

  const int n = g.dim();
  parallel_for(g.size(), workers, [&](std::size_t flat) {
    std::vector<int> idx(n);
    std::size_t rem = flat;
    for (int d = n - 1; d >= 0; --d) {
      idx[d] = static_cast<int>(rem % shape[d]);
      rem /= shape[d];
    }
    const auto A = g.angle(idx);
    double v = 0;
    switch (kind) {
      case GridKind::Glued:
        v = action_glued(mu, A, 0.0, omega, f, opts);
        break;
      case GridKind::Reduced:
        v = action_reduced(mu, A, 0.0, omega, f, opts);
        break;
      case GridKind::General:
        v = action_general(mu, A, 0.0, omega, torus, f, opts);
        break;
      case GridKind::MelnikovGamma:
        v = melnikov_primitive(A, omega, f);
        break;
      case GridKind::MelnikovM:
        v = melnikov_general(A, omega, f);
        break;
    }
    g.values[flat] = v;
  });
  return g;
}

}  // namespace isodiff
