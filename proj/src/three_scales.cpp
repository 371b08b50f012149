#include "isodiff/three_scales.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

#include "isodiff/angles.hpp"
#include "isodiff/errors.hpp"
#include "isodiff/parallel.hpp"

namespace isodiff {

namespace {

using std::numbers::pi;

double eval_modes(const std::map<ModeKey, Complex>& coeffs,
                  const std::vector<double>& A) {
  double s = 0;
  for (const auto& [k, c] : coeffs) {
    double phase = 0;
    for (std::size_t j = 0; j < k.size(); ++j) phase += k[j] * A[j];
    s += std::real(c * Complex(std::cos(phase), std::sin(phase)));
  }
  return s;
}

// least squares slope/intercept of y against x
void fit_line(const std::vector<double>& x, const std::vector<double>& y,
              double& slope, double& intercept) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  slope = (n * sxy - sx * sy) / den;
  intercept = (sy - slope * sx) / n;
}

void require_two_rotators(const PerturbationSeries& f) {
  if (f.n != 2)
    throw ConfigError("three-scales analysis requires two rotator angles");
  if (f.q_mode != PerturbationSeries::QMode::FactorOneMinusCosQ)
    throw ConfigError("three-scales analysis requires the (1 - cos q) factor form");
}

// Reduced-action grid solved only within `radius` of `center`; cells outside
// the disk carry the first-order Melnikov model (never read by the window
// checker, which stays inside B_rho).
HomoclinicGrid reduced_grid_local(double mu, const FrequencyVector& omega,
                                  const PerturbationSeries& f,
                                  const std::vector<int>& shape,
                                  const std::vector<double>& center,
                                  double radius, const OrbitOptions& opts,
                                  int workers) {
  HomoclinicGrid grid;
  grid.kind = GridKind::Reduced;
  grid.mu = mu;
  grid.shape = shape;
  grid.values.assign(
      std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                      [](std::size_t a, int b) { return a * b; }),
      0.0);
  grid.meta = "local";

  const auto gk = melnikov_coefficients(omega, f);
  const int n = grid.dim();
  std::vector<std::size_t> solve_cells;
  std::vector<int> idx(n, 0);
  for (std::size_t flat = 0; flat < grid.values.size(); ++flat) {
    const std::vector<double> A = grid.angle(idx);
    grid.values[flat] = 8.0 + mu * eval_modes(gk, A);
    if (torus_dist(A, center) <= radius) solve_cells.push_back(flat);
    for (int d = n - 1; d >= 0; --d) {
      if (++idx[d] < shape[d]) break;
      idx[d] = 0;
    }
  }

  parallel_for(solve_cells.size(), workers, [&](std::size_t j) {
    const std::size_t flat = solve_cells[j];
    std::vector<int> id(n);
    std::size_t rem = flat;
    for (int d = n - 1; d >= 0; --d) {
      id[d] = static_cast<int>(rem % shape[d]);
      rem /= shape[d];
    }
    grid.values[flat] = action_reduced(mu, grid.angle(id), 0.0, omega, f, opts);
  });
  return grid;
}

}  // namespace

double ThreeScalesOptions::mu_of(double eps) const {
  return mu_coef * std::pow(eps, mu_pow);
}

ThreeScalesReport three_timescale_analysis(const std::vector<double>& eps_list,
                                           const PerturbationSeries& f,
                                           const ThreeScalesOptions& opts) {
  require_two_rotators(f);
  if (eps_list.empty()) throw ConfigError("empty eps list");
  const double norm2 = f.sup_norm() * f.sup_norm();

  ThreeScalesReport rep;
  rep.target = -pi / 2.0;
  rep.points.resize(eps_list.size());

  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    const double eps = eps_list[i];
    const double mu = opts.mu_of(eps);
    if (!(eps > 0) || !(mu > 0)) throw ConfigError("eps and mu must be positive");
    if (mu * std::pow(eps, -1.5) > 0.5)
      throw ConfigError("mu eps^{-3/2} too large for the three-scales regime");
    const FrequencyVector omega = FrequencyVector::three_scales(eps, opts.a);

    const auto grid = compute_homoclinic_grid(GridKind::Reduced, mu, omega, f,
                                              opts.shape, opts.orbit,
                                              opts.workers);
    const auto gf = fourier_of_grid(grid);
    const auto gk = melnikov_coefficients(omega, f);

    ThreeScalesPoint& pt = rep.points[i];
    pt.eps = eps;
    pt.mu = mu;
    const double expo = std::exp(-pi / (2.0 * std::sqrt(eps)));
    const double R0 = mu * mu * norm2;
    const double R1 = (mu * mu * norm2 / (eps * eps)) * expo;
    for (const auto& [k, c] : gf.coeffs) {
      Complex gamma{0, 0};
      if (auto it = gk.find(k); it != gk.end()) gamma = it->second;
      const double dev = std::abs(c - mu * gamma);
      if (k[0] == 0) {
        const bool zero = std::all_of(k.begin(), k.end(),
                                      [](int v) { return v == 0; });
        if (!zero) pt.r0 = std::max(pt.r0, dev / R0);
      } else if (std::abs(k[0]) == 1) {
        pt.r1 = std::max(pt.r1, dev / R1);
        if (k[0] == 1 && std::abs(c) > pt.coef1) {
          pt.coef1 = std::abs(c);
          pt.gamma1 = mu * std::abs(gamma);
        }
      }
    }
    pt.rescaled = pt.coef1 * std::sqrt(eps) / mu;
    pt.below_floor = pt.coef1 < opts.floor;
  }

  std::vector<double> x, y, yg;
  for (const auto& pt : rep.points) {
    if (pt.below_floor) continue;
    x.push_back(1.0 / std::sqrt(pt.eps));
    y.push_back(std::log(pt.rescaled));
    yg.push_back(std::log(pt.gamma1 * std::sqrt(pt.eps) / pt.mu));
  }
  rep.used = static_cast<int>(x.size());
  if (rep.used >= 2) {
    fit_line(x, y, rep.slope, rep.intercept);
    double dummy;
    fit_line(x, yg, rep.slope_gamma, dummy);
  }
  return rep;
}

ThreeScalesWindowResult check_3ts_window(double eps, double mu,
                                         const PerturbationSeries& f,
                                         double cbar, double c, double d,
                                         const ThreeScalesOptions& opts) {
  require_two_rotators(f);
  if (!(eps > 0 && mu > 0 && cbar > 0 && c > 0 && d > 0))
    throw ConfigError("check_3ts_window: parameters must be positive");
  const FrequencyVector omega = FrequencyVector::three_scales(eps, opts.a);
  const auto gk = melnikov_coefficients(omega, f);
  const double expo = std::exp(-pi / (2.0 * std::sqrt(eps)));

  // split the Melnikov coefficients by the fast index k1
  std::map<ModeKey, Complex> g0, g1;  // keyed by k2 only
  for (const auto& [k, v] : gk) {
    if (k[0] == 0) g0[{k[1]}] += v;
    if (k[0] == 1) g1[{k[1]}] += v;
  }

  ThreeScalesWindowResult out;

  // hypothesis profiles on a fine A2 grid
  const int m = 4096;
  auto gamma0 = [&](double A2) { return eval_modes(g0, {A2}); };
  auto gamma1_abs = [&](double A2) {
    Complex s{0, 0};
    for (const auto& [k, v] : g1)
      s += v * Complex(std::cos(k[0] * A2), std::sin(k[0] * A2));
    return 2.0 * std::abs(s);  // conjugate k1 = -1 part contributes equally
  };
  double best = gamma0(0);
  out.A2_bar = 0;
  for (int i = 1; i < m; ++i) {
    const double A2 = two_pi * i / m;
    if (const double v = gamma0(A2); v < best) {
      best = v;
      out.A2_bar = A2;
    }
  }

  out.gamma1_required = (c / std::sqrt(eps)) * expo;
  out.gamma1_min = gamma1_abs(out.A2_bar);
  for (int i = -m / 2; i <= m / 2; ++i) {
    const double A2 = out.A2_bar + d * i / (m / 2);
    out.gamma1_min = std::min(out.gamma1_min, gamma1_abs(A2));
  }
  out.hyp_gamma1 = out.gamma1_min > out.gamma1_required;

  out.gamma0_rise = std::min(gamma0(out.A2_bar + d), gamma0(out.A2_bar - d)) -
                    gamma0(out.A2_bar);
  out.hyp_gamma0 = out.gamma0_rise > c;

  if (!out.hyp_gamma1) {
    out.violated = "gamma1_lower_bound";
    return out;
  }
  if (!out.hyp_gamma0) {
    out.violated = "gamma0_rise";
    return out;
  }

  // center the local grid at the minimum of the first-order model
  std::vector<double> center{0.0, out.A2_bar};
  {
    double lo = eval_modes(gk, center);
    for (int i = 1; i < m; ++i) {
      const double A1 = two_pi * i / m;
      if (const double v = eval_modes(gk, {A1, out.A2_bar}); v < lo) {
        lo = v;
        center[0] = A1;
      }
    }
  }

  OrbitOptions orbit = opts.orbit;
  orbit.h = opts.window_orbit_h;
  const std::vector<int> shape{opts.window_shape, opts.window_shape};
  const double rho = opts.window_rho;
  const auto grid = reduced_grid_local(mu, omega, f, shape, center,
                                       rho + 4.0 * two_pi / opts.window_shape,
                                       orbit, opts.workers);

  const auto minimum = find_minimum(grid);
  out.window.A0 = minimum.A0;
  out.window.rho = rho;
  out.window.alpha = cbar * expo;
  out.window.delta = (c * mu / (2.0 * std::sqrt(eps))) * expo;

  SplittingOptions sopts;
  sopts.allow_coarse = true;
  sopts.refine = opts.window_refine;
  out.report = check_splitting_condition(grid, out.window, sopts);
  out.feasible = out.report.all_pass();
  if (!out.feasible) {
    if (!out.report.cond_i) out.violated = "condition_i_depth";
    else if (!out.report.cond_ii) out.violated = "condition_ii_flatness";
    else out.violated = "condition_iii_gap";
  }
  return out;
}

}  // namespace isodiff
