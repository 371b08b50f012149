#include "isodiff/frequency.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <string>

#include "isodiff/angles.hpp"
#include "isodiff/errors.hpp"

namespace isodiff {

double FrequencyVector::dot(const std::vector<int>& k) const {
  double s = 0;
  for (std::size_t i = 0; i < omega.size(); ++i) s += omega[i] * k[i];
  return s;
}

FrequencyVector FrequencyVector::three_scales(double eps, double a,
                                              double gamma, double tau) {
  if (eps <= 0) throw ConfigError("three_scales: eps must be positive");
  FrequencyVector w;
  w.omega = {1.0 / std::sqrt(eps), std::pow(eps, a)};
  w.gamma = gamma;
  w.tau = tau;
  w.eps = eps;
  w.a = a;
  return w;
}

DiophantineResult diophantine_margin(const FrequencyVector& omega, int K,
                                     std::uint64_t budget) {
  if (K < 1) throw ConfigError("diophantine_margin: K >= 1 required");
  const int n = omega.n();
  double points = std::pow(2.0 * K + 1.0, n);
  if (points > static_cast<double>(budget))
    throw BudgetError("diophantine_margin: scan of " + std::to_string(points) +
                      " lattice points exceeds budget");

  DiophantineResult best{std::numeric_limits<double>::infinity(), {}};
  std::vector<int> k(n, -K);
  for (;;) {
    int sup = 0;
    for (int ki : k) sup = std::max(sup, std::abs(ki));
    if (sup != 0) {
      const double val = std::fabs(omega.dot(k)) * std::pow(sup, omega.tau);
      if (val < best.margin) {
        best.margin = val;
        best.worst_k = k;
      }
    }
    int i = 0;
    while (i < n && ++k[i] > K) k[i++] = -K;
    if (i == n) break;
  }
  return best;
}

bool diophantine_certificate(const FrequencyVector& omega, int K) {
  return diophantine_margin(omega, K).margin >= omega.gamma;
}

ErgodizationResult ergodization_time(double alpha, const FrequencyVector& omega,
                                     double t_max) {
  using std::numbers::pi;
  if (!(alpha > 0 && alpha < pi))
    throw ConfigError("ergodization_time: need 0 < alpha < pi");
  const int n = omega.n();
  // Uniform grid of spacing <= alpha/4 per dimension.
  const long m = static_cast<long>(std::ceil(two_pi / (alpha / 4.0)));
  double cells_d = std::pow(static_cast<double>(m), n);
  if (cells_d > 2e8)
    throw ResolutionError("ergodization_time: alpha too small for grid");
  const long cells = static_cast<long>(cells_d);
  const double h = two_pi / static_cast<double>(m);

  std::vector<char> covered(cells, 0);
  long remaining = cells;

  double wmax = 0;
  for (double w : omega.omega) wmax = std::max(wmax, std::fabs(w));
  if (wmax == 0) throw ConfigError("ergodization_time: omega = 0");
  const double dt = (alpha / 8.0) / wmax;

  // A cell is covered once its center lies within alpha - h/2 of a sample;
  // then every point of the cell is within alpha of the orbit.
  const double reach = alpha - 0.5 * h;
  const long span = static_cast<long>(std::floor(reach / h)) + 1;

  std::vector<long> stride(n, 1);
  for (int i = 1; i < n; ++i) stride[i] = stride[i - 1] * m;

  std::vector<double> x(n, 0.0);
  std::vector<long> base(n);
  std::vector<long> off(n, -span);
  for (double t = 0.0; t <= t_max; t += dt) {
    for (int i = 0; i < n; ++i) {
      x[i] = wrap_angle(omega.omega[i] * t);
      base[i] = static_cast<long>(std::floor(x[i] / h - 0.5));
    }
    std::fill(off.begin(), off.end(), -span);
    for (;;) {
      bool in_reach = true;
      long idx = 0;
      for (int i = 0; i < n && in_reach; ++i) {
        long ci = base[i] + off[i];
        double center = (static_cast<double>(ci) + 0.5) * h;
        if (circle_dist(center, x[i]) > reach) in_reach = false;
        long cw = ((ci % m) + m) % m;
        idx += cw * stride[i];
      }
      if (in_reach && !covered[idx]) {
        covered[idx] = 1;
        --remaining;
      }
      int i = 0;
      while (i < n && ++off[i] > span) off[i++] = -span;
      if (i == n) break;
    }
    if (remaining == 0)
      return {t, 1.0 / std::pow(alpha, omega.tau)};
  }
  throw SolverError("ergodization_time: torus not covered within t_max",
                    static_cast<double>(remaining));
}

}  // namespace isodiff
