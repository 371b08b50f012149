#include "isodiff/fd.hpp"

#include <cassert>
#include <cstddef>

namespace isodiff {

std::vector<double> fd_weights(double x0, std::span<const double> x, int order) {
  const int n = static_cast<int>(x.size()) - 1;
  const int m = order;
  assert(n >= m);
  // Fornberg, "Generation of finite difference formulas on arbitrarily
  // spaced grids", Math. Comp. 51 (1988).
  std::vector<std::vector<double>> c(n + 1, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    double c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k)
        c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n + 1);
  for (int i = 0; i <= n; ++i) w[i] = c[i][m];
  return w;
}

std::vector<double> fd_derivative_uniform(std::span<const double> f, double h,
                                          int order, int half) {
  const int n = static_cast<int>(f.size());
  const int width = 2 * half + 1;
  assert(n >= width);
  std::vector<double> x(width);
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    int lo = i - half;
    if (lo < 0) lo = 0;
    if (lo + width > n) lo = n - width;
    for (int j = 0; j < width; ++j) x[j] = (lo + j - i) * h;
    auto w = fd_weights(0.0, x, order);
    double v = 0;
    for (int j = 0; j < width; ++j) v += w[j] * f[lo + j];
    out[i] = v;
  }
  return out;
}

}  // namespace isodiff
