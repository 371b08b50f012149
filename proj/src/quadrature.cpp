#include "isodiff/quadrature.hpp"

#include <cassert>
#include <cmath>

#include "isodiff/errors.hpp"

namespace isodiff {

namespace {

double simpson(double fa, double fm, double fb, double a, double b) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double b,
             double fa, double fm, double fb, double whole, double tol,
             int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(fa, flm, fm, a, m);
  const double right = simpson(fm, frm, fb, m, b);
  const double delta = left + right - whole;
  if (std::fabs(delta) <= 15.0 * tol || depth <= 0) {
    if (depth <= 0 && std::fabs(delta) > 15.0 * tol)
      throw SolverError("adaptive quadrature: max depth reached",
                        std::fabs(delta));
    return left + right + delta / 15.0;
  }
  return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = simpson(fa, fm, fb, a, b);
  return adapt(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

std::vector<double> gregory_weights(std::size_t n, double h) {
  assert(n >= 8);
  std::vector<double> w(n, h);
  // trapezoid with 4th-order Gregory end corrections: 3/8, 7/6, 23/24.
  w[0] = 3.0 / 8.0 * h;
  w[1] = 7.0 / 6.0 * h;
  w[2] = 23.0 / 24.0 * h;
  w[n - 1] = 3.0 / 8.0 * h;
  w[n - 2] = 7.0 / 6.0 * h;
  w[n - 3] = 23.0 / 24.0 * h;
  return w;
}

double integrate_uniform(std::span<const double> f, double h) {
  auto w = gregory_weights(f.size(), h);
  double s = 0;
  for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * f[i];
  return s;
}

}  // namespace isodiff
