#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace isodiff {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Wrap an angle into [0, 2*pi).
inline double wrap_angle(double x) {
  double y = std::fmod(x, two_pi);
  if (y < 0) y += two_pi;
  return y;
}

// Shortest angular distance on the circle.
inline double circle_dist(double a, double b) {
  double d = std::fabs(wrap_angle(a) - wrap_angle(b));
  return std::min(d, two_pi - d);
}

// Torus sup-metric: max over components of the shortest angular distance.
inline double torus_dist(std::span<const double> a, std::span<const double> b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    d = std::max(d, circle_dist(a[i], b[i]));
  return d;
}

inline std::vector<double> wrap_all(std::span<const double> a) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = wrap_angle(a[i]);
  return out;
}

}  // namespace isodiff
