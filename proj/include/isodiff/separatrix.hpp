#pragma once

#include <cmath>

namespace isodiff {

// Zero-energy pendulum orbit joining the equilibria 0 and 2*pi:
// q_theta(t) = 4 arctan(exp(t - theta)).
inline double separatrix_q(double t, double theta = 0.0) {
  return 4.0 * std::atan(std::exp(t - theta));
}

inline double separatrix_qdot(double t, double theta = 0.0) {
  return 2.0 / std::cosh(t - theta);
}

// cos(q_theta(t)) = 1 - 2 sech^2(t - theta), without trig of large angles.
inline double separatrix_cos_q(double t, double theta = 0.0) {
  const double s = 1.0 / std::cosh(t - theta);
  return 1.0 - 2.0 * s * s;
}

inline double separatrix_sin_q(double t, double theta = 0.0) {
  const double s = 1.0 / std::cosh(t - theta);
  return -2.0 * s * std::tanh(t - theta);
}

// Constraint weight psi_0(t) = cosh^2(t) / (1 + cosh t)^3.
inline double constraint_weight(double t) {
  const double c = std::cosh(t);
  return c * c / ((1.0 + c) * (1.0 + c) * (1.0 + c));
}

}  // namespace isodiff
