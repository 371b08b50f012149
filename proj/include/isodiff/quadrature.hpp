#pragma once

#include <functional>
#include <span>
#include <vector>

namespace isodiff {

// Adaptive Simpson on [a,b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth = 40);

// Composite quadrature weights on a uniform grid of n nodes with spacing h,
// trapezoid with 4th-order Gregory end corrections (n >= 8).
std::vector<double> gregory_weights(std::size_t n, double h);

double integrate_uniform(std::span<const double> f, double h);

}  // namespace isodiff
