#pragma once

#include <span>
#include <vector>

namespace isodiff {

// Finite-difference weights (Fornberg's recursion): weights w such that
// sum_i w[i] f(x[i]) approximates the m-th derivative of f at x0.
std::vector<double> fd_weights(double x0, std::span<const double> x, int order);

// m-th derivative at every node of a uniform grid, using centered
// (2*half+1)-point stencils and skewed stencils of the same order near the ends.
std::vector<double> fd_derivative_uniform(std::span<const double> f, double h,
                                          int order, int half = 2);

}  // namespace isodiff
