#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace isodiff {

// Boundary condition for the truncated infinite line. Robin conditions match
// the linearized pendulum decay: q' = q near 0, q' = 2*pi - q near 2*pi.
enum class BvpBc { RobinZero, RobinTwoPi, DirichletPi };

struct BvpGrid {
  double t0 = 0, h = 0;
  std::size_t size = 0;
  double t(std::size_t i) const { return t0 + static_cast<double>(i) * h; }
};

struct BvpOptions {
  double tol = 1e-10;      // Newton residual tolerance (sup norm)
  int max_iter = 60;
  double max_dev = 0;      // 0 = no rejection; else sup-norm radius around init
};

struct BvpResult {
  std::vector<double> q;
  double residual = 0;               // final interior defect, sup norm
  std::optional<double> multiplier;  // for the constrained variant
};

// Solve -q'' + g(t, q) = 0 on a uniform grid with 4th-order finite
// differences and damped Newton. g_q is dg/dq.
BvpResult solve_bvp(const BvpGrid& grid, BvpBc left, BvpBc right,
                    const std::function<double(double, double)>& g,
                    const std::function<double(double, double)>& g_q,
                    const std::vector<double>& init, const BvpOptions& opts);

// Solve -q'' + g(t, q) = alpha * psi(t) with the scalar alpha determined by
// the orthogonality constraint  integral (q - qref) psi dt = 0.
BvpResult solve_bvp_constrained(
    const BvpGrid& grid, BvpBc left, BvpBc right,
    const std::function<double(double, double)>& g,
    const std::function<double(double, double)>& g_q,
    const std::vector<double>& psi, const std::vector<double>& qref,
    const BvpOptions& opts);

}  // namespace isodiff
