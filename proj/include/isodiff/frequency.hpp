#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace isodiff {

// Rotator frequency vector with Diophantine parameters (gamma, tau).
struct FrequencyVector {
  std::vector<double> omega;
  double gamma = 0.0;  // Diophantine constant (> 0 when certified)
  double tau = 0.0;    // Diophantine exponent
  // Three-time-scale parameters when constructed via three_scales().
  std::optional<double> eps;
  std::optional<double> a;

  int n() const { return static_cast<int>(omega.size()); }
  double dot(const std::vector<int>& k) const;

  // omega_eps = (1/sqrt(eps), eps^a), n = 2; fast exponent b = 1/2.
  static FrequencyVector three_scales(double eps, double a, double gamma = 0.0,
                                      double tau = 0.0);
};

struct DiophantineResult {
  double margin;             // min over 0 < |k|_inf <= K of |omega.k| |k|_inf^tau
  std::vector<int> worst_k;  // attaining mode
};

// Exact scan over sup-norm shells |k|_inf = 1..K. Throws BudgetError if the
// number of visited lattice points would exceed `budget`.
DiophantineResult diophantine_margin(const FrequencyVector& omega, int K,
                                     std::uint64_t budget = 200'000'000);

// Certify min |omega.k| |k|^tau >= gamma up to K; returns the margin result.
bool diophantine_certificate(const FrequencyVector& omega, int K);

struct ErgodizationResult {
  double time;   // first T making {omega t mod 2pi, t in [0,T]} an alpha-net
  double proxy;  // theoretical proxy 1/alpha^tau
};

// Covering check on a uniform grid of spacing alpha/4 (torus sup-metric).
ErgodizationResult ergodization_time(double alpha, const FrequencyVector& omega,
                                     double t_max = 1e7);

}  // namespace isodiff
