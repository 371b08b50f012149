#pragma once

#include <map>
#include <span>
#include <vector>

#include "isodiff/frequency.hpp"
#include "isodiff/series.hpp"

namespace isodiff {

// Fourier representation of the perturbed torus embedding
// q = Q(psi), p = P(psi), I = I0 + a(psi), psi in T^n.
struct InvariantTorus {
  double mu = 0;
  int n = 0;
  std::map<ModeKey, Complex> Qhat, Phat;
  std::map<ModeKey, std::vector<Complex>> ahat;  // vector-valued, length n
  double energy = 0;                             // E_mu
  double invariance_residual = 0;

  double Q_at(std::span<const double> psi) const;
  double P_at(std::span<const double> psi) const;
  std::vector<double> a_at(std::span<const double> psi) const;

  double sup_Q() const;  // sum of |coefficients| bounds
  double sup_P() const;
  double sup_a() const;

  bool trivial() const { return Qhat.empty() && Phat.empty() && ahat.empty(); }
  static InvariantTorus make_trivial(int n, double mu);
};

struct TorusOptions {
  double tol = 1e-12;        // invariance residual tolerance (grid sup norm)
  int max_iter = 200;
  int grid_per_dim = 0;      // 0 = auto: enough to de-alias K_modes
  double cond_bound = 1e8;   // max allowed |rhs_k| / |omega.k| amplification
  double drop_tol = 1e-16;   // discard coefficients below this magnitude
};

// Fourier-Newton solve of the invariance equations, truncated at
// |k|_inf <= K_modes. Requires a positive Diophantine margin up to K_modes.
InvariantTorus solve_invariant_torus(double mu, const FrequencyVector& omega,
                                     const PerturbationSeries& f, int K_modes,
                                     const TorusOptions& opts = {});

}  // namespace isodiff
