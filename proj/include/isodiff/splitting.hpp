#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "isodiff/melnikov.hpp"

namespace isodiff {

// Candidate homoclinic window: outer radius rho, inner radius alpha, depth
// delta around the phase A0 (torus sup-metric balls).
struct SplittingWindow {
  std::vector<double> A0;
  double rho = 0;
  double alpha = 0;
  double delta = 0;
};

struct SplittingReport {
  SplittingWindow window;
  bool cond_i = false, cond_ii = false, cond_iii = false;
  double margin_i = 0, margin_ii = 0, margin_iii = 0;
  double inf_ball = 0, inf_boundary = 0, sup_inner = 0;
  double sublevel_gap = 0;  // certified distance between the level sets
  bool all_pass() const { return cond_i && cond_ii && cond_iii; }
};

struct SplittingOptions {
  // require grid spacing <= alpha/4; when false a too-coarse grid is an error
  bool allow_coarse = false;
  int refine = 8;  // interpolation refinement for boundary and level sets
};

// Three-part splitting condition on a sampled homoclinic function:
// (i)   inf over the rho-sphere exceeds inf over the ball by delta,
// (ii)  sup over the alpha-ball stays within delta/4 of the ball infimum,
// (iii) the delta-sublevel and 1.5*delta-superlevel sets are 2*alpha apart
//       (Euclidean set distance, certified from below).
SplittingReport check_splitting_condition(const HomoclinicGrid& grid,
                                          const SplittingWindow& window,
                                          const SplittingOptions& opts = {});

struct MinimumResult {
  std::vector<double> A0;
  std::vector<double> hessian_eigenvalues;
  double value = 0;
  bool nondegenerate = false;
};

// Grid argmin refined by a local quadratic fit; Hessian by central
// differences on the sample grid.
MinimumResult find_minimum(const HomoclinicGrid& grid,
                           double eig_threshold = 1e-9);

struct WindowSearch {
  bool feasible = false;
  SplittingWindow window;
  SplittingReport report;
  std::string note;
};

// Coarse search for the window maximizing delta subject to
// check_splitting_condition passing around a non-degenerate minimum.
WindowSearch suggest_window_from_minimum(const HomoclinicGrid& grid,
                                         const std::vector<double>& A0,
                                         double mu,
                                         const SplittingOptions& opts = {});

struct DiffusionBound {
  double total = 0;
  double transitions = 0;      // k = |I0 - I0'| / delta
  double per_transition = 0;   // T_s = rho * max(|ln delta|, 1/alpha^tau)
  double eta_term = 0;         // C |ln eta|
};

// T_d <= C (|dI|/delta) rho max(|ln delta|, 1/alpha^tau) + C |ln eta|.
DiffusionBound diffusion_time_bound(double dI, const SplittingWindow& window,
                                    double tau, double eta, double C = 1.0);

}  // namespace isodiff
