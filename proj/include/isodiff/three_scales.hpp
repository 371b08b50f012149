#pragma once

#include <string>
#include <vector>

#include "isodiff/melnikov.hpp"
#include "isodiff/splitting.hpp"

namespace isodiff {

struct ThreeScalesOptions {
  double a = 1.0;        // slow-frequency exponent: omega = (1/sqrt(eps), eps^a)
  double mu_coef = 1.0;  // mu = mu_coef * eps^mu_pow
  double mu_pow = 2.0;
  std::vector<int> shape = {8, 8};  // phase grid for the sweep
  OrbitOptions orbit = {.h = 0.01};
  int workers = 1;
  double floor = 1e-11;  // coefficients below this are dropped from the fit

  // window validation (check_3ts_window)
  int window_shape = 384;     // per-dimension samples of the local grid
  double window_rho = 0.5;    // outer radius of the candidate window
  int window_refine = 16;
  double window_orbit_h = 0.02;

  double mu_of(double eps) const;
};

struct ThreeScalesPoint {
  double eps = 0, mu = 0;
  double coef1 = 0;     // |leading k1 = 1 Fourier coefficient of G~|
  double gamma1 = 0;    // closed-form mu |Gamma_k| at the same mode
  double rescaled = 0;  // coef1 * sqrt(eps) / mu, the theorem's prefactor removed
  double r0 = 0;        // max_k1=0 |G~_k - mu Gamma_k| / (mu^2 |f|^2)
  double r1 = 0;        // max_|k1|=1 ... / ((mu^2 |f|^2 / eps^2) e^{-pi/(2 sqrt(eps))})
  bool below_floor = false;
};

struct ThreeScalesReport {
  std::vector<ThreeScalesPoint> points;
  double slope = 0;        // d log(rescaled) / d (1/sqrt(eps)), least squares
  double slope_gamma = 0;  // same fit on the closed-form Melnikov values
  double intercept = 0;
  double target = 0;       // -pi/2
  int used = 0;            // points entering the fit (above floor)
};

// Per-eps reduced homoclinic grids, k1-Fourier split, and the exponential
// decay fit of the fast-direction splitting coefficient against 1/sqrt(eps).
ThreeScalesReport three_timescale_analysis(const std::vector<double>& eps_list,
                                           const PerturbationSeries& f,
                                           const ThreeScalesOptions& opts = {});

struct ThreeScalesWindowResult {
  bool feasible = false;
  bool hyp_gamma1 = false;  // |Gamma_1(A2)| > (c/sqrt(eps)) e^{-pi/(2 sqrt(eps))}
  bool hyp_gamma0 = false;  // Gamma_0(A2bar +- d) > Gamma_0(A2bar) + c
  std::string violated;     // name of the failed inequality, empty when none
  double A2_bar = 0;
  double gamma1_min = 0, gamma1_required = 0;
  double gamma0_rise = 0;
  SplittingWindow window;
  SplittingReport report;
};

// Theorem-scaled window alpha = cbar E, delta = (c mu / (2 sqrt(eps))) E with
// E = e^{-pi/(2 sqrt(eps))}, hypothesis-checked on the closed-form Melnikov
// profiles and validated on a locally refined reduced-action grid.
ThreeScalesWindowResult check_3ts_window(double eps, double mu,
                                         const PerturbationSeries& f,
                                         double cbar, double c, double d,
                                         const ThreeScalesOptions& opts = {});

}  // namespace isodiff
