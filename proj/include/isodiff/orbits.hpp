#pragma once

#include <optional>
#include <vector>

#include "isodiff/bvp.hpp"
#include "isodiff/frequency.hpp"
#include "isodiff/series.hpp"

namespace isodiff {

struct InvariantTorus;

// Discretized pendulum orbit on [theta - T_cut, theta + T_cut].
struct PseudoOrbit {
  double mu = 0;
  std::vector<double> A;
  double theta = 0;
  std::vector<double> t;     // uniform, contains theta at theta_index
  std::vector<double> q;     // unwrapped 0 -> 2*pi
  std::vector<double> qdot;  // left-sided value at theta_index for glued orbits
  std::size_t theta_index = 0;
  double residual = 0;             // max ODE defect over interior nodes
  double qdot_jump = 0;            // right minus left derivative at theta
  double qdot_right_at_theta = 0;  // right-sided derivative at theta
  std::optional<double> multiplier;  // alpha for the constrained variant
  double h = 0;
  double T_cut = 0;
};

struct OrbitOptions {
  double tol = 1e-10;    // solver residual tolerance
  double h = 0.02;       // target grid spacing
  double T_cut = 0;      // 0 = auto: max(|ln tol| + 5, 20)
  double eps_bc = 1e-6;  // asymptotic-boundary tolerance
  double mu_max = 0.2;   // smallness threshold for mu
  int max_iter = 60;

  double effective_T_cut() const;
};

// Glued pseudo-heteroclinic orbit of -q'' + sin q = mu sin q f(omega t + A):
// true solutions on each half-interval, q(theta) = pi, derivative may jump.
PseudoOrbit solve_glued_heteroclinic(double mu, const std::vector<double>& A,
                                     double theta, const FrequencyVector& omega,
                                     const PerturbationSeries& f,
                                     const OrbitOptions& opts = {});

// Constrained full-line orbit with multiplier alpha solving
// -Q'' + sin Q = mu sin Q f + alpha psi_theta, with
// integral (Q - q_theta) psi_theta dt = 0.
PseudoOrbit solve_constrained_heteroclinic(double mu,
                                           const std::vector<double>& A,
                                           double theta,
                                           const FrequencyVector& omega,
                                           const PerturbationSeries& f,
                                           const OrbitOptions& opts = {});

// Glued orbit in the translated coordinates of the invariant torus:
// -u'' + sin u = dP0/du (mu, u, omega t + A).
PseudoOrbit solve_general_heteroclinic(double mu, const std::vector<double>& A,
                                       double theta,
                                       const FrequencyVector& omega,
                                       const InvariantTorus& torus,
                                       const PerturbationSeries& f,
                                       const OrbitOptions& opts = {});

}  // namespace isodiff
