#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "isodiff/frequency.hpp"
#include "isodiff/series.hpp"
#include "isodiff/splitting.hpp"

namespace isodiff {

// Full phase-space state of the rotator + pendulum system.
struct FullState {
  std::vector<double> phi;  // angles in [0, 2*pi)
  std::vector<double> I;
  double q = 0;  // pendulum angle in [0, 2*pi)
  double p = 0;
  double t = 0;

  double pendulum_energy() const;
  double energy(double mu, const FrequencyVector& omega,
                const PerturbationSeries& f) const;
};

struct Trajectory {
  std::vector<FullState> samples;  // first and last step always included
};

// Strang splitting: exact rotator/free drift interleaved with potential
// kicks. Rotator phases are reconstructed from phi(0) + omega*t each step,
// so they carry no accumulated roundoff.
Trajectory integrate(const FullState& s0, double mu,
                     const FrequencyVector& omega,
                     const PerturbationSeries& f, double T, double dt,
                     int sample_every = 1);

struct TransitionEvent {
  double t_start = 0, t_end = 0;
  std::vector<double> A;   // rotator phase when q crossed pi
  std::vector<double> dI;  // action jump over the excursion
  bool crossed = false;    // false when the excursion fell back
};

struct Checkpoint {
  double t = 0;
  std::vector<double> I;
};

struct DiffusionRun {
  double mu = 0;
  std::vector<double> I0, I1;
  double eta = 0;
  std::uint64_t seed = 0;
  std::optional<double> T_d;
  std::vector<TransitionEvent> transitions;
  std::vector<Checkpoint> checkpoints;
  bool budget_exhausted = false;
  std::string stop_reason;  // "target" | "budget" | "t_max"
  double final_dist = 0;    // |I - I1| at the end
};

struct ChainOptions {
  double dt = 1e-3;
  double budget = 3600;       // wall-clock seconds
  double t_max = 1e6;         // model-time guard
  double align_tol = 1e-9;    // tolerance on omega.(I0 - I1)
  double checkpoint_dt = 100;
  int phase_grid = 96;        // per-dimension steering search resolution
};

// Numerically realized transition chain: wait at the hyperbolic torus until
// the rotator phase enters the launch ball, ride a separatrix excursion, and
// project back, repeating until |I - I1| < eta or a budget runs out.
DiffusionRun run_transition_chain(const std::vector<double>& I0,
                                  const std::vector<double>& I1, double mu,
                                  const FrequencyVector& omega,
                                  const PerturbationSeries& f,
                                  const SplittingWindow& window, double eta,
                                  std::uint64_t seed,
                                  const ChainOptions& opts = {});

struct ScalingPoint {
  double mu = 0;
  double T_d = 0;
  double ratio = 0;  // T_d * mu / log(1/mu)
  bool complete = false;
};

struct ScalingReport {
  std::vector<ScalingPoint> points;
  double C_fit = 0;  // least squares of T_d against (1/mu) log(1/mu)
  double ratio_min = 0, ratio_max = 0;
  double spread = 0;  // ratio_max / ratio_min over complete runs
  std::vector<std::string> notices;
};

ScalingReport scaling_study(const std::vector<DiffusionRun>& runs);

}  // namespace isodiff
