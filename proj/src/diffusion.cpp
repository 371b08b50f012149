#include "isodiff/diffusion.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "isodiff/angles.hpp"
#include "isodiff/errors.hpp"
#include "isodiff/melnikov.hpp"

namespace isodiff {

namespace {

using std::numbers::pi;

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

// One Strang step: potential half-kick, free drift, potential half-kick.
// phi is reconstructed from phi0 + omega*t to keep rotator phases exact.
struct Stepper {
  const FrequencyVector& omega;
  const PerturbationSeries& f;
  double mu, dt;
  std::vector<double> phi0;  // phases at t = 0 of the stepper clock

  std::vector<double> phi_at(double t) const {
    std::vector<double> phi(phi0.size());
    for (std::size_t j = 0; j < phi0.size(); ++j)
      phi[j] = wrap_angle(phi0[j] + omega.omega[j] * t);
    return phi;
  }

  // q is kept unwrapped by the caller; t advances by dt.
  void step(double& t, double& q, double& p, std::vector<double>& I) const {
    auto kick = [&](double tk, double qk, double& pk, std::vector<double>& Ik) {
      const auto phi = phi_at(tk);
      pk += 0.5 * dt * (std::sin(qk) - mu * f.dq(phi, qk));
      if (mu != 0)
        for (std::size_t j = 0; j < Ik.size(); ++j)
          Ik[j] -= 0.5 * dt * mu * f.dphi(static_cast<int>(j), phi, qk);
    };
    kick(t, q, p, I);
    q += dt * p;
    t += dt;
    kick(t, q, p, I);
  }
};

}  // namespace

double FullState::pendulum_energy() const {
  return p * p / 2.0 + std::cos(q) - 1.0;
}

double FullState::energy(double mu, const FrequencyVector& omega,
                         const PerturbationSeries& f) const {
  return dot(omega.omega, I) + pendulum_energy() + mu * f.eval(phi, q);
}

Trajectory integrate(const FullState& s0, double mu,
                     const FrequencyVector& omega,
                     const PerturbationSeries& f, double T, double dt,
                     int sample_every) {
  if (!(dt > 0) || !(T > 0)) throw ConfigError("integrate: need T, dt > 0");
  if (static_cast<int>(s0.phi.size()) != omega.n() ||
      s0.I.size() != s0.phi.size())
    throw ConfigError("integrate: state dimension mismatch");
  const long steps = std::lround(T / dt);

  Stepper st{omega, f, mu, dt, s0.phi};
  double t = 0, q = s0.q, p = s0.p;
  std::vector<double> I = s0.I;

  Trajectory traj;
  auto record = [&] {
    FullState s;
    s.phi = st.phi_at(t);
    s.I = I;
    s.q = wrap_angle(q);
    s.p = p;
    s.t = s0.t + t;
    traj.samples.push_back(std::move(s));
  };
  record();
  for (long i = 0; i < steps; ++i) {
    st.step(t, q, p, I);
    if ((i + 1) % sample_every == 0 || i + 1 == steps) record();
  }
  return traj;
}

DiffusionRun run_transition_chain(const std::vector<double>& I0,
                                  const std::vector<double>& I1, double mu,
                                  const FrequencyVector& omega,
                                  const PerturbationSeries& f,
                                  const SplittingWindow& window, double eta,
                                  std::uint64_t seed,
                                  const ChainOptions& opts) {
  const int n = omega.n();
  if (static_cast<int>(I0.size()) != n || static_cast<int>(I1.size()) != n)
    throw ConfigError("run_transition_chain: action dimension mismatch");
  if (f.q_mode != PerturbationSeries::QMode::FactorOneMinusCosQ)
    throw ConfigError("run_transition_chain: (1 - cos q) factor form required");
  if (!(eta > 0 && eta < 1)) throw ConfigError("run_transition_chain: eta in (0,1)");
  std::vector<double> dI0(n);
  for (int j = 0; j < n; ++j) dI0[j] = I1[j] - I0[j];
  if (std::fabs(dot(omega.omega, dI0)) > opts.align_tol)
    throw ConfigError("run_transition_chain: omega.I0 != omega.I1");

  DiffusionRun run;
  run.mu = mu;
  run.I0 = I0;
  run.I1 = I1;
  run.eta = eta;
  run.seed = seed;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, two_pi);
  std::vector<double> phi0(n);
  for (auto& v : phi0) v = uni(rng);

  const Stepper st{omega, f, mu, opts.dt, phi0};
  double t = 0, q = 0, p = 0;
  std::vector<double> I = I0;

  // Launch offset along the separatrix. The floor keeps the turning point
  // induced by the O(mu) energy exchange below the capture threshold; below
  // it excursions fall back before reaching the far saddle.
  const double q_start = std::max(0.99 * eta / std::sqrt(2.0), 0.25);
  const double s_cross = std::log(4.0 / q_start);
  double omega_max = 0;
  for (double w : omega.omega) omega_max = std::max(omega_max, std::fabs(w));
  const double launch_tol = std::max(window.alpha, 2.0 * omega_max * opts.dt);

  // launch-phase candidates inside the window ball
  std::vector<std::vector<double>> candidates;
  {
    std::vector<int> idx(n, 0);
    for (;;) {
      std::vector<double> A(n);
      for (int d = 0; d < n; ++d) A[d] = two_pi * idx[d] / opts.phase_grid;
      if (torus_dist(A, window.A0) <= window.rho) candidates.push_back(A);
      int d = 0;
      while (d < n && ++idx[d] >= opts.phase_grid) idx[d++] = 0;
      if (d == n) break;
    }
    if (candidates.empty())
      throw ConfigError("run_transition_chain: empty steering window");
  }

  const auto wall0 = std::chrono::steady_clock::now();
  auto seconds = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         wall0)
        .count();
  };
  double next_cp = 0;
  auto checkpoint = [&] {
    if (t >= next_cp) {
      run.checkpoints.push_back({t, I});
      next_cp = t + opts.checkpoint_dt;
    }
  };
  auto finish = [&](const char* reason) {
    run.stop_reason = reason;
    run.budget_exhausted = std::string(reason) == "budget";
    std::vector<double> d(n);
    for (int j = 0; j < n; ++j) d[j] = I1[j] - I[j];
    run.final_dist = norm2(d);
    run.checkpoints.push_back({t, I});
    return run;
  };

  for (;;) {
    std::vector<double> u(n);
    for (int j = 0; j < n; ++j) u[j] = I1[j] - I[j];
    const double dist = norm2(u);
    if (dist < eta) {
      run.T_d = t;
      return finish("target");
    }
    for (auto& v : u) v /= dist;

    // without coupling the manifolds do not split: wait out the clock
    if (mu == 0) {
      long idled = 0;
      for (;;) {
        t += opts.dt;
        checkpoint();
        if (t > opts.t_max) return finish("t_max");
        if (++idled % 65536 == 0 && seconds() > opts.budget)
          return finish("budget");
      }
    }

    // steer toward the phase whose Melnikov jump best tracks the target
    std::vector<double> A_star = candidates.front();
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& A : candidates) {
      const auto g = melnikov_gradient(A, omega, f);
      double proj = 0;
      for (int j = 0; j < n; ++j) proj -= g[j] * u[j];
      if (proj > best) {
        best = proj;
        A_star = A;
      }
    }
    std::vector<double> target(n);
    for (int j = 0; j < n; ++j)
      target[j] = wrap_angle(A_star[j] - omega.omega[j] * s_cross);

    // wait at the equilibrium (exact: I and (q,p) are frozen there)
    long waited = 0;
    for (;;) {
      if (torus_dist(st.phi_at(t), target) <= launch_tol) break;
      t += opts.dt;
      checkpoint();
      if (t > opts.t_max) return finish("t_max");
      if (++waited % 65536 == 0 && seconds() > opts.budget)
        return finish("budget");
    }

    // separatrix excursion
    TransitionEvent ev;
    ev.t_start = t;
    const std::vector<double> I_pre = I;
    q = q_start;
    p = 2.0 * std::sin(q_start / 2.0);
    const double t_launch = t;
    const double excursion_max = 6.0 * s_cross + 50.0;
    double prev_q = q;
    long stepped = 0;
    for (;;) {
      st.step(t, q, p, I);
      checkpoint();
      if (prev_q < pi && q >= pi) ev.A = st.phi_at(t);
      prev_q = q;
      const double elapsed = t - t_launch;
      // capture at the closest approach to the far saddle: the perturbed
      // excursion misses the equilibrium by O(mu), so the projection back to
      // the torus happens at distance ~q_start ~ eta, not at the fixed point
      if (q >= two_pi - q_start) {
        ev.crossed = true;
        break;
      }
      if ((elapsed > 2.0 && q < 0.5 * q_start) || elapsed > excursion_max)
        break;
      if (t > opts.t_max) return finish("t_max");
      if (++stepped % 65536 == 0 && seconds() > opts.budget)
        return finish("budget");
    }
    q = 0;
    p = 0;
    ev.t_end = t;
    ev.dI.resize(n);
    for (int j = 0; j < n; ++j) ev.dI[j] = I[j] - I_pre[j];
    run.transitions.push_back(std::move(ev));
  }
}

ScalingReport scaling_study(const std::vector<DiffusionRun>& runs) {
  ScalingReport rep;
  double sxx = 0, sxy = 0;
  for (const auto& run : runs) {
    ScalingPoint pt;
    pt.mu = run.mu;
    pt.complete = run.T_d.has_value();
    if (!pt.complete) {
      rep.notices.push_back("run at mu=" + std::to_string(run.mu) +
                            " incomplete (" + run.stop_reason + "), excluded");
      rep.points.push_back(pt);
      continue;
    }
    pt.T_d = *run.T_d;
    const double lg = std::log(1.0 / run.mu);
    pt.ratio = pt.T_d * run.mu / lg;
    const double x = lg / run.mu;
    sxx += x * x;
    sxy += x * pt.T_d;
    rep.points.push_back(pt);
  }
  if (sxx > 0) rep.C_fit = sxy / sxx;
  bool first = true;
  for (const auto& pt : rep.points) {
    if (!pt.complete) continue;
    if (first) {
      rep.ratio_min = rep.ratio_max = pt.ratio;
      first = false;
    } else {
      rep.ratio_min = std::min(rep.ratio_min, pt.ratio);
      rep.ratio_max = std::max(rep.ratio_max, pt.ratio);
    }
  }
  if (!first && rep.ratio_min > 0) rep.spread = rep.ratio_max / rep.ratio_min;
  return rep;
}

}  // namespace isodiff
