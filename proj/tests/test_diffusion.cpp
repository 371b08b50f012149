#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "isodiff/angles.hpp"
#include "isodiff/diffusion.hpp"
#include "isodiff/errors.hpp"
#include "isodiff/melnikov.hpp"

using namespace isodiff;
using std::numbers::pi;

namespace {
const double golden = (1.0 + std::sqrt(5.0)) / 2.0;

FrequencyVector omega2() {
  FrequencyVector fv;
  fv.omega = {1.0, golden};
  return fv;
}

PerturbationSeries two_cos() {
  PerturbationSeries f;
  f.n = 2;
  f.add_cos({1, 0}, 1.0);
  f.add_cos({0, 1}, 1.0);
  return f;
}

// target displaced along the kernel of omega (omega.I conserved)
std::vector<double> kernel_target(double amount) {
  const double nrm = std::hypot(golden, 1.0);
  return {amount * golden / nrm, -amount / nrm};
}
}  // namespace

TEST_CASE("mu = 0: actions frozen, bounded pendulum energy error") {
  FullState s;
  s.phi = {0.3, 1.1};
  s.I = {0.25, -0.5};
  s.q = 1.0;
  s.p = 2.0 * std::sin(0.5);  // on the separatrix
  const auto fv = omega2();
  const auto f = two_cos();
  const double e0 = s.pendulum_energy();
  const auto tr = integrate(s, 0.0, fv, f, 1e3, 1e-3, 1000);
  for (const auto& st : tr.samples) {
    CHECK(st.I[0] == 0.25);  // bitwise: mu = 0 never touches I
    CHECK(st.I[1] == -0.5);
    CHECK(std::abs(st.pendulum_energy() - e0) < 1e-6);
  }
}

TEST_CASE("mu = 0: separatrix tracking") {
  FullState s;
  s.phi = {0.0, 0.0};
  s.I = {0.0, 0.0};
  s.q = pi;
  s.p = 2.0;
  const auto fv = omega2();
  const auto f = two_cos();
  auto sup_err = [&](double dt) {
    const auto tr = integrate(s, 0.0, fv, f, 10.0, dt, 200);
    double err = 0;
    for (const auto& st : tr.samples)
      err = std::max(err, std::abs(st.q - 4.0 * std::atan(std::exp(st.t))));
    return err;
  };
  // second-order method amplified by the saddle: ~1e-5 at dt = 1e-4
  CHECK(sup_err(1e-4) < 2e-5);
  CHECK(sup_err(2e-5) < 1e-6);
}

TEST_CASE("energy drift bounded and second order in dt") {
  FullState s;
  s.phi = {0.3, 1.1};
  s.I = {0.1, 0.2};
  s.q = 1.0;
  s.p = 0.3;
  const auto fv = omega2();
  const auto f = two_cos();
  const double mu = 2e-2;
  auto drift = [&](double dt) {
    const double e0 = s.energy(mu, fv, f);
    const auto tr = integrate(s, mu, fv, f, 1e3, dt, 1000);
    double d = 0;
    for (const auto& st : tr.samples)
      d = std::max(d, std::abs(st.energy(mu, fv, f) - e0));
    return d;
  };
  const double d1 = drift(1e-3), d2 = drift(5e-4);
  CHECK(d1 < 1e-6);
  CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("rotator phases are exact") {
  FullState s;
  s.phi = {0.7, 2.9};
  s.I = {0.0, 0.0};
  s.q = 2.0;
  s.p = 0.1;
  const auto fv = omega2();
  const auto f = two_cos();
  const auto tr = integrate(s, 1e-2, fv, f, 50.0, 1e-3, 997);
  for (const auto& st : tr.samples) {
    for (int j = 0; j < 2; ++j) {
      const double expect = wrap_angle(s.phi[j] + fv.omega[j] * st.t);
      CHECK(st.phi[j] == doctest::Approx(expect).epsilon(1e-14));
    }
  }
}

TEST_CASE("transition chain reaches the target, jumps track the Melnikov gradient") {
  const auto fv = omega2();
  const auto f = two_cos();
  const double mu = 2e-2;
  const std::vector<double> I0{0.0, 0.0};
  const auto I1 = kernel_target(0.3);
  SplittingWindow w{{pi, pi}, 1.5, 0.2, 0.1 * mu};
  ChainOptions co;
  co.t_max = 2e4;
  const auto run = run_transition_chain(I0, I1, mu, fv, f, w, 0.02, 42, co);
  CHECK(run.stop_reason == "target");
  REQUIRE(run.T_d.has_value());
  CHECK(*run.T_d > 0);
  CHECK(run.final_dist < 0.02);
  REQUIRE(!run.transitions.empty());
  for (const auto& ev : run.transitions) {
    if (!ev.crossed) continue;
    const auto g = melnikov_gradient(ev.A, fv, f);
    for (int j = 0; j < 2; ++j) {
      CHECK(ev.dI[j] == doctest::Approx(-mu * g[j]).epsilon(0.05));
    }
  }
  // identical seed reproduces the run exactly
  const auto rerun = run_transition_chain(I0, I1, mu, fv, f, w, 0.02, 42, co);
  REQUIRE(rerun.T_d.has_value());
  CHECK(*rerun.T_d == *run.T_d);
  CHECK(rerun.transitions.size() == run.transitions.size());
}

TEST_CASE("T_d is monotone in the stopping radius") {
  const auto fv = omega2();
  const auto f = two_cos();
  const double mu = 1e-2;
  const std::vector<double> I0{0.0, 0.0};
  const auto I1 = kernel_target(0.3);
  SplittingWindow w{{pi, pi}, 1.5, 0.2, 0.1 * mu};
  ChainOptions co;
  co.t_max = 1e5;
  const auto tight = run_transition_chain(I0, I1, mu, fv, f, w, 0.02, 7, co);
  const auto loose = run_transition_chain(I0, I1, mu, fv, f, w, 0.10, 7, co);
  REQUIRE(tight.T_d.has_value());
  REQUIRE(loose.T_d.has_value());
  CHECK(*loose.T_d <= *tight.T_d);
}

TEST_CASE("mu = 0 chain: no transitions, no drift") {
  const auto fv = omega2();
  const auto f = two_cos();
  SplittingWindow w{{pi, pi}, 1.5, 0.2, 1e-3};
  ChainOptions co;
  co.t_max = 50.0;
  const auto run = run_transition_chain({0.0, 0.0}, kernel_target(0.3), 0.0,
                                        fv, f, w, 0.05, 1, co);
  CHECK_FALSE(run.T_d.has_value());
  CHECK(run.stop_reason == "t_max");
  CHECK(run.transitions.empty());
  CHECK(run.final_dist == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("wall-clock budget exhausts cleanly") {
  const auto fv = omega2();
  const auto f = two_cos();
  SplittingWindow w{{pi, pi}, 1.5, 0.2, 1e-3};
  ChainOptions co;
  co.budget = 0.0;
  co.t_max = 1e12;
  const auto run = run_transition_chain({0.0, 0.0}, kernel_target(0.3), 0.0,
                                        fv, f, w, 0.05, 1, co);
  CHECK(run.stop_reason == "budget");
  CHECK(run.budget_exhausted);
  CHECK_FALSE(run.T_d.has_value());
}

TEST_CASE("misaligned actions are rejected") {
  const auto fv = omega2();
  const auto f = two_cos();
  SplittingWindow w{{pi, pi}, 1.5, 0.2, 1e-3};
  CHECK_THROWS_AS(run_transition_chain({0.0, 0.0}, {0.1, 0.1}, 1e-2, fv, f, w,
                                       0.05, 1, {}),
                  ConfigError);
}

TEST_CASE("scaling study on synthetic runs") {
  std::vector<DiffusionRun> runs;
  for (double mu : {2e-2, 1e-2, 5e-3, 2.5e-3}) {
    DiffusionRun r;
    r.mu = mu;
    r.T_d = 7.0 * (1.0 / mu) * std::log(1.0 / mu);
    runs.push_back(r);
  }
  DiffusionRun bad;
  bad.mu = 1e-3;
  bad.stop_reason = "budget";
  runs.push_back(bad);
  const auto rep = scaling_study(runs);
  REQUIRE(rep.points.size() == 5);
  for (int i = 0; i < 4; ++i) {
    CHECK(rep.points[i].complete);
    CHECK(rep.points[i].ratio == doctest::Approx(7.0).epsilon(1e-12));
  }
  CHECK_FALSE(rep.points[4].complete);
  CHECK(rep.C_fit == doctest::Approx(7.0).epsilon(1e-12));
  CHECK(rep.spread == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(rep.notices.size() == 1);
}
