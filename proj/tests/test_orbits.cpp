#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "isodiff/orbits.hpp"
#include "isodiff/quadrature.hpp"
#include "isodiff/separatrix.hpp"

using namespace isodiff;

namespace {
FrequencyVector omega1() {
  FrequencyVector fv;
  fv.omega = {1.0};
  return fv;
}

PerturbationSeries cos_phi1() {
  PerturbationSeries f;
  f.n = 1;
  f.q_mode = PerturbationSeries::QMode::FactorOneMinusCosQ;
  f.add_cos({1}, 1.0);
  return f;
}
}  // namespace

TEST_CASE("unperturbed glued orbit is the separatrix") {
  OrbitOptions o;
  o.h = 0.01;
  const auto orb = solve_glued_heteroclinic(0.0, {0.3}, 0.0, omega1(),
                                            cos_phi1(), o);
  REQUIRE(orb.t.size() == orb.q.size());
  double err = 0;
  for (std::size_t i = 0; i < orb.t.size(); ++i) {
    err = std::max(err, std::abs(orb.q[i] - separatrix_q(orb.t[i])));
  }
  CHECK(err < 1e-7);
  CHECK(std::abs(orb.qdot_jump) < 1e-7);
  CHECK(orb.q[orb.theta_index] ==
        doctest::Approx(std::numbers::pi).epsilon(1e-12));
}

TEST_CASE("perturbed glued orbit: residual, gluing point, boundary decay") {
  OrbitOptions o;
  o.h = 0.01;
  const double mu = 0.05;
  const auto orb =
      solve_glued_heteroclinic(mu, {0.7}, 0.4, omega1(), cos_phi1(), o);
  CHECK(orb.residual < 5e-8);
  CHECK(orb.q[orb.theta_index] ==
        doctest::Approx(std::numbers::pi).epsilon(1e-12));
  CHECK(orb.t[orb.theta_index] == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(std::abs(orb.q.front()) < 1e-4);
  CHECK(std::abs(orb.q.back() - 2 * std::numbers::pi) < 1e-4);
  // derivative jump across the gluing point is O(mu) at most
  CHECK(std::abs(orb.qdot_jump) < 10 * mu);
}

TEST_CASE("constrained orbit satisfies the integral constraint") {
  OrbitOptions o;
  o.h = 0.01;
  const double mu = 0.05, theta = 0.2;
  const auto orb = solve_constrained_heteroclinic(mu, {1.1}, theta, omega1(),
                                                  cos_phi1(), o);
  REQUIRE(orb.multiplier.has_value());
  // int (Q - q_theta) psi_theta dt = 0
  std::vector<double> g(orb.t.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = (orb.q[i] - separatrix_q(orb.t[i], theta)) *
           constraint_weight(orb.t[i] - theta);
  }
  CHECK(std::abs(integrate_uniform(g, orb.h)) < 1e-9);
  // smooth across theta: no derivative jump for the constrained variant
  CHECK(std::abs(orb.qdot_jump) < 1e-9);
  // multiplier alpha = O(mu)
  CHECK(std::abs(*orb.multiplier) < 10 * mu);
}

TEST_CASE("constrained multiplier scales linearly in mu") {
  OrbitOptions o;
  o.h = 0.02;
  const auto a1 =
      solve_constrained_heteroclinic(0.04, {0.5}, 0.0, omega1(), cos_phi1(), o);
  const auto a2 =
      solve_constrained_heteroclinic(0.02, {0.5}, 0.0, omega1(), cos_phi1(), o);
  REQUIRE(a1.multiplier.has_value());
  REQUIRE(a2.multiplier.has_value());
  if (std::abs(*a2.multiplier) > 1e-12) {
    CHECK(*a1.multiplier / *a2.multiplier == doctest::Approx(2.0).epsilon(0.1));
  }
}

TEST_CASE("solution is insensitive to enlarging the window") {
  OrbitOptions o1;
  o1.h = 0.02;
  o1.T_cut = 22.0;
  OrbitOptions o2 = o1;
  o2.T_cut = 30.0;
  const double mu = 0.05;
  const auto s1 =
      solve_glued_heteroclinic(mu, {0.3}, 0.0, omega1(), cos_phi1(), o1);
  const auto s2 =
      solve_glued_heteroclinic(mu, {0.3}, 0.0, omega1(), cos_phi1(), o2);
  // compare at shared nodes: window tails only perturb by O(exp(-2 T_cut));
  // locate the index of t = -22 in the larger window
  double err = 0;
  std::size_t j0 = 0;
  while (j0 < s2.t.size() && s2.t[j0] < s1.t.front() - 1e-9) ++j0;
  for (std::size_t i = 0; i < s1.q.size(); ++i) {
    err = std::max(err, std::abs(s1.q[i] - s2.q[j0 + i]));
  }
  CHECK(err < 1e-8);
}

TEST_CASE("mu beyond the smallness threshold is rejected") {
  OrbitOptions o;
  CHECK_THROWS(
      solve_glued_heteroclinic(0.5, {0.0}, 0.0, omega1(), cos_phi1(), o));
}
