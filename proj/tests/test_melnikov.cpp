#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "isodiff/melnikov.hpp"

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
  f.add_cos({1}, 1.0);
  return f;
}
}  // namespace

TEST_CASE("constant coupling gives Gamma = 4") {
  PerturbationSeries f;
  f.n = 1;
  f.set({0}, Complex(1.0, 0.0));
  CHECK(melnikov_primitive({0.0}, omega1(), f) ==
        doctest::Approx(4.0).epsilon(1e-10));
  CHECK(melnikov_coefficient({0}, omega1(), Complex(1.0, 0.0)).real() ==
        doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("coefficient law matches quadrature") {
  // Gamma_k = f_k 2 pi (k.omega) / sinh(k.omega pi/2)
  const auto fv = omega1();
  const auto f = cos_phi1();
  const auto gk = melnikov_coefficients(fv, f);
  const auto it = gk.find(ModeKey{1});
  REQUIRE(it != gk.end());
  const double expected =
      0.5 * 2.0 * std::numbers::pi / std::sinh(std::numbers::pi / 2.0);
  CHECK(it->second.real() == doctest::Approx(expected).epsilon(1e-13));
  CHECK(std::abs(it->second.imag()) < 1e-15);
  for (double A : {0.0, 0.9, 2.2, 4.0}) {
    const double series = 2.0 * it->second.real() * std::cos(A);
    CHECK(melnikov_primitive({A}, fv, f) ==
          doctest::Approx(series).epsilon(1e-9));
  }
}

TEST_CASE("coefficient limit at small k.omega and decay at large") {
  FrequencyVector slow;
  slow.omega = {1e-9};
  CHECK(melnikov_coefficient({1}, slow, Complex(1.0, 0.0)).real() ==
        doctest::Approx(4.0).epsilon(1e-8));
  FrequencyVector fast;
  fast.omega = {60.0};
  const auto c = melnikov_coefficient({1}, fast, Complex(1.0, 0.0));
  CHECK(std::abs(c) < 1e-35);
  CHECK(std::abs(c) > 0.0);  // log-space evaluation avoids underflow to zero
}

TEST_CASE("gradient matches finite differences of the primitive") {
  FrequencyVector fv;
  fv.omega = {1.0, 0.7};
  PerturbationSeries f;
  f.n = 2;
  f.add_cos({1, 0}, 1.0);
  f.add_sin({0, 1}, 0.6);
  f.add_cos({1, 1}, 0.25);
  const std::vector<double> A{0.8, -0.4};
  const auto g = melnikov_gradient(A, fv, f);
  const double h = 1e-5;
  for (int j = 0; j < 2; ++j) {
    auto Ap = A, Am = A;
    Ap[j] += h;
    Am[j] -= h;
    const double fd =
        (melnikov_primitive(Ap, fv, f) - melnikov_primitive(Am, fv, f)) /
        (2 * h);
    CHECK(g[j] == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("general Melnikov function") {
  // factor-mode coupling: M coincides with Gamma up to the f(., 0) subtraction
  const auto fv = omega1();
  PerturbationSeries gen;
  gen.n = 1;
  gen.q_mode = PerturbationSeries::QMode::GeneralInQ;
  // q-independent coupling integrates to zero
  gen.add_cos({1, 0}, 1.0);
  CHECK(std::abs(melnikov_general({0.3}, fv, gen)) < 1e-10);

  // sin q cos phi_1, frozen from an arbitrary-precision oracle at A = 0.3
  PerturbationSeries sq;
  sq.n = 1;
  sq.q_mode = PerturbationSeries::QMode::GeneralInQ;
  sq.add_sin({1, 1}, 0.5);
  sq.add_sin({-1, 1}, 0.5);
  CHECK(melnikov_general({0.3}, fv, sq) ==
        doctest::Approx(0.740006434879933).epsilon(1e-9));
  CHECK(std::abs(melnikov_general({0.0}, fv, sq)) < 1e-10);
}

TEST_CASE("reduced action translation identity") {
  const auto fv = omega1();
  const auto f = cos_phi1();
  OrbitOptions o;
  o.h = 0.02;
  const double mu = 0.05, theta = 0.6;
  const double F = action_reduced(mu, {0.4}, theta, fv, f, o);
  const double G = action_reduced(mu, {0.4 + theta}, 0.0, fv, f, o);
  CHECK(F == doctest::Approx(G).epsilon(1e-9));
}

TEST_CASE("first-order expansion of the reduced action") {
  // G_mu(A) - G_mu(0) = mu (Gamma(A) - Gamma(0)) + O(mu^2)
  const auto fv = omega1();
  const auto f = cos_phi1();
  OrbitOptions o;
  o.h = 0.01;
  const double A = 2.0;
  const double dG =
      melnikov_primitive({A}, fv, f) - melnikov_primitive({0.0}, fv, f);
  auto resid = [&](double mu) {
    const double g = action_reduced(mu, {A}, 0.0, fv, f, o) -
                     action_reduced(mu, {0.0}, 0.0, fv, f, o);
    return std::abs(g - mu * dG);
  };
  const double r1 = resid(0.04), r2 = resid(0.02);
  CHECK(r1 < 0.04 * 0.04 * 10);
  CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("unperturbed action equals the separatrix action") {
  // G_0 = int qdot_0^2 dt = 8
  const auto fv = omega1();
  const auto f = cos_phi1();
  OrbitOptions o;
  o.h = 0.01;
  CHECK(action_reduced(0.0, {0.0}, 0.0, fv, f, o) ==
        doctest::Approx(8.0).epsilon(1e-8));
  CHECK(action_glued(0.0, {1.0}, 0.3, fv, f, o) ==
        doctest::Approx(8.0).epsilon(1e-8));
}

TEST_CASE("grid evaluation, Fourier transform and round trip") {
  const auto fv = omega1();
  const auto f = cos_phi1();
  OrbitOptions o;
  o.h = 0.02;
  const double mu = 0.05;
  const auto grid =
      compute_homoclinic_grid(GridKind::Reduced, mu, fv, f, {16}, o, 2);
  REQUIRE(grid.values.size() == 16);
  // spot check one sample against the scalar evaluation
  const auto A3 = grid.angle({3});
  CHECK(grid.at({3}) ==
        doctest::Approx(action_reduced(mu, A3, 0.0, fv, f, o)).epsilon(1e-12));
  // leading Fourier mode matches mu Gamma_1
  const auto gf = fourier_of_grid(grid);
  const auto gk = melnikov_coefficients(fv, f);
  const auto c1 = gf.coeffs.at(ModeKey{1});
  CHECK(c1.real() ==
        doctest::Approx(mu * gk.at(ModeKey{1}).real()).epsilon(2e-3));
  // save/load round trip
  std::stringstream ss;
  grid.save(ss);
  const auto back = HomoclinicGrid::load(ss);
  CHECK(back.shape == grid.shape);
  CHECK(back.mu == doctest::Approx(grid.mu));
  for (std::size_t i = 0; i < grid.values.size(); ++i) {
    CHECK(back.values[i] == doctest::Approx(grid.values[i]).epsilon(1e-14));
  }
  // interpolation reproduces nodes
  CHECK(grid.interp(A3) == doctest::Approx(grid.at({3})).epsilon(1e-13));
}

TEST_CASE("grid workers do not change results") {
  const auto fv = omega1();
  const auto f = cos_phi1();
  OrbitOptions o;
  o.h = 0.05;
  const auto g1 =
      compute_homoclinic_grid(GridKind::MelnikovGamma, 0.0, fv, f, {32}, o, 1);
  const auto g8 =
      compute_homoclinic_grid(GridKind::MelnikovGamma, 0.0, fv, f, {32}, o, 8);
  for (std::size_t i = 0; i < g1.values.size(); ++i) {
    CHECK(g1.values[i] == g8.values[i]);  // bitwise
  }
}
