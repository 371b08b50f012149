#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "isodiff/series.hpp"

using namespace isodiff;

namespace {
PerturbationSeries two_cos() {
  PerturbationSeries f;
  f.n = 2;
  f.q_mode = PerturbationSeries::QMode::FactorOneMinusCosQ;
  f.add_cos({1, 0}, 1.0);
  f.add_cos({0, 1}, 1.0);
  return f;
}
}  // namespace

TEST_CASE("factor mode evaluation") {
  const auto f = two_cos();
  const std::vector<double> zero{0.0, 0.0};
  // (1 - cos pi) * (cos 0 + cos 0) = 4
  CHECK(f.eval(zero, std::numbers::pi) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(f.eval(zero, 0.0) == doctest::Approx(0.0).epsilon(1e-14));
  const std::vector<double> half{std::numbers::pi / 2, 0.0};
  // (1 - cos pi) * (0 + 1) = 2
  CHECK(f.eval(half, std::numbers::pi) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("derivatives match finite differences") {
  auto f = two_cos();
  f.add_sin({1, 1}, 0.25);
  const std::vector<double> phi{0.3, -1.1};
  const double q = 0.7, h = 1e-6;
  for (int j = 0; j < 2; ++j) {
    auto p1 = phi, p2 = phi;
    p1[j] += h;
    p2[j] -= h;
    const double fd = (f.eval(p1, q) - f.eval(p2, q)) / (2 * h);
    CHECK(f.dphi(j, phi, q) == doctest::Approx(fd).epsilon(1e-7));
  }
  const double fdq = (f.eval(phi, q + h) - f.eval(phi, q - h)) / (2 * h);
  CHECK(f.dq(phi, q) == doctest::Approx(fdq).epsilon(1e-7));
  const double fdqq =
      (f.eval(phi, q + h) - 2 * f.eval(phi, q) + f.eval(phi, q - h)) / (h * h);
  CHECK(f.dqq(phi, q) == doctest::Approx(fdqq).epsilon(1e-3));
}

TEST_CASE("general mode with q index") {
  // sin q cos phi_1 = (1/2)[sin(q + phi_1) + sin(q - phi_1)]
  PerturbationSeries f;
  f.n = 1;
  f.q_mode = PerturbationSeries::QMode::GeneralInQ;
  f.add_sin({1, 1}, 0.5);
  f.add_sin({-1, 1}, 0.5);
  const std::vector<double> phi{0.4};
  for (double q : {0.0, 0.9, 2.5}) {
    CHECK(f.eval(phi, q) ==
          doctest::Approx(std::sin(q) * std::cos(0.4)).epsilon(1e-13));
  }
  CHECK_FALSE(f.q_independent());
}

TEST_CASE("reality defect flags asymmetric coefficients") {
  auto f = two_cos();
  CHECK(f.reality_defect() == doctest::Approx(0.0).epsilon(1e-15));
  f.set({1, 0}, Complex(0.5, 0.5));  // breaks f_k = conj(f_{-k})
  CHECK(f.reality_defect() > 0.1);
}

TEST_CASE("decay certificate") {
  PerturbationSeries f;
  f.n = 1;
  f.widths = {0.5};
  f.decay_order = 2;
  f.decay_constant = 1.0;
  for (int k = 1; k <= 6; ++k)
    f.add_cos({k}, std::exp(-0.5 * k) / (k * k));
  CHECK(f.decay_ratio() <= 1.0 + 1e-12);
  f.add_cos({8}, 1.0);  // violates the bound
  CHECK(f.decay_ratio() > 1.0);
}

TEST_CASE("sup norm bound") {
  const auto f = two_cos();
  // sum |f_k| = 4 * 1/2 = 2, times 2 for the (1-cos q) factor
  CHECK(f.sup_norm() == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("save and load round trip") {
  auto f = two_cos();
  f.add_sin({3, -2}, 0.125);
  f.widths = {0.4, 0.7};
  f.decay_order = 3;
  f.decay_constant = 2.5;
  std::stringstream ss;
  f.save(ss);
  const auto g = PerturbationSeries::load(ss);
  CHECK(g.n == f.n);
  CHECK(g.q_mode == f.q_mode);
  CHECK(g.widths == f.widths);
  CHECK(g.decay_order == f.decay_order);
  CHECK(g.decay_constant == doctest::Approx(f.decay_constant));
  CHECK(g.coeffs.size() == f.coeffs.size());
  for (const auto& [k, c] : f.coeffs) {
    CHECK(std::abs(g.get(k) - c) < 1e-15);
  }
  const std::vector<double> phi{1.2, -0.3};
  CHECK(g.eval(phi, 0.8) == doctest::Approx(f.eval(phi, 0.8)).epsilon(1e-14));
}
