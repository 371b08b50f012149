#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "isodiff/quadrature.hpp"

using namespace isodiff;

TEST_CASE("adaptive simpson on smooth integrands") {
  CHECK(adaptive_simpson([](double x) { return std::sin(x); }, 0.0,
                         std::numbers::pi, 1e-12) ==
        doctest::Approx(2.0).epsilon(1e-11));
  CHECK(adaptive_simpson([](double x) { return std::exp(-x * x); }, -8.0, 8.0,
                         1e-12) ==
        doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-11));
}

TEST_CASE("gregory weights sum to interval length") {
  for (std::size_t n : {8u, 33u, 200u}) {
    const double h = 0.05;
    const auto w = gregory_weights(n, h);
    REQUIRE(w.size() == n);
    const double s = std::accumulate(w.begin(), w.end(), 0.0);
    CHECK(s == doctest::Approx(h * double(n - 1)).epsilon(1e-13));
  }
}

TEST_CASE("gregory rule is 4th order on a smooth periodic-free integrand") {
  auto exact = std::exp(1.0) - 1.0;
  auto err_at = [&](std::size_t n) {
    const double h = 1.0 / double(n - 1);
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = std::exp(double(i) * h);
    return std::abs(integrate_uniform(f, h) - exact);
  };
  const double e1 = err_at(65), e2 = err_at(129);
  CHECK(e1 < 1e-8);
  // halving h should shrink the error by about 2^4
  CHECK(e1 / e2 > 10.0);
  CHECK(e1 / e2 < 26.0);
}

TEST_CASE("uniform rule integrates sech^2 over a truncated line") {
  // int 2 sech^2 t dt = 4 up to exp(-2T) tails
  const double T = 30.0, h = 0.01;
  const std::size_t n = std::size_t(2 * T / h) + 1;
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = -T + double(i) * h;
    const double s = 1.0 / std::cosh(t);
    f[i] = 2.0 * s * s;
  }
  CHECK(integrate_uniform(f, h) == doctest::Approx(4.0).epsilon(1e-12));
}
