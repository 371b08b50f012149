#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "isodiff/angles.hpp"
#include "isodiff/errors.hpp"
#include "isodiff/melnikov.hpp"
#include "isodiff/splitting.hpp"

using namespace isodiff;
using std::numbers::pi;

namespace {

HomoclinicGrid grid_from(int N, int dim,
                         const std::function<double(const std::vector<double>&)>& g) {
  HomoclinicGrid grid;
  grid.shape.assign(dim, N);
  grid.values.assign(std::size_t(std::pow(N, dim)) + 0.5, 0.0);
  std::vector<int> idx(dim, 0);
  for (std::size_t flat = 0; flat < grid.values.size(); ++flat) {
    grid.values[flat] = g(grid.angle(idx));
    for (int d = dim - 1; d >= 0; --d) {
      if (++idx[d] < N) break;
      idx[d] = 0;
    }
  }
  return grid;
}

double circle_diff(double a, double b) {
  double d = std::fmod(a - b, 2 * pi);
  if (d > pi) d -= 2 * pi;
  if (d < -pi) d += 2 * pi;
  return d;
}

double radial2(const std::vector<double>& A, const std::vector<double>& A0) {
  double s = 0;
  for (std::size_t j = 0; j < A.size(); ++j) {
    const double d = circle_diff(A[j], A0[j]);
    s += d * d;
  }
  return s;
}

}  // namespace

TEST_CASE("radial quadratic model: analytic window passes") {
  const std::vector<double> A0{pi, pi};
  const auto grid =
      grid_from(512, 2, [&](const std::vector<double>& A) { return radial2(A, A0); });
  SplittingWindow w{A0, 1.0, 0.07, 0.5};
  const auto rep = check_splitting_condition(grid, w);
  CHECK(rep.cond_i);
  CHECK(rep.cond_ii);
  CHECK(rep.cond_iii);
  CHECK(rep.all_pass());
  // closed-form radii: inf on the ball 0, inf on the sphere 1 (nearest face),
  // sup on B_alpha = 2 alpha^2 (corner of the sup-ball)
  CHECK(rep.inf_ball == doctest::Approx(0.0).epsilon(1e-3));
  CHECK(rep.inf_boundary == doctest::Approx(1.0).epsilon(2e-3));
  CHECK(rep.sup_inner == doctest::Approx(2 * 0.07 * 0.07).epsilon(5e-2));
  CHECK(rep.margin_i == doctest::Approx(0.5).epsilon(5e-3));
  CHECK(rep.margin_ii == doctest::Approx(0.5 / 4 - 2 * 0.07 * 0.07).epsilon(5e-2));
  // level radii sqrt(0.5) and sqrt(0.75): gap 0.159 up to the one-cell guard
  CHECK(rep.sublevel_gap > 0.150);
  CHECK(rep.sublevel_gap < 0.160);
  CHECK(rep.margin_iii == doctest::Approx(rep.sublevel_gap - 2 * 0.07).epsilon(1e-12));
}

TEST_CASE("invariance under constant shift and torus translation") {
  const std::vector<double> A0{pi, pi};
  const auto g1 =
      grid_from(512, 2, [&](const std::vector<double>& A) { return radial2(A, A0); });
  const std::vector<double> B0{1.0, 5.0};
  const auto g2 = grid_from(512, 2, [&](const std::vector<double>& A) {
    return 17.25 + radial2(A, B0);
  });
  const auto r1 = check_splitting_condition(g1, {A0, 1.0, 0.07, 0.5});
  const auto r2 = check_splitting_condition(g2, {B0, 1.0, 0.07, 0.5});
  CHECK(r2.margin_i == doctest::Approx(r1.margin_i).epsilon(1e-3));
  CHECK(r2.margin_ii == doctest::Approx(r1.margin_ii).epsilon(1e-3));
  CHECK(r2.margin_iii == doctest::Approx(r1.margin_iii).epsilon(2e-2));
  // off-node center costs a little interpolation error in the ball infimum
  CHECK(r2.inf_ball - r1.inf_ball == doctest::Approx(17.25).epsilon(1e-4));
}

TEST_CASE("constant grid fails (i) with margin -delta") {
  const auto grid = grid_from(128, 2, [](const std::vector<double>&) { return 3.0; });
  const auto rep =
      check_splitting_condition(grid, {{pi, pi}, 1.0, 0.2, 0.5});
  CHECK_FALSE(rep.cond_i);
  CHECK(rep.margin_i == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("cosine model against closed-form levels") {
  // G = -cos A1 - cos A2, A0 = 0, rho = 1
  const auto grid = grid_from(512, 2, [](const std::vector<double>& A) {
    return -std::cos(A[0]) - std::cos(A[1]);
  });
  SplittingWindow w{{0.0, 0.0}, 1.0, 0.05, 0.4};
  const auto rep = check_splitting_condition(grid, w);
  CHECK(rep.all_pass());
  CHECK(rep.inf_ball == doctest::Approx(-2.0).epsilon(1e-4));
  // boundary inf on the face A1 = 1, A2 = 0
  CHECK(rep.inf_boundary == doctest::Approx(-std::cos(1.0) - 1.0).epsilon(1e-3));
  // sup over the alpha sup-ball at the corner (alpha, alpha)
  CHECK(rep.sup_inner == doctest::Approx(-2 * std::cos(0.05)).epsilon(1e-3));
}

TEST_CASE("too coarse grid is rejected unless allowed") {
  const std::vector<double> A0{pi, pi};
  const auto grid =
      grid_from(64, 2, [&](const std::vector<double>& A) { return radial2(A, A0); });
  SplittingWindow w{A0, 1.0, 0.07, 0.5};
  CHECK_THROWS_AS(check_splitting_condition(grid, w), ResolutionError);
  SplittingOptions opts;
  opts.allow_coarse = true;
  CHECK_NOTHROW(check_splitting_condition(grid, w, opts));
}

TEST_CASE("find_minimum on the single-mode Melnikov primitive") {
  FrequencyVector fv;
  fv.omega = {1.0};
  PerturbationSeries f;
  f.n = 1;
  f.add_cos({1}, 1.0);
  const auto gk = melnikov_coefficients(fv, f);
  const double g1 = gk.at(ModeKey{1}).real();
  const auto grid = grid_from(256, 1, [&](const std::vector<double>& A) {
    return 2 * g1 * std::cos(A[0]);
  });
  const auto m = find_minimum(grid);
  CHECK(m.nondegenerate);
  REQUIRE(m.A0.size() == 1);
  CHECK(m.A0[0] == doctest::Approx(pi).epsilon(1e-4));
  REQUIRE(m.hessian_eigenvalues.size() == 1);
  CHECK(m.hessian_eigenvalues[0] == doctest::Approx(2 * g1).epsilon(1e-3));
}

TEST_CASE("find_minimum: constant grid is degenerate, bowl recovers center") {
  const auto flat = grid_from(64, 2, [](const std::vector<double>&) { return 1.0; });
  CHECK_FALSE(find_minimum(flat).nondegenerate);

  const std::vector<double> C{2.0, 4.0};
  const auto bowl =
      grid_from(128, 2, [&](const std::vector<double>& A) { return radial2(A, C); });
  const auto m = find_minimum(bowl);
  CHECK(m.nondegenerate);
  CHECK(circle_diff(m.A0[0], 2.0) == doctest::Approx(0.0).epsilon(0.05));
  CHECK(circle_diff(m.A0[1], 4.0) == doctest::Approx(0.0).epsilon(0.05));
  CHECK(m.hessian_eigenvalues[0] == doctest::Approx(2.0).epsilon(1e-2));
  CHECK(m.hessian_eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-2));
}

TEST_CASE("suggest_window: feasible on the bowl, delta scales with mu") {
  const std::vector<double> A0{pi, pi};
  // Melnikov-dominated family: 8 + mu * (2 cos A1 + 2 cos A2 shifted to A0)
  auto make = [&](double mu) {
    return grid_from(360, 2, [&](const std::vector<double>& A) {
      return 8.0 + mu * (2.0 - std::cos(A[0] - pi) - std::cos(A[1] - pi));
    });
  };
  const auto ws1 = suggest_window_from_minimum(make(0.01), A0, 0.01);
  const auto ws2 = suggest_window_from_minimum(make(0.02), A0, 0.02);
  REQUIRE(ws1.feasible);
  REQUIRE(ws2.feasible);
  CHECK(ws1.report.all_pass());
  CHECK(ws2.window.delta / ws1.window.delta == doctest::Approx(2.0).epsilon(0.1));
  // alpha does not depend on mu
  CHECK(ws2.window.alpha == doctest::Approx(ws1.window.alpha).epsilon(1e-12));
}

TEST_CASE("suggest_window: degenerate input is infeasible") {
  const auto flat = grid_from(64, 2, [](const std::vector<double>&) { return 8.0; });
  const auto ws = suggest_window_from_minimum(flat, {pi, pi}, 0.01);
  CHECK_FALSE(ws.feasible);
}

TEST_CASE("diffusion time bound arithmetic") {
  SplittingWindow w{{0.0}, 1.0, 0.07, 0.5};
  const auto b = diffusion_time_bound(1.0, w, 2.0, 1e-3);
  // 2 * 1 * max(|ln 0.5|, 1/0.07^2) + |ln 1e-3| = 415.07...
  CHECK(b.transitions == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(b.per_transition == doctest::Approx(1.0 / (0.07 * 0.07)).epsilon(1e-12));
  CHECK(b.total == doctest::Approx(415.071).epsilon(1e-4));
  // eta = 1 kills the log term
  CHECK(diffusion_time_bound(1.0, w, 2.0, 1.0).eta_term == 0.0);
  // doubling delta never increases the bound
  SplittingWindow w2 = w;
  w2.delta = 1.0;
  CHECK(diffusion_time_bound(1.0, w2, 2.0, 1e-3).total <= b.total);
}
