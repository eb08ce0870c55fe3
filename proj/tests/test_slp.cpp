#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "opinf/constraints.hpp"
#include "opinf/rational.hpp"
#include "opinf/slp.hpp"

#include <cmath>
#include <vector>

using namespace opinf;

namespace {
const double kSqrt2m1 = std::sqrt(2.0) - 1.0;
}

TEST_CASE("exact bounds of the linear polygons") {
  // no quadratic constraints up to n = 5: the LP optimum is the exact answer
  for (Mode mode : {Mode::Single, Mode::Cumulative}) {
    CHECK(exact_linear_bound(build_model(3, mode), Direction::Max) == 1);
    CHECK(exact_linear_bound(build_model(4, mode), Direction::Max) == make_rational(1, 2));
    CHECK(exact_linear_bound(build_model(5, mode), Direction::Max) == make_rational(5, 11));
  }
  // minimum side: never better than the positivity-triangle corner at -1/3,
  // and at least as strong as the best local value -2/9
  for (int n = 3; n <= 5; ++n) {
    CAPTURE(n);
    const Rational lo = exact_linear_bound(build_model(n, Mode::Single), Direction::Min);
    CHECK(lo >= make_rational(-1, 3));
    CHECK(lo <= make_rational(-2, 9));
  }
  CHECK(exact_linear_bound(build_model(3, Mode::Single), Direction::Min) == make_rational(-1, 3));
}

TEST_CASE("successive linearization matches the exact LP when no quadratics") {
  for (int n = 3; n <= 5; ++n) {
    CAPTURE(n);
    const Model m = build_model(n, Mode::Single);
    const BoundResult r = slp_bound(m, Direction::Max);
    REQUIRE(r.status == BoundStatus::Converged);
    CHECK(r.bound == doctest::Approx(to_double(exact_linear_bound(m, Direction::Max)))
                         .epsilon(1e-9));
    CHECK(r.row_violation <= 1e-9);
  }
}

TEST_CASE("hexagon bound converges to the algebraic value") {
  const Model m = build_model(6, Mode::Single);
  const BoundResult r = slp_bound(m, Direction::Max);
  REQUIRE(r.status == BoundStatus::Converged);
  CHECK(std::abs(r.bound - kSqrt2m1) <= 1e-7);
  CHECK(r.residual <= 1e-7);
  CHECK(r.row_violation <= 1e-7);
  CHECK(std::abs(r.final_eps) <= 1e-9);
  REQUIRE(r.x.size() == m.vars.size());
  // reported residuals are honest: recompute from the returned point
  CHECK(quad_residual(m, r.x) == doctest::Approx(r.residual).epsilon(1e-12));
  CHECK(row_violation(m, r.x) == doctest::Approx(r.row_violation).epsilon(1e-12));
}

TEST_CASE("hexagon cumulative bound") {
  const BoundResult r = slp_bound(build_model(6, Mode::Cumulative), Direction::Max);
  REQUIRE(r.status == BoundStatus::Converged);
  CHECK(std::abs(r.bound - 0.404040) <= 1e-5);
}

TEST_CASE("replaying a converged state converges in one iteration") {
  const Model m = build_model(6, Mode::Single);
  const BoundResult first = slp_bound(m, Direction::Max);
  REQUIRE(first.status == BoundStatus::Converged);

  SlpOptions opts;
  opts.resume = first.state;
  const BoundResult again = slp_bound(m, Direction::Max, opts);
  REQUIRE(again.status == BoundStatus::Converged);
  CHECK(again.iterations == 1);
  CHECK(again.bound == doctest::Approx(first.bound).epsilon(1e-9));
}

TEST_CASE("iteration callback sees every step and enables resumption") {
  const Model m = build_model(6, Mode::Single);
  std::vector<SlpState> seen;
  SlpOptions opts;
  opts.on_iteration = [&](const SlpState& st) { seen.push_back(st); };
  const BoundResult r = slp_bound(m, Direction::Max, opts);
  REQUIRE(r.status == BoundStatus::Converged);
  REQUIRE(!seen.empty());
  CHECK(static_cast<int>(seen.size()) == r.iterations);
  for (std::size_t i = 0; i < seen.size(); ++i)
    CHECK(seen[i].iteration == static_cast<int>(i) + 1);

  // resuming from a mid-run snapshot reaches the same answer
  if (seen.size() >= 2) {
    SlpOptions mid;
    mid.resume = seen[seen.size() / 2];
    const BoundResult r2 = slp_bound(m, Direction::Max, mid);
    REQUIRE(r2.status == BoundStatus::Converged);
    CHECK(r2.bound == doctest::Approx(r.bound).epsilon(1e-8));
    CHECK(r2.iterations < r.iterations);
  }
}

TEST_CASE("iteration cap reports NotConverged with the best iterate") {
  SlpOptions opts;
  opts.max_iterations = 1;
  const BoundResult r = slp_bound(build_model(6, Mode::Single), Direction::Max, opts);
  CHECK(r.status == BoundStatus::NotConverged);
  CHECK(r.iterations == 1);
  CHECK(std::isfinite(r.bound));
  CHECK(!r.x.empty());
}

TEST_CASE("time limit reports TimeLimit with resumable state") {
  SlpOptions opts;
  opts.time_limit_s = 1e-9;
  const BoundResult r = slp_bound(build_model(6, Mode::Single), Direction::Max, opts);
  CHECK(r.status == BoundStatus::TimeLimit);
  CHECK(r.state.iteration >= 0);
}

TEST_CASE("bound ordering properties on small polygons") {
  BoundEngine engine;
  std::vector<double> cumulative;
  for (int n = 3; n <= 6; ++n) {
    CAPTURE(n);
    const BoundResult& single = engine.bound(n, Mode::Single, Direction::Max);
    const BoundResult& cum = engine.bound(n, Mode::Cumulative, Direction::Max);
    REQUIRE(single.status == BoundStatus::Converged);
    REQUIRE(cum.status == BoundStatus::Converged);
    // max bounds stay above the local value 1/3
    CHECK(single.bound >= 1.0 / 3.0 - 1e-9);
    CHECK(cum.bound >= 1.0 / 3.0 - 1e-9);
    // adding smaller polygons can only cut the feasible set down
    CHECK(cum.bound <= single.bound + 1e-9);
    cumulative.push_back(cum.bound);
  }
  for (std::size_t i = 1; i < cumulative.size(); ++i)
    CHECK(cumulative[i] <= cumulative[i - 1] + 1e-9);

  // min bounds stay below the best local value -2/9
  const BoundResult& lo = engine.bound(4, Mode::Cumulative, Direction::Min);
  REQUIRE(lo.status == BoundStatus::Converged);
  CHECK(lo.bound <= -2.0 / 9.0 + 1e-9);
}

TEST_CASE("engine memoizes results") {
  BoundEngine engine;
  const BoundResult& a = engine.bound(5, Mode::Single, Direction::Max);
  const BoundResult& b = engine.bound(5, Mode::Single, Direction::Max);
  CHECK(&a == &b);

  const auto curve = engine.curve(3, 5, Mode::Cumulative, Direction::Max);
  REQUIRE(curve.size() == 3);
  for (std::size_t i = 0; i < curve.size(); ++i)
    CHECK(curve[i].n == 3 + static_cast<int>(i));
}

TEST_CASE("exponential fit recovers planted parameters") {
  const double a = 0.361, b = 0.52, c = 0.47;
  std::vector<std::pair<int, double>> series;
  for (int n = 3; n <= 9; ++n) series.emplace_back(n, a + b * std::exp(-c * n));
  const FitResult fit = fit_extrapolate(series, 3);
  CHECK(fit.points == 7);
  CHECK(std::abs(fit.a - a) <= 1e-6);
  CHECK(std::abs(fit.b - b) <= 1e-4);
  CHECK(std::abs(fit.c - c) <= 1e-4);
  CHECK(fit.sse <= 1e-12);
}

TEST_CASE("linearization bookkeeping is consistent") {
  const Model m = build_model(6, Mode::Single);
  std::vector<double> xbar(m.vars.size(), 0.1);
  const Linearization lin = build_linearization(m, 0.4, xbar);
  CHECK(lin.ebar == doctest::Approx(0.4));
  CHECK(lin.eps_col == static_cast<int>(lin.free_vars.size()));
  REQUIRE(lin.col_of.size() == m.vars.size());
  REQUIRE(lin.substituted.size() == m.vars.size());
  // objective and quadratic targets are substituted, everything else is free
  CHECK(lin.substituted[static_cast<std::size_t>(m.obj)]);
  for (const auto& q : m.quads) CHECK(lin.substituted[static_cast<std::size_t>(q[0])]);
  int free_count = 0;
  for (std::size_t v = 0; v < m.vars.size(); ++v) {
    if (lin.substituted[v]) {
      CHECK(lin.col_of[v] == -1);
    } else {
      CHECK(lin.col_of[v] >= 0);
      ++free_count;
    }
  }
  CHECK(free_count == static_cast<int>(lin.free_vars.size()));

  const LpProblem lp = linearized_lp(m, lin, -4.0, 4.0);
  CHECK(lp.nvars == static_cast<int>(lin.free_vars.size()) + 1);
  CHECK(lp.lower[static_cast<std::size_t>(lin.eps_col)] == -4.0);
  CHECK(lp.upper[static_cast<std::size_t>(lin.eps_col)] == 4.0);
}
