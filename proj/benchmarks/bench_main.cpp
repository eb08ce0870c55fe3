#include "opinf/certificate.hpp"
#include "opinf/constraints.hpp"
#include "opinf/local.hpp"
#include "opinf/polygon.hpp"
#include "opinf/slp.hpp"
#include "opinf/words.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace opinf;

void BM_EnumerateOutcomeOrbits(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    OutcomeOrbits o = enumerate_outcome_orbits(n);
    benchmark::DoNotOptimize(o.reps.data());
  }
}
BENCHMARK(BM_EnumerateOutcomeOrbits)->DenseRange(5, 8);

void BM_BuildMatrix(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    CorrelatorMatrix m = build_matrix(n);
    benchmark::DoNotOptimize(m.entries.data());
  }
}
BENCHMARK(BM_BuildMatrix)->DenseRange(4, 7);

void BM_BuildModel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Mode mode = state.range(1) ? Mode::Cumulative : Mode::Single;
  for (auto _ : state) {
    Model m = build_model(n, mode);
    benchmark::DoNotOptimize(m.rows.data());
  }
}
BENCHMARK(BM_BuildModel)->Args({6, 0})->Args({6, 1})->Args({7, 0})->Args({7, 1});

void BM_LinearizedLpSolve(benchmark::State& state) {
  const Model model = build_model(6, Mode::Single);
  // Linearize around the converged point so the LP is the production shape.
  const BoundResult r = slp_bound(model, Direction::Max);
  const Linearization lin = build_linearization(model, r.bound, r.x);
  LpProblem lp = linearized_lp(model, lin, -4.0, 4.0);
  lp.objective = {{lin.eps_col, -1.0}};  // maximize the step variable
  for (auto _ : state) {
    LpSolution res = solve_lp(lp);
    benchmark::DoNotOptimize(res.objective);
  }
}
BENCHMARK(BM_LinearizedLpSolve);

void BM_SlpBoundHexagon(benchmark::State& state) {
  const Model model = build_model(6, Mode::Single);
  for (auto _ : state) {
    BoundResult r = slp_bound(model, Direction::Max);
    benchmark::DoNotOptimize(r.bound);
  }
}
BENCHMARK(BM_SlpBoundHexagon)->Unit(benchmark::kMillisecond);

void BM_ExactLinearBound(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Model model = build_model(n, Mode::Single);
  for (auto _ : state) {
    Rational b = exact_linear_bound(model, Direction::Max);
    benchmark::DoNotOptimize(&b);
  }
}
BENCHMARK(BM_ExactLinearBound)->DenseRange(4, 5)->Unit(benchmark::kMillisecond);

void BM_CertifyHexagon(benchmark::State& state) {
  for (auto _ : state) {
    Certificate c = certify(6);
    benchmark::DoNotOptimize(c.q.data());
  }
}
BENCHMARK(BM_CertifyHexagon)->Unit(benchmark::kMillisecond);

void BM_EvalStrategy(benchmark::State& state) {
  const GridStrategy s = witness_strategy();
  for (auto _ : state) {
    StrategyEval ev = eval_strategy(s);
    benchmark::DoNotOptimize(ev.margin);
  }
}
BENCHMARK(BM_EvalStrategy);

void BM_ScanChunk(benchmark::State& state) {
  ScanOptions opts;
  opts.k = 2;
  opts.max_strategies = 4096;
  opts.threads = 1;
  for (auto _ : state) {
    ScanSummary s = scan_local(opts);
    benchmark::DoNotOptimize(s.scanned);
  }
  state.SetItemsProcessed(state.iterations() * 4096);
}
BENCHMARK(BM_ScanChunk)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
