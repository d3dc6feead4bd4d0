#include <benchmark/benchmark.h>

#include "condg/experiment.hpp"
#include "condg/gap.hpp"
#include "condg/rng.hpp"
#include "condg/solvers.hpp"

using namespace condg;

namespace {

void BM_GapCaseI(benchmark::State& state, const char* name) {
  const auto p = construct_problem(name);
  const NonsmoothModel model = IndicatorModel{p.box};
  Rng rng{fnv1a(name)};
  const Vector x = rng.uniform_in(p.box);
  for (auto _ : state) benchmark::DoNotOptimize(solve_gap(p, model, x).theta);
}

void BM_GapCaseII(benchmark::State& state, const char* name) {
  const auto p = construct_problem(name);
  const NonsmoothModel model = make_model(p, GCase::case_ii, 42, 0, false);
  Rng rng{fnv1a(name)};
  const Vector x = rng.uniform_in(p.box);
  for (auto _ : state) benchmark::DoNotOptimize(solve_gap(p, model, x).theta);
}

void BM_Solver(benchmark::State& state, const char* name, SolverKind kind, GCase gcase) {
  const auto p = construct_problem(name);
  int start = 0;
  for (auto _ : state) {
    state.PauseTiming();
    const NonsmoothModel model = make_model(p, gcase, 42, start, false);
    const Vector x0 = start_point(42, p, gcase, start);
    start = (start + 1) % 100;
    state.ResumeTiming();
    benchmark::DoNotOptimize(run_solver(kind, p, model, x0).counters.iter);
  }
}

void BM_SupportFunction(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const BoxBounds box = BoxBounds::uniform(n, -1, 1);
  const SupportFunctionModel model = sample_support_model(n, 1, box, 7);
  Rng rng(3);
  const Vector x = rng.uniform_in(box);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_support(model, 0, x));
}

}  // namespace

BENCHMARK_CAPTURE(BM_GapCaseI, BK1, "BK1");
BENCHMARK_CAPTURE(BM_GapCaseI, JOS1, "JOS1");
BENCHMARK_CAPTURE(BM_GapCaseI, MGH33, "MGH33");
BENCHMARK_CAPTURE(BM_GapCaseII, BK1, "BK1");
BENCHMARK_CAPTURE(BM_GapCaseII, JOS1, "JOS1");
BENCHMARK_CAPTURE(BM_Solver, BK1_pgm_i, "BK1", SolverKind::pgm, GCase::case_i);
BENCHMARK_CAPTURE(BM_Solver, BK1_fgm_i, "BK1", SolverKind::fgm, GCase::case_i);
BENCHMARK_CAPTURE(BM_Solver, MAN1_fgm_ii, "MAN1", SolverKind::fgm, GCase::case_ii);
BENCHMARK(BM_SupportFunction)->Arg(2)->Arg(3)->Arg(10);
BENCHMARK_MAIN();
