#include <benchmark/benchmark.h>

#include "rdmkit/solver.hpp"

using namespace rdmkit;

static void BM_LowerBoundHubbardDQG(benchmark::State& state) {
  const auto ints = hamiltonians::hubbard_chain(3, 1.0, 4.0);
  const auto conds = solver::ConditionSet::parse("DQG");
  solver::SolverOptions opts;
  opts.max_iterations = 200;  // fixed slice, not run to convergence
  for (auto _ : state) {
    benchmark::DoNotOptimize(solver::lower_bound(ints, 3, conds, opts));
  }
}
BENCHMARK(BM_LowerBoundHubbardDQG)->Unit(benchmark::kMillisecond);
