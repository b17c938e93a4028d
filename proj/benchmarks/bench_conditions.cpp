#include <benchmark/benchmark.h>

#include "rdmkit/conditions.hpp"
#include "rdmkit/rng.hpp"

using namespace rdmkit;

static void BM_PatternSquareNorms(benchmark::State& state) {
  const int r = static_cast<int>(state.range(0));
  const int n = r / 2;
  Rng rng(1);
  fock::StateVector psi;
  psi.r = r;
  psi.n_particles = n;
  psi.amplitudes = rng.unit_vector(static_cast<int>(binomial(r, n)));
  const auto cv = opalg::CoefficientVectors::random(r, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(conditions::pattern_square_norms(psi, cv));
  }
}
BENCHMARK(BM_PatternSquareNorms)->Arg(6)->Arg(8);

static void BM_MetricMatricesFromState(benchmark::State& state) {
  const int r = static_cast<int>(state.range(0));
  const int n = r / 2;
  Rng rng(2);
  fock::StateVector psi;
  psi.r = r;
  psi.n_particles = n;
  psi.amplitudes = rng.unit_vector(static_cast<int>(binomial(r, n)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(conditions::metric_matrices(psi));
  }
}
BENCHMARK(BM_MetricMatricesFromState)->Arg(6);

static void BM_CancelCheckRow1(benchmark::State& state) {
  const auto cond = conditions::TwoFourCondition::table_row(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(conditions::cancel_check(cond, 4, 1, 7));
  }
}
BENCHMARK(BM_CancelCheckRow1);
