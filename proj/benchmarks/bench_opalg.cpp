#include <benchmark/benchmark.h>

#include "rdmkit/metric_maps.hpp"
#include "rdmkit/opalg.hpp"
#include "rdmkit/rng.hpp"

using namespace rdmkit;

static void BM_HermitianSquareXXXO(benchmark::State& state) {
  const int r = static_cast<int>(state.range(0));
  Rng rng(1);
  const auto cv = opalg::CoefficientVectors::random(r, rng);
  const auto c = opalg::build_C("xxxo", cv);
  for (auto _ : state) {
    benchmark::DoNotOptimize(opalg::hermitian_square(c));
  }
}
BENCHMARK(BM_HermitianSquareXXXO)->Arg(4)->Arg(6);

static void BM_NormalOrderRandomDegree8(benchmark::State& state) {
  Rng rng(2);
  opalg::OperatorPolynomial p;
  for (int t = 0; t < 64; ++t) {
    opalg::Monomial m;
    for (int i = 0; i < 8; ++i) {
      const int j = static_cast<int>(rng.next_u64() % 6);
      m.push_back((rng.next_u64() & 1) ? opalg::Factor::creation(j)
                                       : opalg::Factor::annihilation(j));
    }
    p.add_term(m, rng.gaussian_complex());
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(opalg::normal_order(p));
  }
}
BENCHMARK(BM_NormalOrderRandomDegree8);

static void BM_DeriveMetricMap(benchmark::State& state) {
  const int r = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(opalg::derive_metric_map(opalg::MetricKind::G2, r));
  }
}
BENCHMARK(BM_DeriveMetricMap)->Arg(4)->Arg(6);
