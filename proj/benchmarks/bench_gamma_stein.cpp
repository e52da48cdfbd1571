#include <benchmark/benchmark.h>

#include "stein_chisq/gamma_stein.hpp"
#include "stein_chisq/normal_stein.hpp"

namespace sc = stein_chisq;

static void BM_TableEval(benchmark::State& state) {
  const sc::DerivativeTable t(sc::make_cosine(1.0), sc::GammaParams::chi_square(3.0), 4);
  const int k = static_cast<int>(state.range(0));
  double x = 0.05;
  for (auto _ : state) {
    benchmark::DoNotOptimize(t(k, x));
    x = x < 30 ? x + 0.37 : 0.05;
  }
}
BENCHMARK(BM_TableEval)->DenseRange(1, 4);

static void BM_InterpolatedProfileEval(benchmark::State& state) {
  const sc::DerivativeTable t(sc::make_cosine(1.0), sc::GammaParams::chi_square(2.0), 4);
  const auto f = sc::interpolated_profile(t, 1, 3, 64.0);
  double w = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(f(2, w));
    w = w < 60 ? w + 0.173 : 0.0;
  }
}
BENCHMARK(BM_InterpolatedProfileEval);

static void BM_BoundCatalog(benchmark::State& state) {
  const auto norms = sc::NormBundle::from_values({1.0, 1.0, 1.0, 1.0});
  for (auto _ : state) benchmark::DoNotOptimize(sc::bound_catalog(sc::GammaParams(1.5, 0.5), 3, norms));
}
BENCHMARK(BM_BoundCatalog);
