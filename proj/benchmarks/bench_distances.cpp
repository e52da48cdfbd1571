#include <benchmark/benchmark.h>

#include "stein_chisq/distances.hpp"
#include "stein_chisq/normal_stein.hpp"
#include "stein_chisq/statistics.hpp"

namespace sc = stein_chisq;

static void BM_EnumeratePearsonLaw(benchmark::State& state) {
  const sc::MultinomialModel model(static_cast<int>(state.range(0)), {0.2, 0.3, 0.5});
  for (auto _ : state) benchmark::DoNotOptimize(sc::pearson_law(model));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(sc::outcome_count(model.n(), 3)));
}
BENCHMARK(BM_EnumeratePearsonLaw)->Arg(32)->Arg(128)->Arg(512);

static void BM_SamplePearson(benchmark::State& state) {
  const sc::MultinomialModel model(1000, {0.2, 0.3, 0.5});
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(sc::sample_pearson(model, 10000, seed++));
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_SamplePearson);

static void BM_ConstrainedGaussianSample(benchmark::State& state) {
  const sc::ConstrainedGaussian g({0.2, 0.3, 0.5});
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(g.sample(seed++, 10000));
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_ConstrainedGaussianSample);

static void BM_KolmogorovExact(benchmark::State& state) {
  const sc::MultinomialModel model(static_cast<int>(state.range(0)), {0.2, 0.3, 0.5});
  for (auto _ : state) benchmark::DoNotOptimize(sc::kolmogorov_distance(model, sc::DistanceMode::exact, 1e7, 1));
}
BENCHMARK(BM_KolmogorovExact)->Arg(64)->Arg(256);
