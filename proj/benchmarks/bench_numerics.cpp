#include <cmath>

#include <benchmark/benchmark.h>

#include "stein_chisq/numerics.hpp"

namespace sc = stein_chisq;

static void BM_IntegrateHalfLine(benchmark::State& state) {
  for (auto _ : state) {
    auto r = sc::integrate([](double x) { return std::cos(x) * std::exp(-x / 2); }, sc::Interval::half_line());
    benchmark::DoNotOptimize(r.value);
  }
}
BENCHMARK(BM_IntegrateHalfLine);

static void BM_RegLowerGamma(benchmark::State& state) {
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sc::reg_lower_gamma(2.5, x));
    x = x < 50 ? x * 1.01 : 0.1;
  }
}
BENCHMARK(BM_RegLowerGamma);

static void BM_SupNorm(benchmark::State& state) {
  const auto grid = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        sc::sup_norm_estimate([](double x) { return x * std::exp(-x); }, sc::Interval::half_line(), grid, true));
}
BENCHMARK(BM_SupNorm)->Arg(256)->Arg(1024);
