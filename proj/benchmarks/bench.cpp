#include <algorithm>
#include <vector>

#include <benchmark/benchmark.h>

#include "bootcopula/bootcopula.hpp"

using namespace bootcopula;

static void BM_BetaQuantile(benchmark::State& state) {
  const auto spec = DistributionSpec::beta(33.5, 822.0);
  double p = 0.0005;
  for (auto _ : state) {
    benchmark::DoNotOptimize(quantile(spec, p));
    p = p > 0.999 ? 0.0005 : p + 0.001;
  }
}
BENCHMARK(BM_BetaQuantile);

static void BM_FitBeta(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(fit_from_quantiles(Family::beta, {0.027, 0.050}));
}
BENCHMARK(BM_FitBeta);

static void BM_BootComb(benchmark::State& state) {
  const std::vector<FittedDistribution> m{fit_from_quantiles(Family::beta, {0.027, 0.050}),
                                          fit_from_quantiles(Family::beta, {0.036, 0.057})};
  const auto sigma = CorrelationMatrix::bivariate(0.5);
  const auto product = Combiner::builtin(BuiltinCombiner::product, 2);
  BootstrapConfig config;
  config.n = static_cast<std::size_t>(state.range(0));
  config.method = IntervalMethod::hdi;
  for (auto _ : state) benchmark::DoNotOptimize(boot_comb(m, sigma, product, config));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BootComb)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

static void BM_Hdi(benchmark::State& state) {
  RngStream rng(3, 0);
  std::vector<double> xs(static_cast<std::size_t>(state.range(0)));
  for (auto& x : xs) x = rng.next_uniform();
  for (auto _ : state) benchmark::DoNotOptimize(hdi_interval(xs, 0.95));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Hdi)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
