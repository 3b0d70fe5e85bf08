#include <benchmark/benchmark.h>

#include "eightv/dynamics.hpp"
#include "eightv/pca.hpp"

namespace {

using namespace eightv;

void BM_Correlations(benchmark::State& state) {
  Exec exec = state.range(0) ? Exec::Parallel : Exec::Serial;
  KernelParams<double> kp = params_from_pr(0.2, 0.3);
  std::vector<EdgeAddress> targets;
  for (long t = 0; t <= 6; ++t)
    for (long i = -t; i <= t; ++i) targets.push_back({i, t});
  SamplerConfig cfg;
  cfg.samples = 20000;
  cfg.exec = exec;
  for (auto _ : state) {
    auto est = estimate_correlations({0, 0}, targets, ProductMeasure{Rational(1, 2)}, kp, cfg);
    benchmark::DoNotOptimize(est);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * cfg.samples));
}

void BM_SiteMarginals(benchmark::State& state) {
  Exec exec = state.range(0) ? Exec::Parallel : Exec::Serial;
  KernelParams<double> kp = params_from_pr(0.3, 0.4);
  for (auto _ : state) {
    auto est = site_marginals(Deterministic{Row{1}}, kp, 20, 44, 20000, 1, exec);
    benchmark::DoNotOptimize(est);
  }
}

void BM_A8Marginals(benchmark::State& state) {
  Exec exec = state.range(0) ? Exec::Parallel : Exec::Serial;
  std::vector<int> row(8, 0);
  for (auto _ : state) {
    auto est = a8_marginals(FaceRows{row, row, 0}, 0.2, 0.5, 40, 20000, 1, exec);
    benchmark::DoNotOptimize(est);
  }
}

}  // namespace

BENCHMARK(BM_Correlations)->Arg(0)->Arg(1)->ArgNames({"parallel"})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SiteMarginals)->Arg(0)->Arg(1)->ArgNames({"parallel"})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_A8Marginals)->Arg(0)->Arg(1)->ArgNames({"parallel"})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
