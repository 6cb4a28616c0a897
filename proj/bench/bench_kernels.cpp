#include "ukfse/guideline.hpp"
#include "ukfse/monte_carlo.hpp"

#include <benchmark/benchmark.h>

using namespace ukfse;

namespace {

SimConfig small_config() {
  SimConfig cfg;
  cfg.n_runs = 8;
  cfg.duration = 50.0;
  cfg.window_start = 40.0;
  cfg.window_end = 50.0;
  return cfg;
}

void BM_MonteCarloSerial(benchmark::State& state) {
  const SimConfig cfg = small_config();
  for (auto _ : state) benchmark::DoNotOptimize(run_monte_carlo_serial(cfg));
}

void BM_MonteCarloParallel(benchmark::State& state) {
  const SimConfig cfg = small_config();
  for (auto _ : state) benchmark::DoNotOptimize(run_monte_carlo(cfg));
}

void BM_AttractorSerial(benchmark::State& state) {
  const guideline::GuidelineInput in;
  for (auto _ : state) benchmark::DoNotOptimize(guideline::verify_attractor_serial(in, 2000, 1000, 1));
}

void BM_AttractorParallel(benchmark::State& state) {
  const guideline::GuidelineInput in;
  for (auto _ : state) benchmark::DoNotOptimize(guideline::verify_attractor(in, 2000, 1000, 1));
}

}  // namespace

BENCHMARK(BM_MonteCarloSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarloParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_AttractorSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AttractorParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
