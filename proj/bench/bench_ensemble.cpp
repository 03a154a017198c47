// Serial reference against the OpenMP ensemble kernel and the parallel
// oracle sampler.

#include <benchmark/benchmark.h>

#include "bessel/ensemble.hpp"
#include "bessel/validate.hpp"

using namespace bessel;

namespace {

SimConfig bench_config() {
  SimConfig cfg;
  cfg.spec = {RootKind::B, 3};
  cfg.mult = Multiplicity::b(5.0, 1.0);
  cfg.start = {3.0, 2.0, 1.0};
  cfg.n_paths = 256;
  cfg.seed = 42;
  cfg.record_stride = cfg.n_steps();
  return cfg;
}

void BM_EnsembleSerial(benchmark::State& state) {
  const SimConfig cfg = bench_config();
  for (auto _ : state) benchmark::DoNotOptimize(simulate_ensemble_serial(cfg));
  state.SetItemsProcessed(state.iterations() * cfg.n_paths);
}

void BM_EnsembleParallel(benchmark::State& state) {
  const SimConfig cfg = bench_config();
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_ensemble(cfg, std::nullopt, threads));
  state.SetItemsProcessed(state.iterations() * cfg.n_paths);
}

void BM_WishartOracle(benchmark::State& state) {
  const RootSystemSpec spec{RootKind::B, 2};
  const Vec x0{2.0, 1.0};
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle_wishart(11, spec, 1, x0, 1.0, 4000, 7, threads));
  }
}

}  // namespace

BENCHMARK(BM_EnsembleSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_EnsembleParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_WishartOracle)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
