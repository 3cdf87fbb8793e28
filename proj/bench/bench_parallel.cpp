// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include "mollikit/mollify.hpp"
#include "mollikit/montecarlo.hpp"

namespace {

using namespace mollikit;

const std::vector<double>& grid() {
  static const auto g = make_grid(-3.0, 3.0, 1e-3);
  return g;
}

void BM_SupErrorSerial(benchmark::State& state) {
  const SmoothedLoss s(LossSpec::huber(1.0), MollifierKernel::bump(), static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sup_error_serial(s, grid()));
}

void BM_SupErrorParallel(benchmark::State& state) {
  const SmoothedLoss s(LossSpec::huber(1.0), MollifierKernel::bump(), static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sup_error(s, grid()));
}

void run_rmse(benchmark::State& state, int threads) {
  ExperimentConfig cfg;
  cfg.n = 100;
  cfg.M = static_cast<int>(state.range(0));
  cfg.threads = threads;
  for (auto _ : state) benchmark::DoNotOptimize(run_rmse_experiment(cfg).rmse_tau);
}

void BM_RmseSerial(benchmark::State& state) { run_rmse(state, 1); }
void BM_RmseParallel(benchmark::State& state) { run_rmse(state, 0); }

}  // namespace

BENCHMARK(BM_SupErrorSerial)->Arg(10)->Arg(80)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SupErrorParallel)->Arg(10)->Arg(80)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RmseSerial)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RmseParallel)->Arg(50)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
