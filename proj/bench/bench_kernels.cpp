// Serial reference vs OpenMP path for the Monte Carlo kernels.

#include <benchmark/benchmark.h>

#include "rpt/harness.hpp"

using namespace rpt;

namespace {

RunOptions options(const benchmark::State& state) {
  const auto threads = static_cast<int>(state.range(0));
  return threads == 0 ? RunOptions{Execution::Serial, 0} : RunOptions{Execution::Parallel, threads};
}

void BM_BinaryStatistics(benchmark::State& state) {
  SyntheticSpec spec;
  spec.periods = {32, 18};
  spec.length = 288;
  spec.snr_db = -14.0;
  spec.representation = RepresentationPolicy::Fixed;
  const Scenario sc(spec);
  const auto det = make_binary_detector(sc.dictionary(), 32, 18);
  const auto opts = options(state);
  for (auto _ : state) benchmark::DoNotOptimize(binary_statistics(sc, det, 500, opts));
  state.SetItemsProcessed(state.iterations() * 1000);
}

void BM_ClassifyScenario(benchmark::State& state) {
  SyntheticSpec spec;
  spec.periods = {28, 26, 25, 24, 23, 22, 21, 20, 18};
  spec.length = 128;
  spec.channels = 8;
  spec.snr_db = -15.0;
  spec.spatial = SpatialModel::rho_distance(0.7);
  const Scenario sc(spec);
  const auto rpt = make_classifier({MethodKind::Rpt}, sc, 256.0, sc.noise_covariance());
  const auto cca = make_classifier({MethodKind::Cca, 2}, sc, 256.0, sc.noise_covariance());
  const auto opts = options(state);
  for (auto _ : state) benchmark::DoNotOptimize(classify_scenario(sc, {rpt, cca}, 20, opts));
  state.SetItemsProcessed(state.iterations() * 180);
}

}  // namespace

// Argument: 0 runs the serial reference, n > 0 runs the OpenMP path on n threads.
BENCHMARK(BM_BinaryStatistics)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ClassifyScenario)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
