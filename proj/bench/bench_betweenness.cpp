#include <benchmark/benchmark.h>

#include "dyncoup/centrality.hpp"
#include "dyncoup/synth.hpp"

namespace {

dyncoup::DependencyGraph synthetic(std::size_t n) {
  dyncoup::SynthConfig config;
  config.n_classes = n;
  config.attachment = 3;
  config.seed = 11;
  return dyncoup::build_graph(dyncoup::generate_system(config));
}

void BM_Serial(benchmark::State& state) {
  const auto graph = synthetic(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dyncoup::betweenness_centrality_serial(graph));
  state.SetComplexityN(state.range(0));
}

void BM_Parallel(benchmark::State& state) {
  const auto graph = synthetic(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dyncoup::betweenness_centrality(graph));
  state.SetComplexityN(state.range(0));
}

}  // namespace

BENCHMARK(BM_Serial)->RangeMultiplier(4)->Range(256, 4096)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Parallel)->RangeMultiplier(4)->Range(256, 4096)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
