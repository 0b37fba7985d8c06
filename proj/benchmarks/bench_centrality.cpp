#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "corefonto/centrality.hpp"

namespace {

using namespace corefonto;

void BM_ExactBetweenness(benchmark::State& state) {
  const auto& g = bench::planted_graph(static_cast<std::size_t>(state.range(0)));
  const auto threads = static_cast<unsigned>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(exact_betweenness(g, threads));
  state.counters["nodes"] = static_cast<double>(g.node_count());
}
BENCHMARK(BM_ExactBetweenness)->Args({6, 1})->Args({12, 1})->Args({12, 4})->UseRealTime()->Unit(benchmark::kMillisecond);

void BM_PivotBetweenness(benchmark::State& state) {
  const auto& g = bench::planted_graph(12);
  const PivotConfig pc{static_cast<std::uint32_t>(state.range(0)), 42};
  for (auto _ : state) benchmark::DoNotOptimize(approx_betweenness(g, pc));
  state.counters["nodes"] = static_cast<double>(g.node_count());
}
BENCHMARK(BM_PivotBetweenness)->Arg(100)->Arg(500)->Arg(2500)->Unit(benchmark::kMillisecond);

}  // namespace
