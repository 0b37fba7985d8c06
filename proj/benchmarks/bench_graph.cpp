#include <benchmark/benchmark.h>

#include "bench_common.hpp"

namespace {

using namespace corefonto;

void BM_BuildGraph(benchmark::State& state) {
  const auto chains = bench::planted_chains(12, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_graph(chains));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(chains.size()));
}
BENCHMARK(BM_BuildGraph)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

}  // namespace
