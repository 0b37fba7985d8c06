#include <benchmark/benchmark.h>

#include "corefonto/louvain.hpp"
#include "corefonto/random.hpp"

namespace {

using namespace corefonto;

// Planted communities of 20 nodes, dense inside and sparse across.
SimpleGraph communities(std::size_t n) {
  Rng rng(n);
  SimpleGraph g{n, {}};
  for (std::uint32_t a = 0; a < n; ++a) {
    for (std::uint32_t b = a + 1; b < n; ++b) {
      const bool same = a / 20 == b / 20;
      if (rng.chance(same ? 0.4 : 2.0 / static_cast<double>(n))) g.edges.push_back({a, b, 1.0});
    }
  }
  return g;
}

void BM_Louvain(benchmark::State& state) {
  const auto g = communities(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(louvain(g));
  state.counters["edges"] = static_cast<double>(g.edges.size());
}
BENCHMARK(BM_Louvain)->Arg(100)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

}  // namespace
