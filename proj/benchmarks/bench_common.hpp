#pragma once

#include <string>
#include <vector>

#include "corefonto/chain_ingest.hpp"
#include "corefonto/coref_graph.hpp"
#include "corefonto/planted.hpp"

namespace corefonto::bench {

// Normalized chains from a planted taxonomy with `branching` children per
// concept over four levels.
inline std::vector<Chain> planted_chains(std::size_t branching, std::size_t documents) {
  PlantedOntologySpec spec;
  spec.depth = 4;
  spec.branching = branching;
  spec.documents = documents;
  const auto corpus = generate_planted(spec, 1);
  return ingest(corpus.records, StopLists::defaults()).chains;
}

inline const CorefGraph& planted_graph(std::size_t branching) {
  static std::vector<std::pair<std::size_t, CorefGraph>> cache;
  for (const auto& [b, g] : cache)
    if (b == branching) return g;
  cache.emplace_back(branching, build_graph(planted_chains(branching, 2000)));
  return cache.back().second;
}

}  // namespace corefonto::bench
