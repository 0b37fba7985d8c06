#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace corefonto {

struct WeightedEdge {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  double weight = 1.0;
};

// Small undirected graph over nodes 0..n-1. Self-loops are allowed; a loop of
// weight w adds 2w to its node's degree.
struct SimpleGraph {
  std::size_t n = 0;
  std::vector<WeightedEdge> edges;
};

// Newman modularity of a partition. Zero for a graph without edges.
double modularity(const SimpleGraph& g, std::span<const std::uint32_t> community);

struct LouvainResult {
  // Community of every node, numbered 0..count-1 in order of first appearance
  // over ascending node ids (node 0 is always in community 0).
  std::vector<std::uint32_t> community;
  std::size_t count = 0;
  // Modularity of the partition on the input graph after each pass; entry 0
  // is the all-singletons partition.
  std::vector<double> pass_modularity;
};

// Deterministic Louvain. Nodes are visited in ascending order; a node moves
// to the neighbouring community with the largest strictly positive gain over
// staying, ties going to the lowest community id.
LouvainResult louvain(const SimpleGraph& g);

}  // namespace corefonto
