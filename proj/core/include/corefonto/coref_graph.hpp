#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace corefonto {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();
inline constexpr EdgeId kNoEdge = std::numeric_limits<EdgeId>::max();

// Undirected edge stored with u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  std::uint32_t weight = 0;

  NodeId other(NodeId x) const { return x == u ? v : u; }
  bool operator==(const Edge&) const = default;
};

struct Neighbor {
  NodeId node = 0;
  std::uint32_t weight = 0;
  EdgeId edge = 0;
};

// Sealed phrase co-occurrence graph.
//
// Node ids follow the lexicographic order of the phrases, edges are sorted by
// (u, v) and every adjacency list is sorted by neighbor id. The graph is
// immutable once built and can be shared read-only between threads.
class CorefGraph {
 public:
  CorefGraph() = default;

  // Validates and seals. `phrases` must be sorted and unique; edges must be
  // unique, have u < v < phrases.size() and weight >= 1. Throws DataError.
  static CorefGraph from_parts(std::vector<std::string> phrases, std::vector<Edge> edges);

  std::size_t node_count() const { return phrases_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  std::span<const Neighbor> neighbors(NodeId n) const {
    return {adjacency_.data() + offsets_[n], adjacency_.data() + offsets_[n + 1]};
  }
  std::size_t degree(NodeId n) const { return offsets_[n + 1] - offsets_[n]; }
  std::uint64_t weighted_degree(NodeId n) const { return weighted_degree_[n]; }

  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  std::optional<EdgeId> find_edge(NodeId a, NodeId b) const;

  const std::string& phrase(NodeId n) const { return phrases_[n]; }
  std::span<const std::string> phrases() const { return phrases_; }
  std::optional<NodeId> find(std::string_view phrase) const;

 private:
  std::vector<std::string> phrases_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Neighbor> adjacency_;
  std::vector<std::uint64_t> weighted_degree_;
};

// Streaming construction: every chain adds one unit of weight to each
// unordered pair of its distinct phrases.
class GraphBuilder {
 public:
  void add_chain(std::span<const std::string> chain);
  CorefGraph seal() &&;

 private:
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::vector<std::string> names_;
  std::unordered_map<std::uint64_t, std::uint32_t> pair_weight_;
};

CorefGraph build_graph(std::span<const std::vector<std::string>> chains);

struct DegreeStats {
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  std::size_t isolated_nodes = 0;
  std::size_t max_degree = 0;
  std::uint64_t total_weight = 0;
  std::map<std::uint32_t, std::size_t> weight_histogram;
};

DegreeStats degree_stats(const CorefGraph& g);

// Text snapshot:
//   corefgraph v1
//   nodes <N>
//   edges <M>
//   <id>\t<phrase>     (N lines, ids 0..N-1 in order)
//   <u> <v> <w>        (M lines)
void write_snapshot(const CorefGraph& g, std::ostream& out);
CorefGraph read_snapshot(std::istream& in);
void save_snapshot(const CorefGraph& g, const std::filesystem::path& path);
CorefGraph load_snapshot(const std::filesystem::path& path);

}  // namespace corefonto
