#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corefonto/coref_graph.hpp"

namespace corefonto {

enum class EdgeKind : std::uint8_t { Unlabeled, Identity, Hierarchy, Noise };

std::string_view to_string(EdgeKind kind);
EdgeKind parse_edge_kind(std::string_view text);

struct LabeledNode {
  std::string phrase;
  NodeId origin = kNoNode;  // node of the sealed graph this one descends from
  bool is_name = false;
  bool operator==(const LabeledNode&) const = default;
};

// An evidence edge with its label. Hierarchy edges carry parent -> child,
// which is always {u, v} in some order; other kinds leave both at kNoNode.
struct LabeledEdge {
  NodeId u = 0;
  NodeId v = 0;
  std::uint32_t weight = 0;
  EdgeId origin = kNoEdge;
  EdgeKind kind = EdgeKind::Unlabeled;
  NodeId parent = kNoNode;
  NodeId child = kNoNode;

  NodeId other(NodeId x) const { return x == u ? v : u; }
  bool touches(NodeId x) const { return u == x || v == x; }
  bool operator==(const LabeledEdge&) const = default;
};

// Mutable side table over a sealed CorefGraph. Starts as a copy of the
// graph's nodes and edges (same ids) and grows when sense resolution splits
// a node. Edges are never removed.
class LabeledGraph {
 public:
  LabeledGraph() = default;

  static LabeledGraph from_graph(const CorefGraph& g, const std::vector<bool>& names);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const LabeledNode& node(NodeId n) const { return nodes_[n]; }
  const LabeledEdge& edge(EdgeId e) const { return edges_[e]; }
  std::span<const LabeledNode> nodes() const { return nodes_; }
  std::span<const LabeledEdge> edges() const { return edges_; }
  std::span<const EdgeId> incident(NodeId n) const { return incidence_[n]; }

  NodeId add_node(LabeledNode node);
  EdgeId add_edge(const LabeledEdge& edge);

  void set_identity(EdgeId e);
  void set_noise(EdgeId e);
  void set_hierarchy(EdgeId e, NodeId parent, NodeId child);
  void clear_label(EdgeId e);

  // Moves the `from` endpoint of edge e onto node `to`, carrying a
  // hierarchy direction along.
  void reattach(EdgeId e, NodeId from, NodeId to);

  // Hierarchy neighbours in ascending node order.
  std::vector<NodeId> children(NodeId n) const;
  std::vector<NodeId> parents(NodeId n) const;

  bool operator==(const LabeledGraph&) const = default;

 private:
  std::vector<LabeledNode> nodes_;
  std::vector<LabeledEdge> edges_;
  std::vector<std::vector<EdgeId>> incidence_;
};

// Connected components under Identity edges. Components are numbered in
// order of their smallest node id.
struct IdentityComponents {
  std::vector<std::uint32_t> of_node;
  std::vector<std::vector<NodeId>> members;  // each sorted ascending
};

IdentityComponents identity_components(const LabeledGraph& g);

// Labels file:
//   corefonto-labels v1
//   nodes <N>
//   edges <M>
//   <id>\t<origin>\t<name 0|1>\t<phrase>           (N lines)
//   <u> <v> <LABEL> <parent>><child>|- <weight> <origin>   (M lines)
void write_labels(const LabeledGraph& g, std::ostream& out);
LabeledGraph read_labels(std::istream& in);
void save_labels(const LabeledGraph& g, const std::filesystem::path& path);
LabeledGraph load_labels(const std::filesystem::path& path);

}  // namespace corefonto
