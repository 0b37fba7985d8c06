#include "corefonto/labels.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "corefonto/error.hpp"

namespace corefonto {

std::string_view to_string(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::Unlabeled: return "UNLABELED";
    case EdgeKind::Identity: return "IDENTITY";
    case EdgeKind::Hierarchy: return "HIERARCHY";
    case EdgeKind::Noise: return "NOISE";
  }
  return "UNLABELED";
}

EdgeKind parse_edge_kind(std::string_view text) {
  if (text == "IDENTITY") return EdgeKind::Identity;
  if (text == "HIERARCHY") return EdgeKind::Hierarchy;
  if (text == "NOISE") return EdgeKind::Noise;
  if (text == "UNLABELED") return EdgeKind::Unlabeled;
  throw DataError("unknown edge label '" + std::string(text) + "'");
}

LabeledGraph LabeledGraph::from_graph(const CorefGraph& g, const std::vector<bool>& names) {
  if (names.size() != g.node_count()) {
    throw InvariantError("name tags do not cover every graph node");
  }
  LabeledGraph lg;
  lg.nodes_.reserve(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) {
    lg.nodes_.push_back({g.phrase(v), v, names[v]});
  }
  lg.incidence_.assign(g.node_count(), {});
  lg.edges_.reserve(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& edge = g.edge(e);
    lg.edges_.push_back({edge.u, edge.v, edge.weight, e, EdgeKind::Unlabeled, kNoNode, kNoNode});
    lg.incidence_[edge.u].push_back(e);
    lg.incidence_[edge.v].push_back(e);
  }
  return lg;
}

NodeId LabeledGraph::add_node(LabeledNode node) {
  nodes_.push_back(std::move(node));
  incidence_.emplace_back();
  return static_cast<NodeId>(nodes_.size() - 1);
}

EdgeId LabeledGraph::add_edge(const LabeledEdge& edge) {
  if (edge.u == edge.v || edge.u >= nodes_.size() || edge.v >= nodes_.size()) {
    throw InvariantError("labeled edge endpoints out of range or equal");
  }
  const auto id = static_cast<EdgeId>(edges_.size());
  edges_.push_back(edge);
  incidence_[edge.u].push_back(id);
  incidence_[edge.v].push_back(id);
  return id;
}

void LabeledGraph::set_identity(EdgeId e) {
  edges_[e].kind = EdgeKind::Identity;
  edges_[e].parent = edges_[e].child = kNoNode;
}

void LabeledGraph::set_noise(EdgeId e) {
  edges_[e].kind = EdgeKind::Noise;
  edges_[e].parent = edges_[e].child = kNoNode;
}

void LabeledGraph::set_hierarchy(EdgeId e, NodeId parent, NodeId child) {
  LabeledEdge& edge = edges_[e];
  if (parent == child || !edge.touches(parent) || !edge.touches(child)) {
    throw InvariantError("hierarchy direction does not match the edge endpoints");
  }
  edge.kind = EdgeKind::Hierarchy;
  edge.parent = parent;
  edge.child = child;
}

void LabeledGraph::clear_label(EdgeId e) {
  edges_[e].kind = EdgeKind::Unlabeled;
  edges_[e].parent = edges_[e].child = kNoNode;
}

void LabeledGraph::reattach(EdgeId e, NodeId from, NodeId to) {
  LabeledEdge& edge = edges_[e];
  if (!edge.touches(from) || edge.other(from) == to || to >= nodes_.size()) {
    throw InvariantError("invalid edge re-attachment");
  }
  if (edge.u == from) {
    edge.u = to;
  } else {
    edge.v = to;
  }
  if (edge.parent == from) edge.parent = to;
  if (edge.child == from) edge.child = to;
  auto& inc = incidence_[from];
  inc.erase(std::find(inc.begin(), inc.end(), e));
  incidence_[to].push_back(e);
}

std::vector<NodeId> LabeledGraph::children(NodeId n) const {
  std::vector<NodeId> out;
  for (EdgeId e : incidence_[n]) {
    const auto& edge = edges_[e];
    if (edge.kind == EdgeKind::Hierarchy && edge.parent == n) out.push_back(edge.child);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<NodeId> LabeledGraph::parents(NodeId n) const {
  std::vector<NodeId> out;
  for (EdgeId e : incidence_[n]) {
    const auto& edge = edges_[e];
    if (edge.kind == EdgeKind::Hierarchy && edge.child == n) out.push_back(edge.parent);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

IdentityComponents identity_components(const LabeledGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<NodeId> root(n);
  for (NodeId i = 0; i < n; ++i) root[i] = i;
  auto find = [&](NodeId x) {
    while (root[x] != x) {
      root[x] = root[root[x]];
      x = root[x];
    }
    return x;
  };
  for (const auto& e : g.edges()) {
    if (e.kind != EdgeKind::Identity) continue;
    NodeId a = find(e.u), b = find(e.v);
    if (a == b) continue;
    if (b < a) std::swap(a, b);
    root[b] = a;
  }
  IdentityComponents out;
  out.of_node.assign(n, 0);
  std::vector<std::uint32_t> label(n, UINT32_MAX);
  for (NodeId i = 0; i < n; ++i) {
    const NodeId r = find(i);
    if (label[r] == UINT32_MAX) {
      label[r] = static_cast<std::uint32_t>(out.members.size());
      out.members.emplace_back();
    }
    out.of_node[i] = label[r];
    out.members[label[r]].push_back(i);
  }
  return out;
}

void write_labels(const LabeledGraph& g, std::ostream& out) {
  out << "corefonto-labels v1\n";
  out << "nodes " << g.node_count() << '\n';
  out << "edges " << g.edge_count() << '\n';
  for (NodeId n = 0; n < g.node_count(); ++n) {
    const auto& node = g.node(n);
    out << n << '\t' << node.origin << '\t' << (node.is_name ? 1 : 0) << '\t' << node.phrase
        << '\n';
  }
  for (const auto& e : g.edges()) {
    out << e.u << ' ' << e.v << ' ' << to_string(e.kind) << ' ';
    if (e.kind == EdgeKind::Hierarchy) {
      out << e.parent << '>' << e.child;
    } else {
      out << '-';
    }
    out << ' ' << e.weight << ' ' << e.origin << '\n';
  }
}

LabeledGraph read_labels(std::istream& in) {
  std::string line;
  auto header = [&](std::string_view key) -> std::size_t {
    if (!std::getline(in, line)) throw DataError("labels file truncated in header");
    std::istringstream ls(line);
    std::string word;
    std::size_t value = 0;
    if (!(ls >> word >> value) || word != key) {
      throw DataError("labels file: expected '" + std::string(key) + " <count>'");
    }
    return value;
  };
  if (!std::getline(in, line) || line != "corefonto-labels v1") {
    throw DataError("labels file: bad magic line");
  }
  const auto n = header("nodes");
  const auto m = header("edges");

  LabeledGraph g;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw DataError("labels file truncated in node table");
    std::istringstream ls(line);
    std::size_t id = 0;
    std::uint64_t origin = 0;
    int name = 0;
    if (!(ls >> id >> origin >> name) || id != i || (name != 0 && name != 1)) {
      throw DataError("labels file: bad node line " + std::to_string(i));
    }
    const auto tab = line.rfind('\t');
    LabeledNode node{line.substr(tab + 1), static_cast<NodeId>(origin), name == 1};
    if (node.phrase.empty()) throw DataError("labels file: empty phrase on node " + std::to_string(i));
    g.add_node(std::move(node));
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (!std::getline(in, line)) throw DataError("labels file truncated in edge list");
    std::istringstream ls(line);
    std::uint64_t u = 0, v = 0, w = 0, origin = 0;
    std::string kind, direction;
    if (!(ls >> u >> v >> kind >> direction >> w >> origin) || u >= n || v >= n) {
      throw DataError("labels file: bad edge line " + std::to_string(i));
    }
    LabeledEdge edge{static_cast<NodeId>(u), static_cast<NodeId>(v),
                     static_cast<std::uint32_t>(w), static_cast<EdgeId>(origin)};
    const EdgeId id = g.add_edge(edge);
    switch (parse_edge_kind(kind)) {
      case EdgeKind::Hierarchy: {
        const auto gt = direction.find('>');
        if (gt == std::string::npos) {
          throw DataError("labels file: hierarchy edge without direction on line " +
                          std::to_string(i));
        }
        NodeId parent = kNoNode, child = kNoNode;
        try {
          parent = static_cast<NodeId>(std::stoul(direction.substr(0, gt)));
          child = static_cast<NodeId>(std::stoul(direction.substr(gt + 1)));
        } catch (const std::logic_error&) {
        }
        if (!((parent == u && child == v) || (parent == v && child == u))) {
          throw DataError("labels file: bad direction on edge line " + std::to_string(i));
        }
        g.set_hierarchy(id, parent, child);
        break;
      }
      case EdgeKind::Identity: g.set_identity(id); break;
      case EdgeKind::Noise: g.set_noise(id); break;
      case EdgeKind::Unlabeled: break;
    }
  }
  return g;
}

void save_labels(const LabeledGraph& g, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write labels file " + path.string());
  write_labels(g, out);
}

LabeledGraph load_labels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read labels file " + path.string());
  return read_labels(in);
}

}  // namespace corefonto
