#include "corefonto/coref_graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "corefonto/error.hpp"

namespace corefonto {

CorefGraph CorefGraph::from_parts(std::vector<std::string> phrases, std::vector<Edge> edges) {
  for (std::size_t i = 1; i < phrases.size(); ++i) {
    if (!(phrases[i - 1] < phrases[i])) throw DataError("graph phrases must be sorted and unique");
  }
  for (const auto& p : phrases) {
    if (p.empty()) throw DataError("graph phrase is empty");
  }
  const auto n = phrases.size();
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    if (e.u >= e.v) throw DataError("graph edge must have u < v (no self-loops)");
    if (e.v >= n) throw DataError("graph edge endpoint out of range");
    if (e.weight == 0) throw DataError("graph edge weight must be >= 1");
    if (i > 0 && edges[i - 1].u == e.u && edges[i - 1].v == e.v) {
      throw DataError("duplicate graph edge");
    }
  }

  CorefGraph g;
  g.phrases_ = std::move(phrases);
  g.edges_ = std::move(edges);
  g.index_.reserve(n);
  for (NodeId i = 0; i < n; ++i) g.index_.emplace(g.phrases_[i], i);

  std::vector<std::size_t> degree(n, 0);
  for (const auto& e : g.edges_) {
    ++degree[e.u];
    ++degree[e.v];
  }
  g.offsets_.assign(n + 1, 0);
  std::partial_sum(degree.begin(), degree.end(), g.offsets_.begin() + 1);
  g.adjacency_.resize(g.offsets_[n]);
  g.weighted_degree_.assign(n, 0);
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  // Edges are sorted by (u, v); filling in edge order keeps every adjacency
  // list sorted by neighbor id.
  for (EdgeId id = 0; id < g.edges_.size(); ++id) {
    const Edge& e = g.edges_[id];
    g.adjacency_[fill[e.u]++] = {e.v, e.weight, id};
    g.weighted_degree_[e.u] += e.weight;
    g.weighted_degree_[e.v] += e.weight;
  }
  for (EdgeId id = 0; id < g.edges_.size(); ++id) {
    const Edge& e = g.edges_[id];
    g.adjacency_[fill[e.v]++] = {e.u, e.weight, id};
  }
  for (NodeId v = 0; v < n; ++v) {
    std::sort(g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]),
              g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]),
              [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
  }
  return g;
}

std::optional<EdgeId> CorefGraph::find_edge(NodeId a, NodeId b) const {
  if (a >= node_count() || b >= node_count()) return std::nullopt;
  auto nbrs = neighbors(a);
  auto it = std::lower_bound(nbrs.begin(), nbrs.end(), b,
                             [](const Neighbor& x, NodeId key) { return x.node < key; });
  if (it == nbrs.end() || it->node != b) return std::nullopt;
  return it->edge;
}

std::optional<NodeId> CorefGraph::find(std::string_view phrase) const {
  auto it = index_.find(std::string(phrase));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void GraphBuilder::add_chain(std::span<const std::string> chain) {
  std::vector<std::uint32_t> ids;
  ids.reserve(chain.size());
  for (const auto& phrase : chain) {
    auto [it, inserted] = ids_.try_emplace(phrase, static_cast<std::uint32_t>(names_.size()));
    if (inserted) names_.push_back(phrase);
    ids.push_back(it->second);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = i + 1; j < ids.size(); ++j) {
      const std::uint64_t key = (static_cast<std::uint64_t>(ids[i]) << 32) | ids[j];
      ++pair_weight_[key];
    }
  }
}

CorefGraph GraphBuilder::seal() && {
  // Remap insertion ids onto lexicographic ids so that the result does not
  // depend on chain order.
  const auto n = names_.size();
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::uint32_t a, std::uint32_t b) { return names_[a] < names_[b]; });
  std::vector<NodeId> remap(n);
  std::vector<std::string> phrases;
  phrases.reserve(n);
  for (std::size_t rank = 0; rank < n; ++rank) {
    remap[order[rank]] = static_cast<NodeId>(rank);
    phrases.push_back(std::move(names_[order[rank]]));
  }
  std::vector<Edge> edges;
  edges.reserve(pair_weight_.size());
  for (const auto& [key, w] : pair_weight_) {
    NodeId a = remap[static_cast<std::uint32_t>(key >> 32)];
    NodeId b = remap[static_cast<std::uint32_t>(key & 0xffffffffULL)];
    if (a > b) std::swap(a, b);
    edges.push_back({a, b, w});
  }
  return CorefGraph::from_parts(std::move(phrases), std::move(edges));
}

CorefGraph build_graph(std::span<const std::vector<std::string>> chains) {
  GraphBuilder builder;
  for (const auto& chain : chains) builder.add_chain(chain);
  return std::move(builder).seal();
}

DegreeStats degree_stats(const CorefGraph& g) {
  DegreeStats s;
  s.node_count = g.node_count();
  s.edge_count = g.edge_count();
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const auto d = g.degree(v);
    if (d == 0) ++s.isolated_nodes;
    s.max_degree = std::max(s.max_degree, d);
  }
  for (const auto& e : g.edges()) {
    ++s.weight_histogram[e.weight];
    s.total_weight += e.weight;
  }
  return s;
}

void write_snapshot(const CorefGraph& g, std::ostream& out) {
  out << "corefgraph v1\n";
  out << "nodes " << g.node_count() << '\n';
  out << "edges " << g.edge_count() << '\n';
  for (NodeId v = 0; v < g.node_count(); ++v) out << v << '\t' << g.phrase(v) << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << ' ' << e.weight << '\n';
}

CorefGraph read_snapshot(std::istream& in) {
  std::string line;
  auto expect_header = [&](std::string_view key) -> std::size_t {
    if (!std::getline(in, line)) throw DataError("graph snapshot truncated in header");
    std::istringstream ls(line);
    std::string word;
    std::size_t value = 0;
    if (!(ls >> word >> value) || word != key) {
      throw DataError("graph snapshot: expected '" + std::string(key) + " <count>'");
    }
    return value;
  };
  if (!std::getline(in, line) || line != "corefgraph v1") {
    throw DataError("graph snapshot: bad magic line");
  }
  const auto n = expect_header("nodes");
  const auto m = expect_header("edges");

  std::vector<std::string> phrases;
  phrases.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw DataError("graph snapshot truncated in node table");
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.substr(0, tab) != std::to_string(i)) {
      throw DataError("graph snapshot: bad node line " + std::to_string(i));
    }
    phrases.push_back(line.substr(tab + 1));
  }
  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!std::getline(in, line)) throw DataError("graph snapshot truncated in edge list");
    std::istringstream ls(line);
    std::uint64_t u = 0, v = 0, w = 0;
    if (!(ls >> u >> v >> w)) throw DataError("graph snapshot: bad edge line " + std::to_string(i));
    edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v), static_cast<std::uint32_t>(w)});
  }
  return CorefGraph::from_parts(std::move(phrases), std::move(edges));
}

void save_snapshot(const CorefGraph& g, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write graph snapshot " + path.string());
  write_snapshot(g, out);
}

CorefGraph load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read graph snapshot " + path.string());
  return read_snapshot(in);
}

}  // namespace corefonto
