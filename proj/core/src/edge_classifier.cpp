#include "corefonto/edge_classifier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <utility>

#include "corefonto/error.hpp"

namespace corefonto {

std::vector<bool> name_tags(const CorefGraph& g, const PhraseTable& phrases, double threshold) {
  std::vector<bool> names(g.node_count(), false);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    auto it = phrases.find(g.phrase(v));
    if (it != phrases.end()) names[v] = it->second.is_name(threshold);
  }
  return names;
}

LabeledGraph label_identity_zero_bc(const CorefGraph& g, const CentralityScores& scores,
                                    const std::vector<bool>& names, ClassifyStats* stats) {
  const auto orders = order_edges(g, scores);
  LabeledGraph labels = LabeledGraph::from_graph(g, names);
  ClassifyStats local;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (scores[v] == 0.0) ++local.zero_bc_nodes;
  }
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const EdgeOrder& o = orders[e];
    switch (o.kind) {
      case EdgeOrdering::BothZero:
        labels.set_identity(e);
        ++local.identity;
        break;
      case EdgeOrdering::Directed:
        labels.set_hierarchy(e, o.high, o.low);
        ++local.directed;
        break;
      case EdgeOrdering::TieNonZero: {
        NodeId a = o.high, b = o.low;
        const auto wa = g.weighted_degree(a), wb = g.weighted_degree(b);
        // Node ids follow phrase order, so the smaller id is the
        // lexicographically smaller phrase.
        if (wb > wa || (wb == wa && b < a)) std::swap(a, b);
        labels.set_hierarchy(e, a, b);
        ++local.ties_broken;
        break;
      }
    }
  }
  if (stats) *stats = local;
  return labels;
}

std::size_t correct_name_direction(LabeledGraph& labels) {
  std::size_t reversed = 0;
  for (EdgeId e = 0; e < labels.edge_count(); ++e) {
    const auto& edge = labels.edge(e);
    if (edge.kind != EdgeKind::Hierarchy) continue;
    if (labels.node(edge.parent).is_name && !labels.node(edge.child).is_name) {
      labels.set_hierarchy(e, edge.child, edge.parent);
      ++reversed;
    }
  }
  return reversed;
}

double compute_pmi(double pair_count, double count_i, double count_j, double total) {
  if (!(total > 0.0)) throw DataError("PMI needs a positive total count");
  if (!(count_i > 0.0) || !(count_j > 0.0)) throw DataError("PMI needs positive phrase counts");
  if (pair_count < 0.0) throw DataError("PMI pair count is negative");
  const double joint = pair_count / total;
  const double pi = count_i / total;
  const double pj = count_j / total;
  return std::log(joint / (pi * pj));
}

PmiStats PmiStats::from_graph(const CorefGraph& g) {
  PmiStats s;
  s.count.resize(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) {
    s.count[v] = static_cast<double>(g.weighted_degree(v));
    s.total += s.count[v];
  }
  return s;
}

double PmiStats::pmi(const CorefGraph& g, EdgeId e) const {
  const Edge& edge = g.edge(e);
  return compute_pmi(edge.weight, count[edge.u], count[edge.v], total);
}

NoiseFilterStats filter_noise(LabeledGraph& labels, const CorefGraph& g, const PmiStats& stats,
                              double threshold) {
  NoiseFilterStats out;
  for (EdgeId e = 0; e < labels.edge_count(); ++e) {
    const auto& edge = labels.edge(e);
    if (edge.origin >= g.edge_count()) {
      throw InvariantError("labeled edge refers to an edge missing from the graph");
    }
    if (!(stats.pmi(g, edge.origin) < threshold)) continue;
    switch (edge.kind) {
      case EdgeKind::Noise: ++out.already_noise; continue;
      case EdgeKind::Identity: ++out.from_identity; break;
      case EdgeKind::Hierarchy: ++out.from_hierarchy; break;
      case EdgeKind::Unlabeled: break;
    }
    labels.set_noise(e);
    ++out.relabeled;
  }
  return out;
}

LabelCounts summarize(const LabeledGraph& labels) {
  LabelCounts c;
  for (EdgeId e = 0; e < labels.edge_count(); ++e) {
    switch (labels.edge(e).kind) {
      case EdgeKind::Identity: ++c.identity; break;
      case EdgeKind::Hierarchy: ++c.hierarchy; break;
      case EdgeKind::Noise: ++c.noise; break;
      case EdgeKind::Unlabeled:
        throw InvariantError("edge " + std::to_string(e) + " (" +
                             labels.node(labels.edge(e).u).phrase + " - " +
                             labels.node(labels.edge(e).v).phrase + ") is unlabeled");
    }
  }
  return c;
}

namespace {

using Arc = std::pair<std::uint32_t, std::uint32_t>;

struct ArcInfo {
  std::uint64_t weight = 0;
  std::vector<EdgeId> edges;
};

std::map<Arc, ArcInfo> concept_arcs(const LabeledGraph& labels, const IdentityComponents& comps) {
  std::map<Arc, ArcInfo> arcs;
  for (EdgeId e = 0; e < labels.edge_count(); ++e) {
    const auto& edge = labels.edge(e);
    if (edge.kind != EdgeKind::Hierarchy) continue;
    const auto a = comps.of_node[edge.parent];
    const auto b = comps.of_node[edge.child];
    if (a == b) continue;
    auto& info = arcs[{a, b}];
    info.weight += edge.weight;
    info.edges.push_back(e);
  }
  return arcs;
}

// Some directed cycle of the concept graph as a list of concepts, or empty.
std::vector<std::uint32_t> find_cycle(std::size_t n, const std::map<Arc, ArcInfo>& arcs) {
  std::vector<std::vector<std::uint32_t>> out(n);
  for (const auto& [arc, info] : arcs) out[arc.first].push_back(arc.second);
  enum : std::uint8_t { kWhite, kGrey, kBlack };
  std::vector<std::uint8_t> color(n, kWhite);
  std::vector<std::uint32_t> parent(n, UINT32_MAX);
  for (std::uint32_t start = 0; start < n; ++start) {
    if (color[start] != kWhite) continue;
    std::vector<std::pair<std::uint32_t, std::size_t>> stack{{start, 0}};
    color[start] = kGrey;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next == out[v].size()) {
        color[v] = kBlack;
        stack.pop_back();
        continue;
      }
      const std::uint32_t w = out[v][next++];
      if (color[w] == kGrey) {
        std::vector<std::uint32_t> cycle{w};
        for (std::uint32_t x = v; x != w; x = parent[x]) cycle.push_back(x);
        std::reverse(cycle.begin() + 1, cycle.end());
        return cycle;
      }
      if (color[w] == kWhite) {
        color[w] = kGrey;
        parent[w] = v;
        stack.push_back({w, 0});
      }
    }
  }
  return {};
}

std::string concept_label(const LabeledGraph& labels, const IdentityComponents& comps,
                          std::uint32_t c) {
  return labels.node(comps.members[c].front()).phrase;
}

void reverse_arc(LabeledGraph& labels, const ArcInfo& info) {
  for (EdgeId e : info.edges) {
    const auto& edge = labels.edge(e);
    labels.set_hierarchy(e, edge.child, edge.parent);
  }
}

}  // namespace

std::vector<CycleRepair> repair_cycles(LabeledGraph& labels) {
  std::vector<CycleRepair> repairs;
  std::set<Arc> flipped;  // unordered concept pairs, stored (min, max)
  auto key = [](std::uint32_t a, std::uint32_t b) { return Arc{std::min(a, b), std::max(a, b)}; };

  for (;;) {
    const auto comps = identity_components(labels);
    const auto arcs = concept_arcs(labels, comps);

    bool changed = false;
    for (const auto& [arc, info] : arcs) {
      const auto [a, b] = arc;
      if (a > b) continue;
      auto back = arcs.find({b, a});
      if (back == arcs.end()) continue;
      // Keep the heavier direction; on equal weight keep a -> b.
      const bool drop_forward = info.weight < back->second.weight;
      const ArcInfo& lighter = drop_forward ? info : back->second;
      const auto from = drop_forward ? a : b;
      const auto to = drop_forward ? b : a;
      CycleRepair r;
      r.cycle = {concept_label(labels, comps, a), concept_label(labels, comps, b)};
      r.from = concept_label(labels, comps, from);
      r.to = concept_label(labels, comps, to);
      r.edges = lighter.edges.size();
      if (flipped.insert(key(a, b)).second) {
        reverse_arc(labels, lighter);
        r.action = CycleRepair::Action::Reversed;
      } else {
        for (EdgeId e : lighter.edges) labels.set_noise(e);
        r.action = CycleRepair::Action::Demoted;
      }
      repairs.push_back(std::move(r));
      changed = true;
    }
    if (changed) continue;

    const auto cycle = find_cycle(comps.members.size(), arcs);
    if (cycle.empty()) break;

    std::size_t pick = cycle.size();
    std::size_t lightest = 0;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      const Arc arc{cycle[i], cycle[(i + 1) % cycle.size()]};
      const auto w = arcs.at(arc).weight;
      if (w < arcs.at({cycle[lightest], cycle[(lightest + 1) % cycle.size()]}).weight) {
        lightest = i;
      }
      if (flipped.contains(key(arc.first, arc.second))) continue;
      if (pick == cycle.size() ||
          w < arcs.at({cycle[pick], cycle[(pick + 1) % cycle.size()]}).weight) {
        pick = i;
      }
    }
    CycleRepair r;
    for (auto c : cycle) r.cycle.push_back(concept_label(labels, comps, c));
    const bool demote = pick == cycle.size();
    const std::size_t at = demote ? lightest : pick;
    const Arc arc{cycle[at], cycle[(at + 1) % cycle.size()]};
    const ArcInfo& info = arcs.at(arc);
    r.from = concept_label(labels, comps, arc.first);
    r.to = concept_label(labels, comps, arc.second);
    r.edges = info.edges.size();
    if (demote) {
      for (EdgeId e : info.edges) labels.set_noise(e);
      r.action = CycleRepair::Action::Demoted;
    } else {
      reverse_arc(labels, info);
      flipped.insert(key(arc.first, arc.second));
      r.action = CycleRepair::Action::Reversed;
    }
    repairs.push_back(std::move(r));
  }
  return repairs;
}

FinalizeReport finalize(LabeledGraph& labels) {
  FinalizeReport report;
  report.counts = summarize(labels);
  report.repairs = repair_cycles(labels);
  report.counts = summarize(labels);
  return report;
}

}  // namespace corefonto
