#include "corefonto/louvain.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "corefonto/error.hpp"

namespace corefonto {
namespace {

// Gains closer than this are treated as equal when choosing a move.
constexpr double kGainEpsilon = 1e-12;

struct Adjacency {
  std::vector<std::vector<std::pair<std::uint32_t, double>>> out;  // excluding loops
  std::vector<double> loop;                                        // loop weight
  std::vector<double> degree;
  double two_m = 0.0;
};

Adjacency build_adjacency(const SimpleGraph& g) {
  Adjacency adj;
  adj.out.assign(g.n, {});
  adj.loop.assign(g.n, 0.0);
  adj.degree.assign(g.n, 0.0);
  for (const auto& e : g.edges) {
    if (e.a >= g.n || e.b >= g.n) throw InvariantError("louvain edge endpoint out of range");
    if (e.weight < 0.0) throw InvariantError("louvain edge weight is negative");
    if (e.a == e.b) {
      adj.loop[e.a] += e.weight;
      adj.degree[e.a] += 2.0 * e.weight;
    } else {
      adj.out[e.a].push_back({e.b, e.weight});
      adj.out[e.b].push_back({e.a, e.weight});
      adj.degree[e.a] += e.weight;
      adj.degree[e.b] += e.weight;
    }
    adj.two_m += 2.0 * e.weight;
  }
  return adj;
}

// One round of local moves. Returns true if any node changed community.
bool local_moves(const Adjacency& adj, std::vector<std::uint32_t>& comm) {
  const std::size_t n = adj.out.size();
  std::vector<double> tot(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) tot[comm[i]] += adj.degree[i];

  bool moved_any = false;
  for (;;) {
    bool moved = false;
    for (std::uint32_t i = 0; i < n; ++i) {
      const std::uint32_t own = comm[i];
      const double ki = adj.degree[i];
      std::map<std::uint32_t, double> links;  // community -> weight from i
      for (const auto& [j, w] : adj.out[i]) links[comm[j]] += w;
      tot[own] -= ki;

      auto gain = [&](std::uint32_t c) {
        auto it = links.find(c);
        const double kin = it == links.end() ? 0.0 : it->second;
        return kin - tot[c] * ki / adj.two_m;
      };
      const double stay = gain(own);
      std::uint32_t best = own;
      double best_gain = stay;
      // links is ordered by community id, so a later candidate has to beat
      // the current best strictly.
      for (const auto& [c, w] : links) {
        if (c == own) continue;
        const double gc = gain(c);
        if (gc > stay + kGainEpsilon && (best == own || gc > best_gain + kGainEpsilon)) {
          best = c;
          best_gain = gc;
        }
      }
      tot[best] += ki;
      if (best != own) {
        comm[i] = best;
        moved = true;
        moved_any = true;
      }
    }
    if (!moved) break;
  }
  return moved_any;
}

std::vector<std::uint32_t> renumber(std::vector<std::uint32_t> comm, std::size_t* count) {
  std::map<std::uint32_t, std::uint32_t> ids;
  for (auto& c : comm) {
    auto [it, inserted] = ids.try_emplace(c, static_cast<std::uint32_t>(ids.size()));
    c = it->second;
  }
  *count = ids.size();
  return comm;
}

}  // namespace

double modularity(const SimpleGraph& g, std::span<const std::uint32_t> community) {
  if (community.size() != g.n) throw InvariantError("partition size does not match graph");
  const Adjacency adj = build_adjacency(g);
  if (adj.two_m == 0.0) return 0.0;
  const std::size_t k = g.n == 0 ? 0 : *std::max_element(community.begin(), community.end()) + 1;
  std::vector<double> inner(k, 0.0), tot(k, 0.0);
  for (const auto& e : g.edges) {
    if (community[e.a] == community[e.b]) inner[community[e.a]] += 2.0 * e.weight;
  }
  for (std::size_t i = 0; i < g.n; ++i) tot[community[i]] += adj.degree[i];
  double q = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    q += inner[c] / adj.two_m - (tot[c] / adj.two_m) * (tot[c] / adj.two_m);
  }
  return q;
}

LouvainResult louvain(const SimpleGraph& g) {
  LouvainResult result;
  result.community.resize(g.n);
  std::iota(result.community.begin(), result.community.end(), 0U);
  result.count = g.n;
  if (g.n == 0) return result;
  result.pass_modularity.push_back(modularity(g, result.community));

  SimpleGraph level = g;
  for (;;) {
    const Adjacency adj = build_adjacency(level);
    if (adj.two_m == 0.0) break;
    std::vector<std::uint32_t> comm(level.n);
    std::iota(comm.begin(), comm.end(), 0U);
    if (!local_moves(adj, comm)) break;

    std::size_t count = 0;
    comm = renumber(std::move(comm), &count);
    for (auto& c : result.community) c = comm[c];
    result.count = count;
    result.pass_modularity.push_back(modularity(g, result.community));

    // Aggregate communities into super-nodes.
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> merged;
    for (const auto& e : level.edges) {
      auto a = comm[e.a], b = comm[e.b];
      if (a > b) std::swap(a, b);
      merged[{a, b}] += e.weight;
    }
    SimpleGraph next;
    next.n = count;
    for (const auto& [ab, w] : merged) next.edges.push_back({ab.first, ab.second, w});
    level = std::move(next);
    if (level.n == 1) break;
  }
  std::size_t count = 0;
  result.community = renumber(std::move(result.community), &count);
  result.count = count;
  return result;
}

}  // namespace corefonto
