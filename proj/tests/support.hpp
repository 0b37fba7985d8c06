#pragma once

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "corefonto/coref_graph.hpp"
#include "corefonto/random.hpp"

namespace corefonto::testing {

// Node i is named "n000007" and so on, so ids follow the label order.
inline std::string node_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "n%06zu", i);
  return buf;
}

inline CorefGraph graph_from_pairs(std::size_t n,
                                   const std::vector<std::pair<NodeId, NodeId>>& pairs,
                                   std::uint32_t weight = 1) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(node_name(i));
  std::vector<Edge> edges;
  for (auto [a, b] : pairs) {
    if (a > b) std::swap(a, b);
    edges.push_back({a, b, weight});
  }
  std::sort(edges.begin(), edges.end(),
            [](const Edge& x, const Edge& y) { return std::pair(x.u, x.v) < std::pair(y.u, y.v); });
  return CorefGraph::from_parts(std::move(names), std::move(edges));
}

// Erdos-Renyi graph with independent edge probability p.
inline CorefGraph random_graph(Rng& rng, std::size_t n, double p) {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = a + 1; b < n; ++b) {
      if (rng.chance(p)) pairs.emplace_back(a, b);
    }
  }
  return graph_from_pairs(n, pairs);
}

constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max() / 4;

struct AllPairsPaths {
  std::vector<std::vector<std::uint32_t>> distance;  // kUnreachable when disconnected
  std::vector<std::vector<std::uint64_t>> sigma;     // number of shortest paths
};

// All-pairs hop distances by Floyd-Warshall, shortest-path counts by dynamic
// programming over distance layers, in exact integers.
inline AllPairsPaths brute_force_paths(const CorefGraph& g) {
  const std::size_t n = g.node_count();
  AllPairsPaths p;
  auto& d = p.distance;
  d.assign(n, std::vector<std::uint32_t>(n, kUnreachable));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& e : g.edges()) d[e.u][e.v] = d[e.v][e.u] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];

  p.sigma.assign(n, std::vector<std::uint64_t>(n, 0));
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<std::size_t> order;
    for (std::size_t t = 0; t < n; ++t)
      if (d[s][t] < kUnreachable) order.push_back(t);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return d[s][a] < d[s][b]; });
    p.sigma[s][s] = 1;
    for (auto t : order) {
      if (t == s) continue;
      for (const auto& nb : g.neighbors(static_cast<NodeId>(t))) {
        if (d[s][nb.node] + 1 == d[s][t]) p.sigma[s][t] += p.sigma[s][nb.node];
      }
    }
  }
  return p;
}

// Betweenness straight from its definition: sigma_st(v) = sigma_sv * sigma_vt
// whenever v lies on a shortest s-t path, summed over unordered pairs.
inline std::vector<double> brute_force_betweenness(const CorefGraph& g) {
  const std::size_t n = g.node_count();
  const auto [d, sigma] = brute_force_paths(g);
  std::vector<double> bc(n, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = s + 1; t < n; ++t) {
      if (d[s][t] >= kUnreachable) continue;
      for (std::size_t v = 0; v < n; ++v) {
        if (v == s || v == t) continue;
        if (d[s][v] + d[v][t] == d[s][t]) {
          bc[v] += static_cast<double>(sigma[s][v] * sigma[v][t]) /
                   static_cast<double>(sigma[s][t]);
        }
      }
    }
  }
  return bc;
}

inline bool close_relative(double a, double b, double tol) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= tol * scale;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("corefonto-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace corefonto::testing
