#include "corefonto/centrality.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include "corefonto/error.hpp"
#include "corefonto/random.hpp"

namespace corefonto {
namespace {

// Sources per reduction chunk. Fixed so that the floating-point summation
// order does not depend on the number of worker threads.
constexpr std::size_t kChunkSize = 32;

class BrandesWorkspace {
 public:
  explicit BrandesWorkspace(std::size_t n)
      : distance_(n, -1), sigma_(n, 0.0), delta_(n, 0.0) {
    order_.reserve(n);
  }

  // Adds the dependencies of `source` on every other node into `acc`.
  void accumulate(const CorefGraph& g, NodeId source, std::vector<double>& acc) {
    order_.clear();
    distance_[source] = 0;
    sigma_[source] = 1.0;
    order_.push_back(source);
    for (std::size_t head = 0; head < order_.size(); ++head) {
      const NodeId v = order_[head];
      const std::int64_t next = distance_[v] + 1;
      for (const Neighbor& nb : g.neighbors(v)) {
        const NodeId w = nb.node;
        if (distance_[w] < 0) {
          distance_[w] = next;
          order_.push_back(w);
        }
        if (distance_[w] == next) sigma_[w] += sigma_[v];
      }
    }
    for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
      const NodeId w = *it;
      const std::int64_t prev = distance_[w] - 1;
      const double coeff = (1.0 + delta_[w]) / sigma_[w];
      for (const Neighbor& nb : g.neighbors(w)) {
        const NodeId v = nb.node;
        if (distance_[v] == prev) delta_[v] += sigma_[v] * coeff;
      }
      if (w != source) acc[w] += delta_[w];
    }
    for (NodeId v : order_) {
      distance_[v] = -1;
      sigma_[v] = 0.0;
      delta_[v] = 0.0;
    }
  }

 private:
  std::vector<std::int64_t> distance_;
  std::vector<double> sigma_;
  std::vector<double> delta_;
  std::vector<NodeId> order_;
};

std::vector<double> accumulate_chunk(const CorefGraph& g, std::span<const NodeId> sources,
                                     BrandesWorkspace& ws) {
  std::vector<double> partial(g.node_count(), 0.0);
  for (NodeId s : sources) ws.accumulate(g, s, partial);
  return partial;
}

// Sums per-source dependencies chunk by chunk, merging chunks strictly in
// order. Workers may run ahead of the merge by a bounded window.
std::vector<double> accumulate_sources(const CorefGraph& g, std::span<const NodeId> sources,
                                       unsigned threads) {
  const std::size_t n = g.node_count();
  std::vector<double> total(n, 0.0);
  const std::size_t chunks = (sources.size() + kChunkSize - 1) / kChunkSize;
  auto chunk_span = [&](std::size_t c) {
    const std::size_t begin = c * kChunkSize;
    const std::size_t end = std::min(sources.size(), begin + kChunkSize);
    return sources.subspan(begin, end - begin);
  };
  auto merge = [&](const std::vector<double>& partial) {
    for (std::size_t i = 0; i < n; ++i) total[i] += partial[i];
  };

  if (threads <= 1 || chunks <= 1) {
    BrandesWorkspace ws(n);
    for (std::size_t c = 0; c < chunks; ++c) merge(accumulate_chunk(g, chunk_span(c), ws));
    return total;
  }

  const std::size_t window = 2 * static_cast<std::size_t>(threads);
  std::mutex mu;
  std::condition_variable cv;
  std::size_t next_chunk = 0;
  std::size_t merged = 0;
  std::map<std::size_t, std::vector<double>> ready;

  auto worker = [&] {
    BrandesWorkspace ws(n);
    for (;;) {
      std::size_t c = 0;
      {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return next_chunk >= chunks || next_chunk < merged + window; });
        if (next_chunk >= chunks) return;
        c = next_chunk++;
      }
      auto partial = accumulate_chunk(g, chunk_span(c), ws);
      {
        std::lock_guard lock(mu);
        ready.emplace(c, std::move(partial));
      }
      cv.notify_all();
    }
  };

  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);

  for (std::size_t c = 0; c < chunks; ++c) {
    std::vector<double> partial;
    {
      std::unique_lock lock(mu);
      cv.wait(lock, [&] { return ready.contains(c); });
      partial = std::move(ready[c]);
      ready.erase(c);
    }
    merge(partial);
    {
      std::lock_guard lock(mu);
      ++merged;
    }
    cv.notify_all();
  }
  return total;
}

bool scores_tied(double a, double b) {
  return std::abs(a - b) <= kScoreTieTolerance * std::max(std::abs(a), std::abs(b));
}

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> rank(x.size());
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[idx[k]] = r;
    i = j + 1;
  }
  return rank;
}

}  // namespace

PathCounts single_source_paths(const CorefGraph& g, NodeId source) {
  const std::size_t n = g.node_count();
  PathCounts pc;
  pc.source = source;
  pc.sigma.assign(n, 0.0);
  pc.distance.assign(n, -1);
  pc.predecessors.assign(n, {});
  pc.delta.assign(n, 0.0);

  std::vector<NodeId> order{source};
  pc.sigma[source] = 1.0;
  pc.distance[source] = 0;
  for (std::size_t head = 0; head < order.size(); ++head) {
    const NodeId v = order[head];
    for (const Neighbor& nb : g.neighbors(v)) {
      const NodeId w = nb.node;
      if (pc.distance[w] < 0) {
        pc.distance[w] = pc.distance[v] + 1;
        order.push_back(w);
      }
      if (pc.distance[w] == pc.distance[v] + 1) {
        pc.sigma[w] += pc.sigma[v];
        pc.predecessors[w].push_back(v);
      }
    }
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodeId w = *it;
    for (NodeId v : pc.predecessors[w]) {
      pc.delta[v] += pc.sigma[v] / pc.sigma[w] * (1.0 + pc.delta[w]);
    }
  }
  pc.delta[source] = 0.0;
  return pc;
}

CentralityScores exact_betweenness(const CorefGraph& g, unsigned threads) {
  std::vector<NodeId> sources(g.node_count());
  std::iota(sources.begin(), sources.end(), NodeId{0});
  auto total = accumulate_sources(g, sources, threads);
  for (double& x : total) x *= 0.5;
  return {std::move(total)};
}

std::vector<NodeId> sample_pivots(std::size_t node_count, const PivotConfig& cfg) {
  if (cfg.k == 0) throw UsageError("pivot count must be at least 1");
  if (cfg.k > node_count) {
    throw UsageError("pivot count " + std::to_string(cfg.k) + " exceeds node count " +
                     std::to_string(node_count));
  }
  std::vector<NodeId> pool(node_count);
  std::iota(pool.begin(), pool.end(), NodeId{0});
  Rng rng(cfg.seed);
  for (std::size_t i = 0; i < cfg.k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(node_count - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(cfg.k);
  return pool;
}

CentralityScores approx_betweenness(const CorefGraph& g, const PivotConfig& cfg,
                                    unsigned threads) {
  const auto pivots = sample_pivots(g.node_count(), cfg);
  auto total = accumulate_sources(g, pivots, threads);
  const double scale =
      0.5 * static_cast<double>(g.node_count()) / static_cast<double>(cfg.k);
  for (double& x : total) x *= scale;
  return {std::move(total)};
}

std::optional<std::string> pivot_warning(std::size_t node_count, const PivotConfig& cfg) {
  if (node_count < 2) return std::nullopt;
  const double bound = std::log2(static_cast<double>(node_count));
  if (static_cast<double>(cfg.k) > bound) return std::nullopt;
  std::ostringstream msg;
  msg << "pivot count " << cfg.k << " is not above log2(|V|) = " << bound
      << "; approximate ordering may be unreliable";
  return msg.str();
}

std::vector<EdgeOrder> order_edges(const CorefGraph& g, const CentralityScores& scores) {
  if (scores.size() != g.node_count()) {
    throw InvariantError("centrality scores do not cover every graph node");
  }
  std::vector<EdgeOrder> out;
  out.reserve(g.edge_count());
  for (const Edge& e : g.edges()) {
    const double su = scores[e.u];
    const double sv = scores[e.v];
    if (su == 0.0 && sv == 0.0) {
      out.push_back({EdgeOrdering::BothZero, e.u, e.v});
    } else if (scores_tied(su, sv)) {
      out.push_back({EdgeOrdering::TieNonZero, e.u, e.v});
    } else if (su > sv) {
      out.push_back({EdgeOrdering::Directed, e.u, e.v});
    } else {
      out.push_back({EdgeOrdering::Directed, e.v, e.u});
    }
  }
  return out;
}

double ordering_conflict_rate(const CorefGraph& g, std::span<const CentralityScores> runs) {
  if (runs.empty() || g.edge_count() == 0) return 0.0;
  std::vector<std::vector<EdgeOrder>> orders;
  orders.reserve(runs.size());
  for (const auto& r : runs) orders.push_back(order_edges(g, r));
  std::size_t conflicted = 0;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    for (std::size_t r = 1; r < orders.size(); ++r) {
      if (!(orders[r][e] == orders[0][e])) {
        ++conflicted;
        break;
      }
    }
  }
  return static_cast<double>(conflicted) / static_cast<double>(g.edge_count());
}

double spearman_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw UsageError("spearman_correlation: length mismatch");
  const std::size_t n = a.size();
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  const double mean = 0.5 * static_cast<double>(n + 1);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = ra[i] - mean;
    const double db = rb[i] - mean;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sab / std::sqrt(saa * sbb);
}

void write_scores(const CentralityScores& scores, std::ostream& out) {
  char buf[64];
  for (std::size_t v = 0; v < scores.size(); ++v) {
    std::snprintf(buf, sizeof buf, "%.17g", scores.values[v]);
    out << v << ' ' << buf << '\n';
  }
}

CentralityScores read_scores(std::istream& in) {
  CentralityScores scores;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::istringstream ls(line);
    std::size_t id = 0;
    std::string value;
    if (!(ls >> id >> value) || id != scores.values.size()) {
      throw DataError("scores line " + std::to_string(line_no) + ": expected '<id> <score>' in id order");
    }
    double x = 0.0;
    try {
      x = std::stod(value);
    } catch (const std::exception&) {
      throw DataError("scores line " + std::to_string(line_no) + ": bad score");
    }
    if (!std::isfinite(x) || x < 0.0) {
      throw DataError("scores line " + std::to_string(line_no) + ": score must be finite and >= 0");
    }
    scores.values.push_back(x);
  }
  return scores;
}

}  // namespace corefonto
