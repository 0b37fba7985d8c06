#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "corefonto/coref_graph.hpp"

namespace corefonto {

// Betweenness per node. Scores sum over unordered pairs {s, t}: the ordered
// sum halved. Shortest paths are hop counts; edge weights are ignored.
struct CentralityScores {
  std::vector<double> values;

  double operator[](NodeId v) const { return values[v]; }
  std::size_t size() const { return values.size(); }
};

struct PivotConfig {
  std::uint32_t k = 500;
  std::uint64_t seed = 0;
};

// Single-source shortest-path state from one Brandes sweep.
struct PathCounts {
  NodeId source = 0;
  std::vector<double> sigma;               // shortest-path counts from source
  std::vector<std::int64_t> distance;      // -1 when unreachable
  std::vector<std::vector<NodeId>> predecessors;
  std::vector<double> delta;               // dependency of source on each node
};

PathCounts single_source_paths(const CorefGraph& g, NodeId source);

// Brandes over every source. `threads` only affects speed; the result is
// bit-identical for any thread count.
CentralityScores exact_betweenness(const CorefGraph& g, unsigned threads = 1);

// Uniform sample of k distinct pivots, without replacement, returned in draw
// order. Throws UsageError when k is 0 or exceeds the node count.
std::vector<NodeId> sample_pivots(std::size_t node_count, const PivotConfig& cfg);

// Pivot estimator: dependencies accumulated from k sampled sources, scaled by
// n / k. Deterministic for a fixed (k, seed) and independent of `threads`.
CentralityScores approx_betweenness(const CorefGraph& g, const PivotConfig& cfg,
                                    unsigned threads = 1);

// Warning text when k <= log2(node count), the regime where the pivot
// estimator is not expected to order nodes reliably.
std::optional<std::string> pivot_warning(std::size_t node_count, const PivotConfig& cfg);

enum class EdgeOrdering : std::uint8_t { Directed, TieNonZero, BothZero };

struct EdgeOrder {
  EdgeOrdering kind = EdgeOrdering::BothZero;
  NodeId high = kNoNode;  // Directed: higher-scored endpoint
  NodeId low = kNoNode;

  bool operator==(const EdgeOrder&) const = default;
};

// Relative tolerance under which two nonzero scores count as tied.
inline constexpr double kScoreTieTolerance = 1e-9;

std::vector<EdgeOrder> order_edges(const CorefGraph& g, const CentralityScores& scores);

// Fraction of edges whose ordering is not identical across all runs.
double ordering_conflict_rate(const CorefGraph& g, std::span<const CentralityScores> runs);

// Spearman rank correlation with average ranks for ties.
double spearman_correlation(std::span<const double> a, std::span<const double> b);

// Scores file: one "node_id score" line per node, scores printed with 17
// significant digits so they reload exactly.
void write_scores(const CentralityScores& scores, std::ostream& out);
CentralityScores read_scores(std::istream& in);

}  // namespace corefonto
