#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "corefonto/centrality.hpp"
#include "corefonto/chain_ingest.hpp"
#include "corefonto/coref_graph.hpp"
#include "corefonto/labels.hpp"

namespace corefonto {

inline constexpr double kDefaultNameThreshold = 0.9;

// is_name per graph node from the phrase table's casing counts. Phrases
// missing from the table are nouns.
std::vector<bool> name_tags(const CorefGraph& g, const PhraseTable& phrases,
                            double threshold = kDefaultNameThreshold);

struct ClassifyStats {
  std::size_t zero_bc_nodes = 0;
  std::size_t identity = 0;
  std::size_t directed = 0;
  std::size_t ties_broken = 0;
  std::size_t name_reversals = 0;
};

// Both-zero edges become Identity; every other edge becomes Hierarchy from the
// higher-scored endpoint. Nonzero ties go to the endpoint with the larger
// weighted degree, then to the lexicographically smaller phrase.
LabeledGraph label_identity_zero_bc(const CorefGraph& g, const CentralityScores& scores,
                                    const std::vector<bool>& names,
                                    ClassifyStats* stats = nullptr);

// Reverses Hierarchy edges that point from a name to a noun. Returns the
// number of reversed edges.
std::size_t correct_name_direction(LabeledGraph& labels);

// PMI with joint and marginal probabilities sharing the normalizer `total`.
// Throws DataError when total or a marginal count is not positive, or when the
// pair count is negative.
double compute_pmi(double pair_count, double count_i, double count_j, double total);

// count(phrase) is the phrase's weighted degree in the sealed graph and the
// pair count is the edge weight.
struct PmiStats {
  std::vector<double> count;
  double total = 0.0;

  static PmiStats from_graph(const CorefGraph& g);
  double pmi(const CorefGraph& g, EdgeId e) const;
};

struct NoiseFilterStats {
  std::size_t relabeled = 0;
  std::size_t from_identity = 0;
  std::size_t from_hierarchy = 0;
  std::size_t already_noise = 0;
};

// Relabels every edge whose PMI is strictly below `threshold` as Noise. Edges
// are looked up through their origin id, so split copies share the original's
// PMI.
NoiseFilterStats filter_noise(LabeledGraph& labels, const CorefGraph& g, const PmiStats& stats,
                              double threshold = 0.0);

struct LabelCounts {
  std::size_t identity = 0;
  std::size_t hierarchy = 0;
  std::size_t noise = 0;

  std::size_t total() const { return identity + hierarchy + noise; }
};

// Throws InvariantError if any edge is still unlabeled.
LabelCounts summarize(const LabeledGraph& labels);

struct CycleRepair {
  enum class Action : std::uint8_t { Reversed, Demoted };
  Action action = Action::Reversed;
  std::vector<std::string> cycle;  // one phrase per concept on the cycle
  std::string from;                // the arc that was changed
  std::string to;
  std::size_t edges = 0;
};

// Makes the Hierarchy subgraph acyclic at the level of Identity components.
// A two-concept cycle keeps its heavier direction. Longer cycles reverse their
// lightest arc that has not been reversed before; a cycle whose arcs were all
// reversed already has its lightest arc demoted to Noise.
std::vector<CycleRepair> repair_cycles(LabeledGraph& labels);

struct FinalizeReport {
  LabelCounts counts;
  std::vector<CycleRepair> repairs;
};

FinalizeReport finalize(LabeledGraph& labels);

}  // namespace corefonto
