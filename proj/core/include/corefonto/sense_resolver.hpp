#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "corefonto/labels.hpp"
#include "corefonto/louvain.hpp"

namespace corefonto {

// Phrase vectors of one fixed dimension, compared by cosine similarity.
//
// Text format: the first line holds the dimension d, then one line per phrase:
// "<phrase>\t<v1> <v2> ... <vd>".
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dim = 0) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return rows_.size(); }

  // Throws DataError on a dimension mismatch, a non-finite value or a
  // duplicate phrase.
  void add(std::string phrase, std::vector<double> vec);
  const std::vector<double>* find(std::string_view phrase) const;

  void write(std::ostream& out) const;
  static EmbeddingTable read(std::istream& in);
  void save(const std::filesystem::path& path) const;
  static EmbeddingTable load(const std::filesystem::path& path);

 private:
  std::size_t dim_;
  std::vector<std::string> order_;
  std::unordered_map<std::string, std::vector<double>> rows_;
};

double cosine_similarity(std::span<const double> a, std::span<const double> b);

inline constexpr std::size_t kDefaultKnn = 5;

// A name node with hierarchy children. Local index 0 of the subgraph is n;
// child i sits at local index i + 1.
struct SenseSplitTask {
  NodeId n = kNoNode;
  std::vector<NodeId> children;
  std::size_t knn = kDefaultKnn;
};

// One task per name node with at least one outgoing Hierarchy edge, in
// ascending node order.
std::vector<SenseSplitTask> select_tasks(const LabeledGraph& labels, std::size_t knn = kDefaultKnn);

// Each node links to its knn most similar nodes (knn capped at |V| - 1, ties
// to the lower local index); the relation is symmetrized. Edges have weight 1
// unless `weighted`, in which case they carry (1 + cosine) / 2. Returns
// nullopt when a member has no embedding.
std::optional<SimpleGraph> build_knn_subgraph(const LabeledGraph& labels,
                                              const SenseSplitTask& task,
                                              const EmbeddingTable& emb, bool weighted = false);

struct SplitOutcome {
  std::size_t communities = 0;
  std::vector<NodeId> new_nodes;     // split copies of n, one per extra community
  std::size_t relabeled_identity = 0;
  std::size_t moved_edges = 0;
  std::size_t duplicated_edges = 0;  // parent edges copied onto several split nodes
};

// Applies one task's communities (indexed by local subgraph index).
//
// One community: every n-child edge becomes Identity. Several communities:
// the community holding n keeps the original node, every other community
// gets a new copy of n. Each n-child edge moves to its community's copy and
// becomes Identity. A parent edge p -> n goes to the copies whose children
// also have parent p; with no such copy it stays on the original node.
SplitOutcome apply_split(LabeledGraph& labels, const SenseSplitTask& task,
                         std::span<const std::uint32_t> communities);

struct SenseOptions {
  std::size_t knn = kDefaultKnn;
  bool weighted = false;
};

struct SenseReport {
  std::size_t tasks = 0;
  std::size_t merged = 0;
  std::size_t split = 0;
  std::size_t skipped_missing_embedding = 0;
  std::size_t new_nodes = 0;
  std::size_t relabeled_identity = 0;
  std::size_t duplicated_edges = 0;
  std::vector<std::string> warnings;
};

// Runs every task in ascending node order. The worklist grows with the graph,
// so copies created by a split are examined as well; children are recomputed
// when a task comes up.
SenseReport resolve_senses(LabeledGraph& labels, const EmbeddingTable& emb,
                           const SenseOptions& options = {});

}  // namespace corefonto
