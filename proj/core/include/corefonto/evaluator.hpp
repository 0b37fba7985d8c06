#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "corefonto/chain_ingest.hpp"
#include "corefonto/ontology.hpp"

namespace corefonto {

// Transitive closure of a DAG over nodes 0..n-1, one bitset row per node.
class Reachability {
 public:
  Reachability() = default;
  // Throws DataError when the edges contain a cycle.
  Reachability(std::size_t n, std::span<const std::pair<std::uint32_t, std::uint32_t>> edges);

  // True when a directed path of length >= 1 leads from u to v.
  bool reaches(std::uint32_t u, std::uint32_t v) const {
    return (bits_[u * words_ + v / 64] >> (v % 64)) & 1ULL;
  }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

struct ReferenceOntology {
  std::vector<std::string> strings;                              // sorted, unique
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;   // (parent, child) into strings
  std::vector<std::vector<std::uint32_t>> alias_groups;          // disjoint
  Reachability reach;

  std::optional<std::uint32_t> find(std::string_view s) const;
};

// Normalizes every string with the ingest rules, drops strings that do not
// survive and edges that collapse onto one string, and indexes the result.
// Throws DataError for a cyclic hierarchy or overlapping alias groups.
ReferenceOntology make_reference(std::span<const std::pair<std::string, std::string>> child_parent,
                                 std::span<const std::vector<std::string>> alias_groups,
                                 const StopLists& lists,
                                 std::vector<std::string>* warnings = nullptr);

// Hierarchy: "child\tparent" per line. Aliases: one tab-separated group per
// line; the path may be empty.
ReferenceOntology load_reference(const std::filesystem::path& hierarchy,
                                 const std::filesystem::path& aliases, const StopLists& lists,
                                 std::vector<std::string>* warnings = nullptr);

// Alias strings present on both sides, sorted.
std::vector<std::string> shared_vocabulary(const Ontology& ours, const ReferenceOntology& ref);

struct HierarchyScores {
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
  std::size_t predicted = 0;
  std::size_t correct = 0;
  std::size_t reference_edges = 0;
  std::size_t recalled = 0;
};

// Predicted edges are the alias pairs of our concept edges with both strings
// shared. One is correct when the reference has a path from parent to child.
// Recall covers the reference's direct edges between shared strings; one
// counts as found when our ontology has a path between concepts holding the
// two strings.
HierarchyScores hierarchy_pr(const Ontology& ours, const ReferenceOntology& ref,
                             std::span<const std::string> shared);

struct DirectionScores {
  std::optional<double> consistency;
  std::size_t eligible = 0;
  std::size_t consistent = 0;
};

// Over predicted edges whose strings are connected by a reference path in
// either direction.
DirectionScores direction_consistency(const Ontology& ours, const ReferenceOntology& ref,
                                      std::span<const std::string> shared);

// Size-weighted Shannon entropy (natural log) of the gold labels inside each
// predicted cluster.
double cluster_entropy(std::span<const std::uint32_t> predicted, std::span<const std::uint32_t> gold);
double adjusted_rand_index(std::span<const std::uint32_t> predicted,
                           std::span<const std::uint32_t> gold);

struct ClusterScores {
  std::optional<double> entropy;
  std::optional<double> ari;
  std::size_t strings = 0;
  std::size_t predicted_clusters = 0;
  std::size_t gold_clusters = 0;
};

// A string held by several of our concepts is assigned to the largest one
// (lowest index on ties). Shared strings outside every reference group form
// singleton gold clusters.
ClusterScores alias_clustering_scores(const Ontology& ours, const ReferenceOntology& ref,
                                      std::span<const std::string> shared);

struct EvalReport {
  std::size_t our_strings = 0;
  std::size_t reference_strings = 0;
  std::size_t shared_strings = 0;
  HierarchyScores hierarchy;
  DirectionScores direction;
  ClusterScores clustering;

  std::string to_json() const;
  std::string to_table() const;
};

// Throws DataError when the vocabularies are disjoint.
EvalReport evaluate(const Ontology& ours, const ReferenceOntology& ref);

}  // namespace corefonto
