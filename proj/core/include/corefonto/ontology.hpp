#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "corefonto/labels.hpp"

namespace corefonto {

struct Concept {
  std::string id;
  std::vector<std::string> aliases;  // sorted, unique, non-empty

  bool operator==(const Concept&) const = default;
};

// Concept DAG. An edge (parent, child) indexes into `concepts` and says the
// child is more specific. Canonical form: concepts sorted by id, edges sorted
// and unique.
struct Ontology {
  std::vector<Concept> concepts;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;

  bool operator==(const Ontology&) const = default;
};

// Content-derived id: "c" followed by the FNV-1a hash of the sorted aliases.
std::string concept_id(const std::vector<std::string>& sorted_aliases);

// Identity components of the labeled graph with their alias sets.
struct ConceptAssignment {
  IdentityComponents components;
  std::vector<std::vector<std::string>> aliases;  // per component, sorted unique
};

ConceptAssignment collapse_identity(const LabeledGraph& labels);

struct LiftReport {
  std::size_t node_edges = 0;
  std::size_t concept_edges = 0;
  std::size_t internal_dropped = 0;
  std::vector<std::string> warnings;
};

// Maps Hierarchy edges onto concepts. Edges inside one concept are dropped
// with a warning. Throws InvariantError with the offending cycle when the
// concept graph is cyclic.
Ontology lift_hierarchy(const LabeledGraph& labels, const ConceptAssignment& concepts,
                        LiftReport* report = nullptr);

Ontology build_ontology(const LabeledGraph& labels, LiftReport* report = nullptr);

// Sorts concepts by id, remaps and deduplicates edges.
Ontology canonicalize(Ontology onto);

// Checks every invariant of the canonical form plus acyclicity. Throws
// InvariantError.
void validate(const Ontology& onto);

// Concepts in a topological order, or empty when the graph has a cycle (and
// at least one concept).
std::vector<std::uint32_t> topological_order(const Ontology& onto);

Ontology transitive_reduction(const Ontology& onto);

enum class ExportFormat { json, edge_tsv };

// JSON: {"concepts":[{"id":..,"aliases":[..]}],"edges":[[parent_id, child_id]]}.
// TSV: one "parent_alias\tchild_alias" line per alias pair of every edge.
void write_ontology(const Ontology& onto, ExportFormat format, std::ostream& out);
void export_ontology(const Ontology& onto, ExportFormat format, const std::filesystem::path& path);

// JSON only; the TSV form does not keep concept boundaries.
Ontology read_ontology_json(std::istream& in);
Ontology import_ontology(const std::filesystem::path& path);

}  // namespace corefonto
