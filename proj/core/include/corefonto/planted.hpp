#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "corefonto/chain_ingest.hpp"
#include "corefonto/ontology.hpp"
#include "corefonto/sense_resolver.hpp"

namespace corefonto {

// Knobs of the synthetic corpus generator.
//
// The taxonomy is a complete tree: `depth` levels counting the root, every
// internal concept has `branching` children. Leaves carry `aliases` surface
// strings, internal concepts `internal_aliases` (the same count when unset).
// Each chain mentions some
// aliases of one non-root concept together with its parent.
struct PlantedOntologySpec {
  std::size_t depth = 3;
  std::size_t branching = 4;
  std::size_t aliases = 3;
  std::optional<std::size_t> internal_aliases;
  std::size_t chains_per_document = 3;
  std::size_t documents = 2000;
  // Fraction of leaves that share an abbreviation with another leaf (at least
  // one pair whenever the rate is positive).
  double ambiguity_rate = 0.05;
  // Injected spurious pairs, relative to the number of distinct true pairs.
  double noise_rate = 0.05;
  // Probability that a leaf concept is named (capitalized surfaces).
  double name_rate = 0.25;
  // Probability that a chain also mentions the grandparent.
  double skip_level_rate = 0.0;
  std::size_t embedding_dim = 32;
  // Standard deviation of the per-string perturbation around the concept
  // centre, relative to the unit-length centre.
  double embedding_noise = 0.3;

  // Throws UsageError when a field is out of range.
  void validate() const;
  std::size_t internal_alias_count() const { return internal_aliases.value_or(aliases); }
};

struct PlantedConcept {
  std::vector<std::string> aliases;  // canonical forms
  std::int64_t parent = -1;
  std::size_t level = 0;
  bool named = false;
};

struct PlantedCorpus {
  PlantedOntologySpec spec;
  std::uint64_t seed = 0;
  std::vector<PlantedConcept> concepts;             // index 0 is the root
  std::vector<std::string> ambiguous;               // strings owned by two concepts
  std::vector<ChainRecord> records;
  std::vector<std::pair<std::string, std::string>> noise_pairs;  // canonical, sorted pairs
  std::size_t true_pairs = 0;
  EmbeddingTable embeddings;
  Ontology truth;
  // Reference files: direct edges and alias groups without ambiguous strings.
  std::vector<std::pair<std::string, std::string>> reference_child_parent;
  std::vector<std::vector<std::string>> reference_groups;
};

PlantedCorpus generate_planted(const PlantedOntologySpec& spec, std::uint64_t seed);

// Writes chains.jsonl, embeddings.tsv, truth.json, reference_hierarchy.tsv,
// reference_aliases.tsv and noise_pairs.tsv into `dir` (created if needed).
void write_planted(const PlantedCorpus& corpus, const std::filesystem::path& dir);

}  // namespace corefonto
