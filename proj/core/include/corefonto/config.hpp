#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace corefonto {

// Resolved pipeline settings.
//
// Text format: one "key = value" per line, '#' starts a comment. Keys are the
// field names below; booleans accept true/false/1/0/yes/no. Relative paths
// are kept as written.
struct PipelineConfig {
  std::filesystem::path chains;
  std::filesystem::path embeddings;
  std::filesystem::path stoplists;  // empty: built-in lists
  std::filesystem::path reference_hierarchy;
  std::filesystem::path reference_aliases;
  std::filesystem::path work_dir = "corefonto-work";

  std::uint32_t pivots = 500;
  bool exact = false;
  std::size_t knn = 5;
  bool knn_weighted = false;
  double name_threshold = 0.9;
  double pmi_threshold = 0.0;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;

  bool senses = true;
  bool noise = true;
  bool reduce = false;

  // Throws UsageError for an unknown key or a value that does not parse.
  void set(std::string_view key, std::string_view value);
  // Range checks. Throws UsageError.
  void validate() const;
  // Every key with its value, in a fixed order.
  std::vector<std::pair<std::string, std::string>> entries() const;

  static PipelineConfig parse(std::istream& in);
  static PipelineConfig load(const std::filesystem::path& path);
};

void write_config(const PipelineConfig& cfg, std::ostream& out);

}  // namespace corefonto
