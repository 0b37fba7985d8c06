#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace corefonto {

// One input document: its coreference chains as raw mention strings.
struct ChainRecord {
  std::string doc_id;
  std::vector<std::vector<std::string>> chains;

  bool operator==(const ChainRecord&) const = default;
};

enum class ChainFormat { jsonl };

struct ParseIssue {
  std::size_t line = 0;
  std::string message;
};

struct ParseSummary {
  std::size_t lines = 0;
  std::size_t records_read = 0;
  std::size_t records_skipped = 0;
  // Chains with fewer than two mentions; dropped from otherwise valid records.
  std::size_t short_chains_dropped = 0;
  std::vector<ParseIssue> issues;
};

// Parses one JSONL line. Returns nullopt and fills `error` for malformed
// input. Chains shorter than two mentions are removed and counted in
// `short_chains`.
std::optional<ChainRecord> parse_chain_line(std::string_view line, std::string* error,
                                            std::size_t* short_chains = nullptr);

// Streams records from a chains file in file order. Malformed lines are
// recorded in summary() and skipped.
class ChainReader {
 public:
  // Throws DataError when the file cannot be opened.
  explicit ChainReader(const std::filesystem::path& path,
                       ChainFormat format = ChainFormat::jsonl);

  std::optional<ChainRecord> next();
  const ParseSummary& summary() const { return summary_; }

 private:
  std::ifstream in_;
  ParseSummary summary_;
};

std::vector<ChainRecord> parse_chain_file(const std::filesystem::path& path,
                                          ChainFormat format = ChainFormat::jsonl,
                                          ParseSummary* summary = nullptr);

void write_chain_records(std::span<const ChainRecord> records, std::ostream& out);

// Word lists used by phrase normalization. All entries are lowercase.
struct StopLists {
  std::set<std::string, std::less<>> stopwords;
  std::set<std::string, std::less<>> pronouns;
  std::set<std::string, std::less<>> determiners_quantifiers;
  std::set<std::string, std::less<>> verbs;
  // Decides whether a lowercased, tokenized phrase consists only of verbs.
  // Defaults to verb_only_default().
  std::function<bool(std::span<const std::string>)> verb_only;

  bool is_function_word(std::string_view token) const;
  bool is_verb_only(std::span<const std::string> tokens) const;

  // Built-in English lists (also shipped under core/data/stoplists).
  static StopLists defaults();
  // Loads stopwords.txt, pronouns.txt, determiners.txt and verbs.txt from
  // `dir`: one term per line, '#' starts a comment. Throws DataError on a
  // missing file or an empty list.
  static StopLists load(const std::filesystem::path& dir);
};

// Verb-list membership plus a past-tense suffix heuristic.
bool verb_only_default(const StopLists& lists, std::span<const std::string> tokens);

// Singular form of a lowercase token: "ies"->"y", "xes"/"ches"/"shes"/"sses"
// drop "es", otherwise a trailing "s" is dropped unless the word ends in
// "ss", "us" or "is", is shorter than four characters, or is protected.
std::string singularize(std::string_view token);

struct NormalizedMention {
  std::string text;
  bool capitalized = false;
};

// Canonical form of a raw mention, or nullopt when the mention is a pronoun,
// a stop word or verb-only. `capitalized` reflects the first surviving token
// of the raw string.
std::optional<NormalizedMention> normalize_mention(std::string_view raw,
                                                   const StopLists& lists);

std::optional<std::string> normalize_phrase(std::string_view raw, const StopLists& lists);

// A canonical phrase with its casing statistics.
struct Phrase {
  std::string text;
  std::uint64_t raw_occurrences = 0;
  std::uint64_t capitalized_occurrences = 0;

  // Consistently capitalized phrases are names; everything else is a noun.
  bool is_name(double threshold) const {
    return raw_occurrences > 0 &&
           static_cast<double>(capitalized_occurrences) >=
               threshold * static_cast<double>(raw_occurrences);
  }

  bool operator==(const Phrase&) const = default;
};

using PhraseTable = std::map<std::string, Phrase, std::less<>>;
using Chain = std::vector<std::string>;

struct IngestSummary {
  std::size_t records = 0;
  std::size_t chains_in = 0;
  std::size_t chains_kept = 0;
  std::size_t chains_dropped = 0;
  std::size_t mentions_in = 0;
  std::size_t mentions_filtered = 0;
  std::size_t duplicate_mentions = 0;
};

struct IngestResult {
  PhraseTable phrases;
  std::vector<Chain> chains;
  IngestSummary summary;
};

// Accumulates normalized chains record by record.
//
// Within one chain, repeated mentions of the same canonical phrase collapse
// into one occurrence; that occurrence counts as capitalized only when every
// collapsed mention was capitalized. Emitted chains list phrases in first-seen
// order and always hold at least two distinct phrases.
class Ingestor {
 public:
  explicit Ingestor(const StopLists& lists) : lists_(lists) {}

  void add(const ChainRecord& record);
  IngestResult finish() &&;

 private:
  const StopLists& lists_;
  IngestResult result_;
};

IngestResult ingest(std::span<const ChainRecord> records, const StopLists& lists);

void write_phrase_table(const PhraseTable& phrases, std::ostream& out);
PhraseTable read_phrase_table(std::istream& in);
void write_normalized_chains(std::span<const Chain> chains, std::ostream& out);
std::vector<Chain> read_normalized_chains(std::istream& in);

}  // namespace corefonto
