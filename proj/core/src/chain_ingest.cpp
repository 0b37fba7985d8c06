#include "corefonto/chain_ingest.hpp"

#include <algorithm>
#include <array>
#include <nlohmann/json.hpp>
#include <sstream>
#include <unordered_map>

#include "corefonto/error.hpp"

namespace corefonto {
namespace {

using nlohmann::json;

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

char to_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }

bool is_lower_alpha(char c) { return c >= 'a' && c <= 'z'; }

bool is_edge_punct(char c) {
  static constexpr std::string_view kPunct = "\"'`()[]{}<>,.;:!?";
  return kPunct.find(c) != std::string_view::npos;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

// Plurals that look singular after stripping, and singulars ending in "s".
constexpr std::array<std::string_view, 24> kProtected = {
    "aids",    "atlas",  "bias",    "canvas",   "caries", "chassis",
    "diabetes", "gas",   "herpes",  "lens",     "measles", "mumps",
    "news",    "pancreas", "rabies", "rickets", "scabies", "series",
    "species", "tetanus", "thesis", "trias",    "yes",    "physics"};

struct Token {
  std::string raw;
  std::string lower;
};

std::vector<Token> tokenize(std::string_view raw) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < raw.size()) {
    while (i < raw.size() && is_space(raw[i])) ++i;
    std::size_t j = i;
    while (j < raw.size() && !is_space(raw[j])) ++j;
    if (j > i) {
      Token t;
      t.raw = std::string(raw.substr(i, j - i));
      t.lower.reserve(t.raw.size());
      for (char c : t.raw) t.lower.push_back(to_lower(c));
      tokens.push_back(std::move(t));
    }
    i = j;
  }
  // Only the phrase boundaries lose punctuation; hyphens and inner marks stay.
  auto trim_front = [](Token& t) {
    std::size_t n = 0;
    while (n < t.raw.size() && is_edge_punct(t.raw[n])) ++n;
    t.raw.erase(0, n);
    t.lower.erase(0, n);
  };
  auto trim_back = [](Token& t) {
    std::size_t n = t.raw.size();
    while (n > 0 && is_edge_punct(t.raw[n - 1])) --n;
    t.raw.resize(n);
    t.lower.resize(n);
  };
  while (!tokens.empty()) {
    trim_front(tokens.front());
    if (!tokens.front().raw.empty()) break;
    tokens.erase(tokens.begin());
  }
  while (!tokens.empty()) {
    trim_back(tokens.back());
    if (!tokens.back().raw.empty()) break;
    tokens.pop_back();
  }
  return tokens;
}

std::string join_lower(std::span<const Token> tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t.lower;
  }
  return out;
}

}  // namespace

bool StopLists::is_function_word(std::string_view token) const {
  return stopwords.contains(token) || pronouns.contains(token) ||
         determiners_quantifiers.contains(token);
}

bool StopLists::is_verb_only(std::span<const std::string> tokens) const {
  if (verb_only) return verb_only(tokens);
  return verb_only_default(*this, tokens);
}

bool verb_only_default(const StopLists& lists, std::span<const std::string> tokens) {
  if (tokens.empty()) return false;
  return std::all_of(tokens.begin(), tokens.end(), [&](const std::string& t) {
    if (lists.verbs.contains(t)) return true;
    // Past-tense heuristic: "treated", "observed"; not "speed", "need".
    return t.size() >= 5 && ends_with(t, "ed") && !ends_with(t, "eed") &&
           std::all_of(t.begin(), t.end(), is_lower_alpha);
  });
}

std::string singularize(std::string_view token) {
  std::string word(token);
  if (word.size() < 4 || word.back() != 's') return word;
  if (!is_lower_alpha(word[word.size() - 2])) return word;
  if (std::find(kProtected.begin(), kProtected.end(), token) != kProtected.end()) return word;
  if (ends_with(word, "ies") && word.size() > 4) {
    word.resize(word.size() - 3);
    word.push_back('y');
    return word;
  }
  if (ends_with(word, "sses") || ends_with(word, "xes") || ends_with(word, "ches") ||
      ends_with(word, "shes")) {
    word.resize(word.size() - 2);
    return word;
  }
  if (ends_with(word, "ss") || ends_with(word, "us") || ends_with(word, "is")) return word;
  word.pop_back();
  return word;
}

std::optional<NormalizedMention> normalize_mention(std::string_view raw,
                                                   const StopLists& lists) {
  std::vector<Token> tokens = tokenize(raw);
  // Stripping and singularizing can expose new function words ("others" ->
  // "other"), so iterate to a fixed point; this makes normalization idempotent.
  for (int round = 0; round < 8; ++round) {
    if (tokens.empty()) return std::nullopt;
    const std::string whole = join_lower(tokens);
    if (lists.pronouns.contains(whole) || lists.stopwords.contains(whole)) return std::nullopt;

    std::size_t lead = 0;
    while (lead < tokens.size() && lists.is_function_word(tokens[lead].lower)) ++lead;
    tokens.erase(tokens.begin(), tokens.begin() + static_cast<std::ptrdiff_t>(lead));
    if (tokens.empty()) return std::nullopt;

    std::vector<std::string> lowered;
    lowered.reserve(tokens.size());
    for (const auto& t : tokens) lowered.push_back(t.lower);
    if (lists.is_verb_only(lowered)) return std::nullopt;

    std::string single = singularize(tokens.back().lower);
    const bool changed = lead > 0 || single != tokens.back().lower;
    tokens.back().lower = std::move(single);
    if (!changed) break;
  }
  if (tokens.empty()) return std::nullopt;

  NormalizedMention out;
  out.text = join_lower(tokens);
  out.capitalized = !tokens.front().raw.empty() && is_upper(tokens.front().raw.front());
  return out;
}

std::optional<std::string> normalize_phrase(std::string_view raw, const StopLists& lists) {
  auto m = normalize_mention(raw, lists);
  if (!m) return std::nullopt;
  return std::move(m->text);
}

std::optional<ChainRecord> parse_chain_line(std::string_view line, std::string* error,
                                            std::size_t* short_chains) {
  auto fail = [&](std::string msg) -> std::optional<ChainRecord> {
    if (error) *error = std::move(msg);
    return std::nullopt;
  };
  json j = json::parse(line.begin(), line.end(), nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) return fail("invalid JSON");
  if (!j.is_object()) return fail("record is not a JSON object");
  auto doc = j.find("doc_id");
  if (doc == j.end() || !doc->is_string()) return fail("missing string field doc_id");
  auto chains = j.find("chains");
  if (chains == j.end() || !chains->is_array()) return fail("missing array field chains");

  ChainRecord rec;
  rec.doc_id = doc->get<std::string>();
  if (rec.doc_id.empty()) return fail("empty doc_id");
  for (const auto& chain : *chains) {
    if (!chain.is_array()) return fail("chain is not an array");
    std::vector<std::string> mentions;
    mentions.reserve(chain.size());
    for (const auto& m : chain) {
      if (!m.is_string()) return fail("mention is not a string");
      mentions.push_back(m.get<std::string>());
    }
    if (mentions.size() < 2) {
      if (short_chains) ++*short_chains;
      continue;
    }
    rec.chains.push_back(std::move(mentions));
  }
  return rec;
}

ChainReader::ChainReader(const std::filesystem::path& path, ChainFormat /*format*/)
    : in_(path) {
  if (!in_) throw DataError("cannot open chains file " + path.string());
}

std::optional<ChainRecord> ChainReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++summary_.lines;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::string error;
    auto rec = parse_chain_line(line, &error, &summary_.short_chains_dropped);
    if (!rec) {
      ++summary_.records_skipped;
      summary_.issues.push_back({summary_.lines, std::move(error)});
      continue;
    }
    ++summary_.records_read;
    return rec;
  }
  if (in_.bad()) throw DataError("I/O error while reading chains file");
  return std::nullopt;
}

std::vector<ChainRecord> parse_chain_file(const std::filesystem::path& path, ChainFormat format,
                                          ParseSummary* summary) {
  ChainReader reader(path, format);
  std::vector<ChainRecord> records;
  while (auto rec = reader.next()) records.push_back(std::move(*rec));
  if (summary) *summary = reader.summary();
  return records;
}

void write_chain_records(std::span<const ChainRecord> records, std::ostream& out) {
  for (const auto& rec : records) {
    json j;
    j["doc_id"] = rec.doc_id;
    j["chains"] = rec.chains;
    out << j.dump() << '\n';
  }
}

void Ingestor::add(const ChainRecord& record) {
  auto& summary = result_.summary;
  ++summary.records;
  for (const auto& chain : record.chains) {
    ++summary.chains_in;
    summary.mentions_in += chain.size();

    // phrase -> all mentions capitalized so far
    std::vector<std::pair<std::string, bool>> kept;
    for (const auto& raw : chain) {
      auto m = normalize_mention(raw, lists_);
      if (!m) {
        ++summary.mentions_filtered;
        continue;
      }
      auto it = std::find_if(kept.begin(), kept.end(),
                             [&](const auto& p) { return p.first == m->text; });
      if (it != kept.end()) {
        ++summary.duplicate_mentions;
        it->second = it->second && m->capitalized;
        continue;
      }
      kept.emplace_back(std::move(m->text), m->capitalized);
    }
    if (kept.size() < 2) {
      ++summary.chains_dropped;
      continue;
    }
    ++summary.chains_kept;
    Chain out;
    out.reserve(kept.size());
    for (auto& [text, cap] : kept) {
      auto [it, inserted] = result_.phrases.try_emplace(text);
      if (inserted) it->second.text = text;
      ++it->second.raw_occurrences;
      if (cap) ++it->second.capitalized_occurrences;
      out.push_back(std::move(text));
    }
    result_.chains.push_back(std::move(out));
  }
}

IngestResult Ingestor::finish() && { return std::move(result_); }

IngestResult ingest(std::span<const ChainRecord> records, const StopLists& lists) {
  Ingestor ingestor(lists);
  for (const auto& rec : records) ingestor.add(rec);
  return std::move(ingestor).finish();
}

void write_phrase_table(const PhraseTable& phrases, std::ostream& out) {
  out << "# phrase\traw_occurrences\tcapitalized_occurrences\n";
  for (const auto& [text, p] : phrases) {
    out << text << '\t' << p.raw_occurrences << '\t' << p.capitalized_occurrences << '\n';
  }
}

PhraseTable read_phrase_table(std::istream& in) {
  PhraseTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) {
      throw DataError("phrase table line " + std::to_string(line_no) + ": expected 3 columns");
    }
    Phrase p;
    p.text = line.substr(0, t1);
    try {
      p.raw_occurrences = std::stoull(line.substr(t1 + 1, t2 - t1 - 1));
      p.capitalized_occurrences = std::stoull(line.substr(t2 + 1));
    } catch (const std::exception&) {
      throw DataError("phrase table line " + std::to_string(line_no) + ": bad count");
    }
    if (p.text.empty() || p.capitalized_occurrences > p.raw_occurrences) {
      throw DataError("phrase table line " + std::to_string(line_no) + ": invalid entry");
    }
    table.emplace(p.text, p);
  }
  return table;
}

void write_normalized_chains(std::span<const Chain> chains, std::ostream& out) {
  for (const auto& chain : chains) out << json(chain).dump() << '\n';
}

std::vector<Chain> read_normalized_chains(std::istream& in) {
  std::vector<Chain> chains;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_array()) {
      throw DataError("normalized chains line " + std::to_string(line_no) + ": not a JSON array");
    }
    Chain chain;
    for (const auto& m : j) {
      if (!m.is_string()) {
        throw DataError("normalized chains line " + std::to_string(line_no) + ": non-string");
      }
      chain.push_back(m.get<std::string>());
    }
    chains.push_back(std::move(chain));
  }
  return chains;
}

}  // namespace corefonto
