#include "corefonto/planted.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "corefonto/error.hpp"
#include "corefonto/random.hpp"

namespace corefonto {
namespace {

constexpr std::string_view kOnsets = "bdfgklmnprtvz";
constexpr std::string_view kVowels = "aeiou";
// Final vowels chosen so that appending "s" is undone by singularization.
constexpr std::string_view kFinals = "ao";

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[rng.below(v.size())];
}

std::string pseudo_word(Rng& rng) {
  const std::size_t syllables = 2 + rng.below(2);
  std::string w;
  for (std::size_t i = 0; i < syllables; ++i) {
    w += kOnsets[rng.below(kOnsets.size())];
    const auto& vowels = i + 1 == syllables ? kFinals : kVowels;
    w += vowels[rng.below(vowels.size())];
  }
  return w;
}

std::string capitalize_words(std::string s) {
  bool start = true;
  for (char& c : s) {
    if (start && c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    start = c == ' ';
  }
  return s;
}

std::string upper(std::string s) {
  for (char& c : s) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  }
  return s;
}

enum class Style : std::uint8_t { Noun, Name, Abbreviation };

struct Lexicon {
  const StopLists& lists;
  std::unordered_set<std::string> used;
  std::unordered_map<std::string, Style> style;

  std::vector<std::string> surfaces(const std::string& canonical) const {
    switch (style.at(canonical)) {
      case Style::Noun: return {canonical, "the " + canonical, canonical + "s"};
      case Style::Name: return {capitalize_words(canonical)};
      case Style::Abbreviation: return {upper(canonical)};
    }
    return {canonical};
  }

  bool stable(const std::string& canonical) const {
    for (const auto& s : surfaces(canonical)) {
      if (normalize_phrase(s, lists) != canonical) return false;
    }
    return true;
  }

  std::string fresh(Rng& rng, Style s) {
    for (;;) {
      std::string c;
      if (s == Style::Abbreviation) {
        const std::size_t letters = 2 + rng.below(2);
        for (std::size_t i = 0; i < letters; ++i) c += kOnsets[rng.below(kOnsets.size())];
        c += static_cast<char>('1' + rng.below(9));
      } else {
        c = pseudo_word(rng);
        if (rng.chance(0.5)) c += " " + pseudo_word(rng);
      }
      if (used.contains(c)) continue;
      style[c] = s;
      if (!stable(c)) {
        style.erase(c);
        continue;
      }
      used.insert(c);
      return c;
    }
  }
};

std::vector<double> random_unit(Rng& rng, std::size_t dim) {
  std::vector<double> v(dim);
  double norm = 0.0;
  for (auto& x : v) {
    x = rng.normal();
    norm += x * x;
  }
  norm = std::sqrt(norm);
  for (auto& x : v) x /= norm;
  return v;
}

}  // namespace

void PlantedOntologySpec::validate() const {
  auto rate = [](double x, const char* name) {
    if (!(x >= 0.0 && x <= 1.0)) throw UsageError(std::string(name) + " must lie in [0, 1]");
  };
  if (depth < 2) throw UsageError("planted depth must be at least 2");
  if (branching < 1) throw UsageError("planted branching must be at least 1");
  if (aliases < 1 || internal_alias_count() < 1) throw UsageError("planted alias counts must be >= 1");
  if (chains_per_document < 1) throw UsageError("chains per document must be at least 1");
  if (documents < 1) throw UsageError("planted documents must be at least 1");
  if (embedding_dim < 2) throw UsageError("embedding dimension must be at least 2");
  if (!(embedding_noise >= 0.0) || !std::isfinite(embedding_noise)) {
    throw UsageError("embedding noise must be finite and >= 0");
  }
  rate(ambiguity_rate, "ambiguity rate");
  rate(noise_rate, "noise rate");
  rate(name_rate, "name rate");
  rate(skip_level_rate, "skip-level rate");
  double concepts = 0.0, level = 1.0;
  for (std::size_t d = 0; d < depth; ++d, level *= static_cast<double>(branching)) concepts += level;
  if (concepts > 2e6) throw UsageError("planted taxonomy is too large");
}

PlantedCorpus generate_planted(const PlantedOntologySpec& spec, std::uint64_t seed) {
  spec.validate();
  PlantedCorpus out;
  out.spec = spec;
  out.seed = seed;
  const StopLists lists = StopLists::defaults();
  Lexicon lex{lists, {}, {}};

  // Taxonomy shape.
  Rng tax(sub_seed(seed, "planted.taxonomy"));
  auto& concepts = out.concepts;
  concepts.push_back({});
  std::vector<std::size_t> frontier{0};
  for (std::size_t level = 1; level < spec.depth; ++level) {
    std::vector<std::size_t> next;
    for (std::size_t p : frontier) {
      for (std::size_t b = 0; b < spec.branching; ++b) {
        PlantedConcept c;
        c.parent = static_cast<std::int64_t>(p);
        c.level = level;
        next.push_back(concepts.size());
        concepts.push_back(std::move(c));
      }
    }
    frontier = std::move(next);
  }
  const std::vector<std::size_t> leaves = frontier;
  for (std::size_t leaf : leaves) concepts[leaf].named = tax.chance(spec.name_rate);

  // Ambiguous leaf pairs, preferably under different parents.
  std::vector<std::pair<std::size_t, std::size_t>> ambiguous_pairs;
  if (spec.ambiguity_rate > 0.0 && leaves.size() >= 2) {
    const auto want = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(spec.ambiguity_rate * leaves.size() / 2.0)));
    std::vector<std::size_t> pool = leaves;
    for (std::size_t i = pool.size(); i > 1; --i) std::swap(pool[i - 1], pool[tax.below(i)]);
    std::vector<bool> taken(pool.size(), false);
    for (std::size_t i = 0; i < pool.size() && ambiguous_pairs.size() < want; ++i) {
      if (taken[i]) continue;
      std::size_t match = pool.size();
      for (std::size_t j = i + 1; j < pool.size(); ++j) {
        if (taken[j]) continue;
        if (match == pool.size()) match = j;
        if (concepts[pool[j]].parent != concepts[pool[i]].parent) {
          match = j;
          break;
        }
      }
      if (match == pool.size()) break;
      taken[i] = taken[match] = true;
      ambiguous_pairs.push_back({pool[i], pool[match]});
    }
  }
  for (const auto& [a, b] : ambiguous_pairs) concepts[a].named = concepts[b].named = true;

  // Surface strings.
  for (std::size_t c = 0; c < concepts.size(); ++c) {
    auto& node = concepts[c];
    const bool leaf = node.level + 1 == spec.depth;
    const std::size_t count = leaf ? spec.aliases : spec.internal_alias_count();
    for (std::size_t i = 0; i < count; ++i) {
      Style style = Style::Noun;
      if (node.named) style = i % 2 == 1 ? Style::Abbreviation : Style::Name;
      node.aliases.push_back(lex.fresh(tax, style));
    }
  }
  for (const auto& [a, b] : ambiguous_pairs) {
    const std::string shared = lex.fresh(tax, Style::Abbreviation);
    concepts[a].aliases.push_back(shared);
    concepts[b].aliases.push_back(shared);
    out.ambiguous.push_back(shared);
  }
  std::sort(out.ambiguous.begin(), out.ambiguous.end());

  auto is_ancestor = [&](std::size_t a, std::size_t b) {
    for (auto x = concepts[b].parent; x >= 0; x = concepts[static_cast<std::size_t>(x)].parent) {
      if (static_cast<std::size_t>(x) == a) return true;
    }
    return false;
  };
  std::unordered_map<std::string, std::vector<std::size_t>> owners;
  for (std::size_t c = 0; c < concepts.size(); ++c) {
    for (const auto& a : concepts[c].aliases) owners[a].push_back(c);
  }

  // Chains.
  Rng chains(sub_seed(seed, "planted.chains"));
  struct Mention {
    std::string surface;
    std::string canonical;
  };
  auto mention = [&](const std::string& canonical) {
    const auto forms = lex.surfaces(canonical);
    return Mention{pick(chains, forms), canonical};
  };
  std::set<std::pair<std::string, std::string>> true_pairs;
  std::vector<std::vector<Mention>> all_chains;
  out.records.resize(spec.documents);
  for (std::size_t d = 0; d < spec.documents; ++d) {
    char id[32];
    std::snprintf(id, sizeof id, "doc%06zu", d);
    out.records[d].doc_id = id;
    for (std::size_t k = 0; k < spec.chains_per_document; ++k) {
      const std::size_t target = 1 + chains.below(concepts.size() - 1);
      const auto& node = concepts[target];
      std::vector<std::string> chosen = node.aliases;
      for (std::size_t i = chosen.size(); i > 1; --i) std::swap(chosen[i - 1], chosen[chains.below(i)]);
      chosen.resize(1 + chains.below(chosen.size()));
      const auto parent = static_cast<std::size_t>(node.parent);
      chosen.push_back(pick(chains, concepts[parent].aliases));
      if (concepts[parent].parent >= 0 && chains.chance(spec.skip_level_rate)) {
        chosen.push_back(pick(chains, concepts[static_cast<std::size_t>(concepts[parent].parent)].aliases));
      }
      std::vector<Mention> chain;
      for (const auto& c : chosen) chain.push_back(mention(c));
      for (std::size_t i = 0; i < chosen.size(); ++i) {
        for (std::size_t j = i + 1; j < chosen.size(); ++j) {
          true_pairs.insert(std::minmax(chosen[i], chosen[j]));
        }
      }
      std::vector<std::string> raw;
      for (const auto& m : chain) raw.push_back(m.surface);
      out.records[d].chains.push_back(std::move(raw));
      all_chains.push_back(std::move(chain));
    }
  }
  out.true_pairs = true_pairs.size();

  // Noise pairs: endpoints drawn in proportion to mention frequency.
  Rng noise(sub_seed(seed, "planted.noise"));
  const auto want_noise = static_cast<std::size_t>(std::llround(spec.noise_rate * true_pairs.size()));
  std::set<std::pair<std::string, std::string>> noise_set;
  const std::size_t max_attempts = 1000 * (want_noise + 1);
  for (std::size_t attempt = 0; attempt < max_attempts && noise_set.size() < want_noise; ++attempt) {
    const auto& ca = pick(noise, all_chains);
    const auto& ma = pick(noise, ca);
    const auto& cb = pick(noise, all_chains);
    const auto& mb = pick(noise, cb);
    if (ma.canonical == mb.canonical) continue;
    const auto key = std::minmax(ma.canonical, mb.canonical);
    if (true_pairs.contains(key) || noise_set.contains(key)) continue;
    bool related = false;
    for (auto x : owners[ma.canonical]) {
      for (auto y : owners[mb.canonical]) {
        related = related || x == y || is_ancestor(x, y) || is_ancestor(y, x);
      }
    }
    if (related) continue;
    noise_set.insert(key);
    out.records[noise.below(out.records.size())].chains.push_back({ma.surface, mb.surface});
  }
  out.noise_pairs.assign(noise_set.begin(), noise_set.end());

  // Embeddings around per-concept centres.
  Rng emb(sub_seed(seed, "planted.embeddings"));
  std::vector<std::vector<double>> centre;
  for (std::size_t c = 0; c < concepts.size(); ++c) centre.push_back(random_unit(emb, spec.embedding_dim));
  std::vector<std::string> strings;
  for (const auto& [s, o] : owners) strings.push_back(s);
  std::sort(strings.begin(), strings.end());
  out.embeddings = EmbeddingTable(spec.embedding_dim);
  const double scale = spec.embedding_noise / std::sqrt(static_cast<double>(spec.embedding_dim));
  for (const auto& s : strings) {
    std::vector<double> v(spec.embedding_dim, 0.0);
    for (auto c : owners[s]) {
      for (std::size_t i = 0; i < v.size(); ++i) v[i] += centre[c][i];
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (auto& x : v) x = x / norm + scale * emb.normal();
    out.embeddings.add(s, std::move(v));
  }

  // Ground truth and reference files.
  Ontology truth;
  for (const auto& c : concepts) {
    auto aliases = c.aliases;
    std::sort(aliases.begin(), aliases.end());
    truth.concepts.push_back({concept_id(aliases), aliases});
  }
  for (std::size_t c = 1; c < concepts.size(); ++c) {
    truth.edges.push_back({static_cast<std::uint32_t>(concepts[c].parent), static_cast<std::uint32_t>(c)});
  }
  out.truth = canonicalize(std::move(truth));

  const std::set<std::string> ambiguous(out.ambiguous.begin(), out.ambiguous.end());
  auto clean = [&](const std::vector<std::string>& aliases) {
    std::vector<std::string> keep;
    for (const auto& a : aliases) {
      if (!ambiguous.contains(a)) keep.push_back(a);
    }
    return keep;
  };
  for (std::size_t c = 0; c < concepts.size(); ++c) {
    auto group = clean(concepts[c].aliases);
    if (c > 0) {
      for (const auto& pa : clean(concepts[static_cast<std::size_t>(concepts[c].parent)].aliases)) {
        for (const auto& ca : group) out.reference_child_parent.push_back({ca, pa});
      }
    }
    if (!group.empty()) out.reference_groups.push_back(std::move(group));
  }
  return out;
}

void write_planted(const PlantedCorpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw DataError("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("chains.jsonl");
    write_chain_records(corpus.records, f);
  }
  {
    auto f = open("embeddings.tsv");
    corpus.embeddings.write(f);
  }
  {
    auto f = open("truth.json");
    write_ontology(corpus.truth, ExportFormat::json, f);
  }
  {
    auto f = open("reference_hierarchy.tsv");
    for (const auto& [child, parent] : corpus.reference_child_parent) f << child << '\t' << parent << '\n';
  }
  {
    auto f = open("reference_aliases.tsv");
    for (const auto& group : corpus.reference_groups) {
      for (std::size_t i = 0; i < group.size(); ++i) f << (i ? "\t" : "") << group[i];
      f << '\n';
    }
  }
  {
    auto f = open("noise_pairs.tsv");
    for (const auto& [a, b] : corpus.noise_pairs) f << a << '\t' << b << '\n';
  }
}

}  // namespace corefonto
