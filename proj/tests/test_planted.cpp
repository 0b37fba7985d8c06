#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "corefonto/chain_ingest.hpp"
#include "corefonto/error.hpp"
#include "corefonto/ontology.hpp"
#include "corefonto/planted.hpp"
#include "corefonto/sense_resolver.hpp"
#include "support.hpp"

namespace corefonto {
namespace {

PlantedOntologySpec small_spec() {
  PlantedOntologySpec spec;
  spec.depth = 3;
  spec.branching = 3;
  spec.documents = 400;
  return spec;
}

TEST(Planted, TreeShapeFollowsSpec) {
  const auto corpus = generate_planted(small_spec(), 1);
  ASSERT_EQ(corpus.concepts.size(), 1u + 3u + 9u);
  std::map<std::size_t, std::size_t> per_level;
  for (std::size_t i = 0; i < corpus.concepts.size(); ++i) {
    const auto& c = corpus.concepts[i];
    ++per_level[c.level];
    if (i == 0) {
      EXPECT_EQ(c.parent, -1);
    } else {
      EXPECT_EQ(corpus.concepts[static_cast<std::size_t>(c.parent)].level + 1, c.level);
    }
  }
  EXPECT_EQ(per_level, (std::map<std::size_t, std::size_t>{{0, 1}, {1, 3}, {2, 9}}));
  EXPECT_EQ(corpus.records.size(), 400u);
}

TEST(Planted, AliasCountsDefaultToEveryConcept) {
  const auto corpus = generate_planted(small_spec(), 2);
  std::set<std::string> ambiguous(corpus.ambiguous.begin(), corpus.ambiguous.end());
  for (const auto& c : corpus.concepts) {
    const auto own = std::count_if(c.aliases.begin(), c.aliases.end(),
                                   [&](const std::string& a) { return !ambiguous.contains(a); });
    EXPECT_EQ(static_cast<std::size_t>(own), 3u);
  }
  auto spec = small_spec();
  spec.internal_aliases = 1;
  const auto single = generate_planted(spec, 2);
  EXPECT_EQ(single.concepts[0].aliases.size(), 1u);
}

TEST(Planted, TruthIsAValidOntology) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto corpus = generate_planted(small_spec(), seed);
    EXPECT_NO_THROW(validate(corpus.truth));
    EXPECT_EQ(corpus.truth.concepts.size(), corpus.concepts.size());
    EXPECT_EQ(corpus.truth.edges.size(), corpus.concepts.size() - 1);
  }
}

TEST(Planted, SameSeedSameCorpus) {
  const auto a = generate_planted(small_spec(), 42);
  const auto b = generate_planted(small_spec(), 42);
  EXPECT_EQ(a.records, b.records);
  EXPECT_EQ(a.truth, b.truth);
  EXPECT_EQ(a.noise_pairs, b.noise_pairs);
  const auto c = generate_planted(small_spec(), 43);
  EXPECT_NE(a.records, c.records);
}

TEST(Planted, SurfaceStringsSurviveNormalization) {
  const auto lists = StopLists::defaults();
  const auto corpus = generate_planted(small_spec(), 5);
  std::set<std::string> canonical;
  for (const auto& c : corpus.concepts) canonical.insert(c.aliases.begin(), c.aliases.end());
  for (const auto& rec : corpus.records) {
    for (const auto& chain : rec.chains) {
      for (const auto& raw : chain) {
        const auto norm = normalize_phrase(raw, lists);
        ASSERT_TRUE(norm) << raw;
        EXPECT_TRUE(canonical.contains(*norm)) << raw;
      }
    }
  }
}

TEST(Planted, NoisePairsAreUnrelated) {
  auto spec = small_spec();
  spec.noise_rate = 0.1;
  const auto corpus = generate_planted(spec, 9);
  EXPECT_EQ(corpus.noise_pairs.size(),
            static_cast<std::size_t>(std::llround(0.1 * static_cast<double>(corpus.true_pairs))));
  std::map<std::string, std::set<std::size_t>> owners;
  for (std::size_t i = 0; i < corpus.concepts.size(); ++i)
    for (const auto& a : corpus.concepts[i].aliases) owners[a].insert(i);
  auto ancestors = [&](std::size_t c) {
    std::set<std::size_t> out;
    for (auto p = corpus.concepts[c].parent; p >= 0; p = corpus.concepts[static_cast<std::size_t>(p)].parent)
      out.insert(static_cast<std::size_t>(p));
    return out;
  };
  for (const auto& [a, b] : corpus.noise_pairs) {
    EXPECT_LT(a, b);
    for (auto ca : owners.at(a)) {
      for (auto cb : owners.at(b)) {
        EXPECT_NE(ca, cb);
        EXPECT_FALSE(ancestors(ca).contains(cb));
        EXPECT_FALSE(ancestors(cb).contains(ca));
      }
    }
  }
}

TEST(Planted, AmbiguityCreatesNamedSharedStrings) {
  const auto corpus = generate_planted(small_spec(), 4);
  ASSERT_FALSE(corpus.ambiguous.empty());
  for (const auto& s : corpus.ambiguous) {
    std::size_t owners = 0;
    for (const auto& c : corpus.concepts) {
      if (std::find(c.aliases.begin(), c.aliases.end(), s) != c.aliases.end()) {
        ++owners;
        EXPECT_TRUE(c.named);
      }
    }
    EXPECT_EQ(owners, 2u);
  }
  // Reference files leave ambiguous strings out.
  for (const auto& g : corpus.reference_groups)
    for (const auto& s : g)
      EXPECT_EQ(std::count(corpus.ambiguous.begin(), corpus.ambiguous.end(), s), 0);
}

TEST(Planted, EmbeddingsSeparateConcepts) {
  const auto corpus = generate_planted(small_spec(), 6);
  double within = 0, across = 0;
  std::size_t nw = 0, na = 0;
  std::set<std::string> ambiguous(corpus.ambiguous.begin(), corpus.ambiguous.end());
  for (std::size_t i = 0; i < corpus.concepts.size(); ++i) {
    for (std::size_t j = i; j < corpus.concepts.size(); ++j) {
      for (const auto& a : corpus.concepts[i].aliases) {
        for (const auto& b : corpus.concepts[j].aliases) {
          if (a >= b || ambiguous.contains(a) || ambiguous.contains(b)) continue;
          const double s = cosine_similarity(*corpus.embeddings.find(a), *corpus.embeddings.find(b));
          (i == j ? within : across) += s;
          ++(i == j ? nw : na);
        }
      }
    }
  }
  EXPECT_GT(within / static_cast<double>(nw), across / static_cast<double>(na) + 0.5);
}

TEST(Planted, WritesEveryFile) {
  testing::TempDir dir("planted");
  const auto corpus = generate_planted(small_spec(), 7);
  write_planted(corpus, dir.path());
  for (const char* f : {"chains.jsonl", "embeddings.tsv", "truth.json", "reference_hierarchy.tsv",
                        "reference_aliases.tsv", "noise_pairs.tsv"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  EXPECT_EQ(import_ontology(dir / "truth.json"), corpus.truth);
  EXPECT_EQ(EmbeddingTable::load(dir / "embeddings.tsv").size(), corpus.embeddings.size());
  EXPECT_EQ(parse_chain_file(dir / "chains.jsonl"), corpus.records);
}

TEST(Planted, InvalidSpecIsUsageError) {
  auto spec = small_spec();
  spec.depth = 1;
  EXPECT_THROW(generate_planted(spec, 1), UsageError);
  spec = small_spec();
  spec.noise_rate = 1.5;
  EXPECT_THROW(generate_planted(spec, 1), UsageError);
  spec = small_spec();
  spec.internal_aliases = 0;
  EXPECT_THROW(generate_planted(spec, 1), UsageError);
}

}  // namespace
}  // namespace corefonto
