#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "corefonto/chain_ingest.hpp"
#include "corefonto/error.hpp"
#include "corefonto/evaluator.hpp"
#include "corefonto/ontology.hpp"
#include "support.hpp"

namespace corefonto {
namespace {

const StopLists& lists() {
  static const StopLists l = StopLists::defaults();
  return l;
}

using Pairs = std::vector<std::pair<std::string, std::string>>;
using Groups = std::vector<std::vector<std::string>>;

// Our ontology from alias groups and (parent group, child group) edges.
Ontology ours(Groups groups, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  Ontology onto;
  for (auto& g : groups) {
    std::sort(g.begin(), g.end());
    onto.concepts.push_back({concept_id(g), g});
  }
  for (auto [p, c] : edges) {
    onto.edges.emplace_back(static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(c));
  }
  return canonicalize(std::move(onto));
}

// Pair-counting ARI straight from the definition, over every pair of items.
double ari_by_pairs(const std::vector<std::uint32_t>& p, const std::vector<std::uint32_t>& g) {
  double both = 0, in_p = 0, in_g = 0, pairs = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      pairs += 1;
      const bool sp = p[i] == p[j], sg = g[i] == g[j];
      both += sp && sg;
      in_p += sp;
      in_g += sg;
    }
  }
  const double expected = in_p * in_g / pairs;
  const double max = 0.5 * (in_p + in_g);
  return (both - expected) / (max - expected);
}

TEST(ClusterMetrics, HandBuiltEightStringPartition) {
  const std::vector<std::uint32_t> pred = {0, 0, 0, 1, 1, 2, 2, 2};
  const std::vector<std::uint32_t> gold = {0, 0, 1, 1, 1, 2, 2, 0};
  // Clusters {g0,g0,g1}, {g1,g1}, {g2,g2,g0}: two of entropy H(2/3,1/3), one pure.
  const double h = -(2.0 / 3 * std::log(2.0 / 3) + 1.0 / 3 * std::log(1.0 / 3));
  EXPECT_NEAR(cluster_entropy(pred, gold), (3 * h + 3 * h) / 8, 1e-12);
  // Sum C(n_ij,2) = 3, row and column sums 7 each, C(8,2) = 28.
  const double expected = 7.0 * 7.0 / 28.0;
  EXPECT_NEAR(adjusted_rand_index(pred, gold), (3 - expected) / (7 - expected), 1e-12);
  EXPECT_NEAR(adjusted_rand_index(pred, gold), ari_by_pairs(pred, gold), 1e-12);
}

TEST(ClusterMetrics, SecondHandBuiltPartition) {
  const std::vector<std::uint32_t> pred = {0, 0, 0, 0, 1, 1, 1, 1};
  const std::vector<std::uint32_t> gold = {0, 0, 1, 1, 2, 2, 3, 3};
  // Each predicted cluster holds two equal gold groups: entropy ln 2.
  EXPECT_NEAR(cluster_entropy(pred, gold), std::log(2.0), 1e-12);
  // Sum C(n_ij,2) = 4; rows 6 + 6 = 12; columns 4 x 1 = 4.
  const double expected = 12.0 * 4.0 / 28.0;
  EXPECT_NEAR(adjusted_rand_index(pred, gold), (4 - expected) / (0.5 * (12 + 4) - expected), 1e-12);
}

TEST(ClusterMetrics, AriAgreesWithPairCountingOracle) {
  Rng rng(6);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 8;
    std::vector<std::uint32_t> p(n), g(n);
    for (auto& x : p) x = static_cast<std::uint32_t>(rng.below(4));
    for (auto& x : g) x = static_cast<std::uint32_t>(rng.below(4));
    const double oracle = ari_by_pairs(p, g);
    if (!std::isfinite(oracle)) continue;
    EXPECT_NEAR(adjusted_rand_index(p, g), oracle, 1e-12);
  }
}

TEST(ClusterMetrics, IdenticalPartitionsScorePerfectly) {
  Rng rng(10);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng.below(40);
    std::vector<std::uint32_t> p(n);
    for (auto& x : p) x = static_cast<std::uint32_t>(rng.below(1 + rng.below(8)));
    EXPECT_NEAR(adjusted_rand_index(p, p), 1.0, 1e-12);
    EXPECT_EQ(cluster_entropy(p, p), 0.0);
    // Relabeling clusters changes nothing.
    std::vector<std::uint32_t> q(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = 100 - p[i];
    EXPECT_NEAR(adjusted_rand_index(p, q), 1.0, 1e-12);
  }
}

TEST(ClusterMetrics, PurityGivesZeroEntropy) {
  const std::vector<std::uint32_t> pred = {0, 1, 2, 3};
  const std::vector<std::uint32_t> gold = {0, 0, 1, 1};
  EXPECT_EQ(cluster_entropy(pred, gold), 0.0);
  EXPECT_GT(cluster_entropy(std::vector<std::uint32_t>{0, 0, 0, 0}, gold), 0.0);
}

TEST(Reachability, AgreesWithDepthFirstSearch) {
  Rng rng(21);
  const std::size_t n = 300;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (std::uint32_t i = 0; i < n; ++i)
    for (int k = 0; k < 2; ++k)
      if (i + 1 < n) edges.emplace_back(i, static_cast<std::uint32_t>(i + 1 + rng.below(n - i - 1)));
  const Reachability reach(n, edges);
  std::vector<std::vector<std::uint32_t>> out(n);
  for (auto [a, b] : edges) out[a].push_back(b);
  for (std::uint32_t s = 0; s < n; s += 7) {
    std::vector<bool> seen(n, false);
    std::vector<std::uint32_t> stack = out[s];
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      if (seen[v]) continue;
      seen[v] = true;
      for (auto w : out[v]) stack.push_back(w);
    }
    for (std::uint32_t t = 0; t < n; ++t) EXPECT_EQ(reach.reaches(s, t), seen[t]);
  }
}

TEST(Reachability, CycleIsDataError) {
  const std::vector<std::pair<std::uint32_t, std::uint32_t>> edges = {{0, 1}, {1, 2}, {2, 0}};
  EXPECT_THROW(Reachability(3, edges), DataError);
}

TEST(Reference, NormalizesStrings) {
  std::vector<std::string> warnings;
  const auto ref = make_reference(Pairs{{"Lung Diseases", "the Diseases"}, {"it", "disease"}},
                                  Groups{{"Asthma", "asthmas"}}, lists(), &warnings);
  EXPECT_EQ(ref.strings, (std::vector<std::string>{"asthma", "disease", "lung disease"}));
  ASSERT_EQ(ref.edges.size(), 1u);
  EXPECT_EQ(ref.strings[ref.edges[0].first], "disease");
  EXPECT_FALSE(warnings.empty());
}

TEST(Reference, OverlappingGroupsAreDataError) {
  EXPECT_THROW(make_reference(Pairs{}, Groups{{"a", "b"}, {"b", "c"}}, lists()), DataError);
  EXPECT_THROW(make_reference(Pairs{{"alpha", "beta"}, {"beta", "alpha"}}, Groups{}, lists()), DataError);
}

TEST(Vocabulary, SixOfTenShared) {
  const auto mine = ours({{"a1"}, {"a2", "a3"}, {"a4"}, {"x1"}, {"x2"}, {"x3", "x4"}, {"a5", "a6"}}, {});
  const auto ref = make_reference(Pairs{{"a1", "a2"}, {"a3", "a2"}, {"a4", "a5"}},
                                  Groups{{"a6", "y1"}, {"y2", "y3"}}, lists());
  EXPECT_EQ(ref.strings.size(), 9u);
  EXPECT_EQ(shared_vocabulary(mine, ref),
            (std::vector<std::string>{"a1", "a2", "a3", "a4", "a5", "a6"}));
}

TEST(Vocabulary, DisjointAbortsEvaluation) {
  const auto mine = ours({{"a"}, {"b"}}, {{0, 1}});
  const auto ref = make_reference(Pairs{{"c", "d"}}, Groups{}, lists());
  EXPECT_TRUE(shared_vocabulary(mine, ref).empty());
  EXPECT_THROW(evaluate(mine, ref), DataError);
}

// Reference: animal -> mammal -> {dog ~ hound, cat}; animal -> bird.
ReferenceOntology animals() {
  return make_reference(Pairs{{"mammal", "animal"}, {"dog", "mammal"}, {"hound", "mammal"},
                              {"cat", "mammal"}, {"bird", "animal"}},
                        Groups{{"dog", "hound"}}, lists());
}

TEST(Hierarchy, ExactPredictionScoresOne) {
  const auto mine = ours({{"animal"}, {"mammal"}, {"dog", "hound"}, {"cat"}, {"bird"}},
                         {{0, 1}, {1, 2}, {1, 3}, {0, 4}});
  const auto report = evaluate(mine, animals());
  EXPECT_EQ(report.hierarchy.precision, 1.0);
  EXPECT_EQ(report.hierarchy.recall, 1.0);
  EXPECT_EQ(report.hierarchy.f1, 1.0);
  EXPECT_EQ(report.direction.consistency, 1.0);
  EXPECT_EQ(report.clustering.entropy, 0.0);
  EXPECT_NEAR(*report.clustering.ari, 1.0, 1e-12);
}

TEST(Hierarchy, GrandparentEdgeCountsAsCorrect) {
  const auto mine = ours({{"animal"}, {"cat"}}, {{0, 1}});
  const auto ref = animals();
  const auto shared = shared_vocabulary(mine, ref);
  const auto h = hierarchy_pr(mine, ref, shared);
  EXPECT_EQ(h.predicted, 1u);
  EXPECT_EQ(h.correct, 1u);
  EXPECT_EQ(h.precision, 1.0);
  // No direct reference edge lies between the two shared strings.
  EXPECT_EQ(h.reference_edges, 0u);
  EXPECT_FALSE(h.recall.has_value());
  EXPECT_FALSE(h.f1.has_value());
}

TEST(Hierarchy, RecallFollowsOurPaths) {
  // animal -> mammal -> cat recovers the direct edge mammal -> cat and
  // animal -> mammal; bird is missing below animal.
  const auto mine = ours({{"animal"}, {"mammal"}, {"cat"}, {"bird"}}, {{0, 1}, {1, 2}, {3, 0}});
  const auto ref = animals();
  const auto h = hierarchy_pr(mine, ref, shared_vocabulary(mine, ref));
  EXPECT_EQ(h.reference_edges, 3u);
  EXPECT_EQ(h.recalled, 2u);
  EXPECT_EQ(h.predicted, 3u);
  EXPECT_EQ(h.correct, 2u);
}

TEST(Direction, OneOfTwoReversed) {
  const auto mine = ours({{"animal"}, {"mammal"}, {"cat"}}, {{0, 1}, {2, 1}});
  const auto ref = animals();
  const auto d = direction_consistency(mine, ref, shared_vocabulary(mine, ref));
  EXPECT_EQ(d.eligible, 2u);
  EXPECT_EQ(d.consistent, 1u);
  EXPECT_EQ(d.consistency, 0.5);
}

TEST(Direction, NoEligibleEdgesIsAbsent) {
  const auto mine = ours({{"dog"}, {"cat"}}, {{0, 1}});
  const auto ref = animals();
  EXPECT_FALSE(direction_consistency(mine, ref, shared_vocabulary(mine, ref)).consistency);
}

TEST(Direction, TenPercentCorruption) {
  // A chain t0 -> t1 -> ... -> t10 with exactly one of ten edges reversed.
  Pairs child_parent;
  Groups groups;
  for (int i = 0; i < 10; ++i) {
    child_parent.emplace_back("t" + std::to_string(i + 1), "t" + std::to_string(i));
  }
  for (int i = 0; i <= 10; ++i) groups.push_back({"t" + std::to_string(i)});
  const auto ref = make_reference(child_parent, Groups{}, lists());
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < 10; ++i) {
    if (i == 4) {
      edges.emplace_back(i + 1, i);
    } else {
      edges.emplace_back(i, i + 1);
    }
  }
  const auto mine = ours(groups, edges);
  const auto d = direction_consistency(mine, ref, shared_vocabulary(mine, ref));
  EXPECT_EQ(d.eligible, 10u);
  EXPECT_EQ(d.consistent, 9u);
  EXPECT_DOUBLE_EQ(*d.consistency, 0.9);
}

TEST(Clustering, SplitGroupLowersAri) {
  const auto mine = ours({{"dog"}, {"hound"}, {"cat"}, {"animal"}}, {});
  const auto ref = animals();
  const auto c = alias_clustering_scores(mine, ref, shared_vocabulary(mine, ref));
  EXPECT_EQ(c.strings, 4u);
  EXPECT_EQ(c.entropy, 0.0);
  ASSERT_TRUE(c.ari);
  EXPECT_LT(*c.ari, 1.0);
  EXPECT_EQ(c.gold_clusters, 3u);
  EXPECT_EQ(c.predicted_clusters, 4u);
}

TEST(Clustering, StringInTwoConceptsGoesToLarger) {
  const auto mine = ours({{"dog", "hound", "il"}, {"il", "cat"}}, {});
  const auto ref = make_reference(Pairs{}, Groups{{"dog", "hound", "il"}, {"cat"}}, lists());
  const auto c = alias_clustering_scores(mine, ref, shared_vocabulary(mine, ref));
  EXPECT_EQ(c.entropy, 0.0);
  EXPECT_NEAR(*c.ari, 1.0, 1e-12);
}

TEST(Clustering, FewerThanTwoStringsIsAbsent) {
  const auto mine = ours({{"dog"}}, {});
  const auto ref = animals();
  const auto c = alias_clustering_scores(mine, ref, shared_vocabulary(mine, ref));
  EXPECT_FALSE(c.entropy);
  EXPECT_FALSE(c.ari);
}

TEST(Report, JsonHasEveryMetric) {
  const auto mine = ours({{"animal"}, {"mammal"}}, {{0, 1}});
  const auto json = nlohmann::json::parse(evaluate(mine, animals()).to_json());
  EXPECT_EQ(json["vocabulary"]["shared"], 2);
  EXPECT_EQ(json["hierarchy"]["precision"], 1.0);
  EXPECT_TRUE(json["hierarchy"].contains("recall"));
  EXPECT_TRUE(json["hierarchy"].contains("f1"));
  EXPECT_EQ(json["direction"]["consistency"], 1.0);
  EXPECT_TRUE(json["aliases"].contains("entropy"));
  EXPECT_TRUE(json["aliases"].contains("ari"));
}

}  // namespace
}  // namespace corefonto
