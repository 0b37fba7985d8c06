#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include "corefonto/centrality.hpp"
#include "corefonto/error.hpp"
#include "support.hpp"

namespace corefonto {
namespace {

using testing::brute_force_betweenness;
using testing::graph_from_pairs;

CorefGraph path3() { return graph_from_pairs(3, {{0, 1}, {1, 2}}); }

CorefGraph star4() { return graph_from_pairs(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}); }

TEST(ExactBetweenness, PathGraph) {
  const auto s = exact_betweenness(path3());
  EXPECT_EQ(s[0], 0.0);
  EXPECT_EQ(s[1], 1.0);
  EXPECT_EQ(s[2], 0.0);
}

TEST(ExactBetweenness, StarCentre) {
  const auto s = exact_betweenness(star4());
  EXPECT_EQ(s[0], 6.0);
  for (NodeId leaf = 1; leaf <= 4; ++leaf) EXPECT_EQ(s[leaf], 0.0);
}

TEST(ExactBetweenness, SquareSplitsPaths) {
  // 4-cycle: each opposite pair has two shortest paths.
  const auto s = exact_betweenness(graph_from_pairs(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}));
  for (NodeId v = 0; v < 4; ++v) EXPECT_DOUBLE_EQ(s[v], 0.5);
}

TEST(ExactBetweenness, IsolatedAndDisconnected) {
  const auto s = exact_betweenness(graph_from_pairs(6, {{0, 1}, {1, 2}, {3, 4}}));
  EXPECT_EQ(s[1], 1.0);
  EXPECT_EQ(s[3], 0.0);
  EXPECT_EQ(s[5], 0.0);
}

TEST(ExactBetweenness, MatchesBruteForceOracle) {
  Rng rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng.below(30);
    const double p = 0.05 + 0.4 * rng.uniform();
    const auto g = testing::random_graph(rng, n, p);
    const auto fast = exact_betweenness(g);
    const auto slow = brute_force_betweenness(g);
    for (NodeId v = 0; v < n; ++v) {
      EXPECT_TRUE(testing::close_relative(fast[v], slow[v], 1e-9))
          << "trial " << trial << " node " << v << ": " << fast[v] << " vs " << slow[v];
    }
  }
}

TEST(ExactBetweenness, ThreadCountDoesNotChangeBits) {
  Rng rng(11);
  const auto g = testing::random_graph(rng, 150, 0.04);
  const auto one = exact_betweenness(g, 1);
  for (unsigned t : {2u, 3u, 8u}) EXPECT_EQ(exact_betweenness(g, t).values, one.values);
}

TEST(PathCounts, SigmaIsSumOverPredecessors) {
  Rng rng(3);
  const auto g = testing::random_graph(rng, 25, 0.2);
  const auto pc = single_source_paths(g, 0);
  EXPECT_EQ(pc.sigma[0], 1.0);
  EXPECT_EQ(pc.distance[0], 0);
  for (NodeId v = 1; v < g.node_count(); ++v) {
    if (pc.distance[v] < 0) continue;
    double sum = 0;
    for (auto p : pc.predecessors[v]) {
      EXPECT_EQ(pc.distance[p] + 1, pc.distance[v]);
      sum += pc.sigma[p];
    }
    EXPECT_EQ(sum, pc.sigma[v]);
  }
}

TEST(SamplePivots, DistinctAndReproducible) {
  const auto a = sample_pivots(100, {40, 5});
  const auto b = sample_pivots(100, {40, 5});
  EXPECT_EQ(a, b);
  EXPECT_EQ(std::set<NodeId>(a.begin(), a.end()).size(), 40u);
  EXPECT_NE(sample_pivots(100, {40, 6}), a);
  EXPECT_THROW(sample_pivots(10, {11, 0}), UsageError);
  EXPECT_THROW(sample_pivots(10, {0, 0}), UsageError);
}

TEST(ApproxBetweenness, FullSamplingOnPath) {
  const auto s = approx_betweenness(path3(), {3, 1});
  EXPECT_EQ(s[1], 1.0);
  EXPECT_EQ(s[0], 0.0);
}

TEST(ApproxBetweenness, FullSamplingMatchesExact) {
  Rng rng(5);
  const auto g = testing::random_graph(rng, 120, 0.05);
  const auto exact = exact_betweenness(g);
  const auto approx = approx_betweenness(g, {static_cast<std::uint32_t>(g.node_count()), 9});
  for (NodeId v = 0; v < g.node_count(); ++v) {
    EXPECT_TRUE(testing::close_relative(approx[v], exact[v], 1e-9));
  }
}

TEST(ApproxBetweenness, DeterministicAcrossThreads) {
  Rng rng(8);
  const auto g = testing::random_graph(rng, 200, 0.03);
  const PivotConfig cfg{50, 123};
  const auto one = approx_betweenness(g, cfg, 1);
  EXPECT_EQ(approx_betweenness(g, cfg, 1).values, one.values);
  EXPECT_EQ(approx_betweenness(g, cfg, 4).values, one.values);
}

TEST(ApproxBetweenness, TooManyPivotsIsError) {
  EXPECT_THROW(approx_betweenness(path3(), {4, 1}), UsageError);
}

TEST(PivotWarning, BelowLogTwoOfNodeCount) {
  EXPECT_TRUE(pivot_warning(1024, {10, 0}));
  EXPECT_TRUE(pivot_warning(1024, {5, 0}));
  EXPECT_FALSE(pivot_warning(1024, {11, 0}));
}

TEST(OrderEdges, ThreeKinds) {
  // Path a-b-c plus a pendant pair d-e, and a square for equal nonzero scores.
  const auto g = graph_from_pairs(9, {{0, 1}, {1, 2}, {3, 4}, {5, 6}, {6, 7}, {7, 8}, {8, 5}});
  const auto s = exact_betweenness(g);
  const auto order = order_edges(g, s);
  ASSERT_EQ(order.size(), g.edge_count());
  EXPECT_EQ(order[0], (EdgeOrder{EdgeOrdering::Directed, 1, 0}));
  EXPECT_EQ(order[1], (EdgeOrder{EdgeOrdering::Directed, 1, 2}));
  EXPECT_EQ(order[2].kind, EdgeOrdering::BothZero);
  for (std::size_t e = 3; e < order.size(); ++e) EXPECT_EQ(order[e].kind, EdgeOrdering::TieNonZero);
}

TEST(OrderEdges, TieToleranceIsRelative) {
  const auto g = graph_from_pairs(2, {{0, 1}});
  CentralityScores s{{1e6, 1e6 * (1 + 1e-12)}};
  EXPECT_EQ(order_edges(g, s)[0].kind, EdgeOrdering::TieNonZero);
  s.values[1] = 1e6 * (1 + 1e-6);
  EXPECT_EQ(order_edges(g, s)[0], (EdgeOrder{EdgeOrdering::Directed, 1, 0}));
}

TEST(ConflictRate, CountsDisagreeingEdges) {
  const auto g = graph_from_pairs(3, {{0, 1}, {1, 2}});
  const std::vector<CentralityScores> runs = {{{0, 2, 1}}, {{0, 2, 3}}};
  EXPECT_DOUBLE_EQ(ordering_conflict_rate(g, runs), 0.5);
}

TEST(Spearman, KnownValues) {
  const std::vector<double> a = {1, 2, 3, 4, 5};
  const std::vector<double> b = {5, 6, 7, 8, 7};
  // Ranks of b with ties averaged: 1, 2, 3.5, 5, 3.5.
  EXPECT_NEAR(spearman_correlation(a, a), 1.0, 1e-12);
  const std::vector<double> rev = {5, 4, 3, 2, 1};
  EXPECT_NEAR(spearman_correlation(a, rev), -1.0, 1e-12);
  const double rb[] = {1, 2, 3.5, 5, 3.5};
  double mb = 0;
  for (double x : rb) mb += x / 5;
  double cov = 0, va = 0, vb = 0;
  for (int i = 0; i < 5; ++i) {
    cov += (i + 1 - 3.0) * (rb[i] - mb);
    va += (i + 1 - 3.0) * (i + 1 - 3.0);
    vb += (rb[i] - mb) * (rb[i] - mb);
  }
  EXPECT_NEAR(spearman_correlation(a, b), cov / std::sqrt(va * vb), 1e-12);
  const std::vector<double> flat = {1, 1, 1, 1, 1};
  EXPECT_TRUE(std::isnan(spearman_correlation(a, flat)));
}

TEST(ScoresFile, RoundTripsExactly) {
  Rng rng(2);
  const auto s = exact_betweenness(testing::random_graph(rng, 40, 0.1));
  std::stringstream ss;
  write_scores(s, ss);
  EXPECT_EQ(read_scores(ss).values, s.values);
}

TEST(ScoresFile, RejectsBadLines) {
  std::stringstream gap("0 1\n2 1\n");
  EXPECT_THROW(read_scores(gap), DataError);
  std::stringstream negative("0 -1\n");
  EXPECT_THROW(read_scores(negative), DataError);
  std::stringstream junk("0 abc\n");
  EXPECT_THROW(read_scores(junk), DataError);
}

}  // namespace
}  // namespace corefonto
