#include <gtest/gtest.h>

#include <functional>
#include <vector>

#include "corefonto/louvain.hpp"
#include "corefonto/random.hpp"

namespace corefonto {
namespace {

SimpleGraph clique_pair(std::size_t a, std::size_t b) {
  SimpleGraph g{a + b, {}};
  for (std::uint32_t i = 0; i < a; ++i)
    for (std::uint32_t j = i + 1; j < a; ++j) g.edges.push_back({i, j, 1.0});
  for (std::uint32_t i = 0; i < b; ++i)
    for (std::uint32_t j = i + 1; j < b; ++j)
      g.edges.push_back({static_cast<std::uint32_t>(a + i), static_cast<std::uint32_t>(a + j), 1.0});
  g.edges.push_back({static_cast<std::uint32_t>(a - 1), static_cast<std::uint32_t>(a), 1.0});
  return g;
}

// Modularity from the textbook formula over the adjacency matrix.
double modularity_oracle(const SimpleGraph& g, const std::vector<std::uint32_t>& c) {
  std::vector<std::vector<double>> A(g.n, std::vector<double>(g.n, 0.0));
  for (const auto& e : g.edges) {
    if (e.a == e.b) {
      A[e.a][e.a] += 2 * e.weight;
    } else {
      A[e.a][e.b] += e.weight;
      A[e.b][e.a] += e.weight;
    }
  }
  std::vector<double> k(g.n, 0.0);
  double two_m = 0;
  for (std::size_t i = 0; i < g.n; ++i) {
    for (std::size_t j = 0; j < g.n; ++j) k[i] += A[i][j];
    two_m += k[i];
  }
  if (two_m == 0) return 0.0;
  double q = 0;
  for (std::size_t i = 0; i < g.n; ++i)
    for (std::size_t j = 0; j < g.n; ++j)
      if (c[i] == c[j]) q += A[i][j] - k[i] * k[j] / two_m;
  return q / two_m;
}

// Best modularity over every set partition (restricted growth strings).
double best_modularity(const SimpleGraph& g, std::vector<std::uint32_t>* argmax = nullptr) {
  std::vector<std::uint32_t> c(g.n, 0);
  double best = -1.0;
  std::function<void(std::size_t, std::uint32_t)> rec = [&](std::size_t i, std::uint32_t used) {
    if (i == g.n) {
      const double q = modularity_oracle(g, c);
      if (q > best + 1e-12) {
        best = q;
        if (argmax) *argmax = c;
      }
      return;
    }
    for (std::uint32_t k = 0; k <= used && k < g.n; ++k) {
      c[i] = k;
      rec(i + 1, std::max(used, k + 1));
    }
  };
  c[0] = 0;
  rec(1, 1);
  return best;
}

TEST(Modularity, MatchesMatrixFormula) {
  Rng rng(1);
  for (int t = 0; t < 50; ++t) {
    SimpleGraph g{7, {}};
    for (std::uint32_t i = 0; i < 7; ++i)
      for (std::uint32_t j = i; j < 7; ++j)
        if (rng.chance(0.3)) g.edges.push_back({i, j, 0.5 + rng.uniform()});
    std::vector<std::uint32_t> c(7);
    for (auto& x : c) x = static_cast<std::uint32_t>(rng.below(3));
    EXPECT_NEAR(modularity(g, c), modularity_oracle(g, c), 1e-12);
  }
}

TEST(Louvain, TwoFourCliquesMatchBruteForce) {
  const auto g = clique_pair(4, 4);
  std::vector<std::uint32_t> best;
  const double q = best_modularity(g, &best);
  const auto r = louvain(g);
  EXPECT_EQ(r.community, best);
  EXPECT_EQ(r.count, 2u);
  EXPECT_NEAR(modularity(g, r.community), q, 1e-12);
}

TEST(Louvain, CliquePairsOfSizesThreeToSix) {
  for (std::size_t a = 3; a <= 6; ++a) {
    for (std::size_t b = 3; b <= 6; ++b) {
      const auto r = louvain(clique_pair(a, b));
      ASSERT_EQ(r.count, 2u) << a << "+" << b;
      for (std::size_t i = 0; i < a + b; ++i) EXPECT_EQ(r.community[i], i < a ? 0u : 1u);
    }
  }
}

TEST(Louvain, SingleEdgeMerges) {
  const SimpleGraph g{2, {{0, 1, 1.0}}};
  const auto r = louvain(g);
  EXPECT_EQ(r.count, 1u);
  // Both partitions of a dyad: together 0, apart -0.5.
  EXPECT_NEAR(modularity_oracle(g, {0, 0}), 0.0, 1e-12);
  EXPECT_NEAR(modularity_oracle(g, {0, 1}), -0.5, 1e-12);
}

TEST(Louvain, NoEdgesGivesSingletons) {
  const auto r = louvain(SimpleGraph{3, {}});
  EXPECT_EQ(r.count, 3u);
  EXPECT_EQ(r.community, (std::vector<std::uint32_t>{0, 1, 2}));
}

TEST(Louvain, PassModularityNeverDecreases) {
  Rng rng(99);
  for (int t = 0; t < 200; ++t) {
    SimpleGraph g{5 + rng.below(30), {}};
    const double p = 0.05 + 0.3 * rng.uniform();
    for (std::uint32_t i = 0; i < g.n; ++i)
      for (std::uint32_t j = i + 1; j < g.n; ++j)
        if (rng.chance(p)) g.edges.push_back({i, j, 1.0});
    const auto r = louvain(g);
    ASSERT_FALSE(r.pass_modularity.empty());
    for (std::size_t i = 1; i < r.pass_modularity.size(); ++i) {
      EXPECT_GE(r.pass_modularity[i], r.pass_modularity[i - 1] - 1e-12);
    }
    EXPECT_NEAR(r.pass_modularity.back(), modularity(g, r.community), 1e-12);
    EXPECT_EQ(r.community[0], 0u);
  }
}

TEST(Louvain, NearOptimalOnSmallGraphs) {
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    SimpleGraph g{8, {}};
    for (std::uint32_t i = 0; i < 8; ++i)
      for (std::uint32_t j = i + 1; j < 8; ++j)
        if (rng.chance(0.35)) g.edges.push_back({i, j, 1.0});
    const double q = louvain(g).pass_modularity.back();
    EXPECT_LE(q, best_modularity(g) + 1e-12);
  }
}

TEST(Louvain, Deterministic) {
  const auto g = clique_pair(5, 3);
  EXPECT_EQ(louvain(g).community, louvain(g).community);
}

}  // namespace
}  // namespace corefonto
