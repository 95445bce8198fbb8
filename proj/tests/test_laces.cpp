#include <gtest/gtest.h>

#include <set>

#include "wsaw/expansion.hpp"
#include "wsaw/laces.hpp"

using namespace wsaw;

namespace {

std::vector<Edge> all_edges(int n) {
  std::vector<Edge> e;
  for (int t = 1; t <= n; ++t)
    for (int s = 0; s < t; ++s) e.push_back({s, t});
  return e;
}

IntervalGraph subset(int n, const std::vector<Edge>& edges, std::uint64_t bits) {
  std::vector<Edge> g;
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (bits >> i & 1) g.push_back(edges[i]);
  return IntervalGraph(0, n, g);
}

// Independent connectivity oracle: every c = k/2 in (a, b) has an edge with s < c < t.
bool connected_oracle(const IntervalGraph& g) {
  if (g.edges.empty()) return false;
  for (int k = 2 * g.a + 1; k < 2 * g.b; ++k) {
    bool covered = false;
    for (const auto& e : g.edges) covered = covered || (2 * e.s < k && k < 2 * e.t);
    if (!covered) return false;
  }
  return true;
}

}  // namespace

TEST(Laces, ConnectivityExamples) {
  EXPECT_TRUE(is_connected(IntervalGraph(0, 3, {{0, 2}, {1, 3}})));
  EXPECT_FALSE(is_connected(IntervalGraph(0, 3, {{0, 1}, {2, 3}})));
  EXPECT_FALSE(is_connected(IntervalGraph(0, 2, {})));
  EXPECT_FALSE(is_connected(IntervalGraph(0, 2, {{0, 1}, {1, 2}})));  // 1 is not strictly inside an edge
  EXPECT_TRUE(is_connected(IntervalGraph(0, 2, {{0, 2}})));
}

TEST(Laces, ConnectivityMatchesOracle) {
  for (int n = 1; n <= 5; ++n) {
    auto edges = all_edges(n);
    for (std::uint64_t bits = 0; bits < (std::uint64_t(1) << edges.size()); ++bits) {
      auto g = subset(n, edges, bits);
      ASSERT_EQ(is_connected(g), connected_oracle(g)) << "n=" << n << " bits=" << bits;
    }
  }
}

TEST(Laces, PrescriptionExamples) {
  auto L = lace_of(IntervalGraph(0, 3, {{0, 2}, {1, 3}}));
  EXPECT_EQ(L.graph.edges, (std::vector<Edge>{{0, 2}, {1, 3}}));
  EXPECT_EQ(L.ordered, (std::vector<Edge>{{0, 2}, {1, 3}}));
  auto M = lace_of(IntervalGraph(0, 2, {{0, 2}, {0, 1}, {1, 2}}));
  EXPECT_EQ(M.graph.edges, (std::vector<Edge>{{0, 2}}));
  EXPECT_EQ(lace_of(L.graph), L);
}

TEST(Laces, CompatibleEdgeExamples) {
  EXPECT_EQ(compatible_edges(enumerate_laces(0, 2, 1).front()), (std::vector<Edge>{{0, 1}, {1, 2}}));
  auto L = lace_of(IntervalGraph(0, 3, {{0, 2}, {1, 3}}));
  auto C = compatible_edges(L);
  EXPECT_EQ(C, (std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}}));
  EXPECT_EQ(std::find(C.begin(), C.end(), Edge{0, 3}), C.end());
  EXPECT_TRUE(compatible_edges(enumerate_laces(0, 1, 1).front()).empty());
}

TEST(Laces, EnumerationExamples) {
  for (int n = 1; n <= 6; ++n) {
    auto one = enumerate_laces(0, n, 1);
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one.front().graph.edges, (std::vector<Edge>{{0, n}}));
  }
  auto two3 = enumerate_laces(0, 3, 2);
  ASSERT_EQ(two3.size(), 1u);
  EXPECT_EQ(two3.front().graph.edges, (std::vector<Edge>{{0, 2}, {1, 3}}));
  EXPECT_EQ(enumerate_laces(0, 4, 2).size(), 3u);
  EXPECT_TRUE(enumerate_laces(0, 2, 2).empty());
}

// Every connected graph: lace_of is a lace inside it, and adding any compatible edge
// from the complete graph keeps the lace.  Minimally connected subsets are the laces.
TEST(Laces, PrescriptionConsistencyAndCountsExhaustive) {
  for (int n = 1; n <= 6; ++n) {
    auto edges = all_edges(n);
    std::map<int, std::set<std::vector<Edge>>> brute;
    for (std::uint64_t bits = 1; bits < (std::uint64_t(1) << edges.size()); ++bits) {
      auto g = subset(n, edges, bits);
      if (!connected_oracle(g)) continue;
      auto L = lace_of(g);
      ASSERT_TRUE(is_lace(L.graph));
      for (const auto& e : L.graph.edges) ASSERT_TRUE(g.contains(e));
      if (n <= 5) {
        for (const auto& e : compatible_edges(L)) {
          if (g.contains(e)) continue;
          auto more = g.edges;
          more.push_back(e);
          ASSERT_EQ(lace_of(IntervalGraph(0, n, more)), L);
        }
      }
      // Minimal connectivity by brute force.
      bool minimal = true;
      for (std::size_t i = 0; i < g.edges.size() && minimal; ++i) {
        auto rest = g.edges;
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
        minimal = rest.empty() || !connected_oracle(IntervalGraph(0, n, rest));
      }
      if (minimal) brute[static_cast<int>(g.edges.size())].insert(g.edges);
    }
    for (int N = 1; N <= n; ++N) {
      auto laces = enumerate_laces(0, n, N);
      std::set<std::vector<Edge>> got;
      for (const auto& L : laces) got.insert(L.graph.edges);
      EXPECT_EQ(got.size(), laces.size());
      EXPECT_EQ(got, brute[N]) << "n=" << n << " N=" << N;
      EXPECT_EQ(static_cast<double>(laces.size()), lace_count(n, N)) << "n=" << n << " N=" << N;
    }
  }
}

// A graph's lace is unchanged by compatible edges, and changed by any other added edge.
TEST(Laces, CompatibleEdgesCharacterizeLaceClass) {
  for (int n = 2; n <= 5; ++n) {
    auto edges = all_edges(n);
    for (int N = 1; N <= n; ++N)
      for (const auto& L : enumerate_laces(0, n, N)) {
        auto C = compatible_edges(L);
        for (const auto& e : edges) {
          if (L.graph.contains(e)) continue;
          auto more = L.graph.edges;
          more.push_back(e);
          bool same = lace_of(IntervalGraph(0, n, more)) == L;
          EXPECT_EQ(same, std::find(C.begin(), C.end(), e) != C.end());
        }
      }
  }
}

TEST(Laces, PartitionIdentity) {
  for (int n = 1; n <= 5; ++n) {
    auto rep = partition_identity_check(n);
    EXPECT_TRUE(rep.ok()) << "n=" << n;
    EXPECT_EQ(rep.monomials, rep.connected_graphs);
  }
}

TEST(Laces, MaskCatalogMatchesLists) {
  LaceCatalog cat(7);
  for (int n = 1; n <= 7; ++n) {
    std::size_t expect = 0;
    for (int N = 1; N <= n; ++N) expect += enumerate_laces(0, n, N).size();
    EXPECT_EQ(cat.laces(n).size(), expect);
    for (const auto& lm : cat.laces(n)) {
      EXPECT_EQ(popcount(lm.lace), lm.N);
      EXPECT_EQ(lm.lace & lm.compatible, EdgeMask(0));
    }
  }
  EXPECT_THROW(LaceCatalog(16), std::invalid_argument);
}
