#pragma once

// Graphs on integer intervals, laces, the lace prescription and compatible edges.

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace wsaw {

struct Edge {
  int s = 0;
  int t = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct IntervalGraph {
  int a = 0;
  int b = 1;
  std::vector<Edge> edges;  // sorted, distinct

  IntervalGraph() = default;
  IntervalGraph(int a_, int b_, std::vector<Edge> e) : a(a_), b(b_), edges(std::move(e)) {
    if (a >= b) throw std::invalid_argument("interval requires a < b");
    for (const auto& ed : edges)
      if (!(a <= ed.s && ed.s < ed.t && ed.t <= b)) throw std::invalid_argument("edge outside interval");
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) throw std::invalid_argument("duplicate edge");
  }

  bool contains(const Edge& e) const { return std::binary_search(edges.begin(), edges.end(), e); }

  friend bool operator==(const IntervalGraph&, const IntervalGraph&) = default;
};

// A lace keeps the prescription order s_1 t_1, ..., s_N t_N (increasing t).
struct Lace {
  IntervalGraph graph;
  std::vector<Edge> ordered;

  std::size_t size() const { return ordered.size(); }
  friend bool operator==(const Lace& x, const Lace& y) { return x.graph == y.graph; }
};

inline bool is_connected(const IntervalGraph& g) {
  bool a_end = false, b_end = false;
  for (const auto& e : g.edges) {
    a_end = a_end || e.s == g.a;
    b_end = b_end || e.t == g.b;
  }
  if (!a_end || !b_end) return false;
  // Union of open intervals (s, t) must be (a, b): every interior integer strictly covered.
  std::vector<int> reach(static_cast<std::size_t>(g.b - g.a + 1), g.a);
  for (const auto& e : g.edges) {
    auto& r = reach[static_cast<std::size_t>(e.s - g.a)];
    r = std::max(r, e.t);
  }
  int best = g.a;
  for (int c = g.a + 1; c < g.b; ++c) {
    best = std::max(best, reach[static_cast<std::size_t>(c - 1 - g.a)]);
    if (best <= c) return false;
  }
  return true;
}

namespace detail {

// The prescription on a connected graph, or nullopt when it stalls.
inline std::optional<std::vector<Edge>> prescribe(const IntervalGraph& g) {
  std::vector<Edge> out;
  int t = -1;
  for (const auto& e : g.edges)
    if (e.s == g.a) t = std::max(t, e.t);
  if (t < 0) return std::nullopt;
  out.push_back({g.a, t});
  while (t != g.b) {
    int next = -1;
    for (const auto& e : g.edges)
      if (e.s < t) next = std::max(next, e.t);
    if (next <= t) return std::nullopt;
    int s = next;
    for (const auto& e : g.edges)
      if (e.t == next) s = std::min(s, e.s);
    out.push_back({s, next});
    t = next;
  }
  return out;
}

}  // namespace detail

inline Lace lace_of(const IntervalGraph& g) {
  if (!is_connected(g)) throw std::invalid_argument("lace_of requires a connected graph");
  auto ordered = detail::prescribe(g);
  if (!ordered) throw std::logic_error("lace prescription stalled on a connected graph");
  return Lace{IntervalGraph(g.a, g.b, *ordered), *ordered};
}

inline bool is_lace(const IntervalGraph& g) {
  if (!is_connected(g)) return false;
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    auto rest = g.edges;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
    if (is_connected(IntervalGraph(g.a, g.b, rest))) return false;
  }
  return true;
}

inline std::vector<Edge> compatible_edges(const Lace& L) {
  std::vector<Edge> out;
  const auto& g = L.graph;
  for (int s = g.a; s < g.b; ++s)
    for (int t = s + 1; t <= g.b; ++t) {
      Edge e{s, t};
      if (g.contains(e)) continue;
      auto edges = g.edges;
      edges.push_back(e);
      if (lace_of(IntervalGraph(g.a, g.b, std::move(edges))) == L) out.push_back(e);
    }
  return out;
}

// All N-edge laces on [a, b], generated from the endpoint ordering
// a = s_1 < s_2,  s_{l+1} < t_l <= s_{l+2},  s_N < t_{N-1} < t_N = b.
inline std::vector<Lace> enumerate_laces(int a, int b, int N) {
  if (N < 1) throw std::invalid_argument("lace size must be positive");
  if (b - a < 1) throw std::invalid_argument("interval requires a < b");
  std::vector<Lace> out;
  if (N == 1) {
    std::vector<Edge> e{{a, b}};
    out.push_back(Lace{IntervalGraph(a, b, e), e});
    return out;
  }
  std::vector<int> s(static_cast<std::size_t>(N) + 1), t(static_cast<std::size_t>(N) + 1);
  s[1] = a;
  t[static_cast<std::size_t>(N)] = b;
  auto emit = [&] {
    std::vector<Edge> e;
    for (int l = 1; l <= N; ++l) e.push_back({s[static_cast<std::size_t>(l)], t[static_cast<std::size_t>(l)]});
    out.push_back(Lace{IntervalGraph(a, b, e), e});
  };
  // Having fixed s_{l+1} and the lower limit for t_l, choose t_l and continue.
  auto rec = [&](auto&& self, int l) -> void {
    auto L = static_cast<std::size_t>(l);
    if (l == N - 1) {
      for (int tl = s[L + 1] + 1; tl < b; ++tl) {
        if (l >= 2 && tl <= t[L - 1]) continue;
        t[L] = tl;
        emit();
      }
      return;
    }
    for (int tl = s[L + 1] + 1; tl < b; ++tl) {
      if (l >= 2 && tl <= t[L - 1]) continue;
      t[L] = tl;
      for (int sn = tl; sn < b; ++sn) {
        s[L + 2] = sn;
        self(self, l + 1);
      }
    }
  };
  for (int s2 = a + 1; s2 < b; ++s2) {
    s[2] = s2;
    rec(rec, 1);
  }
  return out;
}

// Bitmask form used by the walk kernels.  Edge st on [0, n] has index t(t-1)/2 + s.
using EdgeMask = unsigned __int128;

constexpr int kMaxMaskInterval = 15;

constexpr int edge_index(int s, int t) { return t * (t - 1) / 2 + s; }

inline EdgeMask edge_bit(int s, int t) { return EdgeMask(1) << edge_index(s, t); }

inline int popcount(EdgeMask m) {
  return std::popcount(static_cast<std::uint64_t>(m)) + std::popcount(static_cast<std::uint64_t>(m >> 64));
}

inline EdgeMask mask_of(const std::vector<Edge>& edges) {
  EdgeMask m = 0;
  for (const auto& e : edges) m |= edge_bit(e.s, e.t);
  return m;
}

struct LaceMasks {
  int N = 0;
  EdgeMask lace = 0;
  EdgeMask compatible = 0;
};

// Every lace on [0, n] with its compatible-edge set, for n <= kMaxMaskInterval.
class LaceCatalog {
 public:
  explicit LaceCatalog(int n_max) : by_length_(static_cast<std::size_t>(n_max) + 1) {
    if (n_max > kMaxMaskInterval) throw std::invalid_argument("lace catalog supports intervals up to length 15");
    for (int n = 1; n <= n_max; ++n)
      for (int N = 1; N <= n; ++N) {
        auto laces = enumerate_laces(0, n, N);
        if (laces.empty()) break;
        for (const auto& L : laces)
          by_length_[static_cast<std::size_t>(n)].push_back({N, mask_of(L.graph.edges), mask_of(compatible_edges(L))});
      }
  }

  const std::vector<LaceMasks>& laces(int n) const { return by_length_.at(static_cast<std::size_t>(n)); }
  int n_max() const { return static_cast<int>(by_length_.size()) - 1; }

 private:
  std::vector<std::vector<LaceMasks>> by_length_;
};

// Brute-force check on [0, n] of the multilinear identity in formal edge variables
//   sum_{G connected} prod_{st in G} u_st = sum_L prod_{st in L} u_st prod_{s't' in C(L)} (1 + u_s't').
// Monomials are edge subsets; coefficients are compared exactly.
struct PartitionIdentityReport {
  int n = 0;
  std::size_t connected_graphs = 0;
  std::size_t laces = 0;
  std::size_t monomials = 0;
  std::size_t mismatches = 0;
  bool ok() const { return mismatches == 0; }
};

inline PartitionIdentityReport partition_identity_check(int n) {
  if (n < 1 || n > 6) throw std::invalid_argument("partition identity check supports 1 <= n <= 6");
  PartitionIdentityReport rep;
  rep.n = n;
  std::vector<Edge> all;
  for (int t = 1; t <= n; ++t)
    for (int s = 0; s < t; ++s) all.push_back({s, t});
  const std::uint64_t subsets = std::uint64_t(1) << all.size();
  std::map<EdgeMask, std::int64_t> lhs, rhs;
  for (std::uint64_t m = 1; m < subsets; ++m) {
    std::vector<Edge> e;
    for (std::size_t i = 0; i < all.size(); ++i)
      if (m >> i & 1) e.push_back(all[i]);
    if (is_connected(IntervalGraph(0, n, e))) {
      ++lhs[mask_of(e)];
      ++rep.connected_graphs;
    }
  }
  for (int N = 1; N <= n; ++N)
    for (const auto& L : enumerate_laces(0, n, N)) {
      ++rep.laces;
      const auto C = compatible_edges(L);
      const EdgeMask base = mask_of(L.graph.edges);
      for (std::uint64_t m = 0; m < (std::uint64_t(1) << C.size()); ++m) {
        EdgeMask mono = base;
        for (std::size_t i = 0; i < C.size(); ++i)
          if (m >> i & 1) mono |= edge_bit(C[i].s, C[i].t);
        ++rhs[mono];
      }
    }
  std::map<EdgeMask, bool> keys;
  for (const auto& [k, v] : lhs) keys[k] = true;
  for (const auto& [k, v] : rhs) keys[k] = true;
  rep.monomials = keys.size();
  for (const auto& [k, flag] : keys) {
    auto a = lhs.count(k) ? lhs.at(k) : 0, b = rhs.count(k) ? rhs.at(k) : 0;
    if (a != b) ++rep.mismatches;
  }
  return rep;
}

}  // namespace wsaw
