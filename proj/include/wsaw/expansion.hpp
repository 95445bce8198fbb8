#pragma once

// Lace-expansion coefficients pi_n^(N)(x) on Z^d and on the torus, the expansion
// recursion, the one-loop closed form, and the torus/Z^d difference Delta = T - S.
//
// For a walk with coincidence set E (pairs st with w(s) = w(t)),
//   sum_L prod_{st in L} (-beta U_st) prod_{C(L)} (1 + beta U)  =  sum_{L subset E} (-beta)^N q^{|C(L) & E|}
// with q = 1 - beta.  The torus versions use E^T, the pairs with equal projection.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "wsaw/diagrams.hpp"
#include "wsaw/laces.hpp"
#include "wsaw/lattice.hpp"
#include "wsaw/poly.hpp"
#include "wsaw/walks.hpp"

namespace wsaw {

// rows[N][n][x] = pi_n^(N)(x) >= 0.
struct PiTable {
  LatticeConfig config;
  int n_max = 0;
  int N_max = 0;
  std::vector<PolyRows> rows;

  BetaPolynomial at(int N, int n, const Site& x) const {
    if (N < 1 || N > N_max || n < 0 || n > n_max) return {};
    Site key = config.is_torus() ? canonical_rep(x, config.r) : x;
    const auto& row = rows[static_cast<std::size_t>(N)][static_cast<std::size_t>(n)];
    auto it = row.find(key);
    return it == row.end() ? BetaPolynomial{} : it->second;
  }

  BetaPolynomial total(int N, int n) const {
    BetaPolynomial s;
    for (const auto& [x, p] : rows.at(static_cast<std::size_t>(N)).at(static_cast<std::size_t>(n))) s += p;
    return s;
  }

  // pi_n(x) = sum_N (-1)^N pi_n^(N)(x).
  std::map<Site, BetaPolynomial> signed_row(int n) const {
    std::map<Site, BetaPolynomial> out;
    for (int N = 1; N <= N_max; ++N)
      for (const auto& [x, p] : rows[static_cast<std::size_t>(N)][static_cast<std::size_t>(n)]) {
        if (N % 2 == 0)
          out[x] += p;
        else
          out[x] -= p;
      }
    std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
    return out;
  }
};

// Endpoint-summed Delta^(N)_n = sum_x pi^{T,(N)}_n(x) - sum_x pi^(N)_n(x) and its split.
struct DeltaDecomposition {
  int N = 0;
  std::vector<BetaPolynomial> S, T, Delta;  // indexed by n
};

struct DeltaReport {
  int d = 0, r = 0, n_max = 0, N_max = 0;
  std::vector<DeltaDecomposition> terms;  // terms[N - 1]
  std::uint64_t lace_walk_pairs = 0;       // (walk, lace) pairs with L inside E^T
  std::uint64_t order_violations = 0;      // |C & E| > |C & E^T|
  std::uint64_t inclusion_violations = 0;  // L inside E but not inside E^T
  std::uint64_t negative_walks = 0;        // walks whose P or Q has a negative q-coefficient
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

struct PiOptions {
  EnumOptions enumeration;
  int N_max = -1;  // default: every lace that fits, n_max - 1
};

namespace detail {

struct PiVisitor {
  const LaceCatalog* catalog = nullptr;
  int N_max = 0;
  bool want_z = true, want_t = false, want_delta = false;
  std::vector<HistogramTable<SiteKey, SiteKeyHash>> pz;  // by N
  std::vector<HistogramTable<std::int64_t>> pt;
  // Endpoint-summed histograms in q, by [N][n][power].
  std::vector<std::vector<std::vector<std::uint64_t>>> s_hist, t_hist;
  std::vector<EdgeMask> ez, et;
  std::uint64_t pairs = 0, order_bad = 0, inclusion_bad = 0, walk_bad = 0;

  PiVisitor(const LaceCatalog& cat, int n_max, int N_max_, bool wz, bool wt, bool wd)
      : catalog(&cat), N_max(N_max_), want_z(wz), want_t(wt), want_delta(wd) {
    pz.assign(static_cast<std::size_t>(N_max) + 1, HistogramTable<SiteKey, SiteKeyHash>(n_max));
    pt.assign(static_cast<std::size_t>(N_max) + 1, HistogramTable<std::int64_t>(n_max));
    s_hist.assign(static_cast<std::size_t>(N_max) + 1,
                  std::vector<std::vector<std::uint64_t>>(static_cast<std::size_t>(n_max) + 1));
    t_hist = s_hist;
    ez.assign(static_cast<std::size_t>(n_max) + 1, 0);
    et.assign(static_cast<std::size_t>(n_max) + 1, 0);
  }

  static void bump(std::vector<std::uint64_t>& h, std::size_t k, std::uint64_t c = 1) {
    if (h.size() <= k) h.resize(k + 1, 0);
    h[k] += c;
  }

  void prime(const WalkCursor& w) {
    const int n = w.depth();
    const auto k = static_cast<std::size_t>(n);
    if (n == 0) {
      ez[0] = et[0] = 0;
      return;
    }
    const auto base = static_cast<unsigned>(edge_index(0, n));
    ez[k] = ez[k - 1] | (EdgeMask(w.row_z(n)) << base);
    if (w.torus()) et[k] = et[k - 1] | (EdgeMask(w.row_t(n)) << base);
  }

  void visit(const WalkCursor& w) {
    prime(w);
    const int n = w.depth();
    const auto k = static_cast<std::size_t>(n);
    if (n < 2) return;
    const bool close_z = w.row_z(n) != 0;
    const bool close_t = w.torus() && w.row_t(n) != 0;
    if (!close_z && !close_t) return;  // every lace on [0, n] contains an edge ending at n
    const EdgeMask E = ez[k], ET = et[k];
    std::map<int, std::int64_t> p_walk, q_walk;  // per-walk q-coefficients of P and Q (each scaled by beta^N)
    for (const auto& L : catalog->laces(n)) {
      if (L.N > N_max) continue;
      const bool in_z = (L.lace & ~E) == 0;
      const bool in_t = w.torus() && (L.lace & ~ET) == 0;
      if (!in_z && !in_t) continue;
      const auto N = static_cast<std::size_t>(L.N);
      const int a = popcount(L.compatible & E);
      if (in_z && want_z) pz[N].add(n, w.z_key(), static_cast<std::size_t>(a));
      if (!w.torus()) continue;
      const int c = popcount(L.compatible & ET);
      if (in_t && want_t) pt[N].add(n, w.t_key(), static_cast<std::size_t>(c));
      if (!want_delta) continue;
      if (in_t) ++pairs;
      if (in_z && !in_t) ++inclusion_bad;
      if (in_z && a > c) ++order_bad;
      if (in_z) {
        // beta^N (q^a - q^c) = beta^(N+1) (q^a + ... + q^(c-1)).
        for (int j = a; j < c; ++j) bump(s_hist[N][k], static_cast<std::size_t>(j));
        p_walk[a] += 1;
        p_walk[c] -= 1;
      }
      if (in_t && !in_z) {
        bump(t_hist[N][k], static_cast<std::size_t>(c));
        q_walk[c] += 1;
      }
    }
    if (want_delta) {
      // Q has nonnegative q-coefficients; P = sum (q^a - q^c) with a <= c is a
      // polynomial whose partial sums from the lowest power are nonnegative,
      // which is exactly nonnegativity of (1 - q)^{-1} P in q.
      bool bad = false;
      for (const auto& [e, v] : q_walk) bad = bad || v < 0;
      std::int64_t run = 0;
      for (const auto& [e, v] : p_walk) {
        run += v;
        bad = bad || run < 0;
      }
      if (bad) ++walk_bad;
    }
  }

  void merge(const PiVisitor& o) {
    for (std::size_t N = 0; N < pz.size(); ++N) {
      pz[N].merge(o.pz[N]);
      pt[N].merge(o.pt[N]);
      for (std::size_t n = 0; n < s_hist[N].size(); ++n) {
        for (std::size_t j = 0; j < o.s_hist[N][n].size(); ++j) bump(s_hist[N][n], j, o.s_hist[N][n][j]);
        for (std::size_t j = 0; j < o.t_hist[N][n].size(); ++j) bump(t_hist[N][n], j, o.t_hist[N][n][j]);
      }
    }
    pairs += o.pairs;
    order_bad += o.order_bad;
    inclusion_bad += o.inclusion_bad;
    walk_bad += o.walk_bad;
  }
};

inline int default_N_max(int n_max, int requested) {
  return requested >= 1 ? requested : std::max(1, n_max - 1);
}

inline PiVisitor run_pi(int d, int r, int n_max, int N_max, bool wz, bool wt, bool wd, const EnumOptions& opt) {
  if (n_max > kMaxMaskInterval) throw std::invalid_argument("pi coefficients support n_max <= 15");
  check_budget(d, n_max, opt);
  LaceCatalog catalog(std::max(n_max, 1));
  std::vector<PiVisitor> vis(std::max(1u, opt.workers), PiVisitor(catalog, n_max, N_max, wz, wt, wd));
  for_each_walk(d, r, n_max, vis);
  for (std::size_t i = 1; i < vis.size(); ++i) vis[0].merge(vis[i]);
  return std::move(vis[0]);
}

template <typename Key, typename Hash, typename ToSite>
std::vector<PolyRows> pi_rows(const std::vector<HistogramTable<Key, Hash>>& h, ToSite&& site) {
  std::vector<PolyRows> out(h.size());
  for (std::size_t N = 1; N < h.size(); ++N) {
    out[N].resize(h[N].rows().size());
    for (std::size_t n = 0; n < h[N].rows().size(); ++n)
      for (const auto& [k, counts] : h[N].rows()[n])
        out[N][n].emplace(site(k), BetaPolynomial::from_q_counts<std::uint64_t>(counts, static_cast<int>(N)));
  }
  return out;
}

}  // namespace detail

// Torus tables are computed over Z^d walks with the projected coincidence set.
inline PiTable pi_coefficients(const LatticeConfig& cfg, int n_max, const PiOptions& opt = {}) {
  cfg.validate();
  const int N_max = detail::default_N_max(n_max, opt.N_max);
  const int r = cfg.is_torus() ? cfg.r : 0;
  auto vis = detail::run_pi(cfg.d, r, n_max, N_max, !cfg.is_torus(), cfg.is_torus(), false, opt.enumeration);
  WalkCursor decode(cfg.d, r, n_max);
  PiTable out{cfg, n_max, N_max, {}};
  if (cfg.is_torus())
    out.rows = detail::pi_rows(vis.pt, [&](std::int64_t k) { return decode.t_site(k); });
  else
    out.rows = detail::pi_rows(vis.pz, [&](SiteKey k) { return decode.z_site(k); });
  return out;
}

struct PiPair {
  PiTable infinite, torus;
  DeltaReport delta;
};

// Z^d and torus pi tables and the Delta decomposition in one pass.
inline PiPair pi_and_delta(int d, int r, int n_max, const PiOptions& opt = {}) {
  const int N_max = detail::default_N_max(n_max, opt.N_max);
  auto vis = detail::run_pi(d, r, n_max, N_max, true, true, true, opt.enumeration);
  WalkCursor decode(d, r, n_max);
  PiPair out;
  out.infinite = {LatticeConfig::infinite_lattice(d), n_max, N_max,
                  detail::pi_rows(vis.pz, [&](SiteKey k) { return decode.z_site(k); })};
  out.torus = {LatticeConfig::torus(d, r), n_max, N_max,
               detail::pi_rows(vis.pt, [&](std::int64_t k) { return decode.t_site(k); })};
  auto& rep = out.delta;
  rep.d = d;
  rep.r = r;
  rep.n_max = n_max;
  rep.N_max = N_max;
  rep.lace_walk_pairs = vis.pairs;
  rep.order_violations = vis.order_bad;
  rep.inclusion_violations = vis.inclusion_bad;
  rep.negative_walks = vis.walk_bad;
  if (vis.order_bad) rep.failures.push_back("compatible coincidences on Z^d exceed those on the torus");
  if (vis.inclusion_bad) rep.failures.push_back("a lace inside E is not inside E^T");
  if (vis.walk_bad) rep.failures.push_back("P or Q negative for some walk");
  for (int N = 1; N <= N_max; ++N) {
    DeltaDecomposition dd;
    dd.N = N;
    for (int n = 0; n <= n_max; ++n) {
      const auto& sh = vis.s_hist[static_cast<std::size_t>(N)][static_cast<std::size_t>(n)];
      const auto& th = vis.t_hist[static_cast<std::size_t>(N)][static_cast<std::size_t>(n)];
      dd.S.push_back(BetaPolynomial::from_q_counts<std::uint64_t>(sh, N + 1));
      dd.T.push_back(BetaPolynomial::from_q_counts<std::uint64_t>(th, N));
      BetaPolynomial direct = n >= 2 ? out.torus.total(N, n) - out.infinite.total(N, n) : BetaPolynomial{};
      dd.Delta.push_back(direct);
      if (!(direct == dd.T.back() - dd.S.back()))
        rep.failures.push_back("Delta != T - S at N=" + std::to_string(N) + " n=" + std::to_string(n));
      if (n < r && !(direct.is_zero() && dd.S.back().is_zero() && dd.T.back().is_zero()))
        rep.failures.push_back("Delta nonzero for a walk too short to wrap at N=" + std::to_string(N) +
                               " n=" + std::to_string(n));
    }
    rep.terms.push_back(std::move(dd));
  }
  return out;
}

inline DeltaReport delta_decomposition(const LatticeConfig& cfg, int n_max, const PiOptions& opt = {}) {
  if (!cfg.is_torus()) throw std::invalid_argument("delta_decomposition needs a torus configuration");
  return pi_and_delta(cfg.d, cfg.r, n_max, opt).delta;
}

// Delta^(1)_n (1 - beta) = beta (c^T_n(0) - c_n(0)).
inline std::vector<std::string> delta1_closed_form_check(const TablePair& c, const DeltaReport& delta) {
  std::vector<std::string> failures;
  if (delta.terms.empty()) return failures;
  const Site o = origin(delta.d);
  const BetaPolynomial one_minus_beta({BigInt(1), BigInt(-1)});
  const BetaPolynomial beta = BetaPolynomial::beta_power(1);
  const int n_max = std::min({delta.n_max, c.infinite.n_max, c.torus.n_max});
  for (int n = 2; n <= n_max; ++n) {
    const auto& D = delta.terms[0].Delta[static_cast<std::size_t>(n)];
    if (!(D * one_minus_beta == beta * (c.torus.at(n, o) - c.infinite.at(n, o))))
      failures.push_back("one-loop Delta closed form fails at n=" + std::to_string(n));
  }
  return failures;
}

// Independent slow route: explicit walks (optionally on the torus itself),
// explicit laces, compatibility by re-prescription, direct polynomial products.
inline PiTable pi_coefficients_reference(const LatticeConfig& cfg, int n_max, int N_max, bool walk_on_torus) {
  if (walk_on_torus && !cfg.is_torus()) throw std::invalid_argument("torus walks need a torus configuration");
  const int d = cfg.d;
  PiTable out{cfg, n_max, N_max, std::vector<PolyRows>(static_cast<std::size_t>(N_max) + 1,
                                                       PolyRows(static_cast<std::size_t>(n_max) + 1))};
  const auto q = BetaPolynomial({BigInt(1), BigInt(-1)});
  for (int n = 2; n <= n_max; ++n) {
    struct Entry {
      int N;
      std::vector<Edge> lace, compatible;
    };
    std::vector<Entry> laces;
    for (int N = 1; N <= std::min(N_max, n - 1); ++N)
      for (const auto& L : enumerate_laces(0, n, N)) laces.push_back({N, L.graph.edges, compatible_edges(L)});
    std::vector<Direction> steps(static_cast<std::size_t>(n), 0);
    const int dirs = 2 * d;
    std::int64_t total = 1;
    for (int i = 0; i < n; ++i) total *= dirs;
    for (std::int64_t code = 0; code < total; ++code) {
      std::int64_t rest = code;
      for (int i = 0; i < n; ++i) {
        steps[static_cast<std::size_t>(i)] = static_cast<Direction>(rest % dirs);
        rest /= dirs;
      }
      std::vector<Site> v{origin(d)};
      for (auto s : steps) {
        Site nx = v.back() + unit_step(d, s);
        v.push_back(walk_on_torus ? canonical_rep(nx, cfg.r) : nx);
      }
      auto same = [&](int s, int t) {
        const auto& a = v[static_cast<std::size_t>(s)];
        const auto& b = v[static_cast<std::size_t>(t)];
        if (walk_on_torus || !cfg.is_torus()) return a == b;
        return canonical_rep(a, cfg.r) == canonical_rep(b, cfg.r);
      };
      Site end = cfg.is_torus() ? canonical_rep(v.back(), cfg.r) : v.back();
      for (const auto& e : laces) {
        bool ok = true;
        for (const auto& ed : e.lace) ok = ok && same(ed.s, ed.t);
        if (!ok) continue;
        BetaPolynomial term = BetaPolynomial::beta_power(e.N);
        for (const auto& ed : e.compatible)
          if (same(ed.s, ed.t)) term = term * q;
        out.rows[static_cast<std::size_t>(e.N)][static_cast<std::size_t>(n)][end] += term;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Identities.

struct ExpansionFailure {
  int n = 0;
  Site x;
  BetaPolynomial expected, got;
};

struct ExpansionReport {
  int n_max = 0;
  std::size_t checked_sites = 0;
  std::vector<ExpansionFailure> failures;
  std::vector<std::string> notes;
  bool ok() const { return failures.empty() && notes.empty(); }
};

// c_n(x) = (2dD * c_{n-1})(x) + sum_{m=2}^n (pi_m * c_{n-m})(x), exactly.
inline ExpansionReport verify_lace_expansion(const CoefficientTable& c, const PiTable& pi) {
  if (c.config.d != pi.config.d || c.config.is_torus() != pi.config.is_torus() || c.config.r != pi.config.r)
    throw std::invalid_argument("table geometries differ");
  ExpansionReport rep;
  const int d = c.config.d;
  const int r = c.config.is_torus() ? c.config.r : 0;
  rep.n_max = std::min(c.n_max, pi.n_max);
  // Laces with more than N_max edges must be absent for the identity to close.
  if (pi.N_max < rep.n_max - 1) {
    for (int n = pi.N_max + 2; n <= rep.n_max; ++n)
      rep.notes.push_back("pi table truncated below the largest lace size at n=" + std::to_string(n));
  }
  std::vector<std::map<Site, BetaPolynomial>> pis(static_cast<std::size_t>(rep.n_max) + 1);
  for (int m = 2; m <= rep.n_max; ++m) pis[static_cast<std::size_t>(m)] = pi.signed_row(m);
  for (int n = 1; n <= rep.n_max; ++n) {
    std::map<Site, BetaPolynomial> rhs;
    for (const auto& [x, p] : c.rows[static_cast<std::size_t>(n - 1)])
      for (Direction e = 0; e < 2 * d; ++e) rhs[reduce_site(x + unit_step(d, e), r)] += p;
    for (int m = 2; m <= n; ++m)
      for (auto& [x, p] : convolve_poly(pis[static_cast<std::size_t>(m)], c.rows[static_cast<std::size_t>(n - m)], r))
        rhs[x] += p;
    std::erase_if(rhs, [](const auto& kv) { return kv.second.is_zero(); });
    const auto& lhs = c.rows[static_cast<std::size_t>(n)];
    std::map<Site, bool> sites;
    for (const auto& [x, p] : lhs) sites[x] = true;
    for (const auto& [x, p] : rhs) sites[x] = true;
    for (const auto& [x, flag] : sites) {
      ++rep.checked_sites;
      auto a = lhs.count(x) ? lhs.at(x) : BetaPolynomial{};
      auto b = rhs.count(x) ? rhs.at(x) : BetaPolynomial{};
      if (!(a == b)) rep.failures.push_back({n, x, a, b});
    }
  }
  return rep;
}

// Laces beyond N_max vanish: pi_n^(N) = 0 for N >= n.
inline bool higher_laces_vanish(const PiTable& pi) {
  for (int N = 1; N <= pi.N_max; ++N)
    for (int n = 0; n <= std::min(N, pi.n_max); ++n)
      if (!pi.rows[static_cast<std::size_t>(N)][static_cast<std::size_t>(n)].empty()) return false;
  return true;
}

struct Pi1Report {
  int n_max = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

// pi_n^(1)(0) (1 - beta) = beta c_n(0) and pi_n^(1)(x) = 0 for x != 0.
inline Pi1Report pi1_closed_form_check(const CoefficientTable& c, const PiTable& pi) {
  Pi1Report rep;
  rep.n_max = std::min(c.n_max, pi.n_max);
  const Site o = origin(c.config.d);
  const BetaPolynomial one_minus_beta({BigInt(1), BigInt(-1)});
  const BetaPolynomial beta = BetaPolynomial::beta_power(1);
  for (int n = 2; n <= rep.n_max; ++n) {
    if (!(pi.at(1, n, o) * one_minus_beta == beta * c.at(n, o)))
      rep.failures.push_back("one-loop closed form fails at n=" + std::to_string(n));
    for (const auto& [x, p] : pi.rows[1][static_cast<std::size_t>(n)])
      if (x != o && !p.is_zero()) rep.failures.push_back("pi^(1) nonzero off the origin at n=" + std::to_string(n));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Diagrammatic bounds: sum_x Pi^(N)_z(x) <= beta^N ||G_z||_inf ||G_z * G_z||_inf^{N-1}
// and ||d/dz Pi^(N)_z||_1 <= (2N - 1) beta^N ||d/dz G_z||_inf ||G_z * G_z||_inf^{N-1}
// (2 beta ||d/dz G_z||_inf for N = 1, beta <= 1/2).  Truncated series give a lower
// bound on the left and an upper bound on the right; only LHS_lo > RHS_hi fails.

struct BoundPoint {
  double z = 0, beta = 0;
  int N = 0;
  bool derivative = false;
  double lhs_lo = 0, lhs_hi = 0, rhs_lo = 0, rhs_hi = 0;
  enum class Status { verified, undecidable, violated } status = Status::undecidable;
};

inline const char* to_string(BoundPoint::Status s) {
  switch (s) {
    case BoundPoint::Status::verified: return "verified";
    case BoundPoint::Status::violated: return "violated";
    default: return "undecidable";
  }
}

struct DiagramBoundReport {
  std::vector<BoundPoint> points;
  std::size_t violated = 0, verified = 0, undecidable = 0;
  bool ok() const { return violated == 0; }
};

// Number of N-edge laces on [0, n]: binom(n + N - 3, 2N - 2).
inline double lace_count(int n, int N) {
  if (N == 1) return n >= 1 ? 1.0 : 0.0;
  int top = n + N - 3, k = 2 * N - 2;
  if (top < k) return 0.0;
  double c = 1;
  for (int i = 1; i <= k; ++i) c = c * (top - k + i) / i;
  return c;
}

inline DiagramBoundReport diagrammatic_bound_report(const CoefficientTable& c, const PiTable& pi,
                                                    const std::vector<double>& z_grid,
                                                    const std::vector<double>& beta_grid, int N_max) {
  DiagramBoundReport rep;
  const int d = c.config.d;
  const int r = c.config.is_torus() ? c.config.r : 0;
  const int n_max = std::min(c.n_max, pi.n_max);
  for (double beta : beta_grid) {
    RealRows cr = evaluate_rows(PolyRows(c.rows.begin(), c.rows.begin() + n_max + 1), beta);
    RealRows bub = series_convolve_real(cr, cr, r, n_max);
    std::vector<std::vector<double>> pis(static_cast<std::size_t>(N_max) + 1,
                                         std::vector<double>(static_cast<std::size_t>(n_max) + 1, 0.0));
    for (int N = 1; N <= std::min(N_max, pi.N_max); ++N)
      for (int n = 2; n <= n_max; ++n) pis[static_cast<std::size_t>(N)][static_cast<std::size_t>(n)] = pi.total(N, n).evaluate(beta);
    for (double z : z_grid) {
      const double a = 2 * d * z;
      // Suprema over sites of the truncated series, plus tails valid at every site.
      auto sup_series = [&](const RealRows& rows, auto weight) {
        std::map<Site, double> acc;
        for (int n = 0; n <= n_max; ++n)
          for (const auto& [x, v] : rows[static_cast<std::size_t>(n)]) acc[x] += v * weight(n);
        double m = 0, at0 = acc.count(origin(d)) ? acc[origin(d)] : 0.0;
        for (const auto& [x, v] : acc) m = std::max(m, v);
        return std::pair{m, at0};
      };
      auto [g_sup, g0] = sup_series(cr, [&](int n) { return std::pow(z, n); });
      auto [b_sup, b0] = sup_series(bub, [&](int n) { return std::pow(z, n); });
      auto [dg_sup, dg0] = sup_series(cr, [&](int n) { return n == 0 ? 0.0 : n * std::pow(z, n - 1); });
      const double g_tail = geometric_tail(a, n_max);
      const double b_tail = geometric_tail(a, n_max, 1);
      double dg_tail = 0;
      if (a >= 1) {
        dg_tail = std::numeric_limits<double>::infinity();
      } else if (z > 0) {
        dg_tail = geometric_tail(a, n_max, 1) / z;  // sum n (2d)^n z^(n-1) <= sum (n+1) a^n / z
      }
      const double G_hi = g_sup + g_tail, G_lo = std::max(g0, 0.0);
      const double B_hi = b_sup + b_tail, B_lo = std::max(b0, 0.0);
      const double dG_hi = dg_sup + dg_tail, dG_lo = std::max(dg0, 0.0);
      for (int N = 1; N <= N_max; ++N) {
        for (bool deriv : {false, true}) {
          if (N == 1 && (!deriv || beta > 0.5)) continue;
          BoundPoint p;
          p.z = z;
          p.beta = beta;
          p.N = N;
          p.derivative = deriv;
          double lhs = 0, tail = 0;
          for (int n = 2; n <= n_max; ++n) {
            double v = pis[static_cast<std::size_t>(N)][static_cast<std::size_t>(n)];
            lhs += deriv ? n * v * std::pow(z, n - 1) : v * std::pow(z, n);
          }
          if (a >= 1) {
            tail = std::numeric_limits<double>::infinity();
          } else {
            for (int n = n_max + 1; n < n_max + 100000; ++n) {
              double t = std::pow(beta, N) * lace_count(n, N) * std::pow(a, n) * (deriv ? n / std::max(z, 1e-300) : 1.0);
              tail += t;
              if (t < 1e-18 * tail && n > n_max + 20) break;
            }
          }
          p.lhs_lo = lhs;
          p.lhs_hi = lhs + tail;
          const double bN = std::pow(beta, N);
          if (!deriv) {
            p.rhs_lo = bN * G_lo * std::pow(B_lo, N - 1);
            p.rhs_hi = bN * G_hi * std::pow(B_hi, N - 1);
          } else if (N == 1) {
            p.rhs_lo = 2 * beta * dG_lo;
            p.rhs_hi = 2 * beta * dG_hi;
          } else {
            p.rhs_lo = (2 * N - 1) * bN * dG_lo * std::pow(B_lo, N - 1);
            p.rhs_hi = (2 * N - 1) * bN * dG_hi * std::pow(B_hi, N - 1);
          }
          if (p.lhs_lo > p.rhs_hi)
            p.status = BoundPoint::Status::violated;
          else if (p.lhs_hi <= p.rhs_lo)
            p.status = BoundPoint::Status::verified;
          else
            p.status = BoundPoint::Status::undecidable;
          switch (p.status) {
            case BoundPoint::Status::violated: ++rep.violated; break;
            case BoundPoint::Status::verified: ++rep.verified; break;
            default: ++rep.undecidable;
          }
          rep.points.push_back(p);
        }
      }
    }
  }
  return rep;
}

}  // namespace wsaw
