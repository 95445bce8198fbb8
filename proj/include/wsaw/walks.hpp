#pragma once

// Exact enumeration of weakly self-avoiding walks.
//
// A walk's weight is (1 - beta)^m with m the number of pairs s < t at the same
// site.  Appending a vertex creates as many new pairs as earlier visits to that
// site, so the DFS carries, for each time t, the bitmask of earlier times that
// coincide with it (on Z^d and under torus projection).

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "wsaw/lattice.hpp"
#include "wsaw/poly.hpp"

namespace wsaw {

struct PairCounts {
  std::int64_t m_exact = 0;
  std::int64_t m_plus = 0;
  std::int64_t m_torus() const { return m_exact + m_plus; }
  friend bool operator==(const PairCounts&, const PairCounts&) = default;
};

inline PairCounts pair_counts(const WalkPath& w, const LatticeConfig& cfg) {
  auto v = w.vertices();
  PairCounts pc;
  for (std::size_t t = 1; t < v.size(); ++t)
    for (std::size_t s = 0; s < t; ++s) {
      if (v[s] == v[t]) {
        ++pc.m_exact;
      } else if (cfg.is_torus() && canonical_rep(v[s], cfg.r) == canonical_rep(v[t], cfg.r)) {
        ++pc.m_plus;
      }
    }
  return pc;
}

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(long double required, long double budget)
      : std::runtime_error(message(required, budget)), required_(required), budget_(budget) {}
  long double required() const { return required_; }
  long double budget() const { return budget_; }

 private:
  static std::string message(long double required, long double budget) {
    std::ostringstream os;
    os << "enumeration needs " << static_cast<double>(required) << " walk extensions, budget is "
       << static_cast<double>(budget);
    return os.str();
  }
  long double required_, budget_;
};

struct EnumOptions {
  long double budget = 17179869184.0L;  // 2^34
  unsigned workers = 1;
};

// Number of walk extensions in a full DFS to depth n.
inline long double walk_extensions(int d, int n) {
  long double total = 0, p = 1;
  for (int t = 1; t <= n; ++t) {
    p *= 2 * d;
    total += p;
  }
  return total;
}

inline void check_budget(int d, int n, const EnumOptions& opt) {
  long double need = walk_extensions(d, n);
  if (need > opt.budget) throw BudgetExceeded(need, opt.budget);
}

using SiteKey = unsigned __int128;

struct SiteKeyHash {
  std::size_t operator()(SiteKey k) const {
    auto lo = static_cast<std::uint64_t>(k), hi = static_cast<std::uint64_t>(k >> 64);
    std::uint64_t h = lo * 0x9E3779B97F4A7C15ULL ^ (hi + 0x632BE59BD9B4E019ULL + (lo << 6) + (lo >> 2));
    h ^= h >> 31;
    return static_cast<std::size_t>(h * 0xBF58476D1CE4E5B9ULL);
  }
};

// Depth-first walk tree with incremental Z^d and torus site keys.
class WalkCursor {
 public:
  static constexpr int kMaxDepth = 63;

  WalkCursor(int d, int r, int n_max) : d_(d), r_(r), n_max_(n_max) {
    if (n_max < 0 || n_max > kMaxDepth) throw std::invalid_argument("walk length must lie in [0, 63]");
    radix_ = static_cast<SiteKey>(2 * n_max + 1);
    SiteKey p = 1;
    long double check = 1;
    for (int a = 0; a < d; ++a) {
      zpow_.push_back(p);
      p *= radix_;
      check *= static_cast<long double>(2 * n_max + 1);
    }
    if (check > 1.0e37L) throw std::invalid_argument("site keys overflow 128 bits for this (d, n)");
    SiteKey origin_key = 0;
    for (int a = 0; a < d; ++a) origin_key += static_cast<SiteKey>(n_max) * zpow_[static_cast<std::size_t>(a)];
    std::int64_t s = 1;
    for (int a = 0; a < d && r_ > 0; ++a) {
      tstride_.push_back(s);
      s *= r_;
    }
    zkey_.assign(static_cast<std::size_t>(n_max) + 1, 0);
    tkey_.assign(static_cast<std::size_t>(n_max) + 1, 0);
    row_z_.assign(static_cast<std::size_t>(n_max) + 1, 0);
    row_t_.assign(static_cast<std::size_t>(n_max) + 1, 0);
    steps_.assign(static_cast<std::size_t>(n_max), 0);
    tcoord_.assign(static_cast<std::size_t>(d), 0);
    zkey_[0] = origin_key;
  }

  int dim() const { return d_; }
  int side() const { return r_; }
  int depth() const { return t_; }
  int n_max() const { return n_max_; }
  bool torus() const { return r_ > 0; }

  SiteKey z_key() const { return zkey_[static_cast<std::size_t>(t_)]; }
  std::int64_t t_key() const { return tkey_[static_cast<std::size_t>(t_)]; }
  // Bit s set iff vertex s coincides with vertex t.
  std::uint64_t row_z(int t) const { return row_z_[static_cast<std::size_t>(t)]; }
  std::uint64_t row_t(int t) const { return row_t_[static_cast<std::size_t>(t)]; }
  const std::vector<Direction>& steps() const { return steps_; }

  Site z_site(SiteKey key) const {
    Site x(static_cast<std::size_t>(d_));
    for (int a = 0; a < d_; ++a) {
      x[static_cast<std::size_t>(a)] = static_cast<Coord>(key % radix_) - n_max_;
      key /= radix_;
    }
    return x;
  }
  Site t_site(std::int64_t key) const { return torus_site(key, d_, r_); }

  void push(Direction dir) {
    const auto axis = static_cast<std::size_t>(dir / 2);
    const bool plus = dir % 2 == 0;
    const auto t = static_cast<std::size_t>(t_);
    steps_[t] = dir;
    zkey_[t + 1] = plus ? zkey_[t] + zpow_[axis] : zkey_[t] - zpow_[axis];
    std::uint64_t rz = 0;
    for (std::size_t s = 0; s <= t; ++s)
      if (zkey_[s] == zkey_[t + 1]) rz |= std::uint64_t(1) << s;
    row_z_[t + 1] = rz;
    if (r_ > 0) {
      auto& c = tcoord_[axis];
      std::int64_t k = tkey_[t];
      if (plus) {
        if (c == r_ - 1) {
          c = 0;
          k -= (r_ - 1) * tstride_[axis];
        } else {
          ++c;
          k += tstride_[axis];
        }
      } else {
        if (c == 0) {
          c = r_ - 1;
          k += (r_ - 1) * tstride_[axis];
        } else {
          --c;
          k -= tstride_[axis];
        }
      }
      tkey_[t + 1] = k;
      std::uint64_t rt = 0;
      for (std::size_t s = 0; s <= t; ++s)
        if (tkey_[s] == k) rt |= std::uint64_t(1) << s;
      row_t_[t + 1] = rt;
    }
    ++t_;
  }

  void pop() {
    --t_;
    if (r_ > 0) {
      const auto dir = steps_[static_cast<std::size_t>(t_)];
      const auto axis = static_cast<std::size_t>(dir / 2);
      auto& c = tcoord_[axis];
      if (dir % 2 == 0)
        c = (c == 0) ? r_ - 1 : c - 1;
      else
        c = (c == r_ - 1) ? 0 : c + 1;
    }
  }

 private:
  int d_, r_, n_max_;
  int t_ = 0;
  SiteKey radix_ = 1;
  std::vector<SiteKey> zpow_;
  std::vector<std::int64_t> tstride_;
  std::vector<SiteKey> zkey_;
  std::vector<std::int64_t> tkey_;
  std::vector<std::uint64_t> row_z_, row_t_;
  std::vector<Direction> steps_;
  std::vector<std::int64_t> tcoord_;
};

namespace detail {

template <typename Visitor>
void dfs(WalkCursor& w, Visitor& v, int n_max) {
  v.visit(w);
  if (w.depth() == n_max) return;
  const auto dirs = static_cast<Direction>(2 * w.dim());
  for (Direction dir = 0; dir < dirs; ++dir) {
    w.push(dir);
    dfs(w, v, n_max);
    w.pop();
  }
}

}  // namespace detail

// Runs one visitor per worker over every walk of length 0..n_max.  The tree is
// split on its first two steps; nodes above the split go to worker 0.
template <typename Visitor>
void for_each_walk(int d, int r, int n_max, std::vector<Visitor>& visitors) {
  if (visitors.empty()) throw std::invalid_argument("at least one worker is required");
  const int split = std::min(2, n_max);
  const int dirs = 2 * d;
  {
    WalkCursor w(d, r, n_max);
    auto shallow = [&](auto&& self) -> void {
      if (w.depth() == split) return;
      visitors[0].visit(w);
      for (int dir = 0; dir < dirs; ++dir) {
        w.push(static_cast<Direction>(dir));
        self(self);
        w.pop();
      }
    };
    shallow(shallow);
  }
  std::int64_t jobs = 1;
  for (int i = 0; i < split; ++i) jobs *= dirs;
  std::atomic<std::int64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&](std::size_t worker) {
    try {
      WalkCursor w(d, r, n_max);
      for (std::int64_t job = next++; job < jobs; job = next++) {
        std::int64_t rest = job;
        for (int i = 0; i < split; ++i) {
          w.push(static_cast<Direction>(rest % dirs));
          rest /= dirs;
          // Path state for the prefix, without recording it.
          if constexpr (requires { visitors[worker].prime(w); })
            if (w.depth() < split) visitors[worker].prime(w);
        }
        detail::dfs(w, visitors[worker], n_max);
        for (int i = 0; i < split; ++i) w.pop();
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  if (visitors.size() == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < visitors.size(); ++i) pool.emplace_back(work, i);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

// Histograms of pair counts per (length, endpoint key).
template <typename Key, typename Hash = std::hash<Key>>
class HistogramTable {
 public:
  explicit HistogramTable(int n_max = 0) : rows_(static_cast<std::size_t>(n_max) + 1) {}

  void add(int n, Key key, std::size_t m, std::uint64_t count = 1) {
    auto& h = rows_[static_cast<std::size_t>(n)][key];
    if (h.size() <= m) h.resize(m + 1, 0);
    h[m] += count;
  }

  void merge(const HistogramTable& o) {
    if (o.rows_.size() > rows_.size()) rows_.resize(o.rows_.size());
    for (std::size_t n = 0; n < o.rows_.size(); ++n)
      for (const auto& [k, h] : o.rows_[n]) {
        auto& mine = rows_[n][k];
        if (mine.size() < h.size()) mine.resize(h.size(), 0);
        for (std::size_t m = 0; m < h.size(); ++m) mine[m] += h[m];
      }
  }

  const std::vector<std::unordered_map<Key, std::vector<std::uint64_t>, Hash>>& rows() const { return rows_; }

 private:
  std::vector<std::unordered_map<Key, std::vector<std::uint64_t>, Hash>> rows_;
};

// Exact c_n(x) (infinite lattice) or c_n^T(x) (torus, canonical endpoints).
struct CoefficientTable {
  LatticeConfig config;
  int n_max = 0;
  std::vector<std::map<Site, BetaPolynomial>> rows;  // rows[n][x]

  BetaPolynomial at(int n, const Site& x) const {
    if (n < 0 || n > n_max) throw std::out_of_range("length outside the table");
    Site key = config.is_torus() ? canonical_rep(x, config.r) : x;
    const auto& row = rows[static_cast<std::size_t>(n)];
    auto it = row.find(key);
    return it == row.end() ? BetaPolynomial{} : it->second;
  }

  BetaPolynomial total(int n) const {
    BetaPolynomial s;
    for (const auto& [x, p] : rows.at(static_cast<std::size_t>(n))) s += p;
    return s;
  }

  friend bool operator==(const CoefficientTable& a, const CoefficientTable& b) {
    return a.config.d == b.config.d && a.config.geometry == b.config.geometry && a.config.r == b.config.r &&
           a.n_max == b.n_max && a.rows == b.rows;
  }
};

namespace detail {

struct CountVisitor {
  bool want_z = true, want_t = false;
  HistogramTable<SiteKey, SiteKeyHash> z;
  HistogramTable<std::int64_t> t;
  std::vector<std::size_t> mz, mt;  // running pair counts along the current path

  CountVisitor(int n_max, bool wz, bool wt)
      : want_z(wz), want_t(wt), z(n_max), t(n_max), mz(static_cast<std::size_t>(n_max) + 1, 0),
        mt(static_cast<std::size_t>(n_max) + 1, 0) {}

  void prime(const WalkCursor& w) {
    const int n = w.depth();
    const auto k = static_cast<std::size_t>(n);
    mz[k] = n == 0 ? 0 : mz[k - 1] + static_cast<std::size_t>(std::popcount(w.row_z(n)));
    if (want_t) mt[k] = n == 0 ? 0 : mt[k - 1] + static_cast<std::size_t>(std::popcount(w.row_t(n)));
  }

  void visit(const WalkCursor& w) {
    prime(w);
    const auto k = static_cast<std::size_t>(w.depth());
    if (want_z) z.add(w.depth(), w.z_key(), mz[k]);
    if (want_t) t.add(w.depth(), w.t_key(), mt[k]);
  }
};

template <typename Key, typename Hash, typename ToSite>
std::vector<std::map<Site, BetaPolynomial>> to_rows(const HistogramTable<Key, Hash>& h, ToSite&& site) {
  std::vector<std::map<Site, BetaPolynomial>> rows(h.rows().size());
  for (std::size_t n = 0; n < h.rows().size(); ++n)
    for (const auto& [k, counts] : h.rows()[n])
      rows[n].emplace(site(k), BetaPolynomial::from_q_counts<std::uint64_t>(counts));
  return rows;
}

}  // namespace detail

struct TablePair {
  CoefficientTable infinite;
  CoefficientTable torus;
};

// Z^d and torus tables from a single pass over Z^d walks.
inline TablePair enumerate_both(int d, int r, int n_max, const EnumOptions& opt = {}) {
  auto cz = LatticeConfig::infinite_lattice(d);
  auto ct = LatticeConfig::torus(d, r);
  check_budget(d, n_max, opt);
  std::vector<detail::CountVisitor> vis(std::max(1u, opt.workers), detail::CountVisitor(n_max, true, true));
  for_each_walk(d, r, n_max, vis);
  for (std::size_t i = 1; i < vis.size(); ++i) {
    vis[0].z.merge(vis[i].z);
    vis[0].t.merge(vis[i].t);
  }
  WalkCursor decode(d, r, n_max);
  TablePair out;
  out.infinite = {cz, n_max, detail::to_rows(vis[0].z, [&](SiteKey k) { return decode.z_site(k); })};
  out.torus = {ct, n_max, detail::to_rows(vis[0].t, [&](std::int64_t k) { return decode.t_site(k); })};
  return out;
}

inline CoefficientTable enumerate(const LatticeConfig& cfg, int n_max, const EnumOptions& opt = {}) {
  cfg.validate();
  check_budget(cfg.d, n_max, opt);
  const int r = cfg.is_torus() ? cfg.r : 0;
  std::vector<detail::CountVisitor> vis(std::max(1u, opt.workers),
                                        detail::CountVisitor(n_max, !cfg.is_torus(), cfg.is_torus()));
  for_each_walk(cfg.d, r, n_max, vis);
  for (std::size_t i = 1; i < vis.size(); ++i) {
    vis[0].z.merge(vis[i].z);
    vis[0].t.merge(vis[i].t);
  }
  WalkCursor decode(cfg.d, r, n_max);
  CoefficientTable out{cfg, n_max, {}};
  if (cfg.is_torus())
    out.rows = detail::to_rows(vis[0].t, [&](std::int64_t k) { return decode.t_site(k); });
  else
    out.rows = detail::to_rows(vis[0].z, [&](SiteKey k) { return decode.z_site(k); });
  return out;
}

// Folds a Z^d table onto the torus: sum over x + r u with fixed canonical projection.
inline std::vector<std::map<Site, BetaPolynomial>> fold_rows(const CoefficientTable& z, int r) {
  std::vector<std::map<Site, BetaPolynomial>> out(z.rows.size());
  for (std::size_t n = 0; n < z.rows.size(); ++n)
    for (const auto& [x, p] : z.rows[n]) out[n][canonical_rep(x, r)] += p;
  return out;
}

struct LiftReport {
  int d = 0, r = 0, n_max = 0;
  std::uint64_t walks = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

// Every torus walk of length <= n_max: project(lift(w)) = w, lifts distinct,
// and lift(project(v)) = v for the lifted Z^d walk v.
inline LiftReport verify_lift_bijection(int d, int r, int n_max) {
  const auto cfg = LatticeConfig::torus(d, r);
  LiftReport rep{d, r, n_max, 0, {}};
  for (int n = 0; n <= n_max; ++n) {
    std::set<std::vector<Direction>> lifts;
    std::uint64_t count = 1;
    for (int i = 0; i < n; ++i) count *= static_cast<std::uint64_t>(2 * d);
    for (std::uint64_t code = 0; code < count; ++code) {
      TorusWalk tw{d, r, {origin(d)}};
      std::uint64_t rest = code;
      for (int i = 0; i < n; ++i) {
        auto dir = static_cast<Direction>(rest % static_cast<std::uint64_t>(2 * d));
        rest /= static_cast<std::uint64_t>(2 * d);
        tw.vertices.push_back(canonical_rep(tw.vertices.back() + unit_step(d, dir), r));
      }
      WalkPath lifted = lift_walk(tw, cfg);
      if (!(project_walk(lifted, r) == tw)) rep.failures.push_back("project(lift(w)) != w at n=" + std::to_string(n));
      if (!(lift_walk(project_walk(lifted, r), cfg) == lifted))
        rep.failures.push_back("lift(project(v)) != v at n=" + std::to_string(n));
      if (!lifts.insert(lifted.steps).second) rep.failures.push_back("lift not injective at n=" + std::to_string(n));
      ++rep.walks;
      if (rep.failures.size() > 20) return rep;
    }
  }
  return rep;
}

struct BasicBoundRow {
  int n = 0;
  double beta = 0;
  double c = 0;        // c_n(beta)
  double c_torus = 0;  // c_n^T(beta)
  double bound = 0;    // (2d)^n exp(-beta (n^2 / V - n) / 2)
  bool short_identity = true;
  bool torus_le_infinite = true;
  bool rough_bound = true;
};

struct BasicBoundsReport {
  std::vector<BasicBoundRow> rows;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

inline double rough_bound(int d, int n, double beta, double V) {
  return std::exp(n * std::log(2.0 * d) - 0.5 * beta * (double(n) * n / V - n));
}

inline BasicBoundsReport verify_basic_bounds(const CoefficientTable& tz, const CoefficientTable& tt,
                                             const std::vector<double>& beta_grid) {
  if (tz.config.is_torus() || !tt.config.is_torus()) throw std::invalid_argument("expects an infinite and a torus table");
  if (tz.config.d != tt.config.d) throw std::invalid_argument("dimension mismatch");
  const int n_max = std::min(tz.n_max, tt.n_max);
  const int d = tz.config.d, r = tt.config.r;
  const double V = static_cast<double>(tt.config.volume());
  BasicBoundsReport rep;
  auto folded = fold_rows(tz, r);
  for (int n = 0; n <= n_max; ++n) {
    const auto cz = tz.total(n), ct = tt.total(n);
    const auto diff = cz - ct;
    bool identity = true;
    if (n < r) identity = cz == ct && folded[static_cast<std::size_t>(n)] == tt.rows[static_cast<std::size_t>(n)];
    if (!identity) rep.failures.push_back("c_n^T != c_n for n < r at n=" + std::to_string(n));
    for (double beta : beta_grid) {
      BasicBoundRow row;
      row.n = n;
      row.beta = beta;
      row.c = cz.evaluate(beta);
      row.c_torus = ct.evaluate(beta);
      row.bound = rough_bound(d, n, beta, V);
      row.short_identity = identity;
      row.torus_le_infinite = diff.evaluate(beta) >= 0.0;
      // exp() is correctly rounded to within an ulp or two; allow for that only.
      row.rough_bound = row.c_torus <= row.bound * (1.0 + 8 * std::numeric_limits<double>::epsilon());
      if (!row.torus_le_infinite)
        rep.failures.push_back("c_n^T > c_n at n=" + std::to_string(n) + " beta=" + std::to_string(beta));
      if (!row.rough_bound)
        rep.failures.push_back("rough bound violated at n=" + std::to_string(n) + " beta=" + std::to_string(beta));
      rep.rows.push_back(row);
    }
  }
  return rep;
}

}  // namespace wsaw
