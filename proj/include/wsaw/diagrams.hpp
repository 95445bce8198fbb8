#pragma once

// Two-point fields, convolutions, copy sums, folding identities, plateau and Psi reports.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "wsaw/fourier.hpp"
#include "wsaw/green.hpp"
#include "wsaw/lattice.hpp"
#include "wsaw/poly.hpp"
#include "wsaw/walks.hpp"

namespace wsaw {

using PolyRows = std::vector<std::map<Site, BetaPolynomial>>;
using RealRows = std::vector<std::map<Site, double>>;

// ---------------------------------------------------------------------------
// Exact series arithmetic on coefficient rows (r = 0 means Z^d).

inline Site reduce_site(Site x, int r) { return r > 0 ? canonical_rep(std::move(x), r) : x; }

inline std::map<Site, BetaPolynomial> convolve_poly(const std::map<Site, BetaPolynomial>& f,
                                                    const std::map<Site, BetaPolynomial>& g, int r) {
  std::map<Site, BetaPolynomial> out;
  for (const auto& [x, p] : f)
    for (const auto& [y, q] : g) out[reduce_site(x + y, r)].add_product(p, q);
  std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
  return out;
}

// Cauchy product of two site-valued series: out_n = sum_k f_k * g_{n-k}.
inline PolyRows series_convolve(const PolyRows& f, const PolyRows& g, int r, int n_max) {
  PolyRows out(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n)
    for (int k = 0; k <= n; ++k) {
      if (k >= static_cast<int>(f.size()) || n - k >= static_cast<int>(g.size())) continue;
      for (auto& [x, p] : convolve_poly(f[static_cast<std::size_t>(k)], g[static_cast<std::size_t>(n - k)], r))
        out[static_cast<std::size_t>(n)][x] += p;
    }
  for (auto& row : out) std::erase_if(row, [](const auto& kv) { return kv.second.is_zero(); });
  return out;
}

inline PolyRows fold_series(const PolyRows& rows, int r) {
  PolyRows out(rows.size());
  for (std::size_t n = 0; n < rows.size(); ++n)
    for (const auto& [x, p] : rows[n]) out[n][canonical_rep(x, r)] += p;
  for (auto& row : out) std::erase_if(row, [](const auto& kv) { return kv.second.is_zero(); });
  return out;
}

inline RealRows evaluate_rows(const PolyRows& rows, double beta) {
  RealRows out(rows.size());
  for (std::size_t n = 0; n < rows.size(); ++n)
    for (const auto& [x, p] : rows[n]) out[n][x] = p.evaluate(beta);
  return out;
}

inline std::map<Site, double> convolve_real(const std::map<Site, double>& f, const std::map<Site, double>& g, int r) {
  std::map<Site, double> out;
  for (const auto& [x, a] : f)
    for (const auto& [y, b] : g) out[reduce_site(x + y, r)] += a * b;
  return out;
}

inline RealRows series_convolve_real(const RealRows& f, const RealRows& g, int r, int n_max) {
  RealRows out(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n)
    for (int k = 0; k <= n; ++k) {
      if (k >= static_cast<int>(f.size()) || n - k >= static_cast<int>(g.size())) continue;
      for (const auto& [x, v] : convolve_real(f[static_cast<std::size_t>(k)], g[static_cast<std::size_t>(n - k)], r))
        out[static_cast<std::size_t>(n)][x] += v;
    }
  return out;
}

// sum_{n > n_max} (n + 1)^p a^n for 0 <= a < 1, p in {0, 1, 2}.
inline double geometric_tail(double a, int n_max, int p = 0) {
  if (a <= 0) return 0.0;
  if (a >= 1) return std::numeric_limits<double>::infinity();
  double s = 0, term = 0;
  for (int n = n_max + 1;; ++n) {
    term = std::pow(n + 1.0, p) * std::pow(a, n);
    s += term;
    if (term < 1e-18 * s && n > n_max + 10) break;
    if (n > n_max + 200000) return std::numeric_limits<double>::infinity();
  }
  return s * (1.0 + 1e-12);
}

// ---------------------------------------------------------------------------
// Fields.

struct Field {
  int d = 1;
  int r = 0;       // torus side, 0 for a box in Z^d
  int radius = 0;  // box radius when r == 0
  double z = 0, beta = 0;
  int n_max = 0;
  std::map<Site, double> values;
  std::map<Site, double> tails;  // certified bound on |true - stored| per stored site
  double outside_tail = 0;       // bound for sites not stored
  bool support_truncated = false;

  bool torus() const { return r > 0; }

  double value(const Site& x) const {
    auto it = values.find(torus() ? canonical_rep(x, r) : x);
    return it == values.end() ? 0.0 : it->second;
  }
  double tail(const Site& x) const {
    auto it = tails.find(torus() ? canonical_rep(x, r) : x);
    return it == tails.end() ? outside_tail : it->second;
  }
  double sum() const {
    double s = 0;
    for (const auto& [x, v] : values) s += v;
    return s;
  }
  double sup() const {
    double m = 0;
    for (const auto& [x, v] : values) m = std::max(m, v);
    return m;
  }
};

inline Field constant_field(int d, int r, double c) {
  if (r < 3) throw std::invalid_argument("constant fields live on a torus");
  Field f;
  f.d = d;
  f.r = r;
  const auto V = fourier::torus_volume(d, r);
  for (std::int64_t i = 0; i < V; ++i) {
    f.values[torus_site(i, d, r)] = c;
    f.tails[torus_site(i, d, r)] = 0;
  }
  return f;
}

inline Field delta_field(int d, int r = 0) {
  Field f;
  f.d = d;
  f.r = r;
  f.values[origin(d)] = 1.0;
  f.tails[origin(d)] = 0.0;
  return f;
}

// Torus convolution (mod r) or Z^d convolution over the stored supports.
inline Field convolve(const Field& f, const Field& g) {
  if (f.d != g.d || f.r != g.r) throw std::invalid_argument("convolve: geometry mismatch");
  Field out;
  out.d = f.d;
  out.r = f.r;
  out.z = f.z;
  out.beta = f.beta;
  out.n_max = std::min(f.n_max, g.n_max);
  out.radius = f.radius + g.radius;
  out.support_truncated = !f.torus() && (f.outside_tail > 0 || g.outside_tail > 0);
  for (const auto& [x, a] : f.values)
    for (const auto& [y, b] : g.values) {
      Site s = reduce_site(x + y, f.r);
      out.values[s] += a * b;
      double ta = f.tail(x), tb = g.tail(y);
      out.tails[s] += a * tb + ta * b + ta * tb;
    }
  if (f.torus() && (f.outside_tail > 0 || g.outside_tail > 0)) {
    // Sites missing from a torus field carry outside_tail; add their worst case.
    const double V = static_cast<double>(fourier::torus_volume(f.d, f.r));
    double extra = V * (f.outside_tail * (g.sup() + g.outside_tail) + g.outside_tail * (f.sup() + f.outside_tail));
    for (auto& [s, t] : out.tails) t += extra;
    out.outside_tail = extra;
  }
  return out;
}

inline Field field_from_rows(const RealRows& rows, int d, int r, double z, double beta, int n_max, double tail) {
  Field f;
  f.d = d;
  f.r = r;
  f.radius = r > 0 ? 0 : n_max;
  f.z = z;
  f.beta = beta;
  f.n_max = n_max;
  for (int n = 0; n <= n_max && n < static_cast<int>(rows.size()); ++n) {
    const double zn = std::pow(z, n);
    for (const auto& [x, v] : rows[static_cast<std::size_t>(n)]) f.values[x] += v * zn;
  }
  for (const auto& [x, v] : f.values) f.tails[x] = tail;
  f.outside_tail = tail;
  return f;
}

// G_z(x) = sum_{n <= n_max} c_n(x) z^n with per-site tail sum_{n > n_max} (2dz)^n.
inline Field two_point_field(const CoefficientTable& tbl, double beta, double z) {
  if (z < 0) throw std::invalid_argument("two_point_field requires z >= 0");
  const int d = tbl.config.d;
  const double tail = geometric_tail(2 * d * z, tbl.n_max);
  return field_from_rows(evaluate_rows(tbl.rows, beta), d, tbl.config.is_torus() ? tbl.config.r : 0, z, beta,
                         tbl.n_max, tail);
}

// Number of u in Z^d with ||u||_inf = k.
inline double shell_count(int d, int k) {
  return k == 0 ? 1.0 : std::pow(2.0 * k + 1, d) - std::pow(2.0 * k - 1, d);
}

// Gamma_z(x) = sum_u G_z(x + r u) over ||u||_inf <= u_max, from the Z^d table.
// The per-site tail adds the series tail of every included copy and the crude
// bound G_z(y) <= (2dz)^{||y||_inf} / (1 - 2dz) for omitted copies, using
// ||x + ru||_inf >= r ||u||_inf - r/2.
struct GammaField {
  Field gamma;
  Field torus;  // G^T_z from the torus table
  std::vector<std::string> failures;
  std::vector<Site> strict_sites;  // sites where G^T < Gamma is certified
  bool ok() const { return failures.empty(); }
};

inline GammaField gamma_field(const CoefficientTable& tz, const CoefficientTable& tt, double beta, double z,
                              int u_max = 3) {
  if (tz.config.is_torus() || !tt.config.is_torus()) throw std::invalid_argument("gamma_field needs Z^d and torus tables");
  const int d = tz.config.d, r = tt.config.r;
  const int n_max = std::min(tz.n_max, tt.n_max);
  const double a = 2 * d * z;
  GammaField out;
  out.torus = two_point_field(tt, beta, z);
  Field& g = out.gamma;
  g.d = d;
  g.r = r;
  g.z = z;
  g.beta = beta;
  g.n_max = n_max;
  const double series_tail = geometric_tail(a, n_max);
  for (int n = 0; n <= n_max; ++n) {
    const double zn = std::pow(z, n);
    for (const auto& [x, p] : tz.rows[static_cast<std::size_t>(n)]) {
      Site y = canonical_rep(x, r);
      Site u = x - y;
      Coord un = 0;
      for (auto c : u) un = std::max<Coord>(un, std::llabs(c) / r);
      if (un > u_max) continue;
      g.values[y] += p.evaluate(beta) * zn;
    }
  }
  double omitted = 0;
  if (a < 1) {
    for (int k = u_max + 1;; ++k) {
      double dist = std::max(0.0, r * k - r / 2.0);
      double term = shell_count(d, k) * std::pow(a, dist) / (1 - a);
      omitted += term;
      if (term < 1e-18 * std::max(omitted, 1e-300) || k > u_max + 10000) break;
    }
  } else {
    omitted = std::numeric_limits<double>::infinity();
  }
  // Series tails of all copies together are at most sum_{n > n_max} c_n z^n.
  const double per_site = series_tail + omitted;
  const auto V = fourier::torus_volume(d, r);
  for (std::int64_t i = 0; i < V; ++i) {
    Site x = torus_site(i, d, r);
    g.values.try_emplace(x, 0.0);
    g.tails[x] = per_site;
  }
  g.outside_tail = per_site;
  // G^T <= Gamma, checked where the intervals decide it; violations only if certain.
  for (std::int64_t i = 0; i < V; ++i) {
    Site x = torus_site(i, d, r);
    double lo_gamma = g.value(x);  // partial sums of nonnegative terms are lower bounds
    double hi_gamma = lo_gamma + g.tail(x);
    double lo_t = out.torus.value(x);
    double hi_t = lo_t + out.torus.tail(x);
    if (lo_t > hi_gamma) out.failures.push_back("G^T > Gamma certified at a torus site");
    if (hi_t < lo_gamma) out.strict_sites.push_back(x);
  }
  return out;
}

// Exact per-order comparison of the torus and folded Z^d coefficients.
struct GammaSeriesCheck {
  bool dominated = true;      // c^T_n(x) <= gamma_n(x) at every tested beta
  bool sums_match = true;     // sum_x gamma_n(x) = c_n exactly
  int strict_orders = 0;      // orders with some strict inequality at beta = the tested grid
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

inline GammaSeriesCheck gamma_series_check(const CoefficientTable& tz, const CoefficientTable& tt,
                                           const std::vector<double>& betas) {
  GammaSeriesCheck rep;
  const int r = tt.config.r;
  const int n_max = std::min(tz.n_max, tt.n_max);
  auto gam = fold_series(tz.rows, r);
  for (int n = 0; n <= n_max; ++n) {
    BetaPolynomial s;
    for (const auto& [x, p] : gam[static_cast<std::size_t>(n)]) s += p;
    if (!(s == tz.total(n))) {
      rep.sums_match = false;
      rep.failures.push_back("sum of folded coefficients differs from c_n at n=" + std::to_string(n));
    }
    bool strict = false;
    for (const auto& [x, p] : gam[static_cast<std::size_t>(n)]) {
      auto diff = p - tt.at(n, x);
      for (double b : betas) {
        double v = diff.evaluate(b);
        if (v < 0) {
          rep.dominated = false;
          rep.failures.push_back("c^T_n(x) > gamma_n(x) at n=" + std::to_string(n));
        }
        if (v > 0) strict = true;
      }
    }
    for (const auto& [x, p] : tt.rows[static_cast<std::size_t>(n)])
      if (!gam[static_cast<std::size_t>(n)].count(x) && !p.is_zero()) {
        rep.dominated = false;
        rep.failures.push_back("torus coefficient outside folded support at n=" + std::to_string(n));
      }
    if (strict) ++rep.strict_orders;
  }
  return rep;
}

// (Gamma * Gamma)(x) = sum_w B(x + rw) and the triple analogue, order by order
// with exact coefficients.  Folding commutes with convolution, so both sides
// agree at every truncation order and the evaluated gap is zero up to rounding.
struct FoldingSeriesReport {
  int n_max = 0;
  bool bubble_exact = true;
  bool triangle_exact = true;
  double bubble_value = 0, triangle_value = 0;  // at x = 0, evaluated
  double bubble_tail = 0, triangle_tail = 0;    // sum_{n > n_max} binom(n+p, p) (2dz)^n
  double max_bubble_gap = 0, max_triangle_gap = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

inline FoldingSeriesReport folding_identity_series(const CoefficientTable& tz, int r, double beta, double z,
                                                   int n_max) {
  if (tz.config.is_torus()) throw std::invalid_argument("folding check expects the Z^d table");
  n_max = std::min(n_max, tz.n_max);
  const int d = tz.config.d;
  FoldingSeriesReport rep;
  rep.n_max = n_max;
  PolyRows c(tz.rows.begin(), tz.rows.begin() + n_max + 1);
  auto gam = fold_series(c, r);
  auto lhs2 = series_convolve(gam, gam, r, n_max);
  auto lhs3 = series_convolve(lhs2, gam, r, n_max);
  auto b = series_convolve(c, c, 0, n_max);
  auto t = series_convolve(b, c, 0, n_max);
  auto rhs2 = fold_series(b, r), rhs3 = fold_series(t, r);
  for (int n = 0; n <= n_max; ++n) {
    if (lhs2[static_cast<std::size_t>(n)] != rhs2[static_cast<std::size_t>(n)]) {
      rep.bubble_exact = false;
      rep.failures.push_back("bubble folding identity fails at n=" + std::to_string(n));
    }
    if (lhs3[static_cast<std::size_t>(n)] != rhs3[static_cast<std::size_t>(n)]) {
      rep.triangle_exact = false;
      rep.failures.push_back("triangle folding identity fails at n=" + std::to_string(n));
    }
  }
  auto L2 = evaluate_rows(lhs2, beta), R2 = evaluate_rows(rhs2, beta);
  auto L3 = evaluate_rows(lhs3, beta), R3 = evaluate_rows(rhs3, beta);
  std::map<Site, double> l2, r2, l3, r3;
  for (int n = 0; n <= n_max; ++n) {
    double zn = std::pow(z, n);
    for (const auto& [x, v] : L2[static_cast<std::size_t>(n)]) l2[x] += v * zn;
    for (const auto& [x, v] : R2[static_cast<std::size_t>(n)]) r2[x] += v * zn;
    for (const auto& [x, v] : L3[static_cast<std::size_t>(n)]) l3[x] += v * zn;
    for (const auto& [x, v] : R3[static_cast<std::size_t>(n)]) r3[x] += v * zn;
  }
  for (const auto& [x, v] : l2) rep.max_bubble_gap = std::max(rep.max_bubble_gap, std::abs(v - r2[x]));
  for (const auto& [x, v] : l3) rep.max_triangle_gap = std::max(rep.max_triangle_gap, std::abs(v - r3[x]));
  rep.bubble_value = l2[origin(d)];
  rep.triangle_value = l3[origin(d)];
  rep.bubble_tail = geometric_tail(2 * d * z, n_max, 1);
  rep.triangle_tail = geometric_tail(2 * d * z, n_max, 2);
  return rep;
}

// ---------------------------------------------------------------------------
// beta = 0 oracles on the torus.

namespace detail {

// Caches f(x) by the signed-permutation class of x.
template <typename F>
class ClassCache {
 public:
  explicit ClassCache(F f) : f_(std::move(f)) {}
  double operator()(const Site& x) {
    Site key = symmetry_class(x);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    double v = f_(key);
    cache_.emplace(std::move(key), v);
    return v;
  }

 private:
  F f_;
  std::map<Site, double> cache_;
};

inline double max_abs(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double rel_gap(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m / std::max(max_abs(b), 1e-300);
}

}  // namespace detail

struct Beta0FoldingReport {
  double gamma_rel = 0;    // G^T vs Gamma
  double bubble_rel = 0;   // Gamma * Gamma vs sum_w B(x + rw)
  double triangle_rel = 0; // triple vs sum_w T(x + rw)
  double sum_rel = 0;      // sum_x G^T vs chi^T = 1 / (1 - 2dz)
  double copy_tail = 0;    // largest omitted-copy bound, relative
};

struct Beta0Fields {
  int d = 1, r = 3;
  double z = 0;
  std::vector<double> torus_green;  // G^T, Fourier
  std::vector<double> gamma;        // sum_u G(x + ru), heat kernel
  std::vector<double> bubble_fold, triangle_fold;
  std::vector<double> green;        // G(x) at the canonical representative
};

inline Beta0Fields beta0_fields(int d, int r, double z, bool with_diagrams = true) {
  Beta0Fields f;
  f.d = d;
  f.r = r;
  f.z = z;
  f.torus_green = torus_green_powers(d, r, z, 1);
  const auto V = static_cast<std::size_t>(fourier::torus_volume(d, r));
  const int order = 64 * r + 64;
  f.gamma.resize(V);
  f.green.resize(V);
  HeatKernel g0(d, z, 0, order);
  double worst = 0;
  detail::ClassCache gam([&](const Site& x) {
    auto cs = g0.periodized_full(x, r);
    worst = std::max(worst, cs.tail / std::max(cs.value, 1e-300));
    return cs.value;
  });
  detail::ClassCache plain([&](const Site& x) { return g0.value(x); });
  for (std::size_t i = 0; i < V; ++i) {
    Site x = torus_site(static_cast<std::int64_t>(i), d, r);
    f.gamma[i] = gam(x);
    f.green[i] = plain(x);
  }
  if (with_diagrams) {
    HeatKernel g1(d, z, 1, order), g2(d, z, 2, order);
    detail::ClassCache b([&](const Site& x) { return g1.periodized_full(x, r).value; });
    detail::ClassCache t([&](const Site& x) { return g2.periodized_full(x, r).value; });
    f.bubble_fold.resize(V);
    f.triangle_fold.resize(V);
    for (std::size_t i = 0; i < V; ++i) {
      Site x = torus_site(static_cast<std::int64_t>(i), d, r);
      f.bubble_fold[i] = b(x);
      f.triangle_fold[i] = t(x);
    }
  }
  return f;
}

inline Beta0FoldingReport folding_identity_beta0(const Beta0Fields& f) {
  Beta0FoldingReport rep;
  rep.gamma_rel = detail::rel_gap(f.torus_green, f.gamma);
  auto gg = fourier::convolve(f.gamma, f.gamma, f.d, f.r);
  auto ggg = fourier::convolve(gg, f.gamma, f.d, f.r);
  if (!f.bubble_fold.empty()) {
    rep.bubble_rel = detail::rel_gap(gg, f.bubble_fold);
    rep.triangle_rel = detail::rel_gap(ggg, f.triangle_fold);
  }
  double s = 0;
  for (double v : f.torus_green) s += v;
  const double chi = 1.0 / (1.0 - 2.0 * f.d * f.z);
  rep.sum_rel = std::abs(s - chi) / chi;
  return rep;
}

struct PlateauPoint {
  double z = 0;
  double z_over_zc = 0;
  double chi = 0;
  double rho_min = 0, rho_max = 0;
  std::size_t far_sites = 0;
  Beta0FoldingReport folding;
};

struct PlateauReport {
  int d = 0, r = 0;
  std::int64_t V = 0;
  double rho_cap = 10;
  double tolerance = 1e-10;
  std::vector<PlateauPoint> points;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

// rho(x, z) = (G^T_z(x) - G_z(x)) V / chi(z) over the far region ||x||_inf >= r/4.
inline PlateauReport plateau_beta0(int d, int r, const std::vector<double>& z_fracs, double rho_cap = 10,
                                   double tolerance = 1e-10) {
  PlateauReport rep;
  rep.d = d;
  rep.r = r;
  rep.V = fourier::torus_volume(d, r);
  rep.rho_cap = rho_cap;
  rep.tolerance = tolerance;
  const double zc = 1.0 / (2.0 * d);
  for (double frac : z_fracs) {
    PlateauPoint p;
    p.z_over_zc = frac;
    p.z = frac * zc;
    p.chi = 1.0 / (1.0 - frac);
    auto f = beta0_fields(d, r, p.z);
    p.folding = folding_identity_beta0(f);
    p.rho_min = std::numeric_limits<double>::infinity();
    p.rho_max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < f.torus_green.size(); ++i) {
      Site x = torus_site(static_cast<std::int64_t>(i), d, r);
      if (4 * norm_inf(x) < r) continue;
      double rho = (f.torus_green[i] - f.green[i]) * static_cast<double>(rep.V) / p.chi;
      p.rho_min = std::min(p.rho_min, rho);
      p.rho_max = std::max(p.rho_max, rho);
      ++p.far_sites;
    }
    auto tag = "z=" + std::to_string(frac) + "zc: ";
    if (p.folding.gamma_rel > tolerance) rep.failures.push_back(tag + "G^T != Gamma");
    if (p.folding.bubble_rel > tolerance) rep.failures.push_back(tag + "bubble folding identity");
    if (p.folding.triangle_rel > tolerance) rep.failures.push_back(tag + "triangle folding identity");
    if (p.folding.sum_rel > tolerance) rep.failures.push_back(tag + "sum of G^T != chi^T");
    if (!(p.rho_min > 0)) rep.failures.push_back(tag + "plateau ratio not positive");
    if (!(p.rho_max <= rho_cap)) rep.failures.push_back(tag + "plateau ratio above cap");
    rep.points.push_back(p);
  }
  return rep;
}

// beta > 0 plateau ratio from truncated fields, with interval bounds (report only).
struct PlateauInterval {
  double z = 0;
  double rho_lo = 0, rho_hi = 0;  // over the far region
  bool decided_positive = false;
};

inline PlateauInterval plateau_truncated(const CoefficientTable& tz, const CoefficientTable& tt, double beta,
                                         double z) {
  auto gz = two_point_field(tz, beta, z);
  auto gt = two_point_field(tt, beta, z);
  const int d = tz.config.d, r = tt.config.r;
  const auto V = fourier::torus_volume(d, r);
  double chi_lo = 0;
  for (int n = 0; n <= tz.n_max; ++n) chi_lo += tz.total(n).evaluate(beta) * std::pow(z, n);
  const double chi_hi = chi_lo + geometric_tail(2 * d * z, tz.n_max);
  PlateauInterval out;
  out.z = z;
  out.rho_lo = std::numeric_limits<double>::infinity();
  out.rho_hi = -std::numeric_limits<double>::infinity();
  for (std::int64_t i = 0; i < V; ++i) {
    Site x = torus_site(i, d, r);
    if (4 * norm_inf(x) < r) continue;
    double diff_lo = gt.value(x) - (gz.value(x) + gz.tail(x));
    double diff_hi = gt.value(x) + gt.tail(x) - gz.value(x);
    double lo = diff_lo * V / (diff_lo >= 0 ? chi_hi : chi_lo);
    double hi = diff_hi * V / (diff_hi >= 0 ? chi_lo : chi_hi);
    out.rho_lo = std::min(out.rho_lo, lo);
    out.rho_hi = std::max(out.rho_hi, hi);
  }
  out.decided_positive = out.rho_lo > 0;
  return out;
}

// ---------------------------------------------------------------------------
// Psi_z(0), tilde Psi_z(0) and ||Psi_z G_z||_2 at beta = 0.
//
//   Psi(0)^2      = sum_{u != 0} (G^2 * G^2)(ru)        = sum_T F_G(x)^2  - sum_y G^4
//   tPsi(0)^2     = sum_{u != 0} (B^2 * G^2)(ru)        = sum_T F_B F_G   - sum_y B^2 G^2
//   ||Psi G||^2   = sum_{u != 0} (G^2 * G^2 * G^2)(ru)  = (F_G * F_G * F_G)(0) - (G^2 * G^2 * G^2)(0)
// with F_f(x) = sum_u f(x + ru)^2 folded over the box ||y||_inf <= K.

struct PsiPoint {
  int r = 0;
  double psi0 = 0, psi_tilde0 = 0, psi_g_l2 = 0;
  int box_radius = 0, triple_radius = 0;
};

struct PsiReport {
  int d = 0;
  double z = 0;
  std::vector<PsiPoint> points;
  double exponent_psi0 = std::numeric_limits<double>::quiet_NaN();  // log-log slope vs r
  double exponent_psi_g = std::numeric_limits<double>::quiet_NaN();
  double expected_exponent = 0;  // -(d - 2)
};

inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0 && y[i] > 0)) continue;
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline PsiPoint psi_point(int d, int r, double z, int copies = 1, int triple_radius = 4) {
  PsiPoint p;
  p.r = r;
  if (z == 0) return p;
  const int K = r / 2 + copies * r;
  p.box_radius = K;
  p.triple_radius = std::min(triple_radius, K);
  const int order = 4 * K + 64;
  HeatKernel g0(d, z, 0, order), g1(d, z, 1, order);
  detail::ClassCache G([&](const Site& x) { return g0.value(x); });
  detail::ClassCache B([&](const Site& x) { return g1.value(x); });
  const auto V = static_cast<std::size_t>(fourier::torus_volume(d, r));
  std::vector<double> FG(V, 0.0), FB(V, 0.0);
  double g4 = 0, b2g2 = 0;
  const std::int64_t side = 2 * K + 1;
  std::int64_t box = 1;
  for (int i = 0; i < d; ++i) box *= side;
  Site y(static_cast<std::size_t>(d));
  for (std::int64_t idx = 0; idx < box; ++idx) {
    std::int64_t rest = idx;
    for (int i = 0; i < d; ++i) {
      y[static_cast<std::size_t>(i)] = rest % side - K;
      rest /= side;
    }
    double g = G(y), b = B(y);
    auto t = static_cast<std::size_t>(torus_index(y, r));
    FG[t] += g * g;
    FB[t] += b * b;
    g4 += g * g * g * g;
    b2g2 += b * b * g * g;
  }
  double sgg = 0, sbg = 0;
  for (std::size_t i = 0; i < V; ++i) {
    // F(-x) = F(x) by symmetry.
    sgg += FG[i] * FG[i];
    sbg += FB[i] * FG[i];
  }
  p.psi0 = std::sqrt(std::max(0.0, sgg - g4));
  p.psi_tilde0 = std::sqrt(std::max(0.0, sbg - b2g2));
  auto f2 = fourier::convolve(FG, FG, d, r);
  auto f3 = fourier::convolve(f2, FG, d, r);
  const double folded_triple = f3[0];
  // (G^2 * G^2 * G^2)(0) on Z^d with G^2 truncated to radius k, via a torus of side 3k + 1.
  const int k = p.triple_radius;
  const int R = 3 * k + 1;
  const auto VR = static_cast<std::size_t>(fourier::torus_volume(d, R));
  std::vector<double> A(VR, 0.0);
  const std::int64_t kside = 2 * k + 1;
  std::int64_t kbox = 1;
  for (int i = 0; i < d; ++i) kbox *= kside;
  for (std::int64_t idx = 0; idx < kbox; ++idx) {
    std::int64_t rest = idx;
    for (int i = 0; i < d; ++i) {
      y[static_cast<std::size_t>(i)] = rest % kside - k;
      rest /= kside;
    }
    double g = G(y);
    A[static_cast<std::size_t>(torus_index(y, R))] = g * g;
  }
  auto AA = fourier::convolve(A, A, d, R);
  double triple0 = 0;
  for (std::size_t i = 0; i < VR; ++i) triple0 += A[i] * AA[i];
  p.psi_g_l2 = std::sqrt(std::max(0.0, folded_triple - triple0));
  return p;
}

inline PsiReport psi_report(int d, double z, const std::vector<int>& r_list, int copies = 1, int triple_radius = 4) {
  PsiReport rep;
  rep.d = d;
  rep.z = z;
  rep.expected_exponent = -(d - 2.0);
  std::vector<double> rs, p0, pg;
  for (int r : r_list) {
    auto p = psi_point(d, r, z, copies, triple_radius);
    rep.points.push_back(p);
    rs.push_back(r);
    p0.push_back(p.psi0);
    pg.push_back(p.psi_g_l2);
  }
  rep.exponent_psi0 = loglog_slope(rs, p0);
  rep.exponent_psi_g = loglog_slope(rs, pg);
  return rep;
}

}  // namespace wsaw
