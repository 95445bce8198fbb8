#pragma once

// Generating functions of the walk counts: chi, chi^T, H = chi^T - chi, their
// reciprocals, growth estimates and the Tauberian-type bound checkers.
// Truncated series carry a certified tail from |a_n| <= C g^n.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "wsaw/expansion.hpp"
#include "wsaw/poly.hpp"
#include "wsaw/walks.hpp"

namespace wsaw {

struct Interval {
  double lo = 0, hi = 0;
  double mid() const { return 0.5 * (lo + hi); }
  double radius() const { return 0.5 * (hi - lo); }
  bool contains(double v) const { return lo <= v && v <= hi; }
};

struct SeriesValue {
  std::complex<double> value;
  double tail = 0;  // bound on |sum_{n > n_max} a_n z^n|
  bool certified = true;
};

struct PowerSeries {
  std::vector<double> coeffs;
  double bound_scale = 1.0;   // C in |a_n| <= C g^n
  double bound_growth = 1.0;  // g

  int n_max() const { return static_cast<int>(coeffs.size()) - 1; }

  double tail_bound(double abs_z) const {
    const double x = bound_growth * abs_z;
    if (x >= 1) return std::numeric_limits<double>::infinity();
    return bound_scale * std::pow(x, n_max() + 1) / (1 - x);
  }

  SeriesValue evaluate(std::complex<double> z) const {
    SeriesValue out;
    std::complex<double> acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
    out.value = acc;
    out.tail = tail_bound(std::abs(z));
    out.certified = std::isfinite(out.tail);
    return out;
  }

  SeriesValue evaluate(double z) const { return evaluate(std::complex<double>(z, 0)); }

  // z d/dz of the series, with tail sum_{n > n_max} C n g^n |z|^n.
  SeriesValue z_derivative(double z) const {
    SeriesValue out;
    double acc = 0;
    for (int n = n_max(); n >= 1; --n) acc = acc * z + n * coeffs[static_cast<std::size_t>(n)];
    out.value = acc * z;
    const double x = bound_growth * std::abs(z);
    if (x >= 1) {
      out.tail = std::numeric_limits<double>::infinity();
      out.certified = false;
    } else {
      const int m = n_max() + 1;
      out.tail = bound_scale * std::pow(x, m) * (m / (1 - x) + x / ((1 - x) * (1 - x)));
    }
    return out;
  }
};

// Exact sequence a_n = c_n evaluated at beta.
inline std::vector<double> evaluated_totals(const CoefficientTable& tbl, double beta) {
  std::vector<double> out;
  for (int n = 0; n <= tbl.n_max; ++n) out.push_back(tbl.total(n).evaluate(beta));
  return out;
}

struct Reciprocal {
  std::complex<double> value;
  double error = 0;
  bool pole = false;
};

// 1/(v + e) for |e| <= t.
inline Reciprocal reciprocal(const SeriesValue& s, double pole_tol = 1e-12) {
  Reciprocal r;
  const double a = std::abs(s.value);
  if (!s.certified || a <= s.tail || a < pole_tol) {
    r.pole = true;
    r.error = std::numeric_limits<double>::infinity();
    return r;
  }
  r.value = 1.0 / s.value;
  r.error = s.tail / (a * (a - s.tail));
  return r;
}

struct DerivedSeries {
  int d = 0, r = 0;
  double beta = 0;
  PowerSeries chi, chi_t, h;
  std::vector<std::string> failures;

  Reciprocal F(std::complex<double> z) const { return reciprocal(chi.evaluate(z)); }
  Reciprocal phi(std::complex<double> z) const { return reciprocal(chi_t.evaluate(z)); }
  // Delta = phi - F.
  Reciprocal delta(std::complex<double> z) const {
    auto a = phi(z), b = F(z);
    Reciprocal out;
    out.pole = a.pole || b.pole;
    out.value = a.value - b.value;
    out.error = a.error + b.error;
    return out;
  }
};

inline DerivedSeries derived_series(const CoefficientTable& tz, const CoefficientTable& tt, double beta) {
  if (tz.config.d != tt.config.d || !tt.config.is_torus() || tz.config.is_torus())
    throw std::invalid_argument("derived_series needs a Z^d table and a torus table of the same dimension");
  DerivedSeries out;
  out.d = tz.config.d;
  out.r = tt.config.r;
  out.beta = beta;
  const int n_max = std::min(tz.n_max, tt.n_max);
  const double g = 2.0 * out.d;
  out.chi.bound_growth = out.chi_t.bound_growth = out.h.bound_growth = g;
  for (int n = 0; n <= n_max; ++n) {
    out.chi.coeffs.push_back(tz.total(n).evaluate(beta));
    out.chi_t.coeffs.push_back(tt.total(n).evaluate(beta));
    BetaPolynomial hn = tt.total(n) - tz.total(n);
    out.h.coeffs.push_back(hn.evaluate(beta));
    if (n < out.r && !hn.is_zero()) out.failures.push_back("h_n nonzero for n < r at n=" + std::to_string(n));
    for (int k = 0; k <= 20; ++k)
      if (hn.evaluate(k / 20.0) > 0) {
        out.failures.push_back("h_n > 0 at n=" + std::to_string(n) + " beta=" + std::to_string(k / 20.0));
        break;
      }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exact formal-series identities.

// Formal reciprocal of a series with constant term 1, integer polynomial coefficients.
inline std::vector<BetaPolynomial> formal_reciprocal(const std::vector<BetaPolynomial>& a) {
  if (a.empty() || !(a[0] == BetaPolynomial::constant(1))) throw std::invalid_argument("constant term must be 1");
  std::vector<BetaPolynomial> inv(a.size());
  inv[0] = BetaPolynomial::constant(1);
  for (std::size_t n = 1; n < a.size(); ++n) {
    BetaPolynomial s;
    for (std::size_t k = 1; k <= n; ++k) s.add_product(a[k], inv[n - k]);
    inv[n] = -s;
  }
  return inv;
}

struct InverseIdentityReport {
  int n_max = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

// 1/chi = 1 - 2dz - Pi(z) on Z^d and the torus, and
// 1/chi^T - 1/chi = sum_N (-1)^(N+1) Delta^(N), coefficientwise.
inline InverseIdentityReport inverse_identities(const TablePair& c, const PiPair& pi) {
  InverseIdentityReport rep;
  const int d = c.infinite.config.d;
  rep.n_max = std::min({c.infinite.n_max, c.torus.n_max, pi.infinite.n_max});
  std::vector<BetaPolynomial> cz, ct;
  for (int n = 0; n <= rep.n_max; ++n) {
    cz.push_back(c.infinite.total(n));
    ct.push_back(c.torus.total(n));
  }
  auto Fz = formal_reciprocal(cz), Ft = formal_reciprocal(ct);
  for (int n = 0; n <= rep.n_max; ++n) {
    for (const auto* side : {&pi.infinite, &pi.torus}) {
      BetaPolynomial expect;
      if (n == 0) expect = BetaPolynomial::constant(1);
      if (n == 1) expect = BetaPolynomial::constant(-2 * d);
      if (n >= 2)
        for (const auto& [x, p] : side->signed_row(n)) expect -= p;
      const auto& got = side == &pi.infinite ? Fz[static_cast<std::size_t>(n)] : Ft[static_cast<std::size_t>(n)];
      if (!(got == expect))
        rep.failures.push_back(std::string(side == &pi.infinite ? "Z^d" : "torus") +
                               " reciprocal susceptibility differs from 1 - 2dz - Pi at n=" + std::to_string(n));
    }
    BetaPolynomial agg;
    for (const auto& t : pi.delta.terms) {
      if (t.N % 2 == 1)
        agg += t.Delta[static_cast<std::size_t>(n)];
      else
        agg -= t.Delta[static_cast<std::size_t>(n)];
    }
    // phi - F = -(Pi^T - Pi) = sum_N (-1)^(N+1) Delta^(N) when every lace size is present.
    if (pi.delta.N_max >= n - 1 && !(Ft[static_cast<std::size_t>(n)] - Fz[static_cast<std::size_t>(n)] == agg))
      rep.failures.push_back("phi - F differs from the alternating Delta sum at n=" + std::to_string(n));
  }
  return rep;
}

struct DeltaGridPoint {
  double z = 0;
  double phi_minus_F = 0, error_reciprocal = 0;
  double alternating_sum = 0, tail_alternating = 0;
  bool consistent = true, certified = true;
};

// Evaluated comparison of phi - F with sum_N (-1)^(N+1) Delta^(N)(z) on a z grid.
inline std::vector<DeltaGridPoint> delta_grid(const DerivedSeries& ds, const DeltaReport& delta,
                                              const std::vector<double>& z_grid) {
  std::vector<DeltaGridPoint> out;
  const double g = 2.0 * ds.d;
  for (double z : z_grid) {
    DeltaGridPoint p;
    p.z = z;
    auto r = ds.delta(z);
    p.phi_minus_F = r.value.real();
    p.error_reciprocal = r.error;
    double s = 0;
    for (const auto& t : delta.terms)
      for (int n = 0; n <= delta.n_max; ++n)
        s += (t.N % 2 == 1 ? 1.0 : -1.0) * t.Delta[static_cast<std::size_t>(n)].evaluate(ds.beta) * std::pow(z, n);
    p.alternating_sum = s;
    // |Delta^(N)_n| <= beta^N #laces(n, N) (2d)^n.
    double tail = 0;
    for (int n = delta.n_max + 1; n < delta.n_max + 4000; ++n) {
      double term = 0;
      for (int N = 1; N < n; ++N) term += std::pow(ds.beta, N) * lace_count(n, N);
      term *= std::pow(g * z, n);
      tail += term;
      if (!std::isfinite(tail)) break;
      if (n > delta.n_max + 30 && term < 1e-18 * std::max(tail, 1e-300)) break;
      if (n == delta.n_max + 3999) tail = std::numeric_limits<double>::infinity();
    }
    p.tail_alternating = tail;
    p.certified = !r.pole && std::isfinite(tail);
    p.consistent = !p.certified ||
                   std::abs(p.phi_minus_F - p.alternating_sum) <= p.error_reciprocal + tail + 1e-12 * (1 + std::abs(s));
    out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Growth constant.

struct GrowthEstimate {
  double mu_hat = 0, A_hat = 0;
  int window_lo = 0, window_hi = 0;
  std::vector<double> ratios;      // c_n / c_{n-1}
  std::vector<double> richardson;  // n mu_n - (n-1) mu_{n-1}, over the window
  double residual = 0;             // spread of the extrapolants
};

// Ratio method with first-order Richardson extrapolation in 1/n.
inline GrowthEstimate estimate_growth(const std::vector<double>& c, int window = 4) {
  if (c.size() < 6) throw std::invalid_argument("growth estimation needs at least six terms");
  for (double v : c)
    if (!(v > 0)) throw std::invalid_argument("growth estimation needs positive terms");
  GrowthEstimate g;
  const int n_max = static_cast<int>(c.size()) - 1;
  g.ratios.assign(c.size(), 0.0);
  for (int n = 1; n <= n_max; ++n) g.ratios[static_cast<std::size_t>(n)] = c[static_cast<std::size_t>(n)] / c[static_cast<std::size_t>(n - 1)];
  window = std::clamp(window, 1, n_max - 2);
  g.window_lo = n_max - window + 1;
  g.window_hi = n_max;
  double sum = 0, lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int n = g.window_lo; n <= g.window_hi; ++n) {
    double mu_n = g.ratios[static_cast<std::size_t>(n)], mu_m = g.ratios[static_cast<std::size_t>(n - 1)];
    double e = mu_n == mu_m ? mu_n : n * mu_n - (n - 1) * mu_m;
    g.richardson.push_back(e);
    sum += e;
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  g.mu_hat = sum / window;
  if (hi - lo == 0) g.mu_hat = lo;
  g.residual = hi - lo;
  g.A_hat = c.back() / std::pow(g.mu_hat, n_max);
  return g;
}

// ---------------------------------------------------------------------------
// Tauberian bound: |a_n| <= K1 K2 n^{b+c-1} R^{-n}.

struct TauberianReport {
  double R = 0, b = 0, c = 0, K1 = 0;
  std::vector<double> K2_n;  // index n (n = 0 unused)
  double K2 = 0;
  bool finite = false, stable = false;
};

inline TauberianReport tauberian_check(const std::vector<double>& a, double R, double b, double c, double K1) {
  if (!(b > 1) || c < 0 || !(R > 0) || !(K1 > 0)) throw std::invalid_argument("Tauberian check needs b > 1, c >= 0, R > 0, K1 > 0");
  if (a.size() < 3) throw std::invalid_argument("Tauberian check needs at least three terms");
  TauberianReport rep{R, b, c, K1, {0.0}, 0, false, false};
  const int n_max = static_cast<int>(a.size()) - 1;
  double first = 0, second = 0;
  for (int n = 1; n <= n_max; ++n) {
    double k = std::abs(a[static_cast<std::size_t>(n)]) * std::exp(n * std::log(R)) / (K1 * std::pow(n, b + c - 1));
    rep.K2_n.push_back(k);
    rep.K2 = std::max(rep.K2, k);
    if (n <= n_max / 2)
      first = std::max(first, k);
    else
      second = std::max(second, k);
  }
  rep.finite = std::isfinite(rep.K2);
  // Stable: the running maximum is attained in the first half of the range.
  rep.stable = rep.finite && second <= first * (1 + 1e-12);
  return rep;
}

// Smallest K1 with |f(z)| <= K1 / (|1 - z/R|^b (1 - |z|/R)^c) on a polar grid inside |z| < R.
inline double sample_k1(const std::function<std::complex<double>(std::complex<double>)>& f, double R, double b, double c,
                        int radii = 20, int angles = 64, double max_frac = 0.95) {
  double K1 = 0;
  for (int i = 0; i <= radii; ++i) {
    double rho = R * max_frac * i / radii;
    for (int j = 0; j < angles; ++j) {
      auto z = std::polar(rho, 2 * std::numbers::pi * j / angles);
      double w = std::pow(std::abs(1.0 - z / R), b) * std::pow(1 - rho / R, c);
      K1 = std::max(K1, std::abs(f(z)) * w);
    }
  }
  return K1;
}

// ---------------------------------------------------------------------------
// Submultiplicative bound: a_n <= z^n / w^{2n} (A(w) / (n+1))^2 for n >= 1, z >= w > 0.

struct HutchcroftPoint {
  int n = 0;
  double z = 0, w = 0, a = 0, bound_lo = 0, bound_hi = 0;
};

struct HutchcroftReport {
  bool refused = false;
  std::string refusal;
  std::size_t checked = 0, violated = 0, undecidable = 0;
  std::vector<HutchcroftPoint> violations;
  double min_log_margin = std::numeric_limits<double>::infinity();  // log(bound_lo / a) over checked points
  bool ok() const { return !refused && violated == 0; }
};

// The sequence is taken as exact for n <= n_max; when `finite` it vanishes beyond,
// otherwise the tail of A(w) is bounded by a_n <= a_1^n.
inline HutchcroftReport hutchcroft_bound_check(const std::vector<double>& a, const std::vector<double>& z_grid,
                                               const std::vector<double>& w_grid, bool finite = false,
                                               double rel_tol = 1e-12) {
  HutchcroftReport rep;
  const int n_max = static_cast<int>(a.size()) - 1;
  for (int n = 0; n <= n_max && !rep.refused; ++n) {
    if (a[static_cast<std::size_t>(n)] < 0) {
      rep.refused = true;
      rep.refusal = "negative term at n=" + std::to_string(n);
    }
    for (int m = 0; n + m <= n_max && !rep.refused; ++m) {
      double lhs = a[static_cast<std::size_t>(n + m)], rhs = a[static_cast<std::size_t>(n)] * a[static_cast<std::size_t>(m)];
      if (lhs > rhs * (1 + rel_tol)) {
        rep.refused = true;
        rep.refusal = "not submultiplicative at n=" + std::to_string(n) + " m=" + std::to_string(m);
      }
    }
  }
  if (rep.refused) return rep;
  const double a1 = n_max >= 1 ? a[1] : 0.0;
  for (double w : w_grid) {
    if (!(w > 0)) continue;
    double A = 0;
    for (int n = n_max; n >= 0; --n) A = A * w + a[static_cast<std::size_t>(n)];
    double tail = 0;
    if (!finite) {
      double x = a1 * w;
      tail = x < 1 ? std::pow(x, n_max + 1) / (1 - x) : std::numeric_limits<double>::infinity();
    }
    for (double z : z_grid) {
      if (z < w) continue;
      for (int n = 1; n <= n_max; ++n) {
        HutchcroftPoint p{n, z, w, a[static_cast<std::size_t>(n)], 0, 0};
        double lz = n * (std::log(z) - 2 * std::log(w));
        p.bound_lo = std::exp(lz + 2 * std::log(A / (n + 1)));
        p.bound_hi = std::isfinite(tail) ? std::exp(lz + 2 * std::log((A + tail) / (n + 1))) : std::numeric_limits<double>::infinity();
        ++rep.checked;
        if (p.a > p.bound_hi * (1 + rel_tol)) {
          ++rep.violated;
          rep.violations.push_back(p);
        } else if (p.a > p.bound_lo * (1 + rel_tol)) {
          ++rep.undecidable;
        }
        if (p.a > 0) rep.min_log_margin = std::min(rep.min_log_margin, std::log(p.bound_lo / p.a));
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Expected length under P_z^T: E L = z chi'(z) / chi(z), as an interval.

inline Interval expected_length(const CoefficientTable& tt, double beta, double z) {
  if (z < 0) throw std::invalid_argument("activity must be nonnegative");
  PowerSeries s;
  s.coeffs = evaluated_totals(tt, beta);
  s.bound_growth = 2.0 * tt.config.d;
  auto num = s.z_derivative(z);
  auto den = s.evaluate(z);
  if (!num.certified || !den.certified) return {0, std::numeric_limits<double>::infinity()};
  const double N = num.value.real(), D = den.value.real();
  // Both series have nonnegative coefficients.
  return {N / (D + den.tail), (N + num.tail) / D};
}

}  // namespace wsaw
