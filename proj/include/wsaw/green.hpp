#pragma once

// Simple random walk (beta = 0) Green functions.
//
// Torus: exact Fourier sum over the r^d modes.
// Z^d:   G^{*(m+1)}_z(x) = int_0^inf t^m/m! e^{-t} prod_j I_{x_j}(2 z t) dt,
//        evaluated with composite Gauss-Legendre on a graded mesh.  The
//        integrand factorises over coordinates, so sums over torus copies
//        x + r u reduce to one-dimensional copy sums per coordinate.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wsaw/fourier.hpp"
#include "wsaw/lattice.hpp"

namespace wsaw {

class DivergentSeries : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

namespace quadrature {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre nodes on [-1, 1] by Newton iteration on P_n.
inline Rule gauss_legendre(int n) {
  Rule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[static_cast<std::size_t>(i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace quadrature

// e^{-y} I_k(y) for k = 0..K by Miller's backward recurrence, normalised
// with e^{y} = I_0(y) + 2 sum_{k>=1} I_k(y).
inline std::vector<double> scaled_bessel_i(int K, double y) {
  std::vector<double> out(static_cast<std::size_t>(K) + 1, 0.0);
  if (y <= 0.0) {
    out[0] = 1.0;
    return out;
  }
  const int start = std::max(K, static_cast<int>(std::sqrt(150.0 * y))) + 40;
  double next = 0.0, cur = 1e-300, norm = 0.0;
  for (int k = start; k >= 1; --k) {
    double prev = (2.0 * k / y) * cur + next;  // I_{k-1}
    next = cur;
    cur = prev;
    norm += 2.0 * next;  // adds I_k
    if (k - 1 <= K) out[static_cast<std::size_t>(k - 1)] = cur;
    if (k <= K) out[static_cast<std::size_t>(k)] = next;
    if (std::abs(cur) > 1e250) {
      cur *= 1e-250;
      next *= 1e-250;
      norm *= 1e-250;
      for (auto& v : out) v *= 1e-250;
    }
  }
  norm += cur;  // I_0
  for (auto& v : out) v /= norm;
  return out;
}

// Quadrature for the moment-m heat-kernel integral of simple random walk on Z^d.
class HeatKernel {
 public:
  // moment 0 gives G_z, 1 gives G_z * G_z, 2 gives the triple convolution.
  // max_order bounds the coordinate magnitudes that can be queried.
  HeatKernel(int d, double z, int moment, int max_order) : d_(d), z_(z), moment_(moment) {
    if (d < 1) throw std::invalid_argument("dimension must be positive");
    if (z < 0) throw std::invalid_argument("activity must be nonnegative");
    eps_ = 1.0 - 2.0 * d * z;
    if (eps_ <= 0) throw DivergentSeries("Z^d Green function diverges for 2dz >= 1");
    build_mesh();
    double ymax = 2.0 * z * nodes_.back();
    order_ = std::max(max_order, static_cast<int>(std::sqrt(120.0 * ymax)) + 8);
    table_.resize(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) table_[i] = scaled_bessel_i(order_, 2.0 * z * nodes_[i]);
  }

  int dim() const { return d_; }
  double activity() const { return z_; }
  int max_order() const { return order_; }
  std::size_t node_count() const { return nodes_.size(); }

  double value(const Site& x) const {
    check(x);
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      double p = weights_[i];
      for (auto c : x) p *= table_[i][static_cast<std::size_t>(std::llabs(c))];
      acc += p;
    }
    return acc;
  }

  struct CopySum {
    double value = 0.0;
    double tail = 0.0;  // bound on the omitted copies ||u||_inf > u_max
  };

  // sum_{||u||_inf <= u_max} f(x + r u), plus a bound on the remaining copies.
  CopySum periodized(const Site& x, int r, int u_max) const {
    if (r < 1) throw std::invalid_argument("period must be positive");
    const Coord reach = static_cast<Coord>(r) * (u_max + 1) + norm_inf(x);
    if (reach + 2 > order_) throw std::out_of_range("copy sum exceeds the Bessel table; raise max_order");
    CopySum out;
    std::vector<double> in(x.size()), full(x.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const auto& I = table_[i];
      double pin = 1.0, pfull = 1.0;
      for (std::size_t j = 0; j < x.size(); ++j) {
        double s = 0.0;
        for (int u = -u_max; u <= u_max; ++u) s += I[static_cast<std::size_t>(std::llabs(x[j] + static_cast<Coord>(r) * u))];
        // Remaining copies: two one-sided tails starting at the nearest omitted orders.
        double t = 0.0;
        for (int sgn : {-1, 1}) {
          auto k0 = static_cast<std::size_t>(std::llabs(x[j] + static_cast<Coord>(r) * sgn * (u_max + 1)));
          double ratio = I[k0] > 0 ? I[k0 + 1] / I[k0] : 0.0;
          t += ratio < 1.0 ? I[k0] / (1.0 - ratio) : I[k0] * 1e6;
        }
        pin *= s;
        pfull *= s + t;
      }
      out.value += weights_[i] * pin;
      out.tail += weights_[i] * (pfull - pin);
    }
    return out;
  }

  // Copy sum large enough that the omitted copies are below `tol` relative.
  CopySum periodized_full(const Site& x, int r, double tol = 1e-17) const {
    int u = 1;
    while (true) {
      auto cs = periodized(x, r, u);
      if (cs.tail <= tol * cs.value) return cs;
      if (static_cast<Coord>(r) * (u + 2) + norm_inf(x) + 2 > order_)
        throw std::out_of_range("copy sum did not converge within the Bessel table");
      ++u;
    }
  }

 private:
  void check(const Site& x) const {
    if (static_cast<int>(x.size()) != d_) throw std::invalid_argument("site dimension mismatch");
    if (norm_inf(x) > order_) throw std::out_of_range("site beyond the Bessel table");
  }

  void build_mesh() {
    // Integrand ~ t^m e^{-eps t}; stop once that is below e^{-48} of its scale.
    double T = 1.0;
    while (eps_ * T - moment_ * std::log(std::max(T * eps_, 1.0)) < 48.0) T *= 1.25;
    const double wmax = std::min(2.0 / eps_, 64.0);
    static const quadrature::Rule rule = quadrature::gauss_legendre(32);
    double a = 0.0, h = 0.125;
    double fact = 1.0;
    for (int k = 2; k <= moment_; ++k) fact *= k;
    while (a < T) {
      double b = std::min(a + h, T);
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        double t = 0.5 * (b - a) * rule.nodes[i] + 0.5 * (a + b);
        double w = 0.5 * (b - a) * rule.weights[i];
        nodes_.push_back(t);
        weights_.push_back(w * std::pow(t, moment_) / fact * std::exp(-eps_ * t));
      }
      a = b;
      h = std::min(2.0 * h, wmax);
    }
  }

  int d_;
  double z_;
  int moment_;
  double eps_ = 1.0;
  int order_ = 0;
  std::vector<double> nodes_, weights_;
  std::vector<std::vector<double>> table_;
};

// Torus Green function and its convolution powers at beta = 0, all sites at once:
// (1/V) sum_k e^{ik.x} / (1 - 2dz D(k))^power.
inline std::vector<double> torus_green_powers(int d, int r, double z, int power = 1) {
  auto symbol = fourier::step_symbol(d, r);
  for (auto& s : symbol) {
    double den = 1.0 - 2.0 * d * z * s;
    if (den <= 0.0) throw DivergentSeries("torus Green function: nonpositive Fourier denominator");
    s = std::pow(den, -power);
  }
  return fourier::inverse_cosine(std::move(symbol), d, r);
}

// Green function of simple random walk (beta must be 0).
inline double srw_green(const LatticeConfig& cfg, double z, const Site& x) {
  if (cfg.beta != 0.0) throw std::invalid_argument("srw_green is the beta = 0 oracle");
  if (static_cast<int>(x.size()) != cfg.d) throw std::invalid_argument("site dimension mismatch");
  if (z == 0.0) return x == origin(cfg.d) ? 1.0 : 0.0;
  if (cfg.is_torus()) {
    // Single-site Fourier sum.
    auto symbol = fourier::step_symbol(cfg.d, cfg.r);
    const std::int64_t V = static_cast<std::int64_t>(symbol.size());
    Site xr = canonical_rep(x, cfg.r);
    double acc = 0.0;
    for (std::int64_t k = 0; k < V; ++k) {
      double den = 1.0 - 2.0 * cfg.d * z * symbol[static_cast<std::size_t>(k)];
      if (den <= 0.0) throw DivergentSeries("torus Green function: nonpositive Fourier denominator");
      std::int64_t rest = k;
      double phase = 1.0;
      for (int j = 0; j < cfg.d; ++j) {
        phase *= std::cos(2.0 * std::numbers::pi * static_cast<double>((rest % cfg.r) * xr[static_cast<std::size_t>(j)]) / cfg.r);
        rest /= cfg.r;
      }
      acc += phase / den;
    }
    return acc / static_cast<double>(V);
  }
  HeatKernel hk(cfg.d, z, 0, static_cast<int>(norm_inf(x)) + 2);
  return hk.value(x);
}

}  // namespace wsaw
