#pragma once

// Geometry of Z^d and the discrete torus T_r^d = (Z / rZ)^d.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace wsaw {

using Coord = std::int64_t;
using Site = std::vector<Coord>;

enum class Geometry { infinite, torus };

inline const char* to_string(Geometry g) { return g == Geometry::torus ? "torus" : "infinite"; }

struct LatticeConfig {
  int d = 1;
  Geometry geometry = Geometry::infinite;
  int r = 0;  // torus side, ignored for the infinite lattice
  double beta = 0.0;

  static LatticeConfig infinite_lattice(int d, double beta = 0.0) {
    LatticeConfig c{d, Geometry::infinite, 0, beta};
    c.validate();
    return c;
  }
  static LatticeConfig torus(int d, int r, double beta = 0.0) {
    LatticeConfig c{d, Geometry::torus, r, beta};
    c.validate();
    return c;
  }

  bool is_torus() const { return geometry == Geometry::torus; }

  std::int64_t volume() const {
    if (!is_torus()) throw std::logic_error("volume of the infinite lattice");
    std::int64_t v = 1;
    for (int i = 0; i < d; ++i) v *= r;
    return v;
  }

  void validate() const {
    if (d < 1 || d > 16) throw std::invalid_argument("dimension must lie in [1, 16]");
    if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must lie in [0, 1]");
    if (is_torus()) {
      if (r < 3) throw std::invalid_argument("torus side r must be at least 3");
      // r^d must fit comfortably in 63 bits.
      long double v = 1;
      for (int i = 0; i < d; ++i) v *= r;
      if (v > 4.0e18L) throw std::invalid_argument("torus volume overflows 64-bit indexing");
    }
  }
};

// Representative of c mod r in [-r/2, r/2).
inline Coord canonical_coord(Coord c, int r) {
  Coord lo = -(r / 2);  // floor(-r/2) for even r; for odd r, -(r-1)/2 = ceil(-r/2)
  Coord m = c - lo;
  m %= r;
  if (m < 0) m += r;
  return m + lo;
}

inline Site canonical_rep(Site x, int r) {
  if (r < 3) throw std::invalid_argument("canonical_rep requires r >= 3");
  for (auto& c : x) c = canonical_coord(c, r);
  return x;
}

inline Coord norm_inf(const Site& x) {
  Coord m = 0;
  for (auto c : x) m = std::max<Coord>(m, std::llabs(c));
  return m;
}

inline Coord norm_1(const Site& x) {
  Coord m = 0;
  for (auto c : x) m += std::llabs(c);
  return m;
}

inline Site origin(int d) { return Site(static_cast<std::size_t>(d), 0); }

inline Site operator+(Site a, const Site& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}
inline Site operator-(Site a, const Site& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}
inline Site scaled(Site a, Coord s) {
  for (auto& c : a) c *= s;
  return a;
}

// Unit step directions are encoded 0..2d-1: 2*axis for +e_axis, 2*axis+1 for -e_axis.
using Direction = std::uint8_t;

inline Site unit_step(int d, Direction dir) {
  Site e = origin(d);
  e[dir / 2] = (dir % 2 == 0) ? 1 : -1;
  return e;
}

inline Direction direction_of(const Site& step) {
  int axis = -1;
  for (std::size_t i = 0; i < step.size(); ++i) {
    if (step[i] == 0) continue;
    if (axis >= 0 || std::llabs(step[i]) != 1) throw std::invalid_argument("not a unit step");
    axis = static_cast<int>(i);
  }
  if (axis < 0) throw std::invalid_argument("zero step");
  return static_cast<Direction>(2 * axis + (step[static_cast<std::size_t>(axis)] < 0 ? 1 : 0));
}

// A nearest-neighbour walk on Z^d anchored at the origin.
struct WalkPath {
  int d = 1;
  std::vector<Direction> steps;

  std::size_t length() const { return steps.size(); }

  std::vector<Site> vertices() const {
    std::vector<Site> v;
    v.reserve(steps.size() + 1);
    v.push_back(origin(d));
    for (auto s : steps) {
      Site next = v.back();
      next[s / 2] += (s % 2 == 0) ? 1 : -1;
      v.push_back(std::move(next));
    }
    return v;
  }

  Site endpoint() const { return vertices().back(); }

  friend bool operator==(const WalkPath&, const WalkPath&) = default;
};

// A walk on T_r^d, stored as canonical vertex representatives starting at 0.
struct TorusWalk {
  int d = 1;
  int r = 3;
  std::vector<Site> vertices;

  std::size_t length() const { return vertices.empty() ? 0 : vertices.size() - 1; }

  friend bool operator==(const TorusWalk&, const TorusWalk&) = default;
};

inline TorusWalk project_walk(const WalkPath& w, int r) {
  if (r < 3) throw std::invalid_argument("projection requires r >= 3");
  TorusWalk t{w.d, r, {}};
  for (auto& v : w.vertices()) t.vertices.push_back(canonical_rep(v, r));
  return t;
}

// Unwraps a torus walk: lift(0) = 0 and lift(k) - lift(k-1) = (w(k) - w(k-1))_r.
inline WalkPath lift_walk(const TorusWalk& w, const LatticeConfig& cfg) {
  if (!cfg.is_torus()) throw std::invalid_argument("lift_walk requires torus geometry");
  if (cfg.r < 3) throw std::invalid_argument("lift requires r >= 3");
  if (w.r != cfg.r || w.d != cfg.d) throw std::invalid_argument("walk does not match configuration");
  WalkPath out{cfg.d, {}};
  if (w.vertices.empty()) return out;
  if (canonical_rep(w.vertices.front(), cfg.r) != origin(cfg.d))
    throw std::invalid_argument("torus walk must start at the origin");
  for (std::size_t k = 1; k < w.vertices.size(); ++k) {
    Site diff = canonical_rep(w.vertices[k] - w.vertices[k - 1], cfg.r);
    out.steps.push_back(direction_of(diff));
  }
  return out;
}

// Index of a torus site in [0, r^d): coordinates taken mod r, axis 0 fastest.
inline std::int64_t torus_index(const Site& x, int r) {
  std::int64_t idx = 0;
  for (std::size_t i = x.size(); i-- > 0;) {
    Coord c = x[i] % r;
    if (c < 0) c += r;
    idx = idx * r + c;
  }
  return idx;
}

inline Site torus_site(std::int64_t idx, int d, int r) {
  Site x(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    x[static_cast<std::size_t>(i)] = canonical_coord(idx % r, r);
    idx /= r;
  }
  return x;
}

// Applies a signed coordinate permutation: result[i] = sign[i] * x[perm[i]].
inline Site apply_signed_permutation(const Site& x, const std::vector<int>& perm, const std::vector<int>& sign) {
  Site y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = sign[i] * x[static_cast<std::size_t>(perm[i])];
  return y;
}

// Sorted absolute values: the orbit label under signed permutations.
inline Site symmetry_class(Site x) {
  for (auto& c : x) c = std::llabs(c);
  std::sort(x.begin(), x.end());
  return x;
}

}  // namespace wsaw
