#pragma once

// Separable discrete Fourier transforms on T_r^d.  Arrays are indexed by
// torus_index (axis 0 fastest, coordinates taken mod r).  Transforms are
// applied axis by axis, O(V r d), which is ample for the volumes used here.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "wsaw/lattice.hpp"

namespace wsaw::fourier {

using Complex = std::complex<double>;

namespace detail {

template <typename T, typename Kernel>
void transform_axes(std::vector<T>& a, int d, int r, Kernel&& kernel) {
  const std::int64_t V = static_cast<std::int64_t>(a.size());
  std::vector<T> line(static_cast<std::size_t>(r)), out(static_cast<std::size_t>(r));
  std::int64_t stride = 1;
  for (int axis = 0; axis < d; ++axis) {
    for (std::int64_t base = 0; base < V; ++base) {
      if ((base / stride) % r != 0) continue;
      for (int k = 0; k < r; ++k) line[static_cast<std::size_t>(k)] = a[static_cast<std::size_t>(base + k * stride)];
      for (int x = 0; x < r; ++x) {
        T acc{};
        for (int k = 0; k < r; ++k) acc += line[static_cast<std::size_t>(k)] * kernel((k * x) % r);
        out[static_cast<std::size_t>(x)] = acc;
      }
      for (int x = 0; x < r; ++x) a[static_cast<std::size_t>(base + x * stride)] = out[static_cast<std::size_t>(x)];
    }
    stride *= r;
  }
}

}  // namespace detail

inline std::int64_t torus_volume(int d, int r) {
  std::int64_t v = 1;
  for (int i = 0; i < d; ++i) v *= r;
  return v;
}

// f(x) = (1/V) sum_k S(k) prod_j cos(2 pi k_j x_j / r), for spectra even in each k_j.
inline std::vector<double> inverse_cosine(std::vector<double> spectrum, int d, int r) {
  std::vector<double> table(static_cast<std::size_t>(r));
  for (int m = 0; m < r; ++m) table[static_cast<std::size_t>(m)] = std::cos(2.0 * std::numbers::pi * m / r);
  detail::transform_axes(spectrum, d, r, [&](int m) { return table[static_cast<std::size_t>(m)]; });
  const double V = static_cast<double>(spectrum.size());
  for (auto& v : spectrum) v /= V;
  return spectrum;
}

inline std::vector<Complex> forward(std::vector<Complex> f, int d, int r) {
  std::vector<Complex> table(static_cast<std::size_t>(r));
  for (int m = 0; m < r; ++m) table[static_cast<std::size_t>(m)] = std::polar(1.0, -2.0 * std::numbers::pi * m / r);
  detail::transform_axes(f, d, r, [&](int m) { return table[static_cast<std::size_t>(m)]; });
  return f;
}

inline std::vector<Complex> inverse(std::vector<Complex> f, int d, int r) {
  std::vector<Complex> table(static_cast<std::size_t>(r));
  for (int m = 0; m < r; ++m) table[static_cast<std::size_t>(m)] = std::polar(1.0, 2.0 * std::numbers::pi * m / r);
  detail::transform_axes(f, d, r, [&](int m) { return table[static_cast<std::size_t>(m)]; });
  const double V = static_cast<double>(f.size());
  for (auto& v : f) v /= V;
  return f;
}

// Torus convolution (f * g)(x) = sum_y f(x - y) g(y) through the DFT.
inline std::vector<double> convolve(const std::vector<double>& f, const std::vector<double>& g, int d, int r) {
  if (f.size() != g.size()) throw std::invalid_argument("torus convolution: size mismatch");
  std::vector<Complex> F(f.begin(), f.end()), G(g.begin(), g.end());
  F = forward(std::move(F), d, r);
  G = forward(std::move(G), d, r);
  for (std::size_t i = 0; i < F.size(); ++i) F[i] *= G[i];
  F = inverse(std::move(F), d, r);
  std::vector<double> out(F.size());
  for (std::size_t i = 0; i < F.size(); ++i) out[i] = F[i].real();
  return out;
}

// D-hat(k) = (1/d) sum_j cos(2 pi k_j / r), indexed like the site arrays.
inline std::vector<double> step_symbol(int d, int r) {
  const std::int64_t V = torus_volume(d, r);
  std::vector<double> out(static_cast<std::size_t>(V));
  for (std::int64_t idx = 0; idx < V; ++idx) {
    std::int64_t rest = idx;
    double s = 0.0;
    for (int j = 0; j < d; ++j) {
      s += std::cos(2.0 * std::numbers::pi * static_cast<double>(rest % r) / r);
      rest /= r;
    }
    out[static_cast<std::size_t>(idx)] = s / d;
  }
  return out;
}

}  // namespace wsaw::fourier
