#pragma once

// Self-avoiding walk on the complete graph K_V: c_n = v!/(v-n)!, v = V - 1.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "wsaw/poly.hpp"

namespace wsaw {

struct CompleteGraphModel {
  std::int64_t V = 2;

  explicit CompleteGraphModel(std::int64_t V_) : V(V_) {
    if (V < 2) throw std::invalid_argument("complete graph needs V >= 2");
  }
  std::int64_t v() const { return V - 1; }
};

inline BigInt cnK(const CompleteGraphModel& m, std::int64_t n) {
  if (n < 0) throw std::invalid_argument("walk length must be nonnegative");
  if (n > m.v()) return 0;
  BigInt out = 1;
  for (std::int64_t k = 0; k < n; ++k) out *= m.v() - k;
  return out;
}

// Natural log of a positive big integer.
inline double log_big(const BigInt& x) {
  if (x <= 0) throw std::domain_error("log of a nonpositive integer");
  const auto bits = static_cast<long>(boost::multiprecision::msb(x)) + 1;
  if (bits <= 60) return std::log(static_cast<double>(x));
  const long shift = bits - 60;
  BigInt top = x >> shift;
  return std::log(static_cast<double>(top)) + static_cast<double>(shift) * std::log(2.0);
}

enum class AsymptoticForm {
  literal,    // v^n e^{-n^2/v} / sqrt(1 - n/v)
  quadratic,  // v^n e^{-n^2/(2v)} / sqrt(1 - n/v)
  stirling,   // v^n e^{-n} (1 - n/v)^{-(v-n)} / sqrt(1 - n/v)
};

inline const char* to_string(AsymptoticForm f) {
  switch (f) {
    case AsymptoticForm::literal: return "literal";
    case AsymptoticForm::quadratic: return "quadratic";
    default: return "stirling";
  }
}

struct AsymptoticRatio {
  double ratio = 0;
  bool boundary = false;  // n = v, the prefactor is singular
};

inline AsymptoticRatio asymptotic_ratio(const CompleteGraphModel& m, std::int64_t n,
                                        AsymptoticForm form = AsymptoticForm::literal) {
  AsymptoticRatio out;
  const double v = static_cast<double>(m.v());
  if (n <= 0 || n > m.v()) throw std::invalid_argument("asymptotic ratio needs 0 < n <= v");
  if (n == m.v()) {
    out.boundary = true;
    out.ratio = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  const double nn = static_cast<double>(n);
  double log_closed = nn * std::log(v) - 0.5 * std::log1p(-nn / v);
  switch (form) {
    case AsymptoticForm::literal: log_closed -= nn * nn / v; break;
    case AsymptoticForm::quadratic: log_closed -= nn * nn / (2 * v); break;
    case AsymptoticForm::stirling: log_closed += -nn - (v - nn) * std::log1p(-nn / v); break;
  }
  out.ratio = std::exp(log_big(cnK(m, n)) - log_closed);
  return out;
}

enum class Phase { dilute, window, dense };

inline const char* to_string(Phase p) {
  switch (p) {
    case Phase::dilute: return "dilute";
    case Phase::window: return "window";
    default: return "dense";
  }
}

// Dilute for V z <= 1 - V^{-alpha}, dense for V z >= 1 + V^{alpha - 1}.
inline Phase classify_phase(std::int64_t V, double z, double alpha = 0.6) {
  const double Vd = static_cast<double>(V), x = Vd * z;
  if (x <= 1 - std::pow(Vd, -alpha)) return Phase::dilute;
  if (x >= 1 + std::pow(Vd, alpha - 1)) return Phase::dense;
  return Phase::window;
}

struct ChiK {
  double chi = 0;      // +inf when it overflows a double
  double log_chi = 0;  // always finite
  double expected_length = 0;
  Phase phase = Phase::dilute;
  bool log_domain = false;
};

// chi^K(z) = sum_{n <= v} c_n z^n with terms t_n = t_{n-1} (v - n + 1) z, summed
// relative to the largest term with Neumaier compensation.
inline ChiK chiK_and_phase(const CompleteGraphModel& m, double z, double alpha = 0.6) {
  if (z < 0) throw std::invalid_argument("activity must be nonnegative");
  ChiK out;
  out.phase = classify_phase(m.V, z, alpha);
  if (z == 0) {
    out.chi = 1;
    return out;
  }
  const std::int64_t v = m.v();
  std::vector<double> logt(static_cast<std::size_t>(v) + 1);
  double lmax = 0;
  for (std::int64_t n = 1; n <= v; ++n) {
    logt[static_cast<std::size_t>(n)] = logt[static_cast<std::size_t>(n - 1)] + std::log(static_cast<double>(v - n + 1)) + std::log(z);
    lmax = std::max(lmax, logt[static_cast<std::size_t>(n)]);
  }
  auto neumaier = [](double& s, double& c, double x) {
    double t = s + x;
    c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  };
  double s = 0, cs = 0, w = 0, cw = 0;
  for (std::int64_t n = 0; n <= v; ++n) {
    double t = std::exp(logt[static_cast<std::size_t>(n)] - lmax);
    neumaier(s, cs, t);
    neumaier(w, cw, static_cast<double>(n) * t);
  }
  s += cs;
  w += cw;
  out.log_chi = lmax + std::log(s);
  out.log_domain = out.log_chi > 700;
  out.chi = out.log_domain ? std::numeric_limits<double>::infinity() : std::exp(out.log_chi);
  out.expected_length = w / s;
  return out;
}

}  // namespace wsaw
