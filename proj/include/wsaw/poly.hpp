#pragma once

// Exact integer polynomials in the interaction strength beta.
//
// Every enumerated quantity of the weakly self-avoiding walk is a sum of
// per-walk weights (1 - beta)^m, so it is a polynomial in beta with integer
// coefficients.  Walk kernels accumulate histograms over m ("q-counts", with
// q = 1 - beta) and convert once at the end.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace wsaw {

using BigInt = boost::multiprecision::cpp_int;

namespace detail {

// Converts num * 2^exp2 to double with a single rounding step.
inline double scaled_to_double(const BigInt& num, long exp2) {
  if (num == 0) return 0.0;
  BigInt mag = abs(num);
  long bits = static_cast<long>(boost::multiprecision::msb(mag)) + 1;
  long shift = std::max(0L, bits - 64);
  auto top = static_cast<std::uint64_t>(mag >> shift);
  double v = std::ldexp(static_cast<double>(top), static_cast<int>(shift + exp2));
  return num < 0 ? -v : v;
}

inline double to_double(const BigInt& num) { return scaled_to_double(num, 0); }

}  // namespace detail

class BetaPolynomial {
 public:
  BetaPolynomial() = default;

  explicit BetaPolynomial(std::vector<BigInt> coeffs) : coeffs_(std::move(coeffs)) {
    normalize();
  }

  static BetaPolynomial constant(const BigInt& c) { return BetaPolynomial({c}); }

  static BetaPolynomial beta_power(int k, const BigInt& c = 1) {
    std::vector<BigInt> v(static_cast<std::size_t>(k) + 1);
    v.back() = c;
    return BetaPolynomial(std::move(v));
  }

  // beta^shift * sum_m counts[m] * q^m, with q = 1 - beta.
  template <typename Int>
  static BetaPolynomial from_q_counts(std::span<const Int> counts, int shift = 0) {
    std::size_t top = counts.size();
    while (top > 0 && counts[top - 1] == 0) --top;
    if (top == 0) return {};
    // Horner in q: p <- p * (1 - beta) + counts[m].
    std::vector<BigInt> acc(top, BigInt(0));
    std::size_t deg = 0;
    acc[0] = BigInt(counts[top - 1]);
    for (std::size_t m = top - 1; m-- > 0;) {
      ++deg;
      for (std::size_t k = deg; k >= 1; --k) acc[k] -= acc[k - 1];
      acc[0] += BigInt(counts[m]);
    }
    std::vector<BigInt> out(static_cast<std::size_t>(shift), BigInt(0));
    out.insert(out.end(), acc.begin(), acc.end());
    return BetaPolynomial(std::move(out));
  }

  static BetaPolynomial from_q_coefficients(const std::vector<BigInt>& q, int shift = 0) {
    return from_q_counts<BigInt>(std::span<const BigInt>(q), shift);
  }

  const std::vector<BigInt>& coeffs() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  BigInt at_zero() const { return coeffs_.empty() ? BigInt(0) : coeffs_[0]; }
  BigInt coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : BigInt(0); }

  // Value at beta = 1 (sum of coefficients).
  BigInt at_one() const {
    BigInt s = 0;
    for (const auto& c : coeffs_) s += c;
    return s;
  }

  // Exact evaluation at the dyadic rational represented by `beta`, rounded once.
  double evaluate(double beta) const {
    if (coeffs_.empty()) return 0.0;
    if (beta == 0.0) return detail::to_double(coeffs_[0]);
    int e = 0;
    double frac = std::frexp(beta, &e);  // beta = frac * 2^e, frac in [0.5, 1)
    auto mant = static_cast<std::int64_t>(std::ldexp(frac, 53));
    long exp2 = e - 53;  // beta = mant * 2^exp2
    // Strip trailing zero bits so the shifts below stay small.
    while (mant % 2 == 0) {
      mant /= 2;
      ++exp2;
    }
    const long K = degree();
    const BigInt m(mant);
    if (exp2 >= 0) {
      BigInt x = m << static_cast<unsigned>(exp2);
      BigInt num = 0;
      for (long k = K; k >= 0; --k) num = num * x + coeffs_[static_cast<std::size_t>(k)];
      return detail::to_double(num);
    }
    // sum_k c_k m^k 2^(exp2 k) = 2^(exp2 K) * sum_k c_k m^k 2^(-exp2 (K - k))
    const auto scale = static_cast<unsigned>(-exp2);
    BigInt num = 0;
    for (long k = K; k >= 0; --k) num = num * m + (coeffs_[static_cast<std::size_t>(k)] << (scale * static_cast<unsigned>(K - k)));
    return detail::scaled_to_double(num, exp2 * K);
  }

  // Coefficients in the variable q = 1 - beta (beta = 1 - q).
  std::vector<BigInt> q_coefficients() const {
    if (coeffs_.empty()) return {};
    std::vector<BigInt> acc(1, coeffs_.back());
    for (std::size_t k = coeffs_.size() - 1; k-- > 0;) {
      // acc <- acc * (1 - q) + c_k
      acc.push_back(0);
      for (std::size_t j = acc.size() - 1; j >= 1; --j) acc[j] -= acc[j - 1];
      acc[0] += coeffs_[k];
    }
    while (!acc.empty() && acc.back() == 0) acc.pop_back();
    return acc;
  }

  // True when every q-coefficient is nonnegative.
  bool nonnegative_in_q() const {
    for (const auto& c : q_coefficients())
      if (c < 0) return false;
    return true;
  }

  BetaPolynomial& operator+=(const BetaPolynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    normalize();
    return *this;
  }
  BetaPolynomial& operator-=(const BetaPolynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    normalize();
    return *this;
  }
  BetaPolynomial operator-() const {
    BetaPolynomial r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
  }
  BetaPolynomial& operator*=(const BigInt& s) {
    if (s == 0) {
      coeffs_.clear();
      return *this;
    }
    for (auto& c : coeffs_) c *= s;
    return *this;
  }

  // this += a * b, without a temporary.
  void add_product(const BetaPolynomial& a, const BetaPolynomial& b) {
    if (a.is_zero() || b.is_zero()) return;
    std::size_t n = a.coeffs_.size() + b.coeffs_.size() - 1;
    if (coeffs_.size() < n) coeffs_.resize(n);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (a.coeffs_[i] == 0) continue;
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    normalize();
  }

  friend BetaPolynomial operator+(BetaPolynomial a, const BetaPolynomial& b) { return a += b; }
  friend BetaPolynomial operator-(BetaPolynomial a, const BetaPolynomial& b) { return a -= b; }
  friend BetaPolynomial operator*(const BetaPolynomial& a, const BetaPolynomial& b) {
    BetaPolynomial r;
    r.add_product(a, b);
    return r;
  }
  friend bool operator==(const BetaPolynomial& a, const BetaPolynomial& b) {
    return a.coeffs_ == b.coeffs_;
  }

  std::vector<std::string> to_strings() const {
    std::vector<std::string> out;
    out.reserve(coeffs_.size());
    for (const auto& c : coeffs_) out.push_back(c.str());
    return out;
  }

  static BetaPolynomial from_strings(const std::vector<std::string>& s) {
    std::vector<BigInt> v;
    v.reserve(s.size());
    for (const auto& str : s) {
      if (str.empty()) throw std::invalid_argument("empty coefficient string");
      v.emplace_back(str);
    }
    return BetaPolynomial(std::move(v));
  }

  friend std::ostream& operator<<(std::ostream& os, const BetaPolynomial& p) {
    if (p.is_zero()) return os << "0";
    bool first = true;
    for (std::size_t k = 0; k < p.coeffs_.size(); ++k) {
      if (p.coeffs_[k] == 0) continue;
      if (!first) os << " + ";
      os << p.coeffs_[k];
      if (k == 1) os << "*b";
      if (k > 1) os << "*b^" << k;
      first = false;
    }
    return os;
  }

 private:
  void normalize() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }

  std::vector<BigInt> coeffs_;
};

}  // namespace wsaw
