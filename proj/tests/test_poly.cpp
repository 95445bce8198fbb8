#include <gtest/gtest.h>

#include <random>

#include "wsaw/poly.hpp"

using namespace wsaw;

TEST(BetaPolynomial, ArithmeticAndEvaluation) {
  auto p = BetaPolynomial({BigInt(4), BigInt(-2)});  // 4 - 2b
  auto q = BetaPolynomial::beta_power(2, 3);          // 3b^2
  EXPECT_EQ((p + q).coeffs(), (std::vector<BigInt>{4, -2, 3}));
  EXPECT_EQ((p * p).coeffs(), (std::vector<BigInt>{16, -16, 4}));
  EXPECT_TRUE((p - p).is_zero());
  EXPECT_DOUBLE_EQ(p.evaluate(0.5), 3.0);
  EXPECT_DOUBLE_EQ(q.evaluate(0.25), 3.0 / 16);
  EXPECT_EQ(p.at_one(), 2);
}

TEST(BetaPolynomial, QCountsConvertToBeta) {
  // 2 walks with no pair, 1 walk with two pairs: 2 + q^2 = 3 - 2b + b^2.
  std::vector<std::int64_t> counts{2, 0, 1};
  auto p = BetaPolynomial::from_q_counts<std::int64_t>(counts);
  EXPECT_EQ(p.coeffs(), (std::vector<BigInt>{3, -2, 1}));
  EXPECT_EQ(p.q_coefficients(), (std::vector<BigInt>{2, 0, 1}));
  EXPECT_TRUE(p.nonnegative_in_q());
  EXPECT_FALSE(BetaPolynomial::beta_power(1).nonnegative_in_q());  // b = 1 - q
}

TEST(BetaPolynomial, QRoundTripRandom) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> c(-50, 50);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<BigInt> q(static_cast<std::size_t>(rep % 9 + 1));
    for (auto& x : q) x = c(rng);
    auto p = BetaPolynomial::from_q_coefficients(q, 0);
    while (!q.empty() && q.back() == 0) q.pop_back();
    EXPECT_EQ(p.q_coefficients(), q);
    // Evaluate both forms at beta = 0.3.
    double direct = 0, qq = 1;
    for (const auto& x : q) {
      direct += static_cast<double>(x) * qq;
      qq *= 0.7;
    }
    EXPECT_NEAR(p.evaluate(0.3), direct, 1e-9 * (1 + std::abs(direct)));
  }
}

TEST(BetaPolynomial, StringRoundTripIsExact) {
  BigInt big = 1;
  for (int i = 0; i < 40; ++i) big *= 1000003;
  auto p = BetaPolynomial({big, BigInt(-7), BigInt(0), -big});
  EXPECT_EQ(BetaPolynomial::from_strings(p.to_strings()), p);
  EXPECT_THROW(BetaPolynomial::from_strings({""}), std::invalid_argument);
}

TEST(BetaPolynomial, EvaluateLargeCoefficients) {
  BigInt big = BigInt(1) << 200;
  auto p = BetaPolynomial({big, -big});  // 2^200 (1 - b)
  EXPECT_NEAR(p.evaluate(0.75) / std::ldexp(0.25, 200), 1.0, 1e-15);
}
