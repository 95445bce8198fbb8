#include <gtest/gtest.h>

#include "wsaw/completegraph.hpp"

using namespace wsaw;

TEST(CompleteGraph, Counts) {
  CompleteGraphModel K5(5);
  EXPECT_EQ(cnK(K5, 2), 12);
  EXPECT_EQ(cnK(K5, 0), 1);
  EXPECT_EQ(cnK(K5, 5), 0);
  BigInt fact = 1;
  for (int k = 2; k <= 365; ++k) fact *= k;
  EXPECT_EQ(cnK(CompleteGraphModel(366), 365), fact);
  EXPECT_THROW(CompleteGraphModel(1), std::invalid_argument);
}

TEST(CompleteGraph, Submultiplicative) {
  CompleteGraphModel K(40);
  for (int n = 0; n <= 39; ++n)
    for (int m = 0; n + m <= 39; ++m) EXPECT_LE(cnK(K, n + m), cnK(K, n) * cnK(K, m));
}

TEST(CompleteGraph, RatioAtOneStep) {
  for (std::int64_t V : {11, 101, 10001}) {
    CompleteGraphModel K(V);
    const double v = static_cast<double>(V - 1);
    EXPECT_NEAR(asymptotic_ratio(K, 1).ratio, std::exp(1 / v) * std::sqrt(1 - 1 / v), 1e-13);
  }
  auto edge = asymptotic_ratio(CompleteGraphModel(10), 9);
  EXPECT_TRUE(edge.boundary);
  EXPECT_THROW(asymptotic_ratio(CompleteGraphModel(10), 0), std::invalid_argument);
}

TEST(CompleteGraph, FormsAlongSqrtV) {
  // The full Stirling form is exact up to 1 + O(1/(v - n)).
  std::vector<double> quad;
  for (std::int64_t v : {1000, 10000, 100000}) {
    CompleteGraphModel K(v + 1);
    auto n = static_cast<std::int64_t>(std::sqrt(double(v)));
    EXPECT_NEAR(asymptotic_ratio(K, n, AsymptoticForm::stirling).ratio, 1.0, 1e-5);
    quad.push_back(std::abs(asymptotic_ratio(K, n, AsymptoticForm::quadratic).ratio - 1));
  }
  EXPECT_GT(quad[0], quad[1]);
  EXPECT_GT(quad[1], quad[2]);
}

// Exact: log c_n - n log v = sum log(1 - k/v) ~ -n^2/(2v), so e^{-n^2/v} overshoots by e^{n^2/(2v)}.
TEST(CompleteGraph, LiteralFormOffByHalfExponent) {
  CompleteGraphModel K(10001);
  const double lit = asymptotic_ratio(K, 100, AsymptoticForm::literal).ratio;
  const double quad = asymptotic_ratio(K, 100, AsymptoticForm::quadratic).ratio;
  EXPECT_NEAR(lit / quad, std::exp(0.5 * 1e4 / 1e4), 1e-12);
}

TEST(CompleteGraph, Phases) {
  const std::int64_t V = 10000;
  const double Vd = 1e4;
  EXPECT_EQ(classify_phase(V, (1 - std::pow(Vd, -0.6)) / Vd), Phase::dilute);
  EXPECT_EQ(classify_phase(V, 1 / Vd), Phase::window);
  EXPECT_EQ(classify_phase(V, (1 + std::pow(Vd, -0.4)) / Vd), Phase::dense);
  EXPECT_EQ(classify_phase(V, 0.5 / Vd), Phase::dilute);
}

TEST(CompleteGraph, Susceptibility) {
  CompleteGraphModel K(10000);
  auto zero = chiK_and_phase(K, 0.0);
  EXPECT_EQ(zero.chi, 1.0);
  EXPECT_EQ(zero.expected_length, 0.0);
  double prev = 0;
  for (double x : {0.1, 0.5, 0.9, 1.0, 1.01, 1.1}) {
    auto c = chiK_and_phase(K, x / 1e4);
    EXPECT_GT(c.log_chi, prev);
    prev = c.log_chi;
  }
  auto deep = chiK_and_phase(K, 2.0 / 1e4);
  EXPECT_TRUE(deep.log_domain);
  EXPECT_TRUE(std::isinf(deep.chi));
  EXPECT_GT(deep.expected_length, 0.4 * 1e4);
  // Deep in the dilute phase chi ~ 1/(1 - Vz).
  auto dilute = chiK_and_phase(K, 0.5 / 1e4);
  EXPECT_NEAR(dilute.chi, 2.0, 0.01);
  // Window: expected length of order V^{1/2}.
  auto win = chiK_and_phase(K, 1 / 1e4);
  EXPECT_GT(win.expected_length, 0.1 * 100);
  EXPECT_LT(win.expected_length, 10 * 100);
}

TEST(CompleteGraph, SmallExact) {
  CompleteGraphModel K(6);
  const double z = 0.3;
  double chi = 0, num = 0;
  for (int n = 0; n <= 5; ++n) {
    double t = static_cast<double>(cnK(K, n)) * std::pow(z, n);
    chi += t;
    num += n * t;
  }
  auto c = chiK_and_phase(K, z);
  EXPECT_NEAR(c.chi, chi, 1e-12 * chi);
  EXPECT_NEAR(c.expected_length, num / chi, 1e-12);
}
