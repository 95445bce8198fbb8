#include <gtest/gtest.h>

#include "wsaw/diagrams.hpp"

using namespace wsaw;

TEST(Fields, ConvolutionBasics) {
  auto f = two_point_field(enumerate(LatticeConfig::torus(2, 3), 5), 0.3, 0.1);
  auto id = convolve(delta_field(2, 3), f);
  for (const auto& [x, v] : f.values) EXPECT_DOUBLE_EQ(id.value(x), v);
  auto ones = constant_field(1, 3, 1.0);
  auto oo = convolve(ones, ones);
  for (Coord x = -1; x <= 1; ++x) EXPECT_DOUBLE_EQ(oo.value({x}), 3.0);
  auto d0 = convolve(delta_field(3), delta_field(3));
  EXPECT_EQ(d0.values.size(), 1u);
  EXPECT_EQ(d0.value(origin(3)), 1.0);
  auto all = constant_field(2, 3, 1.0);
  auto s = convolve(all, f);
  for (const auto& [x, v] : s.values) EXPECT_NEAR(v, f.sum(), 1e-12);
  EXPECT_THROW(convolve(delta_field(2, 3), delta_field(2, 4)), std::invalid_argument);
}

TEST(Fields, TwoPointExamples) {
  auto t = enumerate(LatticeConfig::infinite_lattice(2), 6);
  auto g0 = two_point_field(t, 0.4, 0.0);
  EXPECT_EQ(g0.value(origin(2)), 1.0);
  EXPECT_EQ(g0.value({1, 0}), 0.0);
  auto g = two_point_field(t, 0.4, 0.1);
  EXPECT_EQ(g.value({7, 0}), 0.0);
  EXPECT_GT(g.tail({7, 0}), 0.0);
  // Monotone in z at every site.
  auto h = two_point_field(t, 0.4, 0.15);
  for (const auto& [x, v] : g.values) EXPECT_LE(v, h.value(x));
}

TEST(Fields, MatchesGreenFunctionAtBetaZero) {
  for (auto cfg : {LatticeConfig::infinite_lattice(2), LatticeConfig::torus(2, 3), LatticeConfig::torus(3, 4)}) {
    const int n = cfg.d == 3 ? 6 : 10;
    auto g = two_point_field(enumerate(cfg, n), 0.0, 0.05);
    for (const auto& [x, v] : g.values) EXPECT_LE(std::abs(srw_green(cfg, 0.05, x) - v), g.tail(x) + 1e-14);
  }
}

TEST(Gamma, SeriesLevelIdentities) {
  auto c = enumerate_both(2, 3, 8);
  auto rep = gamma_series_check(c.infinite, c.torus, {0.0, 0.1, 0.5, 1.0});
  EXPECT_TRUE(rep.ok());
  EXPECT_TRUE(rep.dominated);
  EXPECT_TRUE(rep.sums_match);
  EXPECT_GT(rep.strict_orders, 0);
}

TEST(Gamma, FieldExamples) {
  auto c = enumerate_both(1, 3, 12);
  auto zero = gamma_field(c.infinite, c.torus, 0.5, 0.0);
  EXPECT_EQ(zero.gamma.value({0}), 1.0);
  EXPECT_EQ(zero.gamma.value({1}), 0.0);
  auto flat = gamma_field(c.infinite, c.torus, 0.0, 0.1);
  EXPECT_TRUE(flat.ok());
  for (Coord x = -1; x <= 1; ++x)
    EXPECT_LE(std::abs(flat.gamma.value({x}) - flat.torus.value({x})), flat.gamma.tail({x}) + flat.torus.tail({x}) + 1e-14);
  auto strict = gamma_field(c.infinite, c.torus, 0.5, 0.1);
  EXPECT_TRUE(strict.ok());
  EXPECT_FALSE(strict.strict_sites.empty());
}

TEST(Gamma, SumsToSusceptibility) {
  auto c = enumerate_both(2, 4, 8);
  for (double beta : {0.0, 0.2}) {
    const double z = 0.06;
    auto gf = gamma_field(c.infinite, c.torus, beta, z);
    double chi = 0, chi_t = 0;
    for (int n = 0; n <= 8; ++n) {
      chi += c.infinite.total(n).evaluate(beta) * std::pow(z, n);
      chi_t += c.torus.total(n).evaluate(beta) * std::pow(z, n);
    }
    const double tail = 16 * geometric_tail(4 * z, 8);
    EXPECT_NEAR(gf.gamma.sum(), chi, tail);
    EXPECT_NEAR(gf.torus.sum(), chi_t, 1e-12);
  }
}

TEST(Folding, SeriesLevel) {
  auto t = enumerate(LatticeConfig::infinite_lattice(2), 10);
  auto rep = folding_identity_series(t, 3, 0.1, 0.05, 10);
  EXPECT_TRUE(rep.ok());
  EXPECT_TRUE(rep.bubble_exact);
  EXPECT_TRUE(rep.triangle_exact);
  auto zero = folding_identity_series(t, 3, 0.1, 0.0, 10);
  EXPECT_DOUBLE_EQ(zero.bubble_value, 1.0);
  EXPECT_DOUBLE_EQ(zero.triangle_value, 1.0);
}

TEST(Folding, BetaZeroFourier) {
  auto f = beta0_fields(1, 3, 0.1);
  auto rep = folding_identity_beta0(f);
  EXPECT_LT(rep.gamma_rel, 1e-10);
  EXPECT_LT(rep.bubble_rel, 1e-10);
  EXPECT_LT(rep.triangle_rel, 1e-10);
  EXPECT_LT(rep.sum_rel, 1e-10);
}

TEST(Folding, SrwGreenIsTheCopySum) {
  // Torus Green at beta = 0 is the copy sum of the Z^d Green function.
  auto f = beta0_fields(2, 5, 0.2, false);
  for (std::size_t i = 0; i < f.gamma.size(); ++i) {
    Site x = torus_site(static_cast<std::int64_t>(i), 2, 5);
    EXPECT_NEAR(srw_green(LatticeConfig::torus(2, 5), 0.2, x), f.gamma[i], 1e-10 * f.gamma[i]);
  }
}

TEST(Plateau, BetaZeroSuite) {
  auto rep = plateau_beta0(5, 5, {0.5, 0.9}, 10, 1e-10);
  EXPECT_TRUE(rep.ok()) << (rep.failures.empty() ? "" : rep.failures.front());
  for (const auto& p : rep.points) {
    EXPECT_GT(p.rho_min, 0.0);
    EXPECT_LE(p.rho_max, 10.0);
    EXPECT_GT(p.far_sites, 0u);
  }
}

TEST(Plateau, RangesOverlapAcrossSides) {
  // Matched (1 - z/zc) V^{1/2}: 0.1 * sqrt(3125) = s * sqrt(16807).
  const double s = 0.1 * std::sqrt(3125.0 / 16807.0);
  auto a = plateau_beta0(5, 5, {0.9}).points.front();
  auto b = plateau_beta0(5, 7, {1 - s}).points.front();
  EXPECT_LE(std::max(a.rho_min, b.rho_min), std::min(a.rho_max, b.rho_max));
}

TEST(Plateau, TruncatedIsReportOnly) {
  auto c = enumerate_both(2, 4, 8);
  auto p = plateau_truncated(c.infinite, c.torus, 0.1, 0.05);
  EXPECT_LE(p.rho_lo, p.rho_hi);
}

TEST(Psi, Examples) {
  auto zero = psi_point(5, 3, 0.0);
  EXPECT_EQ(zero.psi0, 0.0);
  auto p = psi_point(5, 5, 0.08);
  EXPECT_GE(p.psi_tilde0, p.psi0);
  for (const auto& q : psi_report(5, 0.08, {3, 5}).points) EXPECT_GE(q.psi_tilde0, q.psi0);
}

// Psi_z(0) is at most of order r^{-(d-2)}; below z_c the mass gap makes the decay steeper,
// and the fitted exponent relaxes towards -(d-2) as z -> z_c.
TEST(Psi, ExponentApproachesDMinusTwoNearCritical) {
  std::vector<double> slopes;
  for (double z : {0.08, 0.099, 0.0999}) {
    auto rep = psi_report(5, z, {3, 5, 7, 9});
    EXPECT_EQ(rep.expected_exponent, -3.0);
    EXPECT_LE(rep.exponent_psi0, -3.0 + 0.5) << z;
    slopes.push_back(rep.exponent_psi0);
  }
  EXPECT_LT(slopes[0], slopes[1]);
  EXPECT_LT(slopes[1], slopes[2]);
  EXPECT_NEAR(slopes[2], -3.0, 0.6);
}
