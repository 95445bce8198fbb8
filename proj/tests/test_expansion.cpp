#include <gtest/gtest.h>

#include "wsaw/expansion.hpp"

using namespace wsaw;

TEST(Pi, HandValues) {
  for (int d : {1, 2, 3}) {
    auto pi = pi_coefficients(LatticeConfig::infinite_lattice(d), 4);
    EXPECT_EQ(pi.at(1, 2, origin(d)), BetaPolynomial({BigInt(0), BigInt(2 * d)}));
    EXPECT_TRUE(pi.at(2, 2, origin(d)).is_zero());
    for (Direction dir = 0; dir < 2 * d; ++dir) EXPECT_EQ(pi.at(2, 3, unit_step(d, dir)), BetaPolynomial::beta_power(2));
  }
}

TEST(Pi, DefaultNmaxCoversEveryLace) {
  auto pi = pi_coefficients(LatticeConfig::infinite_lattice(1), 9);
  EXPECT_EQ(pi.N_max, 8);
  EXPECT_TRUE(higher_laces_vanish(pi));
}

// pi^(2)_3(e) = beta^2 with 3 > floor(3/2): laces with more than n/2 edges contribute.
TEST(Pi, LacesBeyondHalfLengthContribute) {
  auto pi = pi_coefficients(LatticeConfig::infinite_lattice(1), 6);
  bool found = false;
  for (int n = 2; n <= 6; ++n)
    for (int N = n / 2 + 1; N <= pi.N_max; ++N) found = found || !pi.total(N, n).is_zero();
  EXPECT_TRUE(found);
}

TEST(Pi, RecursionWithHandCheck) {
  auto c = enumerate(LatticeConfig::infinite_lattice(1), 2);
  auto pi = pi_coefficients(LatticeConfig::infinite_lattice(1), 2);
  // c_2(0) = 2 c_1 step + pi_2(0) c_0 = 2 - 2b.
  EXPECT_EQ(pi.signed_row(2).at({0}), BetaPolynomial({BigInt(0), BigInt(-2)}));
  EXPECT_TRUE(verify_lace_expansion(c, pi).ok());
}

TEST(Pi, RecursionExact) {
  for (auto [d, r, n] : std::vector<std::tuple<int, int, int>>{{1, 3, 10}, {1, 4, 9}, {2, 3, 7}, {2, 4, 7}, {3, 3, 5}}) {
    auto c = enumerate_both(d, r, n);
    auto pi = pi_and_delta(d, r, n);
    EXPECT_TRUE(verify_lace_expansion(c.infinite, pi.infinite).ok()) << d;
    auto rep = verify_lace_expansion(c.torus, pi.torus);
    EXPECT_TRUE(rep.ok()) << d << " " << r;
    EXPECT_GT(rep.checked_sites, 0u);
    EXPECT_TRUE(pi1_closed_form_check(c.infinite, pi.infinite).ok());
    EXPECT_TRUE(pi1_closed_form_check(c.torus, pi.torus).ok());
    EXPECT_TRUE(pi.delta.ok()) << (pi.delta.failures.empty() ? "" : pi.delta.failures.front());
  }
}

TEST(Pi, RecursionDetectsCorruption) {
  auto c = enumerate(LatticeConfig::infinite_lattice(2), 5);
  auto pi = pi_coefficients(LatticeConfig::infinite_lattice(2), 5);
  pi.rows[2][4][origin(2)] += BetaPolynomial::beta_power(3);
  auto rep = verify_lace_expansion(c, pi);
  EXPECT_FALSE(rep.ok());
  ASSERT_FALSE(rep.failures.empty());
  EXPECT_EQ(rep.failures.front().n, 4);
}

TEST(Pi, Pi1OffOriginVanishes) {
  auto pi = pi_coefficients(LatticeConfig::torus(2, 3), 7);
  for (int n = 0; n <= 7; ++n)
    for (const auto& [x, p] : pi.rows[1][static_cast<std::size_t>(n)])
      if (x != origin(2)) EXPECT_TRUE(p.is_zero()) << n;
  for (int N = 1; N <= pi.N_max; ++N)
    for (int n = 0; n <= 7; ++n) EXPECT_EQ(pi.total(N, n).evaluate(0.0), 0.0);
}

TEST(Pi, TwoRoutesAgree) {
  for (int d : {1, 2})
    for (int r : {3, 4}) {
      const int n = d == 1 ? 8 : 6;
      auto cfg = LatticeConfig::torus(d, r);
      auto fast = pi_coefficients(cfg, n);
      auto via_torus = pi_coefficients_reference(cfg, n, fast.N_max, true);
      auto via_zd = pi_coefficients_reference(cfg, n, fast.N_max, false);
      for (int N = 1; N <= fast.N_max; ++N)
        for (int k = 0; k <= n; ++k) {
          EXPECT_EQ(fast.rows[static_cast<std::size_t>(N)][static_cast<std::size_t>(k)],
                    via_torus.rows[static_cast<std::size_t>(N)][static_cast<std::size_t>(k)])
              << d << " " << r << " N=" << N << " n=" << k;
          EXPECT_EQ(via_zd.rows[static_cast<std::size_t>(N)][static_cast<std::size_t>(k)],
                    via_torus.rows[static_cast<std::size_t>(N)][static_cast<std::size_t>(k)]);
        }
    }
}

TEST(Pi, NonnegativeAndSupported) {
  auto pi = pi_coefficients(LatticeConfig::infinite_lattice(2), 8);
  for (int N = 1; N <= pi.N_max; ++N)
    for (int n = 0; n <= 8; ++n)
      for (const auto& [x, p] : pi.rows[static_cast<std::size_t>(N)][static_cast<std::size_t>(n)]) {
        EXPECT_LE(norm_inf(x), n);
        for (int k = 0; k <= 20; ++k) ASSERT_GE(p.evaluate(k / 20.0), -1e-9) << N << " " << n;
      }
}

TEST(Pi, WorkersDoNotChangeTables) {
  PiOptions many;
  many.enumeration.workers = 3;
  auto a = pi_and_delta(2, 3, 7);
  auto b = pi_and_delta(2, 3, 7, many);
  EXPECT_EQ(a.torus.rows, b.torus.rows);
  EXPECT_EQ(a.infinite.rows, b.infinite.rows);
  for (std::size_t N = 0; N < a.delta.terms.size(); ++N) {
    EXPECT_EQ(a.delta.terms[N].S, b.delta.terms[N].S);
    EXPECT_EQ(a.delta.terms[N].T, b.delta.terms[N].T);
  }
}

// (1 + b U^T) = (1 + b U)(1 + b U^+) for every pair of every walk tested, with
// U^T = -[w(s) = w(t) mod r], U = -[w(s) = w(t)], U^+ = U^T - U.
TEST(Pi, FactorizedWeight) {
  for (int r : {3, 4}) {
    auto cfg = LatticeConfig::torus(2, r);
    for (std::int64_t code = 0; code < 4096; ++code) {
      WalkPath w{2, {}};
      auto c = code;
      for (int i = 0; i < 6; ++i, c /= 4) w.steps.push_back(static_cast<Direction>(c % 4));
      auto v = w.vertices();
      for (std::size_t s = 0; s < v.size(); ++s)
        for (std::size_t t = s + 1; t < v.size(); ++t) {
          const double U = v[s] == v[t] ? -1 : 0;
          const double UT = canonical_rep(v[s], r) == canonical_rep(v[t], r) ? -1 : 0;
          const double Up = UT - U;
          for (double beta : {0.1, 0.5, 1.0}) ASSERT_DOUBLE_EQ(1 + beta * UT, (1 + beta * U) * (1 + beta * Up));
        }
    }
  }
}

TEST(Delta, Decomposition) {
  PiOptions po;
  po.N_max = 3;
  auto rep = delta_decomposition(LatticeConfig::torus(1, 3), 9, po);
  EXPECT_TRUE(rep.ok());
  EXPECT_EQ(rep.order_violations + rep.inclusion_violations + rep.negative_walks, 0u);
  for (const auto& term : rep.terms)
    for (int n = 0; n < 3; ++n) {
      EXPECT_TRUE(term.Delta[static_cast<std::size_t>(n)].is_zero());
      EXPECT_TRUE(term.S[static_cast<std::size_t>(n)].is_zero());
    }
  for (const auto& term : rep.terms)
    for (std::size_t n = 0; n < term.Delta.size(); ++n) {
      EXPECT_EQ(term.Delta[n], term.T[n] - term.S[n]);
      EXPECT_EQ(term.T[n].evaluate(0.0), 0.0);
      EXPECT_EQ(term.S[n].evaluate(0.0), 0.0);
    }
  auto c = enumerate_both(1, 3, 9);
  EXPECT_TRUE(delta1_closed_form_check(c, rep).empty());
}

TEST(Delta, RejectsInfiniteGeometry) {
  EXPECT_THROW(delta_decomposition(LatticeConfig::infinite_lattice(2), 4), std::invalid_argument);
}

TEST(DiagrammaticBound, HoldsOnGrid) {
  auto c = enumerate_both(2, 4, 8);
  auto pi = pi_and_delta(2, 4, 8);
  for (const auto* pair : {&c.infinite, &c.torus}) {
    const auto& p = pair == &c.infinite ? pi.infinite : pi.torus;
    auto rep = diagrammatic_bound_report(*pair, p, {0.0, 0.025, 0.1, 0.2}, {0.0, 0.1, 0.5}, 3);
    EXPECT_EQ(rep.violated, 0u);
    EXPECT_TRUE(rep.ok());
    for (const auto& pt : rep.points) {
      if (pt.beta == 0.0 || (pt.z == 0.0 && pt.N >= 2 && !pt.derivative)) {
        EXPECT_EQ(pt.lhs_hi, 0.0);
        EXPECT_EQ(pt.status, BoundPoint::Status::verified);
      }
      if (pt.z == 0.1 && pt.beta == 0.1 && pt.N == 2 && !pt.derivative) {
        EXPECT_EQ(pt.status, BoundPoint::Status::verified);
        EXPECT_LT(pt.lhs_hi / pt.rhs_lo, 1.0);
      }
    }
  }
}

TEST(LaceCount, Binomial) {
  EXPECT_EQ(lace_count(5, 1), 1.0);
  EXPECT_EQ(lace_count(4, 2), 3.0);
  EXPECT_EQ(lace_count(3, 2), 1.0);
  EXPECT_EQ(lace_count(2, 2), 0.0);
  EXPECT_EQ(lace_count(6, 3), 15.0);
}
