#include <gtest/gtest.h>

#include <cmath>

#include "oddsum/moments.hpp"
#include "oracle.hpp"

using namespace oddsum;
using namespace oddsum::moments;

TEST(MDirect, Examples) {
  EXPECT_EQ(M_direct(2, 1, 2), BigRational(1, 2));
  EXPECT_EQ(M_direct(2, 1, 3), BigRational(0));
  EXPECT_EQ(M_direct(30, 4, 2), BigRational(148, 15));
  EXPECT_EQ(M_direct(30, 4, 4), BigRational(10948, 1125));
  EXPECT_THROW(M_direct(12, 2, 2), std::invalid_argument);
  EXPECT_THROW(M_direct(30, 0, 2), std::invalid_argument);
  EXPECT_THROW(M_direct(30, 2, 9), std::invalid_argument);
  EXPECT_THROW(M_direct(30, kMaxInterval + 1, 2), BudgetError);
}

TEST(MDirect, MatchesWindowOracle) {
  for (u64 q : {1u, 2u, 6u, 10u, 30u, 42u})
    for (i64 h = 1; h <= 7; ++h)
      for (unsigned k = 0; k <= 4; ++k)
        ASSERT_EQ(M_direct(q, h, k), oracle::M_direct(static_cast<long long>(q), h, k)) << q << " " << h << " " << k;
}

TEST(MDirect, MixedCollapses) {
  for (u64 q : {6u, 30u, 210u})
    for (i64 h = 1; h <= 5; ++h)
      for (unsigned k = 0; k <= 4; ++k) ASSERT_EQ(M_mixed_direct(q, h, k, 0), M_direct(q, h, k));
  EXPECT_THROW(M_mixed_direct(30, 2, 5, 4), std::invalid_argument);
}

TEST(MDirect, FirstMomentVanishesEvenMomentsNonNegative) {
  for (u64 q : {2u, 6u, 30u, 210u, 2310u})
    for (i64 h = 1; h <= 10; ++h) {
      ASSERT_EQ(M_direct(q, h, 1), BigRational(0));
      ASSERT_GE(M_direct(q, h, 2), BigRational(0));
      ASSERT_GE(M_direct(q, h, 4), BigRational(0));
    }
}

TEST(MDirect, WorkerCountInvariance) {
  EXPECT_EQ(M_direct(30030, 17, 5, 1), M_direct(30030, 17, 5, 4));
}

TEST(Kernels, Examples) {
  EXPECT_EQ(E_kernel({0, 1}, 5), std::complex<double>(5, 0));
  EXPECT_EQ(E_kernel({3, 1}, 5), std::complex<double>(5, 0));
  EXPECT_NEAR(std::abs(E_kernel({1, 2}, 4)), 0.0, 1e-12);
  EXPECT_NEAR(E_kernel({1, 2}, 3).real(), -1.0, 1e-12);
  EXPECT_EQ(F_kernel({1, 2}, 10), (Fraction{2, 1}));
  EXPECT_EQ(F_kernel({1, 100}, 10), (Fraction{10, 1}));
  EXPECT_EQ(F_kernel({0, 1}, 10), (Fraction{10, 1}));
  EXPECT_EQ(F_kernel({-1, 3}, 10), (Fraction{3, 1}));
}

TEST(Kernels, EMatchesDirectSumAndIsBoundedByF) {
  for (i64 h = 1; h <= 100; h += 11)
    for (i64 q = 1; q <= 40; ++q)
      for (i64 a = -q; a <= q; ++a) {
        Fraction x = reduce_fraction(a, q);
        std::complex<double> e = E_kernel(x, h), direct = 0;
        for (i64 m = 1; m <= h; ++m) {
          double t = 2 * M_PI * static_cast<double>(m) * static_cast<double>(x.num) / static_cast<double>(x.den);
          direct += std::complex<double>(std::cos(t), std::sin(t));
        }
        ASSERT_NEAR(std::abs(e - direct), 0.0, 1e-9 * h);
        Fraction f = F_kernel(x, h);
        ASSERT_LE(std::abs(e), static_cast<double>(f.num) / static_cast<double>(f.den) * (1 + 1e-12));
      }
}

TEST(V, Examples) {
  EXPECT_EQ(V_via_singular(2, 1, 2), BigRational(1));
  EXPECT_NEAR(V_expsum(2, 1, 2).value, 1.0, 1e-12);
  EXPECT_EQ(V_via_singular(6, 2, 2), BigRational(2));
  EXPECT_NEAR(V_expsum(6, 2, 2).value, 2.0, 1e-9);
  EXPECT_EQ(V_via_singular(30, 4, 2), BigRational(37, 8));
  EXPECT_EQ(V_via_singular(30, 4, 3), BigRational(1, 32));
  EXPECT_EQ(V_via_singular(30, 4, 4), BigRational(8211, 128));
  EXPECT_EQ(V_via_singular(30, 4, 5), BigRational(-16123, 512));
}

TEST(V, FirstOrderVanishes) {
  for (u64 q : {2u, 6u, 30u, 210u})
    for (i64 h = 1; h <= 6; ++h) {
      EXPECT_EQ(V_via_singular(q, h, 1), BigRational(0));
      EXPECT_NEAR(V_expsum(q, h, 1).value, 0.0, 1e-12);
    }
}

TEST(V, DualPathAgreement) {
  for (u64 q : {6u, 30u, 210u})
    for (i64 h = 1; h <= 6; ++h)
      for (unsigned k = 1; k <= 3; ++k) {
        auto e = V_expsum(q, h, k);
        BigRational s = V_via_singular(q, h, k);
        ASSERT_TRUE(agrees(e.value, s)) << q << " " << h << " " << k << ": " << e.value << " vs " << to_double(s);
        ASSERT_LE(std::abs(e.imag), 1e-9 * (1 + std::abs(e.value)));
      }
}

TEST(V, MixedExpsumMatchesMixedMoment) {
  // M_{k1,k2} = q (phi/q)^{k1+k2} V_{k1,k2}.
  for (u64 q : {6u, 30u})
    for (i64 h = 1; h <= 4; ++h)
      for (unsigned k1 = 0; k1 <= 2; ++k1)
        for (unsigned k2 = 0; k2 <= 2; ++k2) {
          if (k1 + k2 == 0) continue;
          BigRational M = M_mixed_direct(q, h, k1, k2);
          BigRational scale = BigRational(static_cast<long>(q)) *
                              pow(BigRational(static_cast<long>(totient(q)), static_cast<long>(q)), k1 + k2);
          double v = V_expsum_mixed(q, h, k1, k2).value;
          ASSERT_NEAR(v, to_double(M / scale), 1e-9 * std::max(1.0, std::abs(v))) << q << h << k1 << k2;
        }
}

TEST(V, Guards) {
  EXPECT_THROW(V_expsum(12, 2, 2), std::invalid_argument);
  EXPECT_THROW(V_expsum(30030, 2, 5), BudgetError);
  EXPECT_THROW(V_via_singular(30, 2, 9), std::invalid_argument);
}

TEST(MVIdentity, Examples) {
  EXPECT_EQ(check_MV_identity(2, 1, 2), BigRational(0));
  EXPECT_EQ(check_MV_identity(6, 3, 3), BigRational(0));
  EXPECT_EQ(check_MV_identity(30, 4, 2), BigRational(0));
  EXPECT_EQ(check_MV_identity(30, 4, 4), BigRational(0));
}

TEST(RSumBound, Examples) {
  auto a = check_r_sum_bound(3, 2);
  EXPECT_EQ(a.lhs, BigRational(3, 2));
  EXPECT_EQ(a.rhs, BigRational(3));
  EXPECT_TRUE(a.holds);
  auto b = check_r_sum_bound(2, 2);
  EXPECT_EQ(b.lhs, BigRational(2));
  EXPECT_EQ(b.rhs, BigRational(5));
  EXPECT_TRUE(b.holds);
  auto c = check_r_sum_bound(30, 3);
  EXPECT_EQ(c.lhs, BigRational(341, 16));
  EXPECT_EQ(c.rhs, BigRational(135));
  EXPECT_TRUE(c.holds);
  EXPECT_THROW(check_r_sum_bound(12, 2), std::invalid_argument);
}

TEST(RSumBound, HoldsOnGrid) {
  for (u64 q : {2u, 3u, 5u, 6u, 10u, 15u, 30u, 210u})
    for (unsigned k = 1; k <= 4; ++k) ASSERT_TRUE(check_r_sum_bound(q, k).holds) << q << " " << k;
}

TEST(SmoothRough, Examples) {
  EXPECT_EQ(check_smooth_rough_decomposition(2, 3, 2, 2), BigRational(0));
  EXPECT_EQ(check_smooth_rough_decomposition(6, 35, 3, 3), BigRational(0));
  EXPECT_EQ(check_smooth_rough_decomposition(30, 1, 4, 3), BigRational(0));
  EXPECT_THROW(check_smooth_rough_decomposition(6, 10, 2, 2), std::invalid_argument);
  EXPECT_THROW(check_smooth_rough_decomposition(4, 3, 2, 2), std::invalid_argument);
}

TEST(Agrees, RelativeTolerance) {
  EXPECT_TRUE(agrees(1.0 + 1e-10, BigRational(1)));
  EXPECT_FALSE(agrees(1.0 + 1e-8, BigRational(1)));
  EXPECT_TRUE(agrees(1e-10, BigRational(0)));
  EXPECT_TRUE(agrees(1e6 * (1 + 5e-10), BigRational(1000000)));
}
