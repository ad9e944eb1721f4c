#include <gtest/gtest.h>

#include <random>

#include "oddsum/arith.hpp"
#include "oddsum/parallel.hpp"
#include "oracle.hpp"

using namespace oddsum;

TEST(Fraction, ReducesAndCanonicalizesSign) {
  EXPECT_EQ(reduce_fraction(i64{2}, i64{4}), (Fraction{1, 2}));
  EXPECT_EQ(reduce_fraction(i64{0}, i64{7}), (Fraction{0, 1}));
  EXPECT_EQ(reduce_fraction(i64{-6}, i64{9}), (Fraction{-2, 3}));
  EXPECT_EQ(reduce_fraction(i64{6}, i64{-9}), (Fraction{-2, 3}));
  EXPECT_THROW(reduce_fraction(i64{1}, i64{0}), std::invalid_argument);
}

TEST(Fraction, ReduceIsIdempotent) {
  for (i64 a = -30; a <= 30; ++a)
    for (i64 q = 1; q <= 30; ++q) {
      Fraction f = reduce_fraction(a, q);
      EXPECT_EQ(reduce_fraction(f.num, f.den), f);
      EXPECT_GE(f.den, 1);
    }
}

TEST(Fraction, ArithmeticAndParts) {
  EXPECT_EQ(Fraction({1, 2}) + Fraction({1, 3}), (Fraction{5, 6}));
  EXPECT_EQ(Fraction({1, 2}) - Fraction({1, 2}), (Fraction{0, 1}));
  EXPECT_EQ(frac_part({-1, 3}), (Fraction{2, 3}));
  EXPECT_EQ(frac_part({7, 2}), (Fraction{1, 2}));
  EXPECT_EQ(dist_to_int({3, 4}), (Fraction{1, 4}));
  EXPECT_EQ(dist_to_int({5, 1}), (Fraction{0, 1}));
  EXPECT_EQ(parse_fraction("-4/6"), (Fraction{-2, 3}));
  EXPECT_EQ(parse_fraction("5"), (Fraction{5, 1}));
  EXPECT_THROW(parse_fraction("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_fraction("x"), std::invalid_argument);
  EXPECT_LT(Fraction({-1, 2}), Fraction({1, 3}));
}

TEST(Checked, OverflowIsLoud) {
  const i64 big = std::numeric_limits<i64>::max();
  EXPECT_THROW(checked_add(big, i64{1}), OverflowError);
  EXPECT_THROW(checked_mul(big, i64{2}), OverflowError);
  EXPECT_EQ(checked_mul(i64{1} << 31, i64{1} << 31), i64{1} << 62);
  EXPECT_THROW(narrow_i64(static_cast<i128>(big) + 1), OverflowError);
}

TEST(Factorize, Examples) {
  EXPECT_TRUE(factorize(1).empty());
  EXPECT_EQ(factorize(12), (Factorization{{2, 2}, {3, 1}}));
  EXPECT_EQ(factorize(210), (Factorization{{2, 1}, {3, 1}, {5, 1}, {7, 1}}));
  EXPECT_THROW(factorize(0), std::invalid_argument);
  EXPECT_THROW(factorize(kFactorizeCap + 1), std::invalid_argument);
}

TEST(Factorize, RecomposesSampled) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<u64> dist(1, 1'000'000);
  for (int i = 0; i < 20000; ++i) {
    u64 n = dist(rng);
    EXPECT_EQ(recompose(factorize(n)), n);
  }
  // Beyond the sieve: trial division path.
  u64 n = 999'983ULL * 1'000'003ULL;
  EXPECT_EQ(factorize(n), (Factorization{{999'983, 1}, {1'000'003, 1}}));
}

TEST(Multiplicative, Examples) {
  EXPECT_EQ(totient(9), 6u);
  EXPECT_EQ(mobius(30), -1);
  EXPECT_EQ(mobius(12), 0);
  EXPECT_EQ(mobius(1), 1);
  EXPECT_EQ(primorial(6), BigInt(30));
  EXPECT_EQ(primorial(2), BigInt(2));
  EXPECT_EQ(squarefree_divisors(12), (std::vector<u64>{1, 2, 3, 6}));
  EXPECT_EQ(divisors(12), (std::vector<u64>{1, 2, 3, 4, 6, 12}));
  EXPECT_THROW(totient(0), std::invalid_argument);
  EXPECT_THROW(primorial(1'000'000, 64), BudgetError);
}

TEST(Multiplicative, AgreeWithOracle) {
  for (u64 n = 1; n <= 300; ++n) {
    EXPECT_EQ(totient(n), static_cast<u64>(oracle::totient(static_cast<long long>(n)))) << n;
    EXPECT_EQ(mobius(n), oracle::mobius(static_cast<long long>(n))) << n;
  }
}

TEST(Multiplicative, DivisorSumProperties) {
  for (u64 n = 1; n <= 10000; ++n) {
    i64 mu = 0;
    u64 ph = 0;
    for (u64 d : divisors(n)) {
      mu += mobius(d);
      ph += totient(d);
    }
    ASSERT_EQ(mu, n == 1 ? 1 : 0) << n;
    ASSERT_EQ(ph, n) << n;
  }
}

TEST(BigRational, FormatAndParse) {
  EXPECT_EQ(format_rational(BigRational(3, 1)), "3/1");
  EXPECT_EQ(format_rational(parse_rational("-6/4")), "-3/2");
  EXPECT_EQ(parse_rational("-10/4"), BigRational(-5, 2));
  EXPECT_EQ(pow(BigRational(2, 3), 3), BigRational(8, 27));
  EXPECT_DOUBLE_EQ(to_double(BigRational(1, 4)), 0.25);
}

TEST(SquarefreeModulus, Construction) {
  auto q = SquarefreeModulus::from_value(30);
  EXPECT_EQ(q.primes(), (std::vector<u64>{2, 3, 5}));
  EXPECT_EQ(q.value(), BigInt(30));
  EXPECT_EQ(q.phi(), BigInt(8));
  EXPECT_EQ(q.ratio(), BigRational(15, 4));
  EXPECT_THROW(SquarefreeModulus::from_value(12), std::invalid_argument);
  auto big = SquarefreeModulus::primorial(200);
  EXPECT_EQ(big.omega(), 46u);
  EXPECT_THROW(big.value_u64(), OverflowError);
  EXPECT_EQ(SquarefreeModulus::from_value(1).omega(), 0u);
}

TEST(Parallel, ChunkedReductionIsWorkerIndependent) {
  auto run = [](unsigned w) {
    auto parts = parallel_chunks<u64>(1000, w, [](std::size_t lo, std::size_t hi) {
      u64 s = 0;
      for (std::size_t i = lo; i < hi; ++i) s += i * i;
      return s;
    });
    return parts;
  };
  auto a = run(1), b = run(4);
  EXPECT_EQ(a, b);
  u64 total = 0;
  for (u64 v : a) total += v;
  EXPECT_EQ(total, 332'833'500u);
}
