#include <gtest/gtest.h>

#include <set>

#include "oddsum/moments.hpp"
#include "oddsum/partitions.hpp"
#include "oddsum/singular.hpp"

using namespace oddsum;
using namespace oddsum::partitions;

namespace {

SquarefreeModulus Q(u64 q) { return SquarefreeModulus::from_value(q); }

SetPartition P(std::vector<std::vector<unsigned>> b) { return SetPartition(std::move(b)); }

}  // namespace

TEST(SetPartitionTest, Basics) {
  auto p = P({{3}, {1, 2}});
  EXPECT_EQ(p.str(), "{1,2}{3}");
  EXPECT_EQ(p.k(), 3u);
  EXPECT_EQ(p.M(), 2u);
  EXPECT_EQ(p.N1(), 1u);
  EXPECT_EQ(p.block_of(3), 1u);
  EXPECT_THROW(P({{1}, {1, 2}}), std::invalid_argument);
  EXPECT_THROW(P({{1}, {3}}), std::invalid_argument);
  EXPECT_THROW(P({{1}, {}}), std::invalid_argument);
}

TEST(Enumerate, BellNumbers) {
  const std::vector<std::size_t> bell{1, 1, 2, 5, 15, 52, 203, 877, 4140};
  for (unsigned k = 1; k <= 8; ++k) {
    auto ps = enumerate_partitions(k);
    ASSERT_EQ(ps.size(), bell[k]);
    std::set<std::string> seen;
    for (const auto& p : ps) ASSERT_TRUE(seen.insert(p.str()).second);
  }
  EXPECT_EQ(enumerate_partitions(3).front().str(), "{1,2,3}");
  EXPECT_THROW(enumerate_partitions(9), std::invalid_argument);
}

TEST(Weights, Examples) {
  EXPECT_EQ(w_weight(P({{1}, {2}, {3}})), 1);
  EXPECT_EQ(w_weight_bruteforce(P({{1}, {2}, {3}})), 1);
  for (unsigned j = 1; j <= 2; ++j) {
    std::vector<std::vector<unsigned>> pairs, with_triple;
    for (unsigned i = 0; i < j; ++i) pairs.push_back({2 * i + 1, 2 * i + 2});
    with_triple = pairs;
    with_triple.push_back({2 * j + 1, 2 * j + 2, 2 * j + 3});
    pairs.push_back({2 * j + 1});
    i64 sign = j % 2 ? -1 : 1;
    EXPECT_EQ(w_weight_bruteforce(P(pairs)), sign);
    EXPECT_EQ(w_weight_bruteforce(P(with_triple)), 2 * sign);
  }
}

TEST(Weights, ClosedFormMatchesBruteForce) {
  for (unsigned k = 1; k <= 6; ++k)
    for (const auto& p : enumerate_partitions(k)) ASSERT_EQ(w_weight(p), w_weight_bruteforce(p)) << p.str();
}

TEST(Polynomials, PPoly) {
  EXPECT_EQ(P_poly(1), IntPolynomial({-1}));
  EXPECT_EQ(P_poly(2), IntPolynomial({-2, 1}));
  EXPECT_EQ(P_poly(3), IntPolynomial({-3, 3, -1}));
  IntPolynomial z({0, 1}), one_minus_z({1, -1});
  for (unsigned l = 1; l <= 10; ++l) {
    IntPolynomial pw = IntPolynomial::constant(1);
    for (unsigned i = 0; i < l; ++i) pw = pw * one_minus_z;
    ASSERT_EQ(P_poly(l) * z + IntPolynomial::constant(1), pw);
    ASSERT_EQ(P_poly(l).degree(), static_cast<int>(l) - 1);
  }
}

TEST(Polynomials, Arithmetic) {
  IntPolynomial a({1, 2}), b({-1, -2});
  EXPECT_TRUE((a + b).is_zero());
  EXPECT_EQ((a - b), IntPolynomial({2, 4}));
  EXPECT_EQ(a(BigRational(1, 2)), BigRational(2));
  EXPECT_EQ(IntPolynomial({0, 0}).degree(), -1);
  EXPECT_EQ(IntPolynomial({-2, 1}).str(), "z - 2");
}

TEST(Polynomials, FPoly) {
  auto singles = P({{1}, {2}, {3}});
  EXPECT_EQ(f_poly(0b111, singles), IntPolynomial::constant(-1));
  EXPECT_TRUE(f_poly(0b011, singles).is_zero());
  for (unsigned j = 1; j <= 2; ++j) {
    std::vector<std::vector<unsigned>> b;
    for (unsigned i = 0; i < j; ++i) b.push_back({2 * i + 1, 2 * i + 2});
    b.push_back({2 * j + 1});
    auto p = P(b);
    // R = the singleton block only.
    std::uint32_t R = 1u << (p.M() - 1);
    IntPolynomial expect = IntPolynomial::constant(-1);
    for (unsigned i = 0; i < j; ++i) expect = expect * IntPolynomial({-1, 1});
    EXPECT_EQ(f_poly(R, p), expect);
  }
}

TEST(Polynomials, FPolyDegreeIsKMinusM) {
  for (unsigned k = 1; k <= 6; ++k)
    for (const auto& p : enumerate_partitions(k))
      for (std::uint32_t R = 0; R < (1u << p.M()); ++R) {
        auto f = f_poly(R, p);
        bool zero_expected = false;
        for (std::size_t m = 0; m < p.M(); ++m)
          if (!(R >> m & 1) && p.block_size(m) == 1) zero_expected = true;
        ASSERT_EQ(f.is_zero(), zero_expected);
        if (!f.is_zero()) ASSERT_EQ(f.degree(), static_cast<int>(k - p.M())) << p.str() << " R=" << R;
      }
}

TEST(Delta, DistinctnessExpansion) {
  auto parts = enumerate_partitions(4);
  std::vector<i64> d(4, 1);
  while (true) {
    i64 s = 0;
    for (const auto& p : parts)
      if (Delta(p, d)) s += w_weight(p);
    std::set<i64> u(d.begin(), d.end());
    ASSERT_EQ(s, u.size() == 4 ? 1 : 0);
    unsigned j = 0;
    while (j < 4 && ++d[j] > 4) d[j++] = 1;
    if (j == 4) break;
  }
}

TEST(PartitionLemma, Examples) {
  EXPECT_EQ(check_partition_lemma(P({{1}, {2}}), 3, Q(30)).residual(), BigRational(0));
  EXPECT_EQ(check_partition_lemma(P({{1, 2}}), 2, Q(6)).residual(), BigRational(0));
  EXPECT_EQ(check_partition_lemma(P({{1, 2}, {3}}), 3, Q(30)).residual(), BigRational(0));
}

TEST(PartitionLemma, FullGrid) {
  for (u64 q : {2u, 6u, 30u})
    for (unsigned k = 1; k <= 4; ++k)
      for (const auto& p : enumerate_partitions(k))
        for (i64 h = 1; h <= 4; ++h) ASSERT_EQ(check_partition_lemma(p, h, Q(q)).residual(), BigRational(0));
}

TEST(RkIdentity, Examples) {
  EXPECT_EQ(check_Rk_partition_identity(4, 1, Q(30)).residual(), BigRational(0));
  EXPECT_EQ(check_Rk_partition_identity(3, 2, Q(6)).residual(), BigRational(0));
  EXPECT_EQ(check_Rk_partition_identity(3, 3, Q(30)).residual(), BigRational(0));
}

TEST(RkIdentity, FullGrid) {
  for (u64 q : {2u, 6u, 30u, 105u})
    for (unsigned k = 1; k <= 4; ++k)
      for (i64 h = 1; h <= 5; ++h) {
        auto id = check_Rk_partition_identity(h, k, Q(q));
        ASSERT_EQ(id.residual(), BigRational(0)) << q << " " << k << " " << h;
        ASSERT_EQ(id.lhs, singular::R_mod_q(h, k, Q(q)));
      }
}

TEST(MainTerms, R3Table) {
  auto t = evaluate_main_terms(3, 4, Q(30));
  ASSERT_EQ(t.terms.size(), 3u);
  EXPECT_EQ(t.terms[0].value, BigRational(1, 32));
  EXPECT_EQ(t.terms[1].value, BigRational(-777, 32));
  EXPECT_EQ(t.terms[2].value, BigRational(77, 2));
  EXPECT_EQ(t.sum, BigRational(57, 4));
  EXPECT_EQ(t.sum, t.closed_form_sum);
  EXPECT_EQ(t.R_mod_q, singular::R_mod_q(4, 3, Q(30)));
  for (const auto& term : t.terms) EXPECT_NE(term.v_index, 1u);
}

TEST(MainTerms, R5Table) {
  auto t = evaluate_main_terms(5, 4, Q(30));
  ASSERT_EQ(t.terms.size(), 5u);
  const std::vector<BigRational> expect{BigRational(-16123, 512), BigRational(-287385, 256), BigRational(-55, 16),
                                        BigRational(71225, 16), BigRational(-4235)};
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(t.terms[i].value, expect[i]) << t.terms[i].label();
  EXPECT_EQ(t.sum, BigRational(-481773, 512));
  EXPECT_EQ(t.sum, t.closed_form_sum);
}

TEST(MainTerms, ClosedFormAgreesAcrossModuli) {
  for (u64 q : {6u, 30u, 210u})
    for (i64 h = 1; h <= 5; ++h) {
      auto t = evaluate_main_terms(3, h, Q(q));
      ASSERT_EQ(t.sum, t.closed_form_sum);
    }
  EXPECT_EQ(evaluate_main_terms(3, 1, Q(30)).R_mod_q, BigRational(0));
  EXPECT_THROW(evaluate_main_terms(4, 3, Q(30)), std::invalid_argument);
}
