// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "oddsum/fracsolve.hpp"
#include "oddsum/moments.hpp"
#include "oddsum/partitions.hpp"
#include "oddsum/relgcd.hpp"
#include "oddsum/singular.hpp"

using namespace oddsum;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

using Clock = std::chrono::steady_clock;

int failures = 0;

void criterion(int id, const std::string& name, double limit_seconds, const std::function<Outcome()>& body) {
  auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.fail(std::string("exception: ") + e.what());
  }
  double s = std::chrono::duration<double>(Clock::now() - t0).count();
  if (limit_seconds > 0 && s > limit_seconds) o.fail("took " + std::to_string(s) + " s, limit " + std::to_string(limit_seconds));
  if (!o.ok) ++failures;
  std::printf("%s %2d %-34s %9.3f s%s%s\n", o.ok ? "PASS" : "FAIL", id, name.c_str(), s, o.detail.empty() ? "" : "  ",
              o.detail.c_str());
  std::fflush(stdout);
}

SquarefreeModulus Q(u64 q) { return SquarefreeModulus::from_value(q); }

std::string str(const BigRational& r) { return format_rational(r); }

relgcd::Subset S(std::initializer_list<unsigned> idx) {
  relgcd::Subset s = 0;
  for (unsigned i : idx) s |= relgcd::Subset{1} << (i - 1);
  return s;
}

}  // namespace

int main() {
  criterion(1, "relgcd worked example", 0.001, [] {
    Outcome o;
    std::vector<u64> q{6, 9, 12};
    auto t0 = Clock::now();
    auto d = relgcd::decompose_local(q);
    double s = std::chrono::duration<double>(Clock::now() - t0).count();
    std::map<relgcd::Subset, u64> expect{{S({1, 2, 3}), 3}, {S({1, 3}), 2}, {S({2}), 3}, {S({3}), 2}};
    if (d.entries() != expect) o.fail("unexpected g-map");
    if (s >= 1e-3) o.fail("decomposition took " + std::to_string(s) + " s");
    return o;
  });

  criterion(2, "relgcd laws, k<=4, q_i<=30", 30, [] {
    Outcome o;
    u64 tuples = 0;
    for (unsigned k = 1; k <= 4; ++k) {
      std::vector<u64> q(k, 1);
      while (true) {
        ++tuples;
        auto d = relgcd::decompose_local(q);
        if (relgcd::recompose(d) != q) o.fail("roundtrip");
        if (relgcd::decompose_recursive(q) != d) o.fail("recursive != local");
        if (!relgcd::check_cross_coprimality(d).holds) o.fail("cross-coprimality");
        if (std::all_of(q.begin(), q.end(), [](u64 v) { return is_squarefree(v); }) &&
            !relgcd::check_squarefree_pairwise(d, q))
          o.fail("squarefree pairwise");
        unsigned j = 0;
        while (j < k && ++q[j] > 30) q[j++] = 1;
        if (j == k) break;
      }
    }
    o.detail = std::to_string(tuples) + " tuples" + (o.ok ? "" : ", " + o.detail);
    return o;
  });

  criterion(3, "mitm == naive, k in {3,5}", 60, [] {
    using namespace fracsolve;
    Outcome o;
    int configs = 0;
    for (unsigned k : {3u, 5u})
      for (i64 n = 1; n <= 4; ++n)
        for (i64 q = 1; q <= 8; ++q)
          for (Target t : {Target::any_integer(), Target::zero(), Target::fixed(1)}) {
            std::vector<Alphabet> al(k, box_alphabet(n, q));
            ++configs;
            if (count_naive(al, t) != count_mitm(al, t))
              o.fail("mismatch at k=" + std::to_string(k) + " n=" + std::to_string(n) + " Q=" + std::to_string(q) +
                     " " + t.str());
          }
    if (o.ok) o.detail = std::to_string(configs) + " configurations";
    return o;
  });

  criterion(4, "singleton forcing, k=3, n,Q<=10", 0, [] {
    using namespace fracsolve;
    Outcome o;
    u64 solutions = 0;
    for (i64 n = 1; n <= 10; ++n)
      for (i64 q = 1; q <= 10; ++q) {
        std::vector<Alphabet> al(3, box_alphabet(n, q));
        for_each_solution(al, Target::any_integer(), [&](std::span<const Fraction> t) {
          ++solutions;
          std::vector<u64> dens{static_cast<u64>(t[0].den), static_cast<u64>(t[1].den), static_cast<u64>(t[2].den)};
          auto d = relgcd::decompose_local(dens);
          for (unsigned i = 0; i < 3; ++i)
            if (d.get(relgcd::Subset{1} << i) != 1) o.fail("g_{i} > 1 for " + t[0].str() + "," + t[1].str() + "," + t[2].str());
        });
      }
    if (o.ok) o.detail = std::to_string(solutions) + " solutions";
    return o;
  });

  const std::vector<u64> mv_q{2, 6, 30, 210};

  criterion(5, "M = q (phi/q)^k V exactly", 120, [&] {
    Outcome o;
    for (u64 q : mv_q)
      for (i64 h = 1; h <= 6; ++h)
        for (unsigned k = 1; k <= 4; ++k) {
          BigRational r = moments::check_MV_identity(q, h, k);
          if (r != 0) o.fail("q=" + std::to_string(q) + " h=" + std::to_string(h) + " k=" + std::to_string(k) + " residual " + str(r));
        }
    return o;
  });

  criterion(6, "V expsum vs singular, 1e-9 rel", 0, [&] {
    Outcome o;
    double worst = 0;
    for (u64 q : mv_q)
      for (i64 h = 1; h <= 6; ++h)
        for (unsigned k = 1; k <= 4; ++k) {
          double e = moments::V_expsum(q, h, k).value;
          BigRational s = moments::V_via_singular(q, h, k);
          double rel = std::abs(e - to_double(s)) / std::max(1.0, std::abs(to_double(s)));
          worst = std::max(worst, rel);
          if (!moments::agrees(e, s)) o.fail("q=" + std::to_string(q) + " h=" + std::to_string(h) + " k=" + std::to_string(k));
        }
    char buf[64];
    std::snprintf(buf, sizeof buf, "max rel err %.2e", worst);
    o.detail = o.ok ? buf : o.detail;
    return o;
  });

  criterion(7, "r-sum bound", 0, [] {
    Outcome o;
    for (u64 q : {2u, 3u, 5u, 6u, 10u, 15u, 30u, 210u})
      for (unsigned k = 1; k <= 4; ++k) {
        auto b = moments::check_r_sum_bound(q, k);
        if (!b.holds || b.lhs > b.rhs) o.fail("q=" + std::to_string(q) + " k=" + std::to_string(k));
      }
    return o;
  });

  criterion(8, "smooth/rough decomposition", 0, [] {
    Outcome o;
    for (auto [q1, q2] : std::vector<std::pair<u64, u64>>{{2, 3}, {6, 35}, {10, 21}})
      for (i64 h = 1; h <= 4; ++h)
        for (unsigned k = 1; k <= 3; ++k) {
          BigRational r = moments::check_smooth_rough_decomposition(q1, q2, h, k);
          if (r != 0) o.fail("(" + std::to_string(q1) + "," + std::to_string(q2) + ") residual " + str(r));
        }
    return o;
  });

  criterion(9, "singular-series identities", 300, [] {
    using namespace singular;
    Outcome o;
    const std::vector<u64> qs{2, 6, 30, 105};
    u64 checks = 0;
    for (u64 q : qs) {
      auto m = Q(q);
      // Tuples with offsets in [1,5] and k <= 4.
      for (unsigned k = 1; k <= 4; ++k) {
        std::vector<i64> d(k, 1);
        while (true) {
          TupleD t(d);
          BigRational dual = 0;
          for (std::uint32_t mask = 0; mask < (1u << k); ++mask) dual += S0_mod_q(t.restrict(mask), m);
          if (dual != S_mod_q(t, m)) o.fail("duality " + t.str());
          if (t.has_repeats()) {
            std::vector<i64> u;
            for (i64 x : d)
              if (std::find(u.begin(), u.end(), x) == u.end()) u.push_back(x);
            if (check_repeated_elements(TupleD(u), t, m) != 0) o.fail("repeated elements " + t.str());
          }
          if (k <= 3 && check_S0_expansion(t, m) > 1e-9 * std::max(1.0, std::abs(to_double(S0_mod_q(t, m)))))
            o.fail("S0 expansion " + t.str());
          ++checks;
          unsigned j = 0;
          while (j < k && ++d[j] > 5) d[j++] = 1;
          if (j == k) break;
        }
        for (const auto& p : partitions::enumerate_partitions(k))
          for (i64 h = 1; h <= 5; ++h) {
            ++checks;
            if (partitions::check_partition_lemma(p, h, m).residual() != 0) o.fail("partition lemma " + p.str());
          }
        for (i64 h = 1; h <= 5; ++h) {
          ++checks;
          if (partitions::check_Rk_partition_identity(h, k, m).residual() != 0)
            o.fail("R_k identity q=" + std::to_string(q) + " k=" + std::to_string(k) + " h=" + std::to_string(h));
        }
      }
    }
    if (o.ok) o.detail = std::to_string(checks) + " checks";
    return o;
  });

  criterion(10, "w(P) closed form and special cases", 0, [] {
    using namespace partitions;
    Outcome o;
    for (unsigned k = 1; k <= 6; ++k)
      for (const auto& p : enumerate_partitions(k))
        if (w_weight(p) != w_weight_bruteforce(p)) o.fail("mismatch at " + p.str());
    for (unsigned j = 1; j <= 2; ++j) {
      std::vector<std::vector<unsigned>> pairs;
      for (unsigned i = 0; i < j; ++i) pairs.push_back({2 * i + 1, 2 * i + 2});
      auto triple = pairs;
      triple.push_back({2 * j + 1, 2 * j + 2, 2 * j + 3});
      pairs.push_back({2 * j + 1});
      i64 sign = j % 2 ? -1 : 1;
      if (w_weight_bruteforce(SetPartition(pairs)) != sign) o.fail("pairs case j=" + std::to_string(j));
      if (w_weight_bruteforce(SetPartition(triple)) != 2 * sign) o.fail("triple case j=" + std::to_string(j));
    }
    return o;
  });

  criterion(11, "scaling and Gallagher drift", 120, [] {
    using namespace fracsolve;
    Outcome o;
    std::vector<double> ratios;
    std::string monotone_breaks;
    for (i64 n : {2, 4, 8}) {
      double prev = 0;
      for (i64 q : {8, 16, 32}) {
        u64 c = count_box({3, n, q, Target::any_integer()}).total;
        double r = static_cast<double>(c) / static_cast<double>(n * n * q);
        if (r < prev) monotone_breaks += " n=" + std::to_string(n) + ",Q=" + std::to_string(q);
        prev = r;
        ratios.push_back(r);
      }
    }
    std::vector<double> sorted = ratios;
    std::sort(sorted.begin(), sorted.end());
    double median = sorted[sorted.size() / 2];
    bool band = std::all_of(ratios.begin(), ratios.end(), [&](double r) { return r <= 50 * median && r >= median / 50; });
    auto q = SquarefreeModulus::primorial(30);
    double prev_dev = 1e300;
    bool drift = true;
    for (i64 h : {4, 8, 12}) {
      double dev = std::abs(singular::gallagher_ratio(h, 2, q).value - 1);
      if (dev >= prev_dev) drift = false;
      prev_dev = dev;
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "ratios in [%.3f, %.3f], median %.3f; 50x band %s; Gallagher drift %s; ",
                  sorted.front(), sorted.back(), median, band ? "ok" : "FAIL", drift ? "ok" : "FAIL");
    std::string detail = buf;
    detail += monotone_breaks.empty() ? "monotone in Q ok" : "monotone in Q FAIL, drops at" + monotone_breaks;
    if (!band || !drift || !monotone_breaks.empty()) o.fail(detail);
    o.detail = detail;
    return o;
  });

  std::printf("%s: %d of 11 criteria failed\n", failures ? "FAILED" : "OK", failures);
  return failures ? 1 : 0;
}
