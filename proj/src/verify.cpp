#include "oddsum/verify.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <iomanip>
#include <set>

#include "oddsum/fracsolve.hpp"
#include "oddsum/moments.hpp"
#include "oddsum/partitions.hpp"
#include "oddsum/relgcd.hpp"
#include "oddsum/singular.hpp"

namespace oddsum::cli {

VerifyLevel parse_level(const std::string& text) {
  if (text == "quick") return VerifyLevel::Quick;
  if (text == "full") return VerifyLevel::Full;
  throw ConfigError("unknown verify level '" + text + "' (quick|full)");
}

VerifyOptions VerifyOptions::from_config(const Config& c) {
  static const std::set<std::string> known = {"level", "workers", "max_k", "max_h", "max_q"};
  for (const auto& key : c.keys())
    if (!known.count(key)) throw ConfigError("verify config: unknown key '" + key + "'");
  VerifyOptions o;
  o.level = parse_level(c.get_string("level", "quick"));
  i64 w = c.get_int("workers", 0);
  if (w < 0 || w > 1024) throw ConfigError("verify config: workers must be in [0,1024]");
  o.workers = static_cast<unsigned>(w);
  auto cap = [&](const char* key) {
    i64 v = c.get_int(key, 0);
    if (v < 0) throw ConfigError(std::string("verify config: ") + key + " must be non-negative");
    return v;
  };
  o.max_k = cap("max_k");
  o.max_h = cap("max_h");
  o.max_q = cap("max_q");
  return o;
}

bool VerifySummary::ok() const {
  return std::all_of(suites.begin(), suites.end(), [](const auto& s) { return s.failures == 0; });
}

namespace {

class Suite {
 public:
  explicit Suite(std::string name) { r_.name = std::move(name); }
  void check(bool ok, const std::function<std::string()>& what) {
    ++r_.checks;
    if (!ok) {
      if (r_.failures == 0) r_.first_failure = what();
      ++r_.failures;
    }
  }
  SuiteResult& result() { return r_; }

 private:
  SuiteResult r_;
};

i64 capped(i64 dflt, i64 cap) { return cap > 0 ? std::min(dflt, cap) : dflt; }

std::string tuple_str(std::span<const u64> q) {
  std::string s = "(";
  for (std::size_t i = 0; i < q.size(); ++i) s += (i ? "," : "") + std::to_string(q[i]);
  return s + ")";
}

void arith_suite(Suite& s, bool full) {
  const u64 limit = full ? 10'000 : 2'000;
  for (u64 n = 1; n <= limit; ++n) {
    i64 mu = 0;
    u64 phi = 0;
    for (u64 d : divisors(n)) {
      mu += mobius(d);
      phi += totient(d);
    }
    s.check(mu == (n == 1 ? 1 : 0) && phi == n, [n] { return "divisor sums at n=" + std::to_string(n); });
    s.check(recompose(factorize(n)) == n, [n] { return "factorize roundtrip at n=" + std::to_string(n); });
  }
}

void relgcd_suite(Suite& s, bool full, i64 max_k, i64 max_q) {
  {
    std::vector<u64> q = {6, 9, 12};
    auto d = relgcd::decompose_local(q);
    std::map<relgcd::Subset, u64> want = {{0b111, 3}, {0b101, 2}, {0b010, 3}, {0b100, 2}};
    s.check(d.entries() == want, [] { return "worked example (6,9,12)"; });
  }
  const unsigned kmax = static_cast<unsigned>(capped(full ? 4 : 3, max_k));
  const u64 qmax = static_cast<u64>(capped(full ? 30 : 12, max_q));
  for (unsigned k = 1; k <= kmax; ++k) {
    std::vector<u64> q(k, 1);
    while (true) {
      auto local = relgcd::decompose_local(q);
      auto rec = relgcd::decompose_recursive(q);
      s.check(relgcd::recompose(local) == q, [&] { return "roundtrip " + tuple_str(q); });
      s.check(local == rec, [&] { return "local/recursive " + tuple_str(q); });
      s.check(relgcd::check_cross_coprimality(local).holds, [&] { return "cross-coprimality " + tuple_str(q); });
      if (std::all_of(q.begin(), q.end(), [](u64 v) { return is_squarefree(v); }))
        s.check(relgcd::check_squarefree_pairwise(local, q), [&] { return "pairwise " + tuple_str(q); });
      std::size_t i = 0;
      while (i < k && ++q[i] > qmax) q[i++] = 1;
      if (i == k) break;
    }
  }
}

void counting_suite(Suite& s, bool full, i64 max_k, unsigned workers) {
  using namespace fracsolve;
  const std::vector<Target> targets = {Target::zero(), Target::any_integer(), Target::fixed(1)};
  for (unsigned k : {3u, 5u}) {
    if (max_k > 0 && k > max_k) continue;
    const i64 nmax = full ? 4 : (k == 3 ? 4 : 2);
    const i64 Qmax = full ? 8 : (k == 3 ? 8 : 4);
    for (i64 n = 1; n <= nmax; ++n)
      for (i64 Q = 1; Q <= Qmax; ++Q) {
        std::vector<Alphabet> a(k, box_alphabet(n, Q));
        for (const auto& t : targets) {
          u64 naive = count_naive(a, t, workers);
          u64 mitm = count_mitm(a, t, workers);
          s.check(naive == mitm, [&] { return BoxConstraint{k, n, Q, t}.str() + ": naive != mitm"; });
        }
      }
  }
  // Singleton forcing on every any-integer solution.
  const i64 lim = full ? 10 : 5;
  for (i64 n = 1; n <= lim; ++n)
    for (i64 Q = 1; Q <= lim; ++Q) {
      std::vector<Alphabet> a(3, box_alphabet(n, Q));
      for_each_solution(a, Target::any_integer(), [&](std::span<const Fraction> x) {
        std::vector<u64> dens;
        for (const auto& f : x) dens.push_back(static_cast<u64>(f.den));
        auto d = relgcd::decompose_local(dens);
        bool ok = d.get(0b001) == 1 && d.get(0b010) == 1 && d.get(0b100) == 1;
        s.check(ok, [&] { return "singleton forcing at " + tuple_str(dens); });
      });
    }
}

void moments_suite(Suite& s, bool full, i64 max_k, i64 max_h, i64 max_q, unsigned workers) {
  std::vector<u64> qs = {2, 6, 30};
  if (full) qs.push_back(210);
  const i64 hmax = capped(full ? 6 : 4, max_h);
  const unsigned kmax = static_cast<unsigned>(capped(4, max_k));
  for (u64 q : qs) {
    if (max_q > 0 && static_cast<i64>(q) > max_q) continue;
    for (i64 h = 1; h <= hmax; ++h)
      for (unsigned k = 1; k <= kmax; ++k) {
        auto tag = [&] { return "(q,h,k)=(" + std::to_string(q) + "," + std::to_string(h) + "," + std::to_string(k) + ")"; };
        s.check(moments::check_MV_identity(q, h, k, workers) == 0, [&] { return "MV identity " + tag(); });
        BigRational v = moments::V_via_singular(q, h, k, workers);
        s.check(moments::agrees(moments::V_expsum(q, h, k, workers).value, v), [&] { return "dual-path V " + tag(); });
      }
  }
  for (u64 q : {2, 3, 5, 6, 10, 15, 30, 210})
    for (unsigned k = 1; k <= 4; ++k)
      s.check(moments::check_r_sum_bound(q, k).holds,
              [&] { return "r-sum bound q=" + std::to_string(q) + " k=" + std::to_string(k); });
  std::vector<std::pair<u64, u64>> pairs = {{2, 3}, {6, 35}};
  if (full) pairs.emplace_back(10, 21);
  for (auto [q1, q2] : pairs)
    for (i64 h = 1; h <= 4; ++h)
      for (unsigned k = 1; k <= 3; ++k)
        s.check(moments::check_smooth_rough_decomposition(q1, q2, h, k) == 0, [&] {
          return "smooth/rough (" + std::to_string(q1) + "," + std::to_string(q2) + ") h=" + std::to_string(h);
        });
}

void singular_suite(Suite& s, bool full, i64 max_k, i64 max_h, unsigned workers) {
  using namespace singular;
  const std::vector<u64> qs = {2, 6, 30};
  const unsigned kmax = static_cast<unsigned>(capped(full ? 4 : 3, max_k));
  const i64 dmax = full ? 4 : 3;
  for (u64 qv : qs) {
    auto q = SquarefreeModulus::from_value(qv);
    for (unsigned k = 1; k <= kmax; ++k) {
      std::vector<i64> d(k, 0);
      while (true) {
        TupleD D(d);
        // Duality S = sum over sub-tuples of S0.
        BigRational acc = 0;
        for (std::uint32_t m = 0; m < (1u << k); ++m) acc += S0_mod_q(D.restrict(m), q);
        s.check(acc == S_mod_q(D, q), [&] { return "duality at " + D.str(); });
        // Repeated elements against the distinct core.
        std::vector<i64> core;
        for (i64 v : d)
          if (std::find(core.begin(), core.end(), v) == core.end()) core.push_back(v);
        s.check(check_repeated_elements(TupleD(core), D, q) == 0, [&] { return "repeated elements " + D.str(); });
        if (k <= 3) {
          double r = check_S0_expansion(D, q);
          s.check(r <= 1e-9 * std::max(1.0, std::abs(to_double(S0_mod_q(D, q)))),
                  [&] { return "S0 expansion " + D.str(); });
        }
        std::size_t i = 0;
        while (i < k && ++d[i] > dmax) d[i++] = 0;
        if (i == k) break;
      }
    }
  }
  const i64 hmax = capped(full ? 5 : 3, max_h);
  for (u64 qv : qs) {
    auto q = SquarefreeModulus::from_value(qv);
    for (unsigned k = 1; k <= kmax; ++k)
      for (i64 h = 1; h <= hmax; ++h) {
        auto id = partitions::check_Rk_partition_identity(h, k, q, workers);
        s.check(id.residual() == 0, [&] {
          return "R_k identity q=" + std::to_string(qv) + " k=" + std::to_string(k) + " h=" + std::to_string(h);
        });
      }
  }
}

void partitions_suite(Suite& s, bool full, i64 max_k, i64 max_h) {
  using namespace partitions;
  const unsigned kmax = static_cast<unsigned>(capped(full ? 6 : 5, max_k));
  for (unsigned k = 1; k <= kmax; ++k)
    for (const auto& p : enumerate_partitions(k))
      s.check(w_weight(p) == w_weight_bruteforce(p), [&] { return "w weight " + p.str(); });
  // Distinctness expansion over [1,4]^4.
  const auto parts = enumerate_partitions(4);
  std::vector<i64> d(4, 1);
  while (true) {
    i64 acc = 0;
    for (const auto& p : parts)
      if (Delta(p, d)) acc += w_weight(p);
    std::set<i64> distinct(d.begin(), d.end());
    s.check(acc == (distinct.size() == 4 ? 1 : 0), [] { return "distinctness expansion"; });
    std::size_t i = 0;
    while (i < 4 && ++d[i] > 4) d[i++] = 1;
    if (i == 4) break;
  }
  const i64 hmax = capped(full ? 4 : 3, max_h);
  for (u64 qv : {6ull, 30ull}) {
    auto q = SquarefreeModulus::from_value(qv);
    for (unsigned k = 1; k <= std::min<unsigned>(kmax, 4); ++k)
      for (const auto& p : enumerate_partitions(k))
        for (i64 h = 1; h <= hmax; ++h)
          s.check(check_partition_lemma(p, h, q).residual() == 0,
                  [&] { return "partition lemma " + p.str() + " h=" + std::to_string(h); });
  }
}

}  // namespace

VerifySummary verify_all(const VerifyOptions& opt) {
  const bool full = opt.level == VerifyLevel::Full;
  VerifySummary out;
  auto run = [&](const std::string& name, const std::function<void(Suite&)>& body) {
    Suite s(name);
    auto t0 = std::chrono::steady_clock::now();
    try {
      body(s);
    } catch (const std::exception& e) {
      s.check(false, [&] { return std::string("exception: ") + e.what(); });
    }
    s.result().seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.suites.push_back(s.result());
  };
  run("arith", [&](Suite& s) { arith_suite(s, full); });
  run("relgcd", [&](Suite& s) { relgcd_suite(s, full, opt.max_k, opt.max_q); });
  run("fracsolve", [&](Suite& s) { counting_suite(s, full, opt.max_k, opt.workers); });
  run("moments", [&](Suite& s) { moments_suite(s, full, opt.max_k, opt.max_h, opt.max_q, opt.workers); });
  run("singular", [&](Suite& s) { singular_suite(s, full, opt.max_k, opt.max_h, opt.workers); });
  run("partitions", [&](Suite& s) { partitions_suite(s, full, opt.max_k, opt.max_h); });
  return out;
}

void print_summary(const VerifySummary& s, std::ostream& out) {
  for (const auto& r : s.suites) {
    out << (r.failures ? "FAIL " : "ok   ") << std::left << std::setw(12) << r.name << std::right << std::setw(9)
        << r.checks << " checks " << std::setw(6) << r.failures << " failures " << std::fixed << std::setprecision(2)
        << r.seconds << "s";
    if (r.failures) out << "  first: " << r.first_failure;
    out << "\n";
  }
  out << (s.ok() ? "all suites passed" : "verification FAILED") << "\n";
}

}  // namespace oddsum::cli
