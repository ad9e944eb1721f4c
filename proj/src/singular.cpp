#include "oddsum/singular.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "oddsum/parallel.hpp"

namespace oddsum::singular {

namespace {

void check_prime(u64 p) {
  if (!is_prime(p)) throw std::invalid_argument("nu_p: " + std::to_string(p) + " is not prime");
}

/// Relabels values by first occurrence: (5,3,5,1) -> (0,1,0,2).
template <typename T>
void relabel(const std::vector<T>& values, std::uint8_t* out) {
  std::uint8_t next = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::size_t j = 0;
    while (j < i && values[j] != values[i]) ++j;
    out[i] = j < i ? out[j] : next++;
  }
}

unsigned distinct_labels(const std::uint8_t* labels, std::size_t k, std::uint32_t mask) {
  std::uint32_t seen = 0;
  for (std::size_t i = 0; i < k; ++i)
    if (mask >> i & 1u) seen |= 1u << labels[i];
  return static_cast<unsigned>(std::popcount(seen));
}

}  // namespace

TupleD::TupleD(std::vector<i64> d) : d_(std::move(d)) {
  if (d_.size() > kMaxTupleLength)
    throw std::invalid_argument("tuple length exceeds " + std::to_string(kMaxTupleLength));
  for (i64 v : d_)
    if (v > kMaxOffset || v < -kMaxOffset)
      throw std::invalid_argument("tuple entry " + std::to_string(v) + " out of range");
}

TupleD TupleD::restrict(std::uint32_t mask) const {
  std::vector<i64> out;
  for (std::size_t i = 0; i < d_.size(); ++i)
    if (mask >> i & 1u) out.push_back(d_[i]);
  return TupleD(std::move(out));
}

bool TupleD::has_repeats() const {
  std::set<i64> s(d_.begin(), d_.end());
  return s.size() != d_.size();
}

std::string TupleD::str() const {
  std::string out = "(";
  for (std::size_t i = 0; i < d_.size(); ++i) out += (i ? "," : "") + std::to_string(d_[i]);
  return out + ")";
}

unsigned nu_p(const TupleD& d, u64 p) {
  check_prime(p);
  std::set<i64> classes;
  for (i64 v : d.values()) classes.insert(mod_floor(v, static_cast<i64>(p)));
  return static_cast<unsigned>(classes.size());
}

BigRational S_mod_q(const TupleD& d, const SquarefreeModulus& q) {
  const unsigned k = static_cast<unsigned>(d.size());
  BigRational out = pow(q.ratio(), k);
  for (u64 p : q.primes()) {
    unsigned nu = nu_p(d, p);
    if (nu >= p) return BigRational(0);
    BigRational f(BigInt(static_cast<unsigned long>(p - nu)), BigInt(static_cast<unsigned long>(p)));
    f.canonicalize();
    out *= f;
  }
  return out;
}

BigRational S0_mod_q(const TupleD& d, const SquarefreeModulus& q) {
  const unsigned k = static_cast<unsigned>(d.size());
  BigRational out = 0;
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    BigRational s = S_mod_q(d.restrict(mask), q);
    if ((k - std::popcount(mask)) % 2) out -= s;
    else out += s;
  }
  return out;
}

InfiniteValue S_infinite(const TupleD& d, u64 P) {
  const std::size_t k = d.size();
  if (d.has_repeats()) throw std::invalid_argument("S_infinite: tuple has repeated entries");
  if (P < 2 * k) throw std::invalid_argument("S_infinite: truncation P must be at least 2k");
  i64 maxdiff = 0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) maxdiff = std::max(maxdiff, d[i] - d[j]);
  u64 limit = std::max<u64>(P, static_cast<u64>(maxdiff));
  if (limit > kSieveLimit)
    throw BudgetError("S_infinite: truncation " + std::to_string(limit) + " exceeds sieve limit");

  InfiniteValue out;
  out.truncation = 0;
  long double log_sum = 0;
  for (u64 p : primes_up_to(limit)) {
    out.truncation = p;
    unsigned nu = nu_p(d, p);
    if (nu >= p) {
      out.value = 0;
      out.tail_bound = 0;
      return out;
    }
    long double a = std::log1p(-1.0L / static_cast<long double>(p));
    long double b = nu == 1 ? a : std::log1p(-static_cast<long double>(nu) / static_cast<long double>(p));
    log_sum += b - static_cast<long double>(k) * a;
  }
  out.value = static_cast<double>(std::exp(log_sum));
  // Beyond the truncation every factor has nu_p = k and |log factor| <= k^2/p^2,
  // while sum_{p > P} p^-2 <= 1/P.
  double x = static_cast<double>(k * k) / static_cast<double>(limit);
  out.tail_bound = out.value * std::expm1(x);
  return out;
}

BigRational check_repeated_elements(const TupleD& d1, const TupleD& d2, const SquarefreeModulus& q) {
  if (d1.has_repeats()) throw std::invalid_argument("check_repeated_elements: D1 must be distinct");
  std::set<i64> s1(d1.values().begin(), d1.values().end());
  std::set<i64> s2(d2.values().begin(), d2.values().end());
  if (s1 != s2) throw std::invalid_argument("check_repeated_elements: element sets differ");
  unsigned extra = static_cast<unsigned>(d2.size() - d1.size());
  return S_mod_q(d2, q) - pow(q.ratio(), extra) * S_mod_q(d1, q);
}

double S0_expsum(const TupleD& d, const SquarefreeModulus& q) {
  const std::size_t k = d.size();
  if (k == 0) return 1.0;
  if (k == 1) return 0.0;  // the single numerator is forced to 0, which is excluded
  const u64 qv = q.value_u64();
  if (std::pow(static_cast<double>(qv - 1), static_cast<double>(k - 1)) > kExpSumBudget)
    throw BudgetError("S0 expansion: (q-1)^(k-1) exceeds budget");

  // x/q in lowest terms is a/r with r = q/gcd(x,q); weight mu(r)/phi(r).
  std::vector<long double> weight(qv, 0.0L);
  for (u64 x = 1; x < qv; ++x) {
    u64 r = qv / gcd(x, qv);
    weight[x] = static_cast<long double>(mobius(r)) / static_cast<long double>(totient(r));
  }
  std::vector<long double> cosine(qv);
  for (u64 t = 0; t < qv; ++t)
    cosine[t] = std::cos(2.0L * std::numbers::pi_v<long double> * static_cast<long double>(t) /
                         static_cast<long double>(qv));
  const i64 qi = static_cast<i64>(qv);
  std::vector<i64> dm(k);
  for (std::size_t i = 0; i < k; ++i) dm[i] = mod_floor(d[i], qi);

  std::vector<u64> x(k - 1, 1);
  long double total = 0;
  while (true) {
    u64 xsum = 0;
    i128 phase = 0;
    long double w = 1;
    for (std::size_t i = 0; i + 1 < k; ++i) {
      xsum += x[i];
      phase += static_cast<i128>(dm[i]) * x[i];
      w *= weight[x[i]];
    }
    u64 last = (qv - xsum % qv) % qv;
    if (last != 0) {
      phase += static_cast<i128>(dm[k - 1]) * last;
      w *= weight[last];
      total += w * cosine[static_cast<u64>(phase % qi)];
    }
    std::size_t i = 0;
    while (i < k - 1 && ++x[i] == qv) x[i++] = 1;
    if (i == k - 1) break;
  }
  return static_cast<double>(total);
}

double check_S0_expansion(const TupleD& d, const SquarefreeModulus& q) {
  return std::abs(S0_expsum(d, q) - to_double(S0_mod_q(d, q)));
}

// ---------------------------------------------------------------------------

TupleSum::TupleSum(const SquarefreeModulus& q, unsigned k, i64 h) : q_(q), k_(k), h_(h) {
  if (k > kMaxTupleLength) throw std::invalid_argument("tuple sum: k exceeds 8");
  if (h < 1) throw std::invalid_argument("tuple sum: h must be >= 1");
  double cost = std::pow(static_cast<double>(h), k) * std::pow(2.0, k) *
                static_cast<double>(std::max<std::size_t>(1, q.omega()));
  if (cost > kTupleSumBudget)
    throw BudgetError("tuple sum: estimated " + std::to_string(static_cast<long double>(cost)) +
                      " operations exceeds budget");
  for (u64 p : q.primes())
    if (static_cast<i64>(p) < h) small_.push_back(p);
  // Primes p >= h keep distinct offsets in [1,h] distinct, so only the number
  // of distinct values u matters there.
  large_.assign(k + 1, BigRational(1));
  for (unsigned u = 0; u <= k; ++u) {
    for (u64 p : q.primes()) {
      if (static_cast<i64>(p) < h) continue;
      if (u >= p) {
        large_[u] = 0;
        break;
      }
      BigRational f(BigInt(static_cast<unsigned long>(p - u)), BigInt(static_cast<unsigned long>(p)));
      f.canonicalize();
      large_[u] *= f;
    }
  }
  z_pow_.assign(k + 1, BigRational(1));
  for (unsigned j = 1; j <= k; ++j) z_pow_[j] = z_pow_[j - 1] * q.ratio();
}

BigRational TupleSum::evaluate(const std::vector<std::uint8_t>& key, bool refined) const {
  const std::size_t k = k_;
  const std::uint8_t* eq = key.data();
  auto value = [&](std::uint32_t mask) {
    unsigned size = static_cast<unsigned>(std::popcount(mask));
    BigRational s = z_pow_[size] * large_[distinct_labels(eq, k, mask)];
    if (s == 0) return s;
    for (std::size_t j = 0; j < small_.size(); ++j) {
      unsigned nu = distinct_labels(eq + (j + 1) * k, k, mask);
      u64 p = small_[j];
      if (nu >= p) return BigRational(0);
      BigRational f(BigInt(static_cast<unsigned long>(p - nu)), BigInt(static_cast<unsigned long>(p)));
      f.canonicalize();
      s *= f;
    }
    return s;
  };
  const std::uint32_t full = k == 0 ? 0 : (1u << k) - 1;
  if (!refined) return value(full);
  BigRational out = 0;
  for (std::uint32_t mask = 0; mask <= full; ++mask) {
    BigRational s = value(mask);
    if ((k - std::popcount(mask)) % 2) out -= s;
    else out += s;
  }
  return out;
}

BigRational TupleSum::sum(bool refined, bool distinct_only, unsigned workers) const {
  const std::size_t k = k_;
  const std::size_t rows = 1 + small_.size();
  struct VecHash {
    std::size_t operator()(const std::vector<std::uint8_t>& v) const noexcept {
      std::size_t h = 1469598103934665603ULL;
      for (auto b : v) h = (h ^ b) * 1099511628211ULL;
      return h;
    }
  };
  std::unordered_map<std::vector<std::uint8_t>, u64, VecHash> counts;
  std::vector<i64> d(k, 1);
  std::vector<i64> residues(k);
  std::vector<std::uint8_t> key(rows * k);
  while (true) {
    bool keep = true;
    if (distinct_only) {
      for (std::size_t i = 0; i < k && keep; ++i)
        for (std::size_t j = 0; j < i; ++j)
          if (d[i] == d[j]) {
            keep = false;
            break;
          }
    }
    if (keep) {
      relabel(d, key.data());
      for (std::size_t j = 0; j < small_.size(); ++j) {
        for (std::size_t i = 0; i < k; ++i) residues[i] = d[i] % static_cast<i64>(small_[j]);
        relabel(residues, key.data() + (j + 1) * k);
      }
      ++counts[key];
    }
    std::size_t i = 0;
    while (i < k && ++d[i] > h_) d[i++] = 1;
    if (i == k) break;
  }

  std::vector<std::pair<std::vector<std::uint8_t>, u64>> patterns(counts.begin(), counts.end());
  std::sort(patterns.begin(), patterns.end());
  last_patterns_ = patterns.size();
  auto partial = parallel_chunks<BigRational>(
      patterns.size(), resolve_workers(workers), [&](std::size_t b, std::size_t e) {
        BigRational acc = 0;
        for (std::size_t i = b; i < e; ++i)
          acc += evaluate(patterns[i].first, refined) * BigInt(static_cast<unsigned long>(patterns[i].second));
        return acc;
      });
  BigRational total = 0;
  for (const auto& p : partial) total += p;
  return total;
}

BigRational TupleSum::sum_S0(bool distinct_only, unsigned workers) const {
  return sum(true, distinct_only, workers);
}

BigRational TupleSum::sum_S(bool distinct_only, unsigned workers) const {
  return sum(false, distinct_only, workers);
}

BigRational R_mod_q(i64 h, unsigned k, const SquarefreeModulus& q, unsigned workers) {
  return TupleSum(q, k, h).sum_S0(true, workers);
}

GallagherRatio gallagher_ratio(i64 h, unsigned k, const SquarefreeModulus& q, unsigned workers) {
  GallagherRatio out;
  out.exact = TupleSum(q, k, h).sum_S(true, workers) /
              BigRational(pow(BigInt(static_cast<unsigned long>(h)), k));
  out.value = to_double(out.exact);
  return out;
}

}  // namespace oddsum::singular
