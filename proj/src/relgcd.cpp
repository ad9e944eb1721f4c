#include "oddsum/relgcd.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

namespace oddsum::relgcd {

namespace {

void validate(std::span<const u64> q) {
  if (q.empty()) throw std::invalid_argument("relgcd: empty tuple");
  if (q.size() > kMaxArity) throw std::invalid_argument("relgcd: arity exceeds 16");
  for (u64 v : q)
    if (v == 0) throw std::invalid_argument("relgcd: entries must be positive");
}

bool comparable(Subset a, Subset b) {
  return (a & b) == a || (a & b) == b;
}

}  // namespace

std::string subset_str(Subset s) {
  std::string out = "{";
  bool first = true;
  for (unsigned i = 0; i < 32; ++i) {
    if (s >> i & 1u) {
      if (!first) out += ",";
      out += std::to_string(i + 1);
      first = false;
    }
  }
  return out + "}";
}

RelGcdDecomposition::RelGcdDecomposition(unsigned k) : k_(k) {
  if (k == 0 || k > kMaxArity) throw std::invalid_argument("relgcd: arity must be in [1,16]");
}

u64 RelGcdDecomposition::get(Subset s) const {
  auto it = g_.find(s);
  return it == g_.end() ? 1 : it->second;
}

void RelGcdDecomposition::set(Subset s, u64 g) {
  if (g == 0) throw std::invalid_argument("relgcd: g_I must be positive");
  if (s >> k_) throw std::invalid_argument("relgcd: subset outside {1..k}");
  if (g == 1)
    g_.erase(s);
  else if (s == 0)
    throw std::invalid_argument("relgcd: g_empty must be 1");
  else
    g_[s] = g;
}

void RelGcdDecomposition::multiply(Subset s, u64 f) {
  set(s, checked_mul(get(s), f));
}

RelGcdDecomposition decompose_local(std::span<const u64> q) {
  validate(q);
  const unsigned k = static_cast<unsigned>(q.size());
  std::vector<Factorization> fac;
  std::vector<u64> primes;
  for (u64 v : q) {
    fac.push_back(factorize(v));
    for (auto [p, e] : fac.back()) primes.push_back(p);
  }
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());

  RelGcdDecomposition d(k);
  std::vector<std::pair<unsigned, unsigned>> val(k);  // (valuation, original index)
  for (u64 p : primes) {
    for (unsigned i = 0; i < k; ++i) {
      unsigned e = 0;
      for (auto [pp, ee] : fac[i])
        if (pp == p) e = ee;
      val[i] = {e, i};
    }
    // Stable by original index; equal neighbours contribute a zero jump.
    std::sort(val.begin(), val.end());
    Subset suffix = (1u << k) - 1;
    unsigned prev = 0;
    for (unsigned pos = 0; pos < k; ++pos) {
      unsigned jump = val[pos].first - prev;
      for (unsigned j = 0; j < jump; ++j) d.multiply(suffix, p);
      prev = val[pos].first;
      suffix &= ~(1u << val[pos].second);
    }
  }
  return d;
}

RelGcdDecomposition decompose_recursive(std::span<const u64> q) {
  validate(q);
  const unsigned k = static_cast<unsigned>(q.size());
  const Subset full = (1u << k) - 1;
  std::vector<u64> gcds(std::size_t{1} << k, 0);
  for (Subset s = 1; s <= full; ++s) {
    unsigned low = static_cast<unsigned>(std::countr_zero(s));
    gcds[s] = gcd(gcds[s & (s - 1)], q[low]);
  }
  std::vector<Subset> order(full);
  std::iota(order.begin(), order.end(), Subset{1});
  std::stable_sort(order.begin(), order.end(),
                   [](Subset a, Subset b) { return std::popcount(a) > std::popcount(b); });

  RelGcdDecomposition d(k);
  for (Subset s : order) {
    u64 denom = 1;
    for (auto [t, g] : d.entries())
      if (t != s && (t & s) == s) denom = checked_mul(denom, g);
    if (gcds[s] % denom != 0)
      throw std::logic_error("relgcd: inexact division at " + subset_str(s));
    d.set(s, gcds[s] / denom);
  }
  return d;
}

std::vector<u64> recompose(const RelGcdDecomposition& d) {
  std::vector<u64> q(d.arity(), 1);
  for (auto [s, g] : d.entries())
    for (unsigned i = 0; i < d.arity(); ++i)
      if (s >> i & 1u) q[i] = checked_mul(q[i], g);
  return q;
}

CoprimalityCheck check_cross_coprimality(const RelGcdDecomposition& d) {
  const auto& e = d.entries();
  for (auto a = e.begin(); a != e.end(); ++a)
    for (auto b = std::next(a); b != e.end(); ++b)
      if (!comparable(a->first, b->first) && gcd(a->second, b->second) > 1)
        return {false, std::pair{a->first, b->first}};
  return {};
}

bool check_squarefree_pairwise(const RelGcdDecomposition& d, std::span<const u64> q) {
  for (u64 v : q)
    if (v == 0 || !is_squarefree(v))
      throw std::invalid_argument("check_squarefree_pairwise: " + std::to_string(v) +
                                  " is not squarefree");
  const auto& e = d.entries();
  for (auto a = e.begin(); a != e.end(); ++a)
    for (auto b = std::next(a); b != e.end(); ++b)
      if (gcd(a->second, b->second) > 1) return false;
  return true;
}

}  // namespace oddsum::relgcd
