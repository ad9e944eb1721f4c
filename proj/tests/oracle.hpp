#pragma once

// Slow reference implementations for tests. They share no code with the
// library beyond the GMP number types.

#include <numeric>
#include <set>
#include <vector>

#include <gmpxx.h>

namespace oracle {

using i64 = long long;

inline i64 totient(i64 n) {
  i64 c = 0;
  for (i64 m = 1; m <= n; ++m)
    if (std::gcd(m, n) == 1) ++c;
  return c;
}

inline std::vector<i64> prime_factors(i64 n) {
  std::vector<i64> ps;
  for (i64 p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      ps.push_back(p);
      while (n % p == 0) n /= p;
    }
  if (n > 1) ps.push_back(n);
  return ps;
}

inline int mobius(i64 n) {
  int s = 1;
  for (i64 p = 2; p <= n; ++p)
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      s = -s;
    }
  return s;
}

/// Reduced a/q with |a| <= n, q <= Q, as exact rationals.
inline std::vector<mpq_class> box_alphabet(i64 n, i64 Q) {
  std::set<mpq_class> s;
  for (i64 q = 1; q <= Q; ++q)
    for (i64 a = -n; a <= n; ++a)
      if (std::gcd(a < 0 ? -a : a, q) == 1) {
        mpq_class x(static_cast<long>(a), static_cast<unsigned long>(q));
        x.canonicalize();
        s.insert(x);
      }
  return {s.begin(), s.end()};
}

inline bool is_int(const mpq_class& x) { return x.get_den() == 1; }

/// Ordered k-tuples from one alphabet whose sum is an integer (or zero).
inline i64 count_tuples(const std::vector<mpq_class>& alpha, unsigned k, bool zero_only) {
  i64 c = 0;
  std::vector<std::size_t> idx(k, 0);
  while (true) {
    mpq_class s = 0;
    for (auto i : idx) s += alpha[i];
    if (zero_only ? s == 0 : is_int(s)) ++c;
    unsigned j = 0;
    while (j < k && ++idx[j] == alpha.size()) idx[j++] = 0;
    if (j == k) break;
  }
  return c;
}

/// prod_{p|q} (1-1/p)^{-k} (1 - nu_p/p) by direct residue counting.
inline mpq_class S_mod_q(const std::vector<i64>& d, i64 q) {
  mpq_class r = 1;
  for (i64 p : prime_factors(q)) {
    std::set<i64> cls;
    for (i64 x : d) cls.insert(((x % p) + p) % p);
    mpq_class f(static_cast<long>(p - static_cast<i64>(cls.size())), static_cast<unsigned long>(p));
    for (std::size_t i = 0; i < d.size(); ++i) f *= mpq_class(static_cast<long>(p), static_cast<unsigned long>(p - 1));
    f.canonicalize();
    r *= f;
  }
  return r;
}

inline mpq_class S0_mod_q(const std::vector<i64>& d, i64 q) {
  const std::size_t k = d.size();
  mpq_class r = 0;
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    std::vector<i64> sub;
    for (std::size_t i = 0; i < k; ++i)
      if (mask >> i & 1) sub.push_back(d[i]);
    int sign = ((k - sub.size()) % 2) ? -1 : 1;
    r += mpq_class(sign) * S_mod_q(sub, q);
  }
  return r;
}

/// sum_{n=1}^{q} (W(n) - phi h / q)^k, counting each window from scratch.
inline mpq_class M_direct(i64 q, i64 h, unsigned k) {
  mpq_class mean(static_cast<long>(totient(q) * h), static_cast<unsigned long>(q));
  mean.canonicalize();
  mpq_class r = 0;
  for (i64 n = 1; n <= q; ++n) {
    i64 w = 0;
    for (i64 m = n; m < n + h; ++m)
      if (std::gcd(m, q) == 1) ++w;
    mpq_class dev = mpq_class(static_cast<long>(w)) - mean, p = 1;
    for (unsigned i = 0; i < k; ++i) p *= dev;
    r += p;
  }
  return r;
}

}  // namespace oracle
