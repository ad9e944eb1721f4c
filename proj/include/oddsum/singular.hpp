#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "oddsum/arith.hpp"

namespace oddsum::singular {

inline constexpr std::size_t kMaxTupleLength = 8;
inline constexpr i64 kMaxOffset = 1'000'000;
/// Ceiling on h^k * 2^k * omega(q) for tuple sums.
inline constexpr double kTupleSumBudget = 2e9;
/// Ceiling on (q-1)^(k-1) for the exponential-sum expansions.
inline constexpr double kExpSumBudget = 5e8;

/// Ordered tuple of offsets d_1..d_k. Repeats are allowed.
class TupleD {
 public:
  TupleD() = default;
  explicit TupleD(std::vector<i64> d);
  TupleD(std::initializer_list<i64> d) : TupleD(std::vector<i64>(d)) {}

  std::size_t size() const { return d_.size(); }
  i64 operator[](std::size_t i) const { return d_[i]; }
  std::span<const i64> values() const { return d_; }
  /// Sub-tuple on the index bitmask (bit i = index i+1), order preserved.
  TupleD restrict(std::uint32_t mask) const;
  bool has_repeats() const;
  std::string str() const;

 private:
  std::vector<i64> d_;
};

/// Number of residue classes mod p occupied by the tuple (0 for the empty tuple).
unsigned nu_p(const TupleD& d, u64 p);

/// Finite Euler product prod_{p|q} (1-1/p)^{-k} (1 - nu_p/p).
BigRational S_mod_q(const TupleD& d, const SquarefreeModulus& q);
/// Inclusion-exclusion over sub-tuples; 1 for the empty tuple.
BigRational S0_mod_q(const TupleD& d, const SquarefreeModulus& q);

struct InfiniteValue {
  double value = 0;
  /// |true series - value| <= tail_bound.
  double tail_bound = 0;
  /// Largest prime included in the product.
  u64 truncation = 0;
};

/// Truncated Euler product over p <= max(P, max |d_i - d_j|) with an explicit
/// tail bound. Requires distinct entries and P >= 2k.
InfiniteValue S_infinite(const TupleD& d, u64 P);

/// S(D2;q) - (q/phi(q))^{k2-k1} S(D1;q). D1 must be distinct with the same
/// element set as D2.
BigRational check_repeated_elements(const TupleD& d1, const TupleD& d2, const SquarefreeModulus& q);

/// Evaluates S0(D;q) through its exponential-sum expansion over divisor
/// tuples (double precision).
double S0_expsum(const TupleD& d, const SquarefreeModulus& q);
/// |S0_expsum - S0_mod_q|.
double check_S0_expansion(const TupleD& d, const SquarefreeModulus& q);

/// Sums of S or S0 over all tuples in [1,h]^k, optionally restricted to
/// tuples with distinct entries. Tuples are grouped by their residue pattern
/// (the partition each prime p|q induces on the indices) and each pattern is
/// evaluated once.
class TupleSum {
 public:
  TupleSum(const SquarefreeModulus& q, unsigned k, i64 h);

  BigRational sum_S0(bool distinct_only, unsigned workers = 0) const;
  BigRational sum_S(bool distinct_only, unsigned workers = 0) const;
  /// Distinct patterns seen by the last sum.
  std::size_t patterns() const { return last_patterns_; }

 private:
  BigRational sum(bool refined, bool distinct_only, unsigned workers) const;
  BigRational evaluate(const std::vector<std::uint8_t>& key, bool refined) const;

  SquarefreeModulus q_;
  unsigned k_;
  i64 h_;
  std::vector<u64> small_;            // primes p | q with p < h
  std::vector<BigRational> large_;    // prod over primes p >= h of (1 - u/p), indexed by u
  std::vector<BigRational> z_pow_;    // (q/phi(q))^j
  mutable std::size_t last_patterns_ = 0;
};

/// R_k(h;q): sum of S0(D;q) over distinct tuples in [1,h]^k.
BigRational R_mod_q(i64 h, unsigned k, const SquarefreeModulus& q, unsigned workers = 0);

struct GallagherRatio {
  BigRational exact;  // sum over distinct tuples of S(D;q), divided by h^k
  double value = 0;
};
GallagherRatio gallagher_ratio(i64 h, unsigned k, const SquarefreeModulus& q, unsigned workers = 0);

}  // namespace oddsum::singular
