#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace oddsum {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

using BigInt = mpz_class;
using BigRational = mpq_class;

/// Thrown when a machine-integer result does not fit its type. Never wraps.
struct OverflowError : std::overflow_error {
  using std::overflow_error::overflow_error;
};

/// Thrown when a request exceeds a configured work or size budget.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

i64 checked_add(i64 a, i64 b);
i64 checked_mul(i64 a, i64 b);
u64 checked_mul(u64 a, u64 b);
u64 checked_add(u64 a, u64 b);
i64 narrow_i64(i128 v);

u64 gcd(u64 a, u64 b);
u128 gcd(u128 a, u128 b);
/// lcm that throws OverflowError instead of wrapping.
u64 checked_lcm(u64 a, u64 b);
/// Non-negative residue of a modulo m (m > 0).
inline i64 mod_floor(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

// ---------------------------------------------------------------------------
// Fraction: reduced a/q with q >= 1. Zero is 0/1.

struct Fraction {
  i64 num = 0;
  i64 den = 1;

  bool is_integer() const { return den == 1; }
  bool is_zero() const { return num == 0; }
  std::string str() const;

  friend bool operator==(const Fraction&, const Fraction&) = default;
  friend std::strong_ordering operator<=>(const Fraction& a, const Fraction& b) {
    return static_cast<i128>(a.num) * b.den <=> static_cast<i128>(b.num) * a.den;
  }
};

Fraction reduce_fraction(i64 num, i64 den);
Fraction reduce_fraction(i128 num, i128 den);

Fraction operator+(const Fraction& a, const Fraction& b);
Fraction operator-(const Fraction& a, const Fraction& b);
Fraction operator-(const Fraction& a);

/// x - floor(x), as a reduced fraction in [0, 1).
Fraction frac_part(const Fraction& x);
/// Distance to the nearest integer, in [0, 1/2].
Fraction dist_to_int(const Fraction& x);

/// Parses "p/q" or "p" into a reduced fraction.
Fraction parse_fraction(const std::string& text);

BigRational to_big(const Fraction& f);

struct FractionHash {
  std::size_t operator()(const Fraction& f) const noexcept {
    u64 h = static_cast<u64>(f.num) * 0x9E3779B97F4A7C15ULL;
    h ^= static_cast<u64>(f.den) + 0x632BE59BD9B4E019ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

// ---------------------------------------------------------------------------
// Big rationals

/// Exact "p/q" rendering; integers keep the "/1" so every rational column parses the same way.
std::string format_rational(const BigRational& r);
BigRational parse_rational(const std::string& text);
BigRational pow(const BigRational& base, unsigned exp);
BigInt pow(const BigInt& base, unsigned exp);
double to_double(const BigRational& r);

// ---------------------------------------------------------------------------
// Factorization and multiplicative functions

struct PrimePower {
  u64 prime;
  unsigned exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};
using Factorization = std::vector<PrimePower>;

inline constexpr u64 kSieveLimit = 1'000'000;
inline constexpr u64 kFactorizeCap = 1'000'000'000'000ULL;

Factorization factorize(u64 n);
u64 recompose(const Factorization& f);

u64 totient(u64 n);
int mobius(u64 n);
bool is_squarefree(u64 n);
bool is_prime(u64 n);
/// Sorted ascending; n must be >= 1.
std::vector<u64> squarefree_divisors(u64 n);
std::vector<u64> divisors(u64 n);
/// All primes p <= y (y <= kSieveLimit).
std::vector<u64> primes_up_to(u64 y);

inline constexpr std::size_t kPrimorialBitBudget = 1u << 16;
/// Product of primes p <= y; throws BudgetError if it would exceed max_bits.
BigInt primorial(u64 y, std::size_t max_bits = kPrimorialBitBudget);

// ---------------------------------------------------------------------------

/// A squarefree modulus held by its prime support, so primorials far beyond
/// 64 bits are representable.
class SquarefreeModulus {
 public:
  static SquarefreeModulus from_value(u64 q);
  static SquarefreeModulus from_primes(std::vector<u64> primes);
  static SquarefreeModulus primorial(u64 y);

  const std::vector<u64>& primes() const { return primes_; }
  std::size_t omega() const { return primes_.size(); }
  BigInt value() const;
  /// Throws OverflowError if q does not fit.
  u64 value_u64() const;
  BigInt phi() const;
  /// q/phi(q), the variable z of the partition polynomials.
  BigRational ratio() const;
  std::string str() const;

 private:
  explicit SquarefreeModulus(std::vector<u64> primes) : primes_(std::move(primes)) {}
  std::vector<u64> primes_;
};

}  // namespace oddsum
