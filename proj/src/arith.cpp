#include "oddsum/arith.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace oddsum {

i64 checked_add(i64 a, i64 b) {
  i64 r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("int64 addition overflow");
  return r;
}

i64 checked_mul(i64 a, i64 b) {
  i64 r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("int64 multiplication overflow");
  return r;
}

u64 checked_mul(u64 a, u64 b) {
  u64 r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("uint64 multiplication overflow");
  return r;
}

u64 checked_add(u64 a, u64 b) {
  u64 r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("uint64 addition overflow");
  return r;
}

i64 narrow_i64(i128 v) {
  if (v > static_cast<i128>(INT64_MAX) || v < static_cast<i128>(INT64_MIN))
    throw OverflowError("value does not fit in int64");
  return static_cast<i64>(v);
}

u64 gcd(u64 a, u64 b) {
  while (b) {
    u64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

u128 gcd(u128 a, u128 b) {
  while (b) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

u64 checked_lcm(u64 a, u64 b) {
  if (a == 0 || b == 0) return 0;
  return checked_mul(a / gcd(a, b), b);
}

// ---------------------------------------------------------------------------

std::string Fraction::str() const {
  return std::to_string(num) + "/" + std::to_string(den);
}

Fraction reduce_fraction(i128 num, i128 den) {
  if (den == 0) throw std::invalid_argument("fraction denominator must be non-zero");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (num == 0) return {0, 1};
  u128 g = gcd(static_cast<u128>(num < 0 ? -num : num), static_cast<u128>(den));
  num /= static_cast<i128>(g);
  den /= static_cast<i128>(g);
  return {narrow_i64(num), narrow_i64(den)};
}

Fraction reduce_fraction(i64 num, i64 den) {
  return reduce_fraction(static_cast<i128>(num), static_cast<i128>(den));
}

Fraction operator+(const Fraction& a, const Fraction& b) {
  if (a.den == b.den) return reduce_fraction(static_cast<i128>(a.num) + b.num, static_cast<i128>(a.den));
  u64 g = gcd(static_cast<u64>(a.den), static_cast<u64>(b.den));
  i128 bd = b.den / static_cast<i64>(g);
  i128 num = static_cast<i128>(a.num) * bd + static_cast<i128>(b.num) * (a.den / static_cast<i64>(g));
  i128 den = static_cast<i128>(a.den) * bd;
  return reduce_fraction(num, den);
}

Fraction operator-(const Fraction& a) {
  return {checked_mul(a.num, i64{-1}), a.den};
}

Fraction operator-(const Fraction& a, const Fraction& b) {
  return a + (-b);
}

Fraction frac_part(const Fraction& x) {
  return {mod_floor(x.num, x.den), x.den};
}

Fraction dist_to_int(const Fraction& x) {
  Fraction f = frac_part(x);
  if (2 * static_cast<i128>(f.num) <= f.den) return f;
  return {f.den - f.num, f.den};
}

namespace {

i64 parse_i64(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  i64 v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
  return v;
}

}  // namespace

Fraction parse_fraction(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) return {parse_i64(text), 1};
  i64 num = parse_i64(std::string_view(text).substr(0, slash));
  i64 den = parse_i64(std::string_view(text).substr(slash + 1));
  return reduce_fraction(num, den);
}

BigRational to_big(const Fraction& f) {
  BigRational r(BigInt(static_cast<long>(f.num)), BigInt(static_cast<long>(f.den)));
  r.canonicalize();
  return r;
}

// ---------------------------------------------------------------------------

std::string format_rational(const BigRational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

BigRational parse_rational(const std::string& text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty() || t.find_first_not_of("+-0123456789/") != std::string::npos)
    throw std::invalid_argument("not a rational: '" + text + "'");
  if (t.front() == '+') t.erase(0, 1);
  BigRational r;
  if (r.set_str(t, 10) != 0) throw std::invalid_argument("not a rational: '" + text + "'");
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator: '" + text + "'");
  r.canonicalize();
  return r;
}

BigInt pow(const BigInt& base, unsigned exp) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exp);
  return out;
}

BigRational pow(const BigRational& base, unsigned exp) {
  BigRational out(pow(BigInt(base.get_num()), exp), pow(BigInt(base.get_den()), exp));
  out.canonicalize();
  return out;
}

double to_double(const BigRational& r) {
  return mpq_get_d(r.get_mpq_t());
}

// ---------------------------------------------------------------------------

namespace {

struct Sieve {
  std::vector<std::uint32_t> spf;
  std::vector<u64> primes;

  explicit Sieve(u64 limit) : spf(limit + 1, 0) {
    for (u64 i = 2; i <= limit; ++i) {
      if (spf[i] == 0) {
        spf[i] = static_cast<std::uint32_t>(i);
        primes.push_back(i);
      }
      for (u64 p : primes) {
        if (p > spf[i] || i * p > limit) break;
        spf[i * p] = static_cast<std::uint32_t>(p);
      }
    }
  }
};

const Sieve& sieve() {
  static const Sieve s(kSieveLimit);
  return s;
}

// Small inputs use a tiny table so one-off calls skip the full sieve build.
constexpr u64 kSmallSieveLimit = 1 << 16;

const Sieve& small_sieve() {
  static const Sieve s(kSmallSieveLimit);
  return s;
}

}  // namespace

Factorization factorize(u64 n) {
  if (n == 0) throw std::invalid_argument("factorize: n must be >= 1");
  if (n > kFactorizeCap) throw std::invalid_argument("factorize: n exceeds cap 10^12");
  Factorization out;
  const Sieve& s = n <= kSmallSieveLimit ? small_sieve() : sieve();
  auto push = [&](u64 p) {
    if (!out.empty() && out.back().prime == p)
      ++out.back().exponent;
    else
      out.push_back({p, 1});
  };
  if (n > kSieveLimit) {
    for (u64 p : s.primes) {
      if (p * p > n) break;
      while (n % p == 0) {
        push(p);
        n /= p;
      }
      if (n <= kSieveLimit) break;
    }
    if (n > kSieveLimit) {
      push(n);  // remaining cofactor has no prime factor <= 10^6, and n <= 10^12
      return out;
    }
  }
  while (n > 1) {
    u64 p = s.spf[n];
    push(p);
    n /= p;
  }
  return out;
}

u64 recompose(const Factorization& f) {
  u64 n = 1;
  for (auto [p, e] : f)
    for (unsigned i = 0; i < e; ++i) n = checked_mul(n, p);
  return n;
}

u64 totient(u64 n) {
  u64 r = n;
  for (auto [p, e] : factorize(n)) r = r / p * (p - 1);
  return r;
}

int mobius(u64 n) {
  auto f = factorize(n);
  for (auto [p, e] : f)
    if (e > 1) return 0;
  return f.size() % 2 ? -1 : 1;
}

bool is_squarefree(u64 n) {
  return mobius(n) != 0;
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  auto f = factorize(n);
  return f.size() == 1 && f[0].exponent == 1;
}

std::vector<u64> squarefree_divisors(u64 n) {
  std::vector<u64> out{1};
  for (auto [p, e] : factorize(n)) {
    std::size_t m = out.size();
    for (std::size_t i = 0; i < m; ++i) out.push_back(out[i] * p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<u64> divisors(u64 n) {
  std::vector<u64> out{1};
  for (auto [p, e] : factorize(n)) {
    std::size_t m = out.size();
    u64 pk = 1;
    for (unsigned j = 1; j <= e; ++j) {
      pk *= p;
      for (std::size_t i = 0; i < m; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<u64> primes_up_to(u64 y) {
  if (y > kSieveLimit) throw std::invalid_argument("primes_up_to: bound exceeds sieve limit");
  const auto& ps = sieve().primes;
  return {ps.begin(), std::upper_bound(ps.begin(), ps.end(), y)};
}

BigInt primorial(u64 y, std::size_t max_bits) {
  if (y < 2) throw std::invalid_argument("primorial: y must be >= 2");
  if (y > kSieveLimit) throw BudgetError("primorial: y exceeds sieve limit");
  BigInt out = 1;
  for (u64 p : primes_up_to(y)) {
    out *= static_cast<unsigned long>(p);
    if (mpz_sizeinbase(out.get_mpz_t(), 2) > max_bits)
      throw BudgetError("primorial(" + std::to_string(y) + ") exceeds " + std::to_string(max_bits) +
                        "-bit budget");
  }
  return out;
}

// ---------------------------------------------------------------------------

SquarefreeModulus SquarefreeModulus::from_value(u64 q) {
  if (q == 0) throw std::invalid_argument("modulus must be >= 1");
  std::vector<u64> ps;
  for (auto [p, e] : factorize(q)) {
    if (e > 1) throw std::invalid_argument("modulus " + std::to_string(q) + " is not squarefree");
    ps.push_back(p);
  }
  return SquarefreeModulus(std::move(ps));
}

SquarefreeModulus SquarefreeModulus::from_primes(std::vector<u64> primes) {
  std::sort(primes.begin(), primes.end());
  if (std::adjacent_find(primes.begin(), primes.end()) != primes.end())
    throw std::invalid_argument("repeated prime in modulus");
  for (u64 p : primes)
    if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
  return SquarefreeModulus(std::move(primes));
}

SquarefreeModulus SquarefreeModulus::primorial(u64 y) {
  if (y < 2) throw std::invalid_argument("primorial: y must be >= 2");
  return SquarefreeModulus(primes_up_to(y));
}

BigInt SquarefreeModulus::value() const {
  BigInt q = 1;
  for (u64 p : primes_) q *= static_cast<unsigned long>(p);
  return q;
}

u64 SquarefreeModulus::value_u64() const {
  u64 q = 1;
  for (u64 p : primes_) q = checked_mul(q, p);
  return q;
}

BigInt SquarefreeModulus::phi() const {
  BigInt f = 1;
  for (u64 p : primes_) f *= static_cast<unsigned long>(p - 1);
  return f;
}

BigRational SquarefreeModulus::ratio() const {
  BigRational r(value(), phi());
  r.canonicalize();
  return r;
}

std::string SquarefreeModulus::str() const {
  return value().get_str();
}

}  // namespace oddsum
