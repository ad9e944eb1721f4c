#include "oddsum/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "oddsum/parallel.hpp"
#include "oddsum/singular.hpp"

namespace oddsum::moments {

namespace {

using cplx = std::complex<long double>;

void check_modulus(u64 q, u64 cap) {
  if (q == 0) throw std::invalid_argument("modulus must be positive");
  if (q > cap) throw BudgetError("modulus " + std::to_string(q) + " exceeds cap " + std::to_string(cap));
  if (!is_squarefree(q)) throw std::invalid_argument("modulus " + std::to_string(q) + " is not squarefree");
}

void check_interval(i64 h) {
  if (h < 1) throw std::invalid_argument("interval length h must be >= 1");
  if (h > kMaxInterval) throw BudgetError("interval length exceeds " + std::to_string(kMaxInterval));
}

std::vector<char> coprime_table(u64 q) {
  std::vector<char> c(q);
  for (u64 m = 0; m < q; ++m) c[m] = gcd(m, q) == 1;
  return c;
}

BigInt big(u64 v) { return BigInt(static_cast<unsigned long>(v)); }
BigInt big(i64 v) { return BigInt(static_cast<long>(v)); }

cplx E_exact(i64 a, i64 r, i64 h) {
  // x = a/r reduced, r >= 2, 0 < a < r.
  const long double pi = std::numbers::pi_v<long double>;
  const i128 two_r = 2 * static_cast<i128>(r);
  auto angle = [&](i128 num) {
    i128 t = num % two_r;
    if (t < 0) t += two_r;
    return pi * static_cast<long double>(t) / static_cast<long double>(r);
  };
  long double phase = angle(static_cast<i128>(h + 1) * a);
  long double ratio = std::sin(angle(static_cast<i128>(h) * a)) / std::sin(angle(a));
  return std::polar(ratio, phase);
}

/// Per-residue weights mu(r)/phi(r) times E(x/q), x in [0, q).
std::vector<cplx> expsum_table(u64 q, i64 h, bool include_zero) {
  std::vector<cplx> g(q);
  for (u64 x = 0; x < q; ++x) {
    u64 r = q / gcd(x, q);
    if (r == 1) {
      g[x] = include_zero ? cplx(static_cast<long double>(h)) : cplx(0);
      continue;
    }
    i64 a = static_cast<i64>(x / (q / r));
    cplx e = E_exact(a, static_cast<i64>(r), h);
    Fraction f = F_kernel(Fraction{a, static_cast<i64>(r)}, h);
    long double bound = static_cast<long double>(f.num) / static_cast<long double>(f.den);
    if (std::abs(e) > bound * (1 + 1e-12L))
      throw std::logic_error("|E(x)| exceeds F(x) at x = " + std::to_string(a) + "/" + std::to_string(r));
    g[x] = e * (static_cast<long double>(mobius(r)) / static_cast<long double>(totient(r)));
  }
  return g;
}

/// Cyclic convolution mod q, split over fixed chunks of the output index.
template <typename T>
std::vector<T> convolve(const std::vector<T>& a, const std::vector<T>& b, unsigned workers) {
  const std::size_t q = a.size();
  std::vector<T> out(q);
  parallel_chunks<int>(q, workers, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t s = lo; s < hi; ++s) {
      T acc{};
      for (std::size_t x = 0; x < q; ++x) {
        if (b[x] == T{}) continue;
        acc += a[(s + q - x) % q] * b[x];
      }
      out[s] = acc;
    }
    return 0;
  });
  return out;
}

/// sum over x_1..x_k with sum x_i = 0 mod q of prod tables[i][x_i]; the last
/// residue is forced by the congruence.
template <typename T>
T constrained_product_sum(const std::vector<const std::vector<T>*>& tables, u64 q, T one,
                          unsigned workers) {
  const std::size_t k = tables.size();
  if (k == 0) return one;
  if (k == 1) return (*tables[0])[0];
  std::vector<T> acc = *tables[0];
  for (std::size_t j = 1; j + 1 < k; ++j) acc = convolve(acc, *tables[j], workers);
  T total{};
  const auto& last = *tables[k - 1];
  for (u64 x = 0; x < q; ++x) total += acc[(q - x) % q] * last[x];
  return total;
}

}  // namespace

BigRational M_mixed_direct(u64 q, i64 h, unsigned k1, unsigned k2, unsigned workers) {
  check_modulus(q, kMaxDirectModulus);
  check_interval(h);
  if (k1 + k2 > kMaxOrder) throw std::invalid_argument("moment order exceeds 8");
  const auto cop = coprime_table(q);
  const u64 hh = static_cast<u64>(h);

  auto partial = parallel_chunks<std::vector<u64>>(
      q, resolve_workers(workers), [&](std::size_t lo, std::size_t hi) {
        std::vector<u64> hist(hh + 1, 0);
        // Window for n = lo + 1 covers m = lo+1 .. lo+h.
        u64 w = 0;
        for (u64 m = lo + 1; m <= lo + hh; ++m) w += cop[m % q];
        for (std::size_t n = lo + 1; n <= hi; ++n) {
          ++hist[w];
          w += cop[(n + hh) % q];
          w -= cop[n % q];
        }
        return hist;
      });
  std::vector<u64> hist(hh + 1, 0);
  for (const auto& p : partial)
    for (std::size_t c = 0; c < p.size(); ++c) hist[c] += p[c];

  const BigInt phi_h = big(totient(q)) * big(h);
  BigInt num = 0;
  for (u64 c = 0; c <= hh; ++c) {
    if (hist[c] == 0) continue;
    BigInt dev = big(q) * big(c) - phi_h;
    num += big(hist[c]) * pow(dev, k1) * pow(big(c), k2);
  }
  BigRational out(num, pow(big(q), k1));
  out.canonicalize();
  return out;
}

BigRational M_direct(u64 q, i64 h, unsigned k, unsigned workers) {
  return M_mixed_direct(q, h, k, 0, workers);
}

std::complex<double> E_kernel(const Fraction& x, i64 h) {
  if (h < 1) throw std::invalid_argument("E_kernel: h must be >= 1");
  Fraction f = frac_part(x);
  if (f.is_zero()) return {static_cast<double>(h), 0.0};
  cplx e = E_exact(f.num, f.den, h);
  return {static_cast<double>(e.real()), static_cast<double>(e.imag())};
}

Fraction F_kernel(const Fraction& x, i64 h) {
  if (h < 1) throw std::invalid_argument("F_kernel: h must be >= 1");
  Fraction d = dist_to_int(x);
  if (d.is_zero()) return Fraction{h, 1};
  // 1/||x|| = den/num; compare with h without overflow.
  if (static_cast<i128>(d.den) >= static_cast<i128>(h) * d.num) return Fraction{h, 1};
  return reduce_fraction(d.den, d.num);
}

ExpSumValue V_expsum_mixed(u64 q, i64 h, unsigned k1, unsigned k2, unsigned workers) {
  check_modulus(q, kMaxDirectModulus);
  check_interval(h);
  const unsigned k = k1 + k2;
  if (k > kMaxOrder) throw std::invalid_argument("moment order exceeds 8");
  double cost = static_cast<double>(k > 2 ? k - 2 : 0) * static_cast<double>(q) * static_cast<double>(q);
  if (cost > kExpSumBudget)
    throw BudgetError("V_expsum: (k-2) q^2 = " + std::to_string(cost) + " exceeds budget");

  const auto dev = expsum_table(q, h, false);
  const auto full = expsum_table(q, h, true);
  std::vector<const std::vector<cplx>*> tables;
  for (unsigned i = 0; i < k; ++i) tables.push_back(i < k1 ? &dev : &full);
  cplx v = constrained_product_sum(tables, q, cplx(1), resolve_workers(workers));

  ExpSumValue out{static_cast<double>(v.real()), static_cast<double>(v.imag())};
  if (std::abs(out.imag) > 1e-9 * (1 + std::abs(out.value)))
    throw PrecisionError("V_expsum: imaginary part " + std::to_string(out.imag) +
                         " breaches the 1e-9 bound");
  return out;
}

ExpSumValue V_expsum(u64 q, i64 h, unsigned k, unsigned workers) {
  return V_expsum_mixed(q, h, k, 0, workers);
}

BigRational V_via_singular(u64 q, i64 h, unsigned k, unsigned workers) {
  check_modulus(q, kFactorizeCap);
  if (h < 1) throw std::invalid_argument("interval length h must be >= 1");
  return singular::TupleSum(SquarefreeModulus::from_value(q), k, h).sum_S0(false, workers);
}

BigRational check_MV_identity(u64 q, i64 h, unsigned k, unsigned workers) {
  BigRational m = M_direct(q, h, k, workers);
  BigRational v = V_via_singular(q, h, k, workers);
  BigRational density(big(totient(q)), big(q));
  density.canonicalize();
  return m - BigRational(big(q)) * pow(density, k) * v;
}

RSumBound check_r_sum_bound(u64 q, unsigned k) {
  check_modulus(q, kMaxDirectModulus);
  if (k == 0 || k > kMaxOrder) throw std::invalid_argument("r-sum: k must be in [1,8]");
  double cost = static_cast<double>(k > 2 ? k - 2 : 0) * static_cast<double>(q) * static_cast<double>(q);
  if (cost > kExpSumBudget) throw BudgetError("r-sum: (k-2) q^2 exceeds budget");
  // Integer weights phi(q)/phi(r), r = q/gcd(x,q), so the sum is exact.
  const u64 phi = totient(q);
  std::vector<BigInt> w(q);
  for (u64 x = 0; x < q; ++x) w[x] = big(phi / totient(q / gcd(x, q)));
  std::vector<const std::vector<BigInt>*> tables(k, &w);
  BigInt total = constrained_product_sum(tables, q, BigInt(1), 1);

  RSumBound out;
  out.lhs = BigRational(total, pow(big(phi), k));
  out.lhs.canonicalize();
  out.rhs = 1;
  for (auto [p, e] : factorize(q)) {
    BigRational f(pow(BigInt(2), k), big(p - 1));
    f.canonicalize();
    out.rhs *= 1 + f;
  }
  out.holds = out.lhs <= out.rhs;
  return out;
}

BigRational check_smooth_rough_decomposition(u64 q1, u64 q2, i64 h, unsigned k) {
  if (q1 == 0 || q2 == 0) throw std::invalid_argument("moduli must be positive");
  if (gcd(q1, q2) != 1) throw std::invalid_argument("smooth/rough: q1 and q2 must be coprime");
  if (!is_squarefree(q1) || !is_squarefree(q2))
    throw std::invalid_argument("smooth/rough: moduli must be squarefree");
  if (q1 * q2 > 100'000) throw BudgetError("smooth/rough: q1 q2 exceeds 1e5");
  check_interval(h);
  if (k > kMaxOrder) throw std::invalid_argument("moment order exceeds 8");

  const auto c1 = coprime_table(q1);
  const auto c2 = coprime_table(q2);
  const u64 phi1 = totient(q1), phi2 = totient(q2);
  BigRational P2(big(phi2), big(q2));
  P2.canonicalize();

  // sums[k1] = sum_{n1} D1^k1 sum_{n2} D2^(k-k1), held over denominators q1^k1 q2^(k-k1).
  std::vector<BigInt> sums(k + 1, 0);
  for (u64 n1 = 1; n1 <= q1; ++n1) {
    i64 a = 0;
    for (i64 m = 1; m <= h; ++m) a += c1[(static_cast<u64>(m) + n1) % q1];
    BigInt d1 = big(static_cast<i64>(q1) * a) - big(h) * big(phi1);  // q1 * D1
    std::vector<BigInt> d2pow(k + 1, 0);
    for (u64 n2 = 1; n2 <= q2; ++n2) {
      i64 b = 0;
      for (i64 m = 1; m <= h; ++m) {
        u64 mm = static_cast<u64>(m);
        b += c1[(mm + n1) % q1] && c2[(mm + n2) % q2];
      }
      BigInt d2 = big(static_cast<i64>(q2) * b) - big(phi2) * big(a);  // q2 * D2
      BigInt p = 1;
      for (unsigned j = 0; j <= k; ++j) {
        d2pow[j] += p;
        p *= d2;
      }
    }
    BigInt p = 1;
    for (unsigned k1 = 0; k1 <= k; ++k1) {
      sums[k1] += p * d2pow[k - k1];
      p *= d1;
    }
  }

  BigRational rhs = 0;
  BigInt binom = 1;
  for (unsigned k1 = 0; k1 <= k; ++k1) {
    BigRational term(sums[k1] * binom, pow(big(q1), k1) * pow(big(q2), k - k1));
    term.canonicalize();
    rhs += pow(P2, k1) * term;
    binom = binom * (k - k1) / (k1 + 1);
  }
  return M_direct(q1 * q2, h, k) - rhs;
}

bool agrees(double approx, const BigRational& exact, double rel) {
  double e = to_double(exact);
  return std::abs(approx - e) <= rel * std::max(1.0, std::abs(e));
}

}  // namespace oddsum::moments
