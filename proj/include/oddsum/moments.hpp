#pragma once

#include <complex>
#include <stdexcept>

#include "oddsum/arith.hpp"

namespace oddsum::moments {

inline constexpr u64 kMaxDirectModulus = 1'000'000;
inline constexpr i64 kMaxInterval = 10'000;
inline constexpr unsigned kMaxOrder = 8;
/// Ceiling on (k-2) * q^2 for the convolution behind V_expsum.
inline constexpr double kExpSumBudget = 2e9;

/// Raised when a floating-point evaluation misses its accuracy check.
struct PrecisionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// sum_{n=1}^{q} (W(n) - phi(q)h/q)^k1 * W(n)^k2 where W(n) counts m in
/// [n, n+h) coprime to q.
BigRational M_mixed_direct(u64 q, i64 h, unsigned k1, unsigned k2, unsigned workers = 0);
BigRational M_direct(u64 q, i64 h, unsigned k, unsigned workers = 0);

/// E(x) = sum_{m=1}^{h} e(mx), closed form with exact phase reduction.
std::complex<double> E_kernel(const Fraction& x, i64 h);
/// min(h, 1/||x||), with F = h at integers.
Fraction F_kernel(const Fraction& x, i64 h);

struct ExpSumValue {
  double value = 0;
  double imag = 0;
};

/// Divisor-tuple exponential sum with q_i > 1 for i <= k1 and q_i >= 1 beyond.
/// Throws PrecisionError if the imaginary part exceeds 1e-9 (1 + |real|).
ExpSumValue V_expsum_mixed(u64 q, i64 h, unsigned k1, unsigned k2, unsigned workers = 0);
ExpSumValue V_expsum(u64 q, i64 h, unsigned k, unsigned workers = 0);

/// Exact sum of the refined singular series over [1,h]^k.
BigRational V_via_singular(u64 q, i64 h, unsigned k, unsigned workers = 0);

/// M_direct - q (phi/q)^k V_via_singular; zero when the identity holds.
BigRational check_MV_identity(u64 q, i64 h, unsigned k, unsigned workers = 0);

struct RSumBound {
  BigRational lhs;
  BigRational rhs;
  bool holds = false;
};
/// Weighted count of (r_i | q, b_i mod r_i reduced) with sum b_i/r_i integral
/// against prod_{p|q} (1 + 2^k/(p-1)).
RSumBound check_r_sum_bound(u64 q, unsigned k);

/// M_k(q1 q2, h) minus its expansion through the smooth/rough deviations
/// D1, D2. Requires coprime squarefree q1, q2 with q1 q2 <= 1e5.
BigRational check_smooth_rough_decomposition(u64 q1, u64 q2, i64 h, unsigned k);

/// |V_expsum - V_via_singular| <= 1e-9 max(1, |V_via_singular|).
bool agrees(double approx, const BigRational& exact, double rel = 1e-9);

}  // namespace oddsum::moments
