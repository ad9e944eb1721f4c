#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "oddsum/arith.hpp"

namespace oddsum::partitions {

inline constexpr unsigned kMaxElements = 8;
/// Edge slots allowed in the brute-force weight.
inline constexpr unsigned kMaxEdgeSlots = 24;

/// Partition of {1..k} into non-empty blocks, ordered by minimum element,
/// each block sorted ascending.
class SetPartition {
 public:
  SetPartition() = default;
  explicit SetPartition(std::vector<std::vector<unsigned>> blocks);

  unsigned k() const { return k_; }
  std::size_t M() const { return blocks_.size(); }
  /// Number of singleton blocks.
  std::size_t N1() const;
  const std::vector<std::vector<unsigned>>& blocks() const { return blocks_; }
  std::size_t block_size(std::size_t m) const { return blocks_[m].size(); }
  /// Block index of element i (1-based element).
  std::size_t block_of(unsigned i) const { return label_[i - 1]; }
  /// "{1,2}{3}".
  std::string str() const;

  friend bool operator==(const SetPartition&, const SetPartition&) = default;

 private:
  unsigned k_ = 0;
  std::vector<std::vector<unsigned>> blocks_;
  std::vector<std::size_t> label_;
};

/// Integer polynomial, coefficients in ascending degree. The zero polynomial
/// has no coefficients.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<i64> coeffs);
  static IntPolynomial constant(i64 c) { return IntPolynomial({c}); }

  const std::vector<i64>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  BigRational operator()(const BigRational& z) const;
  std::string str() const;

  friend IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b);
  friend IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b);
  friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b);
  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

 private:
  void trim();
  std::vector<i64> c_;
};

/// All partitions of {1..k} in restricted-growth order; Bell(k) of them.
std::vector<SetPartition> enumerate_partitions(unsigned k);

/// Signed count of graphs on {1..k} whose connected components are exactly
/// the blocks, by enumerating edge subsets inside the blocks.
i64 w_weight_bruteforce(const SetPartition& p);
/// prod over blocks of (-1)^{s-1} (s-1)!.
i64 w_weight(const SetPartition& p);

/// ((1-z)^l - 1)/z.
IntPolynomial P_poly(unsigned l);
/// prod_{m in R} P_{|S_m|} * prod_{m not in R} (1 + P_{|S_m|}); R is a block bitmask.
IntPolynomial f_poly(std::uint32_t R, const SetPartition& p);

/// 1 if d_i = d_j whenever i, j share a block.
bool Delta(const SetPartition& p, std::span<const i64> d);

struct IdentityCheck {
  BigRational lhs;
  BigRational rhs;
  BigRational residual() const { return lhs - rhs; }
};

/// Both sides of the partition-to-polynomial lemma for one partition, with
/// offsets in [1,h].
IdentityCheck check_partition_lemma(const SetPartition& p, i64 h, const SquarefreeModulus& q);

/// R_k(h;q) against (-1)^k sum_P w(P) sum_R f_{R,P}(q/phi(q)) h^{M-|R|} V_{|R|}.
IdentityCheck check_Rk_partition_identity(i64 h, unsigned k, const SquarefreeModulus& q,
                                          unsigned workers = 0);

struct MainTerm {
  unsigned v_index = 0;  // j in V_j
  unsigned h_power = 0;
  IntPolynomial coefficient;  // in z = q/phi(q)
  BigRational value;
  std::string label() const;
};

struct MainTermTable {
  unsigned k = 0;
  std::vector<MainTerm> terms;
  BigRational sum;
  BigRational R_mod_q;
  /// The same main terms through the three closed-form j-sums.
  BigRational closed_form_sum;
};

/// Main-term expansion of R_k for odd k >= 3: partitions into parts of size 1
/// and 2 with R the singleton blocks (optionally plus one more block), and
/// partitions with a single part of size 3 and R the singletons. Terms with
/// V_1 are dropped since V_1 = 0.
MainTermTable evaluate_main_terms(unsigned k, i64 h, const SquarefreeModulus& q, unsigned workers = 0);

}  // namespace oddsum::partitions
