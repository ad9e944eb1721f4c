#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oddsum/arith.hpp"

namespace oddsum::fracsolve {

using Alphabet = std::vector<Fraction>;

/// What the fraction sum must equal.
struct Target {
  enum class Kind { AnyInteger, Zero, Fixed };
  Kind kind = Kind::AnyInteger;
  i64 m = 0;

  static Target any_integer() { return {Kind::AnyInteger, 0}; }
  static Target zero() { return {Kind::Zero, 0}; }
  static Target fixed(i64 m) { return {Kind::Fixed, m}; }
  bool accepts(const Fraction& sum) const;
  /// "int", "zero" or "m=M".
  std::string str() const;
  static Target parse(const std::string& text);
};

enum class Method { Auto, Naive, MeetInTheMiddle };
std::string method_str(Method m);
Method parse_method(const std::string& text);

inline constexpr std::size_t kAlphabetCap = 50'000;
inline constexpr unsigned kMaxArity = 7;
/// Alphabets at or below this size take the naive path under Method::Auto.
inline constexpr std::size_t kNaiveAlphabetThreshold = 200;
/// Upper bound on elementary steps for either counting path.
inline constexpr double kWorkBudget = 4e9;

struct BoxConstraint {
  unsigned k = 3;
  i64 n = 1;
  i64 Q = 1;
  Target target;
  std::string str() const;
};

struct IntervalConstraint {
  std::vector<Fraction> lo, hi;  // closed intervals [lo_i, hi_i] inside [-1, 1]
  std::vector<i64> Q;
  Target target;
  std::size_t arity() const { return Q.size(); }
  Fraction length(std::size_t i) const { return hi[i] - lo[i]; }
  std::string str() const;
};

struct NumeratorSetConstraint {
  std::vector<std::vector<i64>> B;
  std::vector<i64> Q;
  Target target;
  std::size_t arity() const { return Q.size(); }
  std::string str() const;
};

struct CountOptions {
  Method method = Method::Auto;
  unsigned workers = 0;  // 0: resolve from the environment
  bool classify = false;
};

struct CountReport {
  std::string constraint;
  u64 total = 0;
  std::optional<u64> degenerate;
  std::optional<u64> nondegenerate;
  double seconds = 0;
  Method method = Method::Naive;
};

// --- alphabets --------------------------------------------------------------

/// Reduced a/q with |a| <= n, q <= Q; zero only as 0/1. Sorted, no duplicates.
Alphabet box_alphabet(i64 n, i64 Q);
/// Reduced a/q with q <= Q and lo <= a/q <= hi.
Alphabet interval_alphabet(const Fraction& lo, const Fraction& hi, i64 Q);
/// Reduced a/q with a in B and q <= Q.
Alphabet numerator_set_alphabet(std::span<const i64> B, i64 Q);

// --- core counting ----------------------------------------------------------

/// Number of ordered tuples (x_1..x_k), x_i drawn from alphabets[i], whose sum
/// satisfies the target.
u64 count_naive(std::span<const Alphabet> alphabets, const Target& target, unsigned workers = 0);
u64 count_mitm(std::span<const Alphabet> alphabets, const Target& target, unsigned workers = 0);
u64 count_tuples(std::span<const Alphabet> alphabets, const Target& target, Method method,
                 unsigned workers = 0, Method* used = nullptr);

/// Calls visit(tuple) for every solution; the last coordinate is resolved
/// from the others through a lookup rather than enumerated.
void for_each_solution(std::span<const Alphabet> alphabets, const Target& target,
                       const std::function<void(std::span<const Fraction>)>& visit);

/// True iff some proper non-empty sub-tuple sums to exactly zero.
bool is_degenerate(std::span<const Fraction> tuple);

// --- constraint-level operations -------------------------------------------

CountReport count_box(const BoxConstraint& c, const CountOptions& opt = {});
CountReport count_interval(const IntervalConstraint& c, const CountOptions& opt = {});
CountReport count_numerator_sets(const NumeratorSetConstraint& c, const CountOptions& opt = {});
/// Target must be zero; k <= 5. Fills the degenerate/non-degenerate split.
CountReport classify_degenerate(const BoxConstraint& c, const CountOptions& opt = {});

struct ReferenceBounds {
  /// n^{(k+1)/2} Q^{(k-1)/2}
  double box = 0;
  /// n^2 Q, the k = 3 lower-bound construction.
  BigInt lower_bound;
  /// n^{k-1} Q, the non-degenerate heuristic.
  BigInt heuristic;
};
ReferenceBounds reference_bounds(const BoxConstraint& c);

struct IntervalReference {
  /// min over |X| = (arity+1)/2 of prod_{i in X} delta_i * prod_i Q_i
  BigRational value;
  std::vector<unsigned> minimizing_set;  // 0-based indices
};
IntervalReference reference_bounds(const IntervalConstraint& c);

}  // namespace oddsum::fracsolve
