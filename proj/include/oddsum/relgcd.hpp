#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "oddsum/arith.hpp"

namespace oddsum::relgcd {

/// Index subset of {1..k}; bit i-1 stands for index i.
using Subset = std::uint32_t;

inline constexpr unsigned kMaxArity = 16;

/// "{1,3}"-style rendering of a subset.
std::string subset_str(Subset s);

/// Relative gcds g_I of a k-tuple. Only entries g_I > 1 are stored; every
/// other subset (including the empty set) implicitly carries 1.
class RelGcdDecomposition {
 public:
  explicit RelGcdDecomposition(unsigned k);

  unsigned arity() const { return k_; }
  u64 get(Subset s) const;
  /// Setting 1 erases the entry.
  void set(Subset s, u64 g);
  /// Multiplies g_s by f (used when assembling prime powers).
  void multiply(Subset s, u64 f);
  const std::map<Subset, u64>& entries() const { return g_; }

  friend bool operator==(const RelGcdDecomposition&, const RelGcdDecomposition&) = default;

 private:
  unsigned k_;
  std::map<Subset, u64> g_;
};

/// Local (p-adic) construction: for each p, sort indices by valuation and
/// assign the valuation jumps to the suffix sets.
RelGcdDecomposition decompose_local(std::span<const u64> q);

/// Top-down construction g_I = gcd(q_i : i in I) / prod_{J strictly containing I} g_J.
/// Throws std::logic_error on an inexact division.
RelGcdDecomposition decompose_recursive(std::span<const u64> q);

/// q_i = prod_{I containing i} g_I.
std::vector<u64> recompose(const RelGcdDecomposition& d);

struct CoprimalityCheck {
  bool holds = true;
  /// First incomparable pair (I, J) with gcd(g_I, g_J) > 1, if any.
  std::optional<std::pair<Subset, Subset>> witness;
};

CoprimalityCheck check_cross_coprimality(const RelGcdDecomposition& d);

/// Pairwise coprimality of all g_I for squarefree inputs. Throws
/// std::invalid_argument if some q_i is not squarefree.
bool check_squarefree_pairwise(const RelGcdDecomposition& d, std::span<const u64> q);

}  // namespace oddsum::relgcd
