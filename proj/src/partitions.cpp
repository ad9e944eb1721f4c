#include "oddsum/partitions.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "oddsum/singular.hpp"

namespace oddsum::partitions {

namespace {

BigInt big(i64 v) { return BigInt(static_cast<long>(v)); }

i64 factorial(unsigned n) {
  i64 out = 1;
  for (unsigned i = 2; i <= n; ++i) out = checked_mul(out, static_cast<i64>(i));
  return out;
}

i64 binomial(unsigned n, unsigned r) {
  if (r > n) return 0;
  i64 out = 1;
  for (unsigned i = 1; i <= r; ++i) out = out * static_cast<i64>(n - r + i) / static_cast<i64>(i);
  return out;
}

/// V_0 .. V_kmax, with V_0 = 1.
std::vector<BigRational> v_table(unsigned kmax, i64 h, const SquarefreeModulus& q, unsigned workers) {
  std::vector<BigRational> v(kmax + 1);
  v[0] = 1;
  for (unsigned j = 1; j <= kmax; ++j) v[j] = singular::TupleSum(q, j, h).sum_S0(false, workers);
  return v;
}

int find(std::vector<int>& parent, int x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

}  // namespace

SetPartition::SetPartition(std::vector<std::vector<unsigned>> blocks) : blocks_(std::move(blocks)) {
  for (auto& b : blocks_) {
    if (b.empty()) throw std::invalid_argument("partition: empty block");
    std::sort(b.begin(), b.end());
    k_ += static_cast<unsigned>(b.size());
  }
  if (k_ > kMaxElements) throw std::invalid_argument("partition: more than 8 elements");
  std::sort(blocks_.begin(), blocks_.end(), [](const auto& a, const auto& b) { return a[0] < b[0]; });
  label_.assign(k_, blocks_.size());
  for (std::size_t m = 0; m < blocks_.size(); ++m) {
    for (unsigned i : blocks_[m]) {
      if (i < 1 || i > k_ || label_[i - 1] != blocks_.size())
        throw std::invalid_argument("partition: blocks must be disjoint and cover {1..k}");
      label_[i - 1] = m;
    }
  }
}

std::size_t SetPartition::N1() const {
  return static_cast<std::size_t>(
      std::count_if(blocks_.begin(), blocks_.end(), [](const auto& b) { return b.size() == 1; }));
}

std::string SetPartition::str() const {
  std::string out;
  for (const auto& b : blocks_) {
    out += "{";
    for (std::size_t i = 0; i < b.size(); ++i) out += (i ? "," : "") + std::to_string(b[i]);
    out += "}";
  }
  return out;
}

// --- polynomials ------------------------------------------------------------

IntPolynomial::IntPolynomial(std::vector<i64> coeffs) : c_(std::move(coeffs)) { trim(); }

void IntPolynomial::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

BigRational IntPolynomial::operator()(const BigRational& z) const {
  BigRational out = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) out = out * z + BigRational(big(*it));
  return out;
}

std::string IntPolynomial::str() const {
  if (c_.empty()) return "0";
  std::string out;
  for (int d = degree(); d >= 0; --d) {
    i64 c = c_[static_cast<std::size_t>(d)];
    if (c == 0) continue;
    i64 mag = c < 0 ? -c : c;
    if (out.empty()) out += c < 0 ? "-" : "";
    else out += c < 0 ? " - " : " + ";
    if (mag != 1 || d == 0) out += std::to_string(mag);
    if (d >= 1) out += "z";
    if (d >= 2) out += "^" + std::to_string(d);
  }
  return out;
}

IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b) {
  std::vector<i64> c(std::max(a.c_.size(), b.c_.size()), 0);
  for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] = checked_add(c[i], a.c_[i]);
  for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] = checked_add(c[i], b.c_[i]);
  return IntPolynomial(std::move(c));
}

IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b) {
  return a + b * IntPolynomial::constant(-1);
}

IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<i64> c(a.c_.size() + b.c_.size() - 1, 0);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j)
      c[i + j] = checked_add(c[i + j], checked_mul(a.c_[i], b.c_[j]));
  return IntPolynomial(std::move(c));
}

// --- partitions -------------------------------------------------------------

std::vector<SetPartition> enumerate_partitions(unsigned k) {
  if (k > kMaxElements) throw std::invalid_argument("enumerate_partitions: k exceeds 8");
  std::vector<SetPartition> out;
  if (k == 0) {
    out.emplace_back();
    return out;
  }
  // Restricted growth strings: a[0] = 0, a[i] <= 1 + max(a[0..i-1]).
  std::vector<unsigned> a(k, 0);
  while (true) {
    unsigned blocks = *std::max_element(a.begin(), a.end()) + 1;
    std::vector<std::vector<unsigned>> b(blocks);
    for (unsigned i = 0; i < k; ++i) b[a[i]].push_back(i + 1);
    out.emplace_back(std::move(b));

    int i = static_cast<int>(k) - 1;
    for (; i > 0; --i) {
      unsigned mx = *std::max_element(a.begin(), a.begin() + i);
      if (a[static_cast<std::size_t>(i)] <= mx) {
        ++a[static_cast<std::size_t>(i)];
        std::fill(a.begin() + i + 1, a.end(), 0u);
        break;
      }
    }
    if (i == 0) break;
  }
  return out;
}

i64 w_weight_bruteforce(const SetPartition& p) {
  std::vector<std::pair<int, int>> edges;
  for (const auto& b : p.blocks())
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = i + 1; j < b.size(); ++j)
        edges.emplace_back(static_cast<int>(b[i]) - 1, static_cast<int>(b[j]) - 1);
  if (edges.size() > kMaxEdgeSlots)
    throw BudgetError("w_weight_bruteforce: " + std::to_string(edges.size()) + " edge slots exceed 24");

  const int k = static_cast<int>(p.k());
  i64 total = 0;
  std::vector<int> parent(static_cast<std::size_t>(k));
  for (std::uint32_t g = 0; g < (std::uint32_t{1} << edges.size()); ++g) {
    std::iota(parent.begin(), parent.end(), 0);
    int merges = 0;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (!(g >> e & 1u)) continue;
      int x = find(parent, edges[e].first), y = find(parent, edges[e].second);
      if (x != y) {
        parent[static_cast<std::size_t>(x)] = y;
        ++merges;
      }
    }
    // Edges stay inside blocks, so the components equal the blocks exactly
    // when every block is connected.
    if (merges == k - static_cast<int>(p.M())) total += std::popcount(g) % 2 ? -1 : 1;
  }
  return total;
}

i64 w_weight(const SetPartition& p) {
  i64 out = 1;
  for (const auto& b : p.blocks()) {
    unsigned s = static_cast<unsigned>(b.size());
    out = checked_mul(out, (s % 2 ? 1 : -1) * factorial(s - 1));
  }
  return out;
}

IntPolynomial P_poly(unsigned l) {
  if (l == 0) throw std::invalid_argument("P_poly: l must be >= 1");
  std::vector<i64> c(l);
  for (unsigned j = 1; j <= l; ++j) c[j - 1] = (j % 2 ? -1 : 1) * binomial(l, j);
  return IntPolynomial(std::move(c));
}

IntPolynomial f_poly(std::uint32_t R, const SetPartition& p) {
  if (p.M() < 32 && (R >> p.M()) != 0) throw std::invalid_argument("f_poly: R outside the blocks");
  IntPolynomial out = IntPolynomial::constant(1);
  for (std::size_t m = 0; m < p.M(); ++m) {
    IntPolynomial pm = P_poly(static_cast<unsigned>(p.block_size(m)));
    out = out * ((R >> m & 1u) ? pm : IntPolynomial::constant(1) + pm);
  }
  return out;
}

bool Delta(const SetPartition& p, std::span<const i64> d) {
  if (d.size() != p.k()) throw std::invalid_argument("Delta: tuple length differs from k");
  for (const auto& b : p.blocks())
    for (unsigned i : b)
      if (d[i - 1] != d[b[0] - 1]) return false;
  return true;
}

IdentityCheck check_partition_lemma(const SetPartition& p, i64 h, const SquarefreeModulus& q) {
  const unsigned k = p.k();
  const std::size_t M = p.M();
  if (h < 1) throw std::invalid_argument("partition lemma: h must be >= 1");
  if (std::pow(static_cast<double>(h), k) * std::pow(2.0, k) > 2e6)
    throw BudgetError("partition lemma: h^k 2^k exceeds budget");
  const BigRational z = q.ratio();

  IdentityCheck out;
  out.lhs = 0;
  std::vector<i64> d(k, 1);
  while (k > 0) {
    if (Delta(p, d)) {
      singular::TupleD D(d);
      for (std::uint32_t Q = 0; Q < (1u << k); ++Q) {
        BigRational s = singular::S_mod_q(D.restrict(Q), q);
        if (std::popcount(Q) % 2) out.lhs -= s;
        else out.lhs += s;
      }
    }
    std::size_t i = 0;
    while (i < k && ++d[i] > h) d[i++] = 1;
    if (i == k) break;
  }
  if (k == 0) out.lhs = 1;

  std::vector<BigRational> pz(M);
  for (std::size_t m = 0; m < M; ++m) pz[m] = P_poly(static_cast<unsigned>(p.block_size(m)))(z);
  out.rhs = 0;
  std::vector<i64> e(M, 1);
  while (true) {
    singular::TupleD E(e);
    for (std::uint32_t J = 0; J < (1u << M); ++J) {
      BigRational c = 1;
      for (std::size_t m = 0; m < M; ++m)
        if (J >> m & 1u) c *= pz[m];
      out.rhs += c * singular::S_mod_q(E.restrict(J), q);
    }
    std::size_t i = 0;
    while (i < M && ++e[i] > h) e[i++] = 1;
    if (i == M) break;
  }
  return out;
}

IdentityCheck check_Rk_partition_identity(i64 h, unsigned k, const SquarefreeModulus& q,
                                          unsigned workers) {
  IdentityCheck out;
  out.lhs = singular::R_mod_q(h, k, q, workers);
  const auto V = v_table(k, h, q, workers);
  const BigRational z = q.ratio();
  BigRational total = 0;
  for (const auto& p : enumerate_partitions(k)) {
    const std::size_t M = p.M();
    BigRational inner = 0;
    for (std::uint32_t R = 0; R < (1u << M); ++R) {
      IntPolynomial f = f_poly(R, p);
      if (f.is_zero()) continue;
      unsigned r = static_cast<unsigned>(std::popcount(R));
      inner += f(z) * BigRational(pow(big(h), static_cast<unsigned>(M) - r)) * V[r];
    }
    total += BigRational(big(w_weight(p))) * inner;
  }
  out.rhs = k % 2 ? -total : total;
  return out;
}

std::string MainTerm::label() const {
  std::string out;
  if (h_power >= 1) out += "h";
  if (h_power >= 2) out += "^" + std::to_string(h_power);
  if (v_index > 0) out += (out.empty() ? "" : "*") + std::string("V") + std::to_string(v_index);
  return out.empty() ? "1" : out;
}

MainTermTable evaluate_main_terms(unsigned k, i64 h, const SquarefreeModulus& q, unsigned workers) {
  if (k < 3 || k % 2 == 0 || k > kMaxElements)
    throw std::invalid_argument("main terms: k must be odd in [3,7]");
  if (h < 1) throw std::invalid_argument("main terms: h must be >= 1");
  const BigRational z = q.ratio();
  const BigRational zm1 = z - 1, zm2 = z - 2;
  const int sign = k % 2 ? -1 : 1;

  std::map<std::pair<unsigned, unsigned>, IntPolynomial> grouped;  // (|R|, M-|R|) -> coefficient
  auto add = [&](const SetPartition& p, std::uint32_t R) {
    unsigned r = static_cast<unsigned>(std::popcount(R));
    IntPolynomial c = IntPolynomial::constant(sign * w_weight(p)) * f_poly(R, p);
    auto key = std::pair{r, static_cast<unsigned>(p.M()) - r};
    grouped[key] = grouped[key] + c;
  };
  for (const auto& p : enumerate_partitions(k)) {
    std::size_t threes = 0, larger = 0;
    std::uint32_t singles = 0;
    for (std::size_t m = 0; m < p.M(); ++m) {
      std::size_t s = p.block_size(m);
      if (s == 1) singles |= 1u << m;
      if (s == 3) ++threes;
      if (s > 3) ++larger;
    }
    if (larger > 0 || threes > 1) continue;
    add(p, singles);
    if (threes == 0)
      for (std::size_t m = 0; m < p.M(); ++m)
        if (!(singles >> m & 1u)) add(p, singles | 1u << m);
  }

  unsigned vmax = 0;
  for (const auto& [key, c] : grouped) vmax = std::max(vmax, key.first);
  const auto V = v_table(vmax, h, q, workers);

  MainTermTable out;
  out.k = k;
  out.sum = 0;
  for (auto it = grouped.rbegin(); it != grouped.rend(); ++it) {
    const auto& [key, c] = *it;
    if (key.first == 1 || c.is_zero()) continue;
    MainTerm t;
    t.v_index = key.first;
    t.h_power = key.second;
    t.coefficient = c;
    t.value = c(z) * BigRational(pow(big(h), key.second)) * V[key.first];
    out.sum += t.value;
    out.terms.push_back(std::move(t));
  }
  out.R_mod_q = singular::R_mod_q(h, k, q, workers);

  // Closed forms with k = 2l + 1.
  const unsigned l = (k - 1) / 2;
  auto pairings = [&](unsigned j) { return BigRational(big(factorial(2 * j) / (factorial(j) << j))); };
  auto hp = [&](unsigned e) { return BigRational(pow(big(h), e)); };
  auto vv = [&](unsigned j) { return j == 1 ? BigRational(0) : V.at(j); };
  BigRational cf = 0;
  for (unsigned j = 0; j <= l; ++j) {
    BigRational t = BigRational(big(binomial(k, 2 * j))) * pairings(j) * pow(zm1, j) * hp(j) * vv(k - 2 * j);
    cf += j % 2 ? -t : t;
  }
  for (unsigned j = 1; j <= l; ++j) {
    BigRational t = BigRational(big(binomial(k, 2 * j))) * pairings(j) * BigRational(j) *
                    pow(zm1, j - 1) * zm2 * hp(j - 1) * vv(k + 1 - 2 * j);
    cf += j % 2 ? -t : t;
  }
  for (unsigned j = 0; j + 1 <= l; ++j) {
    i64 multinomial = factorial(k) / (factorial(3) * factorial(2 * j) * factorial(k - 3 - 2 * j));
    BigRational t = BigRational(2) * BigRational(big(multinomial)) * pairings(j) * pow(zm1, j + 1) *
                    zm2 * hp(j + 1) * vv(k - 3 - 2 * j);
    cf += j % 2 ? -t : t;
  }
  out.closed_form_sum = cf;
  return out;
}

}  // namespace oddsum::partitions
