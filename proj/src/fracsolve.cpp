#include "oddsum/fracsolve.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "oddsum/parallel.hpp"

namespace oddsum::fracsolve {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string join(const std::vector<std::string>& parts) {
  std::string out = "[";
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "," : "") + parts[i];
  return out + "]";
}

void check_arity(std::size_t k, bool odd) {
  if (k == 0 || k > kMaxArity) throw std::invalid_argument("arity must be in [1,7]");
  if (odd && k % 2 == 0) throw std::invalid_argument("arity must be odd");
}

void check_alphabet(const Alphabet& a) {
  if (a.size() > kAlphabetCap)
    throw BudgetError("alphabet of " + std::to_string(a.size()) + " fractions exceeds cap " +
                      std::to_string(kAlphabetCap));
}

/// Rejects configurations whose tuple count could reach 2^63.
void check_count_fits(std::span<const Alphabet> alphabets) {
  long double total = 1;
  for (const auto& a : alphabets) total *= static_cast<long double>(a.size());
  if (total >= 9.2e18L) throw BudgetError("tuple count could overflow the 63-bit counter");
}

using SumMap = std::unordered_map<Fraction, u64, FractionHash>;

Fraction key_of(const Fraction& sum, const Target& t) {
  return t.kind == Target::Kind::AnyInteger ? frac_part(sum) : sum;
}

SumMap partial_sums(std::span<const Alphabet> alphabets, const Target& t) {
  SumMap cur{{Fraction{}, 1}};
  for (const auto& a : alphabets) {
    if (static_cast<double>(cur.size()) * static_cast<double>(a.size()) > kWorkBudget)
      throw BudgetError("meet-in-the-middle half exceeds the work budget");
    SumMap next;
    next.reserve(cur.size() * 2);
    for (const auto& [s, c] : cur)
      for (const auto& x : a) next[key_of(s + x, t)] += c;
    cur = std::move(next);
  }
  return cur;
}

}  // namespace

// ---------------------------------------------------------------------------

bool Target::accepts(const Fraction& sum) const {
  switch (kind) {
    case Kind::AnyInteger:
      return sum.is_integer();
    case Kind::Zero:
      return sum.is_zero();
    case Kind::Fixed:
      return sum.is_integer() && sum.num == m;
  }
  return false;
}

std::string Target::str() const {
  switch (kind) {
    case Kind::AnyInteger:
      return "int";
    case Kind::Zero:
      return "zero";
    case Kind::Fixed:
      return "m=" + std::to_string(m);
  }
  return "?";
}

Target Target::parse(const std::string& text) {
  if (text == "int" || text == "any" || text == "any-integer") return any_integer();
  if (text == "zero") return zero();
  if (text.rfind("m=", 0) == 0) {
    Fraction f = parse_fraction(text.substr(2));
    if (!f.is_integer()) throw std::invalid_argument("fixed target must be an integer");
    return fixed(f.num);
  }
  throw std::invalid_argument("unknown target '" + text + "' (expected zero|int|m=M)");
}

std::string method_str(Method m) {
  switch (m) {
    case Method::Auto:
      return "auto";
    case Method::Naive:
      return "naive";
    case Method::MeetInTheMiddle:
      return "meet-in-the-middle";
  }
  return "?";
}

Method parse_method(const std::string& text) {
  if (text == "auto") return Method::Auto;
  if (text == "naive") return Method::Naive;
  if (text == "mitm" || text == "meet-in-the-middle") return Method::MeetInTheMiddle;
  throw std::invalid_argument("unknown method '" + text + "' (expected naive|mitm)");
}

std::string BoxConstraint::str() const {
  std::ostringstream os;
  os << "box k=" << k << " n=" << n << " Q=" << Q << " target=" << target.str();
  return os.str();
}

std::string IntervalConstraint::str() const {
  std::vector<std::string> iv, qs;
  for (std::size_t i = 0; i < arity(); ++i) {
    iv.push_back("[" + lo[i].str() + "," + hi[i].str() + "]");
    qs.push_back(std::to_string(Q[i]));
  }
  return "interval A=" + join(iv) + " Q=" + join(qs) + " target=" + target.str();
}

std::string NumeratorSetConstraint::str() const {
  std::vector<std::string> bs, qs;
  for (std::size_t i = 0; i < arity(); ++i) {
    std::vector<std::string> b;
    for (i64 v : B[i]) b.push_back(std::to_string(v));
    bs.push_back("{" + join(b).substr(1, join(b).size() - 2) + "}");
    qs.push_back(std::to_string(Q[i]));
  }
  return "numerator-sets B=" + join(bs) + " Q=" + join(qs) + " target=" + target.str();
}

// ---------------------------------------------------------------------------

Alphabet box_alphabet(i64 n, i64 Q) {
  if (n < 0) throw std::invalid_argument("numerator bound n must be >= 0");
  if (Q < 1) throw std::invalid_argument("denominator bound Q must be >= 1");
  if (static_cast<double>(2 * n + 1) * static_cast<double>(Q) > 1e9)
    throw BudgetError("box alphabet exceeds cap");
  Alphabet out;
  for (i64 q = 1; q <= Q; ++q)
    for (i64 a = -n; a <= n; ++a)
      if (gcd(static_cast<u64>(a < 0 ? -a : a), static_cast<u64>(q)) == 1) out.push_back({a, q});
  std::sort(out.begin(), out.end());
  check_alphabet(out);
  return out;
}

Alphabet interval_alphabet(const Fraction& lo, const Fraction& hi, i64 Q) {
  if (Q < 1) throw std::invalid_argument("denominator cap must be >= 1");
  Alphabet out;
  for (i64 q = 1; q <= Q; ++q) {
    // ceil(lo*q) .. floor(hi*q), exact integer arithmetic
    i128 lnum = static_cast<i128>(lo.num) * q, hnum = static_cast<i128>(hi.num) * q;
    i128 amin = lnum >= 0 ? (lnum + lo.den - 1) / lo.den : -((-lnum) / lo.den);
    i128 amax = hnum >= 0 ? hnum / hi.den : -((-hnum + hi.den - 1) / hi.den);
    for (i128 a = amin; a <= amax; ++a)
      if (gcd(static_cast<u64>(a < 0 ? -a : a), static_cast<u64>(q)) == 1)
        out.push_back({static_cast<i64>(a), q});
    if (out.size() > kAlphabetCap) check_alphabet(out);
  }
  std::sort(out.begin(), out.end());
  check_alphabet(out);
  return out;
}

Alphabet numerator_set_alphabet(std::span<const i64> B, i64 Q) {
  if (Q < 1) throw std::invalid_argument("denominator cap must be >= 1");
  std::vector<i64> b(B.begin(), B.end());
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  Alphabet out;
  for (i64 a : b)
    for (i64 q = 1; q <= Q; ++q)
      if (gcd(static_cast<u64>(a < 0 ? -a : a), static_cast<u64>(q)) == 1) out.push_back({a, q});
  std::sort(out.begin(), out.end());
  check_alphabet(out);
  return out;
}

// ---------------------------------------------------------------------------

u64 count_naive(std::span<const Alphabet> alphabets, const Target& target, unsigned workers) {
  const std::size_t k = alphabets.size();
  check_arity(k, false);
  check_count_fits(alphabets);
  long double work = 1;
  for (const auto& a : alphabets) {
    work *= static_cast<long double>(a.size());
    if (a.empty()) return 0;
  }
  if (work > kWorkBudget) throw BudgetError("naive enumeration exceeds the work budget");

  // Scale everything to a common denominator so the inner loops are integer adds.
  u64 L = 1;
  i64 max_abs = 0;
  for (const auto& a : alphabets)
    for (const auto& x : a) {
      L = checked_lcm(L, static_cast<u64>(x.den));
      max_abs = std::max(max_abs, x.num < 0 ? -x.num : x.num);
    }
  if (static_cast<long double>(L) * max_abs * k > 4e18L)
    throw OverflowError("naive path: common denominator too large");
  const i64 Ls = static_cast<i64>(L);
  std::vector<std::vector<i64>> scaled(k);
  for (std::size_t i = 0; i < k; ++i)
    for (const auto& x : alphabets[i]) scaled[i].push_back(x.num * (Ls / x.den));

  const i64 goal = target.kind == Target::Kind::Fixed ? checked_mul(target.m, Ls) : 0;
  auto accept = [&](i64 s) {
    return target.kind == Target::Kind::AnyInteger ? s % Ls == 0 : s == goal;
  };

  auto rec = [&](auto&& self, std::size_t depth, i64 partial) -> u64 {
    const auto& col = scaled[depth];
    u64 c = 0;
    if (depth + 1 == k) {
      for (i64 v : col) c += accept(partial + v);
      return c;
    }
    for (i64 v : col) c += self(self, depth + 1, partial + v);
    return c;
  };

  auto parts = parallel_chunks<u64>(scaled[0].size(), resolve_workers(workers),
                                    [&](std::size_t b, std::size_t e) {
                                      u64 c = 0;
                                      for (std::size_t i = b; i < e; ++i)
                                        c += k == 1 ? accept(scaled[0][i])
                                                    : rec(rec, 1, scaled[0][i]);
                                      return c;
                                    });
  return std::accumulate(parts.begin(), parts.end(), u64{0});
}

u64 count_mitm(std::span<const Alphabet> alphabets, const Target& target, unsigned workers) {
  const std::size_t k = alphabets.size();
  check_arity(k, false);
  check_count_fits(alphabets);
  const std::size_t half = k / 2;

  // Partial-sum denominators must stay within 64 bits.
  for (auto part : {alphabets.subspan(0, half), alphabets.subspan(half)}) {
    long double bound = 1;
    for (const auto& a : part) {
      i64 md = 1;
      for (const auto& x : a) md = std::max(md, x.den);
      bound *= md;
    }
    if (bound > 4.6e18L) throw OverflowError("meet-in-the-middle: partial-sum denominators exceed 63 bits");
  }

  const SumMap left = partial_sums(alphabets.subspan(0, half), target);
  const SumMap right_map = partial_sums(alphabets.subspan(half), target);
  const std::vector<std::pair<Fraction, u64>> right(right_map.begin(), right_map.end());

  auto parts = parallel_chunks<u64>(right.size(), resolve_workers(workers),
                                    [&](std::size_t b, std::size_t e) {
                                      u64 c = 0;
                                      for (std::size_t i = b; i < e; ++i) {
                                        const auto& [r, rc] = right[i];
                                        Fraction need;
                                        switch (target.kind) {
                                          case Target::Kind::AnyInteger:
                                            need = frac_part(-r);
                                            break;
                                          case Target::Kind::Zero:
                                            need = -r;
                                            break;
                                          case Target::Kind::Fixed:
                                            need = Fraction{target.m, 1} - r;
                                            break;
                                        }
                                        auto it = left.find(need);
                                        if (it != left.end())
                                          c = checked_add(c, checked_mul(it->second, rc));
                                      }
                                      return c;
                                    });
  u64 total = 0;
  for (u64 p : parts) total = checked_add(total, p);
  return total;
}

u64 count_tuples(std::span<const Alphabet> alphabets, const Target& target, Method method,
                 unsigned workers, Method* used) {
  if (method == Method::Auto) {
    std::size_t largest = 0;
    long double work = 1;
    for (const auto& a : alphabets) {
      largest = std::max(largest, a.size());
      work *= static_cast<long double>(a.size());
    }
    method = largest <= kNaiveAlphabetThreshold && work <= 1e8L ? Method::Naive
                                                                : Method::MeetInTheMiddle;
  }
  if (used) *used = method;
  return method == Method::Naive ? count_naive(alphabets, target, workers)
                                 : count_mitm(alphabets, target, workers);
}

void for_each_solution(std::span<const Alphabet> alphabets, const Target& target,
                       const std::function<void(std::span<const Fraction>)>& visit) {
  const std::size_t k = alphabets.size();
  check_arity(k, false);
  const Alphabet& last = alphabets[k - 1];
  std::unordered_map<Fraction, std::vector<std::size_t>, FractionHash> index;
  for (std::size_t i = 0; i < last.size(); ++i) index[key_of(last[i], target)].push_back(i);

  std::vector<Fraction> tuple(k);
  auto rec = [&](auto&& self, std::size_t depth, const Fraction& partial) -> void {
    if (depth + 1 == k) {
      Fraction need;
      switch (target.kind) {
        case Target::Kind::AnyInteger:
          need = frac_part(-partial);
          break;
        case Target::Kind::Zero:
          need = -partial;
          break;
        case Target::Kind::Fixed:
          need = Fraction{target.m, 1} - partial;
          break;
      }
      auto it = index.find(need);
      if (it == index.end()) return;
      for (std::size_t i : it->second) {
        tuple[depth] = last[i];
        visit(tuple);
      }
      return;
    }
    for (const auto& x : alphabets[depth]) {
      tuple[depth] = x;
      self(self, depth + 1, partial + x);
    }
  };
  rec(rec, 0, Fraction{});
}

bool is_degenerate(std::span<const Fraction> tuple) {
  const std::size_t k = tuple.size();
  if (k < 2) return false;
  const std::uint32_t full = (1u << k) - 1;
  for (std::uint32_t s = 1; s < full; ++s) {
    Fraction sum;
    for (std::size_t i = 0; i < k; ++i)
      if (s >> i & 1u) sum = sum + tuple[i];
    if (sum.is_zero()) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------

namespace {

CountReport run(std::string echo, const std::vector<Alphabet>& alphabets, const Target& target,
                const CountOptions& opt) {
  auto t0 = Clock::now();
  CountReport r;
  r.constraint = std::move(echo);
  r.total = count_tuples(alphabets, target, opt.method, opt.workers, &r.method);
  if (opt.classify) {
    if (target.kind != Target::Kind::Zero)
      throw std::invalid_argument("degeneracy is only defined for target zero");
    if (alphabets.size() > 5) throw std::invalid_argument("classification requires k <= 5");
    u64 total = 0, deg = 0;
    for_each_solution(alphabets, target, [&](std::span<const Fraction> t) {
      ++total;
      deg += is_degenerate(t);
    });
    if (total != r.total)
      throw std::logic_error("classification enumerated a different number of solutions");
    r.degenerate = deg;
    r.nondegenerate = total - deg;
  }
  r.seconds = seconds_since(t0);
  return r;
}

}  // namespace

CountReport count_box(const BoxConstraint& c, const CountOptions& opt) {
  check_arity(c.k, false);
  Alphabet a = box_alphabet(c.n, c.Q);
  return run(c.str(), std::vector<Alphabet>(c.k, a), c.target, opt);
}

CountReport count_interval(const IntervalConstraint& c, const CountOptions& opt) {
  const std::size_t k = c.arity();
  check_arity(k, true);
  if (c.lo.size() != k || c.hi.size() != k)
    throw std::invalid_argument("interval constraint: endpoint lists must match arity");
  std::vector<Alphabet> alphabets;
  for (std::size_t i = 0; i < k; ++i) {
    if (c.Q[i] < 1) throw std::invalid_argument("interval constraint: Q_i must be >= 1");
    if (c.lo[i] > c.hi[i]) throw std::invalid_argument("interval constraint: lo > hi");
    if (c.lo[i] < Fraction{-1, 1} || c.hi[i] > Fraction{1, 1})
      throw std::invalid_argument("interval constraint: A_i must lie in [-1,1]");
    if (c.length(i) < Fraction{1, c.Q[i]})
      throw std::invalid_argument("interval constraint: length of A_" + std::to_string(i + 1) +
                                  " is below 1/Q_" + std::to_string(i + 1));
    alphabets.push_back(interval_alphabet(c.lo[i], c.hi[i], c.Q[i]));
  }
  return run(c.str(), alphabets, c.target, opt);
}

CountReport count_numerator_sets(const NumeratorSetConstraint& c, const CountOptions& opt) {
  const std::size_t k = c.arity();
  check_arity(k, true);
  if (c.B.size() != k) throw std::invalid_argument("numerator sets: B list must match arity");
  std::vector<Alphabet> alphabets;
  for (std::size_t i = 0; i < k; ++i) {
    if (c.Q[i] < 1) throw std::invalid_argument("numerator sets: Q_i must be >= 1");
    if (c.B[i].empty()) throw std::invalid_argument("numerator sets: B_i must be non-empty");
    for (i64 a : c.B[i])
      if (a < 1 || a > c.Q[i])
        throw std::invalid_argument("numerator sets: B_" + std::to_string(i + 1) +
                                    " is not inside [1,Q_" + std::to_string(i + 1) + "]");
    alphabets.push_back(numerator_set_alphabet(c.B[i], c.Q[i]));
  }
  return run(c.str(), alphabets, c.target, opt);
}

CountReport classify_degenerate(const BoxConstraint& c, const CountOptions& opt) {
  if (c.target.kind != Target::Kind::Zero)
    throw std::invalid_argument("degeneracy is only defined for target zero");
  if (c.k > 5) throw std::invalid_argument("classification requires k <= 5");
  CountOptions o = opt;
  o.classify = true;
  return count_box(c, o);
}

ReferenceBounds reference_bounds(const BoxConstraint& c) {
  ReferenceBounds r;
  const double n = static_cast<double>(c.n), Q = static_cast<double>(c.Q);
  r.box = std::pow(n, (c.k + 1) / 2.0) * std::pow(Q, (static_cast<double>(c.k) - 1) / 2.0);
  r.lower_bound = BigInt(static_cast<long>(c.n)) * c.n * static_cast<long>(c.Q);
  r.heuristic = pow(BigInt(static_cast<long>(c.n)), c.k >= 1 ? c.k - 1 : 0) * static_cast<long>(c.Q);
  return r;
}

IntervalReference reference_bounds(const IntervalConstraint& c) {
  const std::size_t k = c.arity();
  check_arity(k, true);
  const std::size_t pick = (k + 1) / 2;
  BigRational prodQ = 1;
  for (i64 q : c.Q) prodQ *= static_cast<long>(q);
  IntervalReference best;
  bool have = false;
  for (std::uint32_t s = 0; s < (1u << k); ++s) {
    if (static_cast<std::size_t>(std::popcount(s)) != pick) continue;
    BigRational v = prodQ;
    std::vector<unsigned> set;
    for (unsigned i = 0; i < k; ++i)
      if (s >> i & 1u) {
        v *= to_big(c.length(i));
        set.push_back(i);
      }
    if (!have || v < best.value) {
      best = {v, set};
      have = true;
    }
  }
  return best;
}

}  // namespace oddsum::fracsolve
