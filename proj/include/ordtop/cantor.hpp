#pragma once

// The codec between infinite binary sequences and the middle-thirds set
// (bits (b_i) <-> sum 2*b_i/3^(i+1), indices 0-based), the coordinatewise
// mod-2 group structure, endpoint bookkeeping, density checks, and the
// diagonal translation that steers a countable set clear of another.

#include <cstdint>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ordtop/bitstream.hpp"
#include "ordtop/bracket.hpp"
#include "ordtop/stream.hpp"
#include "ordtop/ternary.hpp"

namespace ordtop {

struct not_in_cantor_set : std::domain_error {
  Rational value;
  explicit not_in_cantor_set(const Rational& q)
      : std::domain_error("not in Cantor set: " + rat_to_string(q)), value(q) {}
};

// Exact enclosure of the encoded real. Symbolically periodic streams encode
// to a degenerate bracket via the closed geometric-series form; opaque
// streams yield the prefix bracket [S, S + 3^-depth].
inline Bracket encode(const CantorPoint& p, std::size_t depth) {
  if (depth < 1) throw std::domain_error("encode: depth must be >= 1");
  if (const auto& sym = p.symbolic()) {
    TernaryExpansion e;
    for (bool b : sym->preperiod) e.preperiod.push_back(b ? 2 : 0);
    for (bool b : sym->period) e.period.push_back(b ? 2 : 0);
    return Bracket(Quad(ternary_value(e)));
  }
  Rational sum = 0;
  Rational weight(1, 3);
  for (std::size_t i = 0; i < depth; ++i) {
    if (p.bit(i)) sum += 2 * weight;
    weight /= 3;
  }
  Rational width = pow_rat(Rational(1, 3), static_cast<unsigned>(depth));
  return Bracket(Quad(sum), Quad(sum + width));
}

// Bit stream of a member of the middle-thirds set: the (at most two) ternary
// expansions are examined and whichever avoids digit 1 is used.
inline CantorPoint decode(const Rational& q) {
  if (q < 0 || q > 1) throw std::domain_error("decode: input outside [0,1]");
  auto digits_ok = [](const TernaryExpansion& e) {
    for (int d : e.preperiod)
      if (d == 1) return false;
    for (int d : e.period)
      if (d == 1) return false;
    return true;
  };
  auto to_bits = [](const TernaryExpansion& e) {
    std::vector<bool> pre, per;
    for (int d : e.preperiod) pre.push_back(d == 2);
    for (int d : e.period) per.push_back(d == 2);
    return CantorPoint::periodic(std::move(pre), std::move(per));
  };
  TernaryExpansion canon = ternary_expansion(q);
  if (digits_ok(canon)) return to_bits(canon);
  if (auto alt = ternary_alternate(q); alt && digits_ok(*alt)) return to_bits(*alt);
  throw not_in_cantor_set(q);
}

struct EndpointVerdict {
  enum Kind { Endpoint, NotEndpoint, UnknownAtHorizon } kind;
  // Endpoint: all bits from index constant_from equal value (0-based).
  std::size_t constant_from = 0;
  bool value = false;
  // NotEndpoint: two indices with differing bits that recur beyond any tail.
  std::pair<std::size_t, std::size_t> witness{0, 0};
  std::size_t horizon = 0;
};

// Endpoints of the deleted intervals (plus 0 and 1) are exactly the
// eventually constant sequences. Only symbolically described streams get a
// definite verdict; opaque generators answer UnknownAtHorizon.
inline EndpointVerdict is_endpoint(const CantorPoint& p, std::size_t horizon) {
  const auto& sym = p.symbolic();
  if (!sym) return {EndpointVerdict::UnknownAtHorizon, 0, false, {0, 0}, horizon};
  bool v = sym->period[0];
  bool tail_constant = true;
  std::size_t differ = 0;
  for (std::size_t j = 1; j < sym->period.size(); ++j) {
    if (sym->period[j] != v) {
      tail_constant = false;
      differ = j;
      break;
    }
  }
  if (!tail_constant) {
    std::size_t base = sym->preperiod.size();
    return {EndpointVerdict::NotEndpoint, 0, false, {base, base + differ}, horizon};
  }
  std::size_t from = sym->preperiod.size();
  while (from > 0 && sym->preperiod[from - 1] == v) --from;
  return {EndpointVerdict::Endpoint, from, v, {0, 0}, horizon};
}

namespace detail {
// Standard diagonal pairing of index pairs, and its inverse.
inline std::size_t cantor_pair(std::size_t i, std::size_t j) {
  std::size_t w = i + j;
  return w * (w + 1) / 2 + j;
}
inline std::pair<std::size_t, std::size_t> cantor_unpair(std::size_t k) {
  std::size_t w = 0;
  while ((w + 1) * (w + 2) / 2 <= k) ++w;
  std::size_t j = k - w * (w + 1) / 2;
  return {w - j, j};
}
}  // namespace detail

// A point x with (A + x) disjoint from B: bit k of x is the complement of
// bit k of the k-th difference a_i ^ b_j under the diagonal pairing, so
// x != a_i ^ b_j is certified at position k. Unconstrained positions are 0.
inline CantorPoint avoid_translation(Stream<CantorPoint> A, Stream<CantorPoint> B) {
  return CantorPoint::from_generator([A, B](std::size_t k) -> bool {
    auto [i, j] = detail::cantor_unpair(k);
    auto a = A.at(i);
    if (!a) return false;
    auto b = B.at(j);
    if (!b) return false;
    return !(a->bit(k) ^ b->bit(k));
  });
}

struct DensityResult {
  bool dense;
  std::vector<bool> missing_prefix;  // lexicographically smallest, when !dense
};

// True iff all 2^depth prefixes occur among the first `budget` elements.
// A false answer may reflect the budget rather than the stream; the witness
// lets the caller decide.
inline DensityResult dense_at_depth(const Stream<CantorPoint>& S, std::size_t depth,
                                    std::size_t budget) {
  if (depth < 1 || depth > 62) throw std::domain_error("dense_at_depth: depth out of range");
  std::set<std::uint64_t> seen;
  const std::uint64_t total = std::uint64_t{1} << depth;
  for (std::size_t n = 0; n < budget && seen.size() < total; ++n) {
    auto p = S.at(n);
    if (!p) break;
    std::uint64_t key = 0;
    for (std::size_t i = 0; i < depth; ++i) key = (key << 1) | (p->bit(i) ? 1 : 0);
    seen.insert(key);
  }
  if (seen.size() == total) return {true, {}};
  std::uint64_t missing = 0;
  while (seen.count(missing)) ++missing;
  std::vector<bool> prefix(depth);
  for (std::size_t i = 0; i < depth; ++i)
    prefix[i] = (missing >> (depth - 1 - i)) & 1u;
  return {false, prefix};
}

}  // namespace ordtop
