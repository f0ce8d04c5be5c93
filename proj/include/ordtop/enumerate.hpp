#pragma once

// Canonical enumerations of the countable carriers. Rationals and dyadics go
// breadth-first by height max(|num|, den) — 0, 1, -1, 1/2, -1/2, 2, -2, ... —
// endpoint sets by construction generation then left to right, and a union
// round-robins across its blocks with earlier blocks owning shared points.

#include <memory>
#include <numeric>
#include <stdexcept>

#include "ordtop/gaptree.hpp"
#include "ordtop/setexpr.hpp"
#include "ordtop/stream.hpp"

namespace ordtop {

struct uncountable_carrier : std::domain_error {
  using std::domain_error::domain_error;
};

inline Stream<Rational> enum_rationals() {
  struct St {
    unsigned long h = 0;
    std::vector<Rational> buf;
    std::size_t i = 0;
  };
  auto st = std::make_shared<St>();
  return Stream<Rational>([st]() -> std::optional<Rational> {
    while (st->i >= st->buf.size()) {
      ++st->h;
      st->buf.clear();
      st->i = 0;
      unsigned long h = st->h;
      if (h == 1) {
        st->buf = {Rational(0), Rational(1), Rational(-1)};
        continue;
      }
      for (unsigned long n = 1; n < h; ++n) {
        if (std::gcd(n, h) != 1) continue;
        st->buf.emplace_back(Integer(n), Integer(h));
        st->buf.emplace_back(-Integer(n), Integer(h));
      }
      for (unsigned long d = h - 1; d >= 1; --d) {
        if (std::gcd(h, d) == 1) {
          st->buf.emplace_back(Integer(h), Integer(d));
          st->buf.emplace_back(-Integer(h), Integer(d));
        }
        if (d == 1) break;
      }
    }
    return st->buf[st->i++];
  });
}

inline Stream<Rational> enum_dyadics() {
  return enum_rationals().filter([](const Rational& q) { return is_dyadic(q); });
}

inline Stream<Rational> enum_integers() {
  auto k = std::make_shared<long long>(0);
  return Stream<Rational>([k]() -> std::optional<Rational> {
    long long v = *k;
    ++*k;
    if (v == 0) return Rational(0);
    long long n = (v + 1) / 2;
    return v % 2 == 1 ? Rational(n) : Rational(-n);
  });
}

namespace detail {

inline Stream<Rational> enum_block_integers(const Block& b) {
  // normalized integer blocks have tight closed integer bounds
  if (b.lo.finite_tag() && b.hi.finite_tag()) {
    std::vector<Rational> out;
    for (Rational v = b.lo.value; v <= b.hi.value; v += 1) out.push_back(v);
    return Stream<Rational>::of(std::move(out));
  }
  if (b.lo.finite_tag()) {
    auto v = std::make_shared<Rational>(b.lo.value);
    return Stream<Rational>([v]() {
      Rational r = *v;
      *v += 1;
      return std::optional<Rational>(r);
    });
  }
  if (b.hi.finite_tag()) {
    auto v = std::make_shared<Rational>(b.hi.value);
    return Stream<Rational>([v]() {
      Rational r = *v;
      *v -= 1;
      return std::optional<Rational>(r);
    });
  }
  return enum_integers();
}

inline Stream<Rational> enum_block_ends(const Block& b) {
  auto tree = std::make_shared<CantorGapTree>(b.lo.value, b.hi.value, b.carrier.rho);
  struct St {
    std::size_t emitted = 0;   // endpoints a, b first (when attained)
    std::size_t gap = 0;       // BFS gap index
    bool left_done = false;
  };
  auto st = std::make_shared<St>();
  bool has_a = b.lo_closed, has_b = b.hi_closed;
  return Stream<Rational>([tree, st, has_a, has_b]() -> std::optional<Rational> {
    if (st->emitted == 0) {
      ++st->emitted;
      if (has_a) return tree->a();
    }
    if (st->emitted == 1) {
      ++st->emitted;
      if (has_b) return tree->b();
    }
    GapPair g = tree->gap_by_index(st->gap);
    if (!st->left_done) {
      st->left_done = true;
      return g.left;
    }
    st->left_done = false;
    ++st->gap;
    return g.right;
  });
}

inline Stream<Rational> enum_block(const Block& b) {
  switch (b.carrier.kind) {
    case CarrierKind::Rationals:
      return enum_rationals().filter(
          [b](const Rational& q) { return interval_contains(b, q); });
    case CarrierKind::Dyadics:
      return enum_dyadics().filter(
          [b](const Rational& q) { return interval_contains(b, q); });
    case CarrierKind::Integers:
      return enum_block_integers(b);
    case CarrierKind::FinitePoints:
      return Stream<Rational>::of(b.carrier.points);
    case CarrierKind::CantorEnds:
      return enum_block_ends(b);
    default:
      throw uncountable_carrier("enumerate: uncountable carrier in " + to_string(b));
  }
}

}  // namespace detail

// Injective stream covering exactly the member points of a countable set.
// Blocks are interleaved round-robin; a point claimed by several blocks is
// emitted only by the earliest one.
inline Stream<Rational> enumerate_members(const SetExpr& e) {
  for (const Block& b : e.blocks)
    if (b.carrier.kind == CarrierKind::Reals || b.carrier.kind == CarrierKind::Cantor)
      throw uncountable_carrier("enumerate: uncountable carrier in " + to_string(b));
  struct Sub {
    Stream<Rational> stream;
    std::size_t next = 0;
    bool done = false;
  };
  struct St {
    std::vector<Sub> subs;
    std::size_t turn = 0;
  };
  auto st = std::make_shared<St>();
  for (const Block& b : e.blocks) st->subs.push_back({detail::enum_block(b), 0, false});
  SetExpr expr = e;
  return Stream<Rational>([st, expr]() -> std::optional<Rational> {
    std::size_t n = st->subs.size();
    std::size_t exhausted = 0;
    while (exhausted < n) {
      std::size_t i = st->turn % n;
      ++st->turn;
      Sub& sub = st->subs[i];
      if (sub.done) {
        ++exhausted;
        continue;
      }
      auto v = sub.stream.at(sub.next++);
      if (!v) {
        sub.done = true;
        ++exhausted;
        continue;
      }
      bool owned_earlier = false;
      for (std::size_t j = 0; j < i; ++j) {
        if (block_contains(expr.blocks[j], *v, 256) == Membership::In) {
          owned_earlier = true;
          break;
        }
      }
      if (!owned_earlier) return v;
      exhausted = 0;  // keep cycling; progress was made
    }
    return std::nullopt;
  });
}

}  // namespace ordtop
