#pragma once

// Symbolic descriptions of subsets of the real line: a normalized union of
// carrier-tagged interval blocks. Everything downstream (gap classification,
// characterization, map construction) consumes this model.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ordtop/quad.hpp"
#include "ordtop/rational.hpp"

namespace ordtop {

enum class Tri { Yes, No, Unknown };

struct ExtendedReal {
  enum Tag { NegInf, Finite, PosInf };
  Tag tag = Finite;
  Rational value;  // meaningful only when Finite

  static ExtendedReal neg_inf() { return {NegInf, 0}; }
  static ExtendedReal pos_inf() { return {PosInf, 0}; }
  static ExtendedReal finite(Rational q) { return {Finite, std::move(q)}; }

  bool finite_tag() const { return tag == Finite; }

  friend bool operator==(const ExtendedReal& x, const ExtendedReal& y) {
    if (x.tag != y.tag) return false;
    return x.tag != Finite || x.value == y.value;
  }
  friend bool operator<(const ExtendedReal& x, const ExtendedReal& y) {
    if (x.tag == NegInf) return y.tag != NegInf;
    if (x.tag == PosInf) return false;
    if (y.tag == PosInf) return true;
    if (y.tag == NegInf) return false;
    return x.value < y.value;
  }
  friend bool operator<=(const ExtendedReal& x, const ExtendedReal& y) { return x < y || x == y; }
  friend bool operator>(const ExtendedReal& x, const ExtendedReal& y) { return y < x; }
  friend bool operator>=(const ExtendedReal& x, const ExtendedReal& y) { return y <= x; }
};

inline std::string to_string(const ExtendedReal& x) {
  switch (x.tag) {
    case ExtendedReal::NegInf: return "-inf";
    case ExtendedReal::PosInf: return "+inf";
    default: return rat_to_string(x.value);
  }
}

enum class CarrierKind { Reals, Rationals, Dyadics, Integers, Cantor, CantorEnds, FinitePoints };

struct Carrier {
  CarrierKind kind = CarrierKind::Reals;
  Rational rho;                  // Cantor / CantorEnds: relative length of each kept side
  std::vector<Rational> points;  // FinitePoints, sorted ascending, distinct

  static Carrier reals() { return {CarrierKind::Reals, 0, {}}; }
  static Carrier rationals() { return {CarrierKind::Rationals, 0, {}}; }
  static Carrier dyadics() { return {CarrierKind::Dyadics, 0, {}}; }
  static Carrier integers() { return {CarrierKind::Integers, 0, {}}; }
  static Carrier cantor(Rational rho) {
    if (!(rho > 0 && rho < Rational(1, 2)))
      throw std::domain_error("cantor carrier: ratio must satisfy 0 < rho < 1/2, got " +
                              rat_to_string(rho));
    return {CarrierKind::Cantor, std::move(rho), {}};
  }
  static Carrier cantor_ends(Rational rho) {
    Carrier c = cantor(std::move(rho));
    c.kind = CarrierKind::CantorEnds;
    return c;
  }
  static Carrier finite_points(std::vector<Rational> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.empty()) throw std::domain_error("finite point set must be nonempty");
    return {CarrierKind::FinitePoints, 0, std::move(pts)};
  }

  bool operator==(const Carrier&) const = default;
};

struct Block {
  ExtendedReal lo, hi;
  bool lo_closed = false, hi_closed = false;
  Carrier carrier;

  bool operator==(const Block&) const = default;
};

inline Block make_block(ExtendedReal lo, ExtendedReal hi, bool lo_closed, bool hi_closed,
                        Carrier carrier) {
  if (!lo.finite_tag()) lo_closed = false;
  if (!hi.finite_tag()) hi_closed = false;
  if (hi < lo || (lo == hi && !(lo_closed && hi_closed)))
    throw std::domain_error("empty interval");
  if ((carrier.kind == CarrierKind::Cantor || carrier.kind == CarrierKind::CantorEnds) &&
      !(lo.finite_tag() && hi.finite_tag()))
    throw std::domain_error("cantor carriers need finite bounds");
  return Block{std::move(lo), std::move(hi), lo_closed, hi_closed, std::move(carrier)};
}

inline Block point_block(std::vector<Rational> pts) {
  Carrier c = Carrier::finite_points(std::move(pts));
  ExtendedReal lo = ExtendedReal::finite(c.points.front());
  ExtendedReal hi = ExtendedReal::finite(c.points.back());
  return Block{lo, hi, true, true, std::move(c)};
}

struct SetExpr {
  std::vector<Block> blocks;
  bool operator==(const SetExpr&) const = default;
};

// --- membership ------------------------------------------------------------

enum class Membership { In, Out, Unknown };

// Orbit classification of a relative coordinate t in [0,1] under the
// rho-construction: keep the left and right closed pieces of relative length
// rho, delete the open middle. One step maps the kept pieces back onto [0,1].
// Left endpoints of deleted gaps (and the sup) eventually map to the fixed
// point 1; right endpoints (and the inf) to 0; other members cycle or wander
// forever without leaving [0,1].
enum class CantorClass { NotMember, MemberTwoSided, MemberLeftEnd, MemberRightEnd, Unknown };

struct CantorOrbit {
  CantorClass cls;
  std::size_t steps;  // steps taken until the class resolved
};

inline CantorOrbit classify_unit_cantor_orbit(const Rational& rho, Rational t,
                                              std::size_t max_steps) {
  if (t < 0 || t > 1) return {CantorClass::NotMember, 0};
  std::set<Rational> seen;
  for (std::size_t step = 0; step < max_steps; ++step) {
    if (t == 1) return {CantorClass::MemberLeftEnd, step};
    if (t == 0) return {CantorClass::MemberRightEnd, step};
    if (!seen.insert(t).second) return {CantorClass::MemberTwoSided, step};
    if (t > rho && t < 1 - rho) return {CantorClass::NotMember, step};
    if (t <= rho)
      t = t / rho;
    else
      t = (t - (1 - rho)) / rho;
  }
  return {CantorClass::Unknown, max_steps};
}

inline CantorClass classify_unit_cantor(const Rational& rho, Rational t,
                                        std::size_t max_steps) {
  return classify_unit_cantor_orbit(rho, std::move(t), max_steps).cls;
}

// For the middle-thirds ratio the orbit keeps a denominator that divides the
// starting one, so it always resolves within den(t) + 2 steps.
inline CantorClass classify_cantor_rel(const Rational& rho, const Rational& t,
                                       std::size_t depth) {
  std::size_t steps = depth;
  if (rho == Rational(1, 3)) {
    Integer d = rat_den(t);
    steps = d < 2'000'000 ? static_cast<std::size_t>(d) + 2 : depth;
  }
  return classify_unit_cantor(rho, t, std::max<std::size_t>(steps, 4));
}

inline bool interval_contains(const Block& b, const Rational& x) {
  ExtendedReal p = ExtendedReal::finite(x);
  if (p < b.lo || (p == b.lo && !b.lo_closed)) return false;
  if (b.hi < p || (p == b.hi && !b.hi_closed)) return false;
  return true;
}

inline Membership block_contains(const Block& b, const Rational& x, std::size_t depth) {
  if (!interval_contains(b, x)) return Membership::Out;
  switch (b.carrier.kind) {
    case CarrierKind::Reals:
    case CarrierKind::Rationals:
      return Membership::In;
    case CarrierKind::Dyadics:
      return is_dyadic(x) ? Membership::In : Membership::Out;
    case CarrierKind::Integers:
      return is_integer(x) ? Membership::In : Membership::Out;
    case CarrierKind::FinitePoints:
      return std::binary_search(b.carrier.points.begin(), b.carrier.points.end(), x)
                 ? Membership::In
                 : Membership::Out;
    case CarrierKind::Cantor:
    case CarrierKind::CantorEnds: {
      Rational a = b.lo.value, bb = b.hi.value;
      Rational t = (x - a) / (bb - a);
      CantorClass c = classify_cantor_rel(b.carrier.rho, t, depth);
      if (c == CantorClass::Unknown) return Membership::Unknown;
      if (b.carrier.kind == CarrierKind::Cantor)
        return c == CantorClass::NotMember ? Membership::Out : Membership::In;
      return (c == CantorClass::MemberLeftEnd || c == CantorClass::MemberRightEnd)
                 ? Membership::In
                 : Membership::Out;
    }
  }
  return Membership::Out;
}

// In/Out are exact; Unknown can only arise from Cantor carriers with ratios
// other than 1/3 when the orbit neither exits nor cycles within `depth`.
inline Membership contains(const SetExpr& e, const Rational& x, std::size_t depth) {
  bool unknown = false;
  for (const Block& b : e.blocks) {
    Membership m = block_contains(b, x, depth);
    if (m == Membership::In) return Membership::In;
    if (m == Membership::Unknown) unknown = true;
  }
  return unknown ? Membership::Unknown : Membership::Out;
}

// --- member bounds ----------------------------------------------------------

struct MemberBound {
  ExtendedReal value;
  bool attained = false;
};

// Smallest integer admitted by the interval, assuming one exists.
inline std::optional<Rational> first_integer_at_least(const Block& b) {
  if (!b.lo.finite_tag()) return std::nullopt;
  Integer n = ceil_rat(b.lo.value);
  if (Rational(n) == b.lo.value && !b.lo_closed) ++n;
  Rational r(n);
  ExtendedReal p = ExtendedReal::finite(r);
  if (b.hi < p || (p == b.hi && !b.hi_closed)) return std::nullopt;
  return r;
}

inline std::optional<Rational> last_integer_at_most(const Block& b) {
  if (!b.hi.finite_tag()) return std::nullopt;
  Integer n = floor_rat(b.hi.value);
  if (Rational(n) == b.hi.value && !b.hi_closed) --n;
  Rational r(n);
  ExtendedReal p = ExtendedReal::finite(r);
  if (p < b.lo || (p == b.lo && !b.lo_closed)) return std::nullopt;
  return r;
}

inline MemberBound member_inf(const Block& b) {
  switch (b.carrier.kind) {
    case CarrierKind::Reals:
    case CarrierKind::Rationals:
      if (!b.lo.finite_tag()) return {b.lo, false};
      return {b.lo, b.lo_closed};
    case CarrierKind::Dyadics:
      if (!b.lo.finite_tag()) return {b.lo, false};
      return {b.lo, b.lo_closed && is_dyadic(b.lo.value)};
    case CarrierKind::Integers: {
      if (!b.lo.finite_tag()) return {b.lo, false};
      auto n = first_integer_at_least(b);
      return {ExtendedReal::finite(*n), true};
    }
    case CarrierKind::FinitePoints:
      return {ExtendedReal::finite(b.carrier.points.front()), true};
    case CarrierKind::Cantor:
    case CarrierKind::CantorEnds:
      return {b.lo, b.lo_closed};
  }
  return {b.lo, false};
}

inline MemberBound member_sup(const Block& b) {
  switch (b.carrier.kind) {
    case CarrierKind::Reals:
    case CarrierKind::Rationals:
      if (!b.hi.finite_tag()) return {b.hi, false};
      return {b.hi, b.hi_closed};
    case CarrierKind::Dyadics:
      if (!b.hi.finite_tag()) return {b.hi, false};
      return {b.hi, b.hi_closed && is_dyadic(b.hi.value)};
    case CarrierKind::Integers: {
      if (!b.hi.finite_tag()) return {b.hi, false};
      auto n = last_integer_at_most(b);
      return {ExtendedReal::finite(*n), true};
    }
    case CarrierKind::FinitePoints:
      return {ExtendedReal::finite(b.carrier.points.back()), true};
    case CarrierKind::Cantor:
    case CarrierKind::CantorEnds:
      return {b.hi, b.hi_closed};
  }
  return {b.hi, false};
}

struct Bounds {
  ExtendedReal inf, sup;
  bool inf_attained = false, sup_attained = false;
};

inline Bounds bounds(const SetExpr& e) {
  if (e.blocks.empty()) throw std::domain_error("bounds: empty set");
  Bounds r;
  bool first = true;
  for (const Block& b : e.blocks) {
    MemberBound lo = member_inf(b), hi = member_sup(b);
    if (first) {
      r = {lo.value, hi.value, lo.attained, hi.attained};
      first = false;
      continue;
    }
    if (lo.value < r.inf) {
      r.inf = lo.value;
      r.inf_attained = lo.attained;
    } else if (lo.value == r.inf) {
      r.inf_attained = r.inf_attained || lo.attained;
    }
    if (r.sup < hi.value) {
      r.sup = hi.value;
      r.sup_attained = hi.attained;
    } else if (hi.value == r.sup) {
      r.sup_attained = r.sup_attained || hi.attained;
    }
  }
  return r;
}

// --- accumulation analysis --------------------------------------------------

// Does the block's member set accumulate at p from the requested side?
// Exact per carrier; Unknown only from unresolved non-1/3 Cantor orbits.
inline Tri accumulates(const Block& b, const Rational& p, bool from_below,
                       std::size_t depth = 256) {
  ExtendedReal q = ExtendedReal::finite(p);
  switch (b.carrier.kind) {
    case CarrierKind::Reals:
    case CarrierKind::Rationals:
    case CarrierKind::Dyadics: {
      if (from_below)
        return (b.lo < q && q <= b.hi) ? Tri::Yes : Tri::No;
      return (b.lo <= q && q < b.hi) ? Tri::Yes : Tri::No;
    }
    case CarrierKind::Integers:
    case CarrierKind::FinitePoints:
      return Tri::No;
    case CarrierKind::Cantor:
    case CarrierKind::CantorEnds: {
      if (q < b.lo || b.hi < q) return Tri::No;
      Rational a = b.lo.value, bb = b.hi.value;
      Rational t = (p - a) / (bb - a);
      CantorClass c = classify_cantor_rel(b.carrier.rho, t, depth);
      switch (c) {
        case CantorClass::NotMember: return Tri::No;
        case CantorClass::MemberTwoSided: return Tri::Yes;
        case CantorClass::MemberLeftEnd: return from_below ? Tri::Yes : Tri::No;
        case CantorClass::MemberRightEnd: return from_below ? Tri::No : Tri::Yes;
        case CantorClass::Unknown: return Tri::Unknown;
      }
      return Tri::Unknown;
    }
  }
  return Tri::No;
}

inline Tri accumulates(const SetExpr& e, const Rational& p, bool from_below,
                       std::size_t depth = 256) {
  bool unknown = false;
  for (const Block& b : e.blocks) {
    Tri t = accumulates(b, p, from_below, depth);
    if (t == Tri::Yes) return Tri::Yes;
    if (t == Tri::Unknown) unknown = true;
  }
  return unknown ? Tri::Unknown : Tri::No;
}

// --- normalization ----------------------------------------------------------

namespace detail {

inline int carrier_rank(CarrierKind k) { return static_cast<int>(k); }

inline bool block_before(const Block& x, const Block& y) {
  if (x.lo < y.lo) return true;
  if (y.lo < x.lo) return false;
  if (x.hi < y.hi) return true;
  if (y.hi < x.hi) return false;
  return carrier_rank(x.carrier.kind) < carrier_rank(y.carrier.kind);
}

// Is the touching point t a member of the carrier set (carrier-wise only)?
inline bool carrier_admits(const Carrier& c, const Rational& t) {
  switch (c.kind) {
    case CarrierKind::Reals:
    case CarrierKind::Rationals: return true;
    case CarrierKind::Dyadics: return is_dyadic(t);
    case CarrierKind::Integers: return is_integer(t);
    default: return true;  // not used for other carriers
  }
}

// Merge same-carrier blocks whose union is again a single block.
inline bool try_merge(Block& a, const Block& b) {
  if (a.carrier.kind != b.carrier.kind) return false;
  if (a == b) return true;  // exact duplicate
  CarrierKind k = a.carrier.kind;
  if (k == CarrierKind::Cantor || k == CarrierKind::CantorEnds) return false;
  if (k == CarrierKind::FinitePoints) {
    // merge when closures intersect (b.lo <= a.hi given the sort order)
    if (a.hi < b.lo) return false;
    std::vector<Rational> pts = a.carrier.points;
    pts.insert(pts.end(), b.carrier.points.begin(), b.carrier.points.end());
    a = point_block(std::move(pts));
    return true;
  }
  if (a.carrier != b.carrier) return false;
  bool proper_overlap = b.lo < a.hi;
  bool touch = b.lo == a.hi;
  if (!proper_overlap && !touch) return false;
  if (touch) {
    if (!a.hi.finite_tag()) return true;  // b is inside a's infinite reach
    const Rational& t = a.hi.value;
    bool admits = carrier_admits(a.carrier, t);
    bool attained = (a.hi_closed || b.lo_closed) && admits;
    if (admits && !attained) return false;  // merging would add t to the set
    if (b.hi == a.hi)
      a.hi_closed = a.hi_closed || b.hi_closed;
    else if (a.hi < b.hi) {
      a.hi = b.hi;
      a.hi_closed = b.hi_closed;
    }
    return true;
  }
  // proper interval overlap: the union of the intervals is one interval
  if (a.hi < b.hi) {
    a.hi = b.hi;
    a.hi_closed = b.hi_closed;
  } else if (a.hi == b.hi) {
    a.hi_closed = a.hi_closed || b.hi_closed;
  }
  return true;
}

// Static carrier containment, used by the absorption pass. Conservative:
// false negatives only make the normal form less aggressive, never wrong.
inline bool carrier_subset(const Block& sub, const Block& sup) {
  CarrierKind s = sub.carrier.kind, t = sup.carrier.kind;
  if (t == CarrierKind::Reals) return true;
  if (t == CarrierKind::Rationals)
    return s == CarrierKind::Dyadics || s == CarrierKind::Integers ||
           s == CarrierKind::CantorEnds ||
           (s == CarrierKind::FinitePoints);  // finite point lists are rational
  if (t == CarrierKind::Dyadics) {
    if (s == CarrierKind::Integers) return true;
    if (s == CarrierKind::FinitePoints)
      return std::all_of(sub.carrier.points.begin(), sub.carrier.points.end(),
                         [](const Rational& p) { return is_dyadic(p); });
    return false;
  }
  if (t == CarrierKind::Integers)
    return s == CarrierKind::FinitePoints &&
           std::all_of(sub.carrier.points.begin(), sub.carrier.points.end(),
                       [](const Rational& p) { return is_integer(p); });
  if (t == CarrierKind::Cantor) {
    if (s == CarrierKind::CantorEnds)
      return sub.carrier.rho == sup.carrier.rho && sub.lo == sup.lo && sub.hi == sup.hi;
    if (s == CarrierKind::FinitePoints) {
      for (const Rational& p : sub.carrier.points)
        if (block_contains(Block{sup.lo, sup.hi, true, true, sup.carrier}, p, 256) !=
            Membership::In)
          return false;
      return true;
    }
    return false;
  }
  return false;
}

// Conservative interval coverage: every member of b is admitted by a's
// interval (closures compared bound-wise).
inline bool interval_covers(const Block& a, const Block& b) {
  bool lo_ok = a.lo < b.lo || (a.lo == b.lo && (a.lo_closed || !b.lo_closed));
  bool hi_ok = b.hi < a.hi || (a.hi == b.hi && (a.hi_closed || !b.hi_closed));
  return lo_ok && hi_ok;
}

inline std::optional<Block> canonicalize_block(const Block& b) {
  Block out = b;
  // tighten integer blocks to their member hull
  if (out.carrier.kind == CarrierKind::Integers && out.lo.finite_tag() &&
      out.hi.finite_tag()) {
    auto first = first_integer_at_least(out);
    if (!first) return std::nullopt;
    auto last = last_integer_at_most(out);
    out.lo = ExtendedReal::finite(*first);
    out.hi = ExtendedReal::finite(*last);
    out.lo_closed = out.hi_closed = true;
  } else if (out.carrier.kind == CarrierKind::Integers) {
    if (out.lo.finite_tag()) {
      auto first = first_integer_at_least(out);
      if (!first) return std::nullopt;
      out.lo = ExtendedReal::finite(*first);
      out.lo_closed = true;
    }
    if (out.hi.finite_tag()) {
      auto last = last_integer_at_most(out);
      if (!last) return std::nullopt;
      out.hi = ExtendedReal::finite(*last);
      out.hi_closed = true;
    }
  }
  if (out.carrier.kind == CarrierKind::FinitePoints) {
    std::vector<Rational> pts;
    for (const Rational& p : out.carrier.points)
      if (interval_contains(out, p)) pts.push_back(p);
    if (pts.empty()) return std::nullopt;
    return point_block(std::move(pts));
  }
  // degenerate intervals carry exactly one point (when the carrier admits it)
  if (out.lo.finite_tag() && out.lo == out.hi) {
    const Rational& p = out.lo.value;
    switch (out.carrier.kind) {
      case CarrierKind::Dyadics:
        if (!is_dyadic(p)) return std::nullopt;
        break;
      case CarrierKind::Integers:
        if (!is_integer(p)) return std::nullopt;
        break;
      default: break;
    }
    return point_block({p});
  }
  return out;
}

}  // namespace detail

// Sorted, merged where a union of same-carrier blocks is again a block,
// subset blocks absorbed into covering blocks. Idempotent.
inline SetExpr normalize(const SetExpr& e) {
  std::vector<Block> blocks;
  for (const Block& b : e.blocks) {
    auto cb = detail::canonicalize_block(b);
    if (cb) blocks.push_back(std::move(*cb));
  }
  bool changed = true;
  while (changed) {
    changed = false;
    std::sort(blocks.begin(), blocks.end(), detail::block_before);
    // merge pass
    for (std::size_t i = 0; i + 1 < blocks.size() && !changed;) {
      for (std::size_t j = i + 1; j < blocks.size(); ++j) {
        if (detail::try_merge(blocks[i], blocks[j])) {
          auto cb = detail::canonicalize_block(blocks[i]);
          blocks.erase(blocks.begin() + static_cast<long>(j));
          if (cb)
            blocks[i] = std::move(*cb);
          else
            blocks.erase(blocks.begin() + static_cast<long>(i));
          changed = true;
          break;
        }
      }
      if (!changed) ++i;
    }
    if (changed) continue;
    // absorption pass
    for (std::size_t i = 0; i < blocks.size() && !changed; ++i) {
      for (std::size_t j = 0; j < blocks.size(); ++j) {
        if (i == j) continue;
        if (detail::carrier_subset(blocks[j], blocks[i]) &&
            detail::interval_covers(blocks[i], blocks[j])) {
          blocks.erase(blocks.begin() + static_cast<long>(j));
          changed = true;
          break;
        }
      }
    }
  }
  return SetExpr{std::move(blocks)};
}

// --- rendering ---------------------------------------------------------------

inline std::string to_string(const Carrier& c) {
  switch (c.kind) {
    case CarrierKind::Reals: return "R";
    case CarrierKind::Rationals: return "Q";
    case CarrierKind::Dyadics: return "D";
    case CarrierKind::Integers: return "Z";
    case CarrierKind::Cantor: return "cantor(" + rat_to_string(c.rho) + ")";
    case CarrierKind::CantorEnds: return "ends(" + rat_to_string(c.rho) + ")";
    case CarrierKind::FinitePoints: return "points";
  }
  return "?";
}

inline std::string to_string(const Block& b) {
  if (b.carrier.kind == CarrierKind::FinitePoints) {
    std::string s = "{";
    for (std::size_t i = 0; i < b.carrier.points.size(); ++i) {
      if (i) s += ",";
      s += rat_to_string(b.carrier.points[i]);
    }
    return s + "}";
  }
  std::string s;
  s += b.lo_closed ? "[" : "(";
  s += to_string(b.lo);
  s += ",";
  s += to_string(b.hi);
  s += b.hi_closed ? "]" : ")";
  if (b.carrier.kind != CarrierKind::Reals) s += "&" + to_string(b.carrier);
  return s;
}

inline std::string to_string(const SetExpr& e) {
  std::string s;
  for (std::size_t i = 0; i < e.blocks.size(); ++i) {
    if (i) s += " u ";
    s += to_string(e.blocks[i]);
  }
  return s;
}

}  // namespace ordtop
