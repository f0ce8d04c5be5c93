#pragma once

// Gap classification and the characterization verdicts. A gap is a bounded
// connected component of the complement; open gaps are essential (both
// endpoints in the set), closed ones are Dedekind cuts, half-open ones are
// pseudo-gaps and are exactly what makes the subspace topology finer than
// the order topology. Infinite gap collections are reported as families with
// cardinality tags; unbounded complement components are listed as rays.

#include <json.hpp>

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "ordtop/enumerate.hpp"
#include "ordtop/gaptree.hpp"
#include "ordtop/setdsl_parser.hpp"
#include "ordtop/setexpr.hpp"

namespace ordtop {

enum class GapKind { Essential, Dedekind, Pseudo };
enum class GapShape { Open, Closed, Singleton, LeftOpen, RightOpen };

inline GapKind kind_of(GapShape s) {
  switch (s) {
    case GapShape::Open: return GapKind::Essential;
    case GapShape::Closed:
    case GapShape::Singleton: return GapKind::Dedekind;
    default: return GapKind::Pseudo;
  }
}

struct Gap {
  Rational lo, hi;
  GapShape shape;
  GapKind kind;

  bool operator==(const Gap&) const = default;
};

inline Gap make_gap(Rational lo, Rational hi, bool lo_in_set, bool hi_in_set) {
  GapShape shape;
  if (lo == hi)
    shape = GapShape::Singleton;
  else if (lo_in_set && hi_in_set)
    shape = GapShape::Open;
  else if (!lo_in_set && !hi_in_set)
    shape = GapShape::Closed;
  else if (lo_in_set)
    shape = GapShape::LeftOpen;  // (lo, hi]
  else
    shape = GapShape::RightOpen;  // [lo, hi)
  return Gap{std::move(lo), std::move(hi), shape, kind_of(shape)};
}

enum class Cardinality { Countable, Uncountable };

struct GapFamily {
  Block host_block;
  GapKind kind;
  Cardinality cardinality;
  std::string description;

  bool operator==(const GapFamily&) const = default;
};

struct Ray {
  bool below;          // extends to -inf
  ExtendedReal bound;  // the finite end
  bool closed;         // ray includes the bound point

  bool operator==(const Ray&) const = default;
};

struct GapReport {
  std::vector<Gap> explicit_gaps;
  std::vector<GapFamily> families;
  std::vector<Ray> rays;

  std::size_t count(GapKind k) const {
    std::size_t n = 0;
    for (const Gap& g : explicit_gaps) n += g.kind == k;
    return n;
  }
  bool operator==(const GapReport&) const = default;
};

// --- classification ----------------------------------------------------------

namespace detail {

inline void family_for_block(const Block& b, std::vector<GapFamily>& fams) {
  switch (b.carrier.kind) {
    case CarrierKind::Rationals:
      fams.push_back({b, GapKind::Dedekind, Cardinality::Uncountable,
                      "each irrational of the interval is a singleton gap"});
      break;
    case CarrierKind::Dyadics:
      fams.push_back({b, GapKind::Dedekind, Cardinality::Uncountable,
                      "each non-dyadic real of the interval is a singleton gap"});
      break;
    case CarrierKind::Integers:
      if (!b.lo.finite_tag() || !b.hi.finite_tag())
        fams.push_back({b, GapKind::Essential, Cardinality::Countable,
                        "unit gaps between consecutive integers"});
      break;
    case CarrierKind::Cantor:
      fams.push_back({b, GapKind::Essential, Cardinality::Countable,
                      "deleted middle intervals, by construction generation"});
      break;
    case CarrierKind::CantorEnds:
      fams.push_back({b, GapKind::Essential, Cardinality::Countable,
                      "deleted middle intervals, by construction generation"});
      fams.push_back({b, GapKind::Dedekind, Cardinality::Uncountable,
                      "each non-endpoint member of the Cantor set is a singleton gap"});
      break;
    default:
      break;
  }
}

// Occupied segments of the line, with endpoint attainment. Dense and Cantor
// carriers occupy their whole member hull (their internal gaps are reported
// as families); discrete carriers occupy one degenerate segment per member,
// so gaps between members interleave correctly with the other blocks.
struct Segment {
  ExtendedReal lo, hi;
  bool lo_att, hi_att;
};

inline constexpr std::size_t kMaxExplicitIntegerSpan = 65536;

inline void block_segments(const SetExpr& e, const Block& b, std::vector<Segment>& out) {
  switch (b.carrier.kind) {
    case CarrierKind::FinitePoints:
      for (const Rational& p : b.carrier.points)
        out.push_back({ExtendedReal::finite(p), ExtendedReal::finite(p), true, true});
      return;
    case CarrierKind::Integers: {
      bool lo_fin = b.lo.finite_tag(), hi_fin = b.hi.finite_tag();
      if (lo_fin && hi_fin) {
        Rational span = b.hi.value - b.lo.value;
        if (span > Rational(static_cast<long>(kMaxExplicitIntegerSpan)))
          throw std::domain_error("integer block too large to classify explicitly: " +
                                  to_string(b));
        for (Rational n = b.lo.value; n <= b.hi.value; n += 1)
          out.push_back({ExtendedReal::finite(n), ExtendedReal::finite(n), true, true});
        return;
      }
      // unbounded: resolve integers near the other blocks, keep the tails whole
      std::optional<Rational> wlo, whi;
      for (const Block& other : e.blocks) {
        if (&other == &b) continue;
        if (other.lo.finite_tag())
          wlo = wlo ? std::min(*wlo, other.lo.value) : other.lo.value;
        if (other.hi.finite_tag())
          whi = whi ? std::max(*whi, other.hi.value) : other.hi.value;
      }
      if (!wlo || !whi) {
        out.push_back({b.lo, b.hi, lo_fin, hi_fin});
        return;
      }
      Rational from(floor_rat(*wlo) - 2), to(ceil_rat(*whi) + 2);
      if (lo_fin && b.lo.value > from) from = b.lo.value;
      if (hi_fin && b.hi.value < to) to = b.hi.value;
      if (from > to) {
        out.push_back({b.lo, b.hi, lo_fin, hi_fin});
        return;
      }
      if (b.lo < ExtendedReal::finite(from))
        out.push_back({b.lo, ExtendedReal::finite(from - 1), lo_fin, true});
      for (Rational n = from; n <= to; n += 1)
        out.push_back({ExtendedReal::finite(n), ExtendedReal::finite(n), true, true});
      if (ExtendedReal::finite(to) < b.hi)
        out.push_back({ExtendedReal::finite(to + 1), b.hi, true, hi_fin});
      return;
    }
    default: {
      MemberBound lo = member_inf(b), hi = member_sup(b);
      out.push_back({lo.value, hi.value, lo.attained, hi.attained});
      return;
    }
  }
}

inline std::vector<Segment> collect_segments(const SetExpr& e) {
  std::vector<Segment> segs;
  for (const Block& b : e.blocks) block_segments(e, b, segs);
  std::sort(segs.begin(), segs.end(), [](const Segment& x, const Segment& y) {
    if (x.lo < y.lo) return true;
    if (y.lo < x.lo) return false;
    return x.hi < y.hi;
  });
  return segs;
}

}  // namespace detail

inline GapReport classify_gaps(const SetExpr& e) {
  if (e.blocks.empty()) throw std::domain_error("classify_gaps: empty set");
  GapReport report;
  for (const Block& b : e.blocks) detail::family_for_block(b, report.families);

  // sweep the occupied segments; complement components between them are the
  // explicit gaps
  std::vector<detail::Segment> segs = detail::collect_segments(e);
  detail::Segment cover = segs.front();
  for (std::size_t i = 1; i < segs.size(); ++i) {
    const detail::Segment& nxt = segs[i];
    if (cover.hi < nxt.lo) {
      report.explicit_gaps.push_back(
          make_gap(cover.hi.value, nxt.lo.value, cover.hi_att, nxt.lo_att));
    } else if (cover.hi == nxt.lo && !cover.hi_att && !nxt.lo_att &&
               contains(e, cover.hi.value, 256) == Membership::Out) {
      report.explicit_gaps.push_back(make_gap(cover.hi.value, cover.hi.value, false, false));
    }
    if (cover.hi < nxt.hi) {
      cover.hi = nxt.hi;
      cover.hi_att = nxt.hi_att;
    } else if (cover.hi == nxt.hi) {
      cover.hi_att = cover.hi_att || nxt.hi_att;
    }
  }

  Bounds bd = bounds(e);
  if (bd.inf.finite_tag()) report.rays.push_back({true, bd.inf, !bd.inf_attained});
  if (bd.sup.finite_tag()) report.rays.push_back({false, bd.sup, !bd.sup_attained});
  return report;
}

// Generation-order stream of a countable family's gaps.
inline Stream<Gap> family_stream(const GapFamily& f) {
  if (f.cardinality != Cardinality::Countable)
    throw std::domain_error("family_stream: family is uncountable");
  const Block& b = f.host_block;
  if (b.carrier.kind == CarrierKind::Integers) {
    auto n = std::make_shared<std::optional<Rational>>();
    Block blk = b;
    return Stream<Gap>([n, blk]() -> std::optional<Gap> {
      if (!*n) {
        if (blk.lo.finite_tag())
          *n = blk.lo.value;
        else if (blk.hi.finite_tag())
          *n = blk.hi.value - 1;
        else
          *n = Rational(0);
      } else {
        if (blk.lo.finite_tag())
          **n += 1;
        else if (blk.hi.finite_tag())
          **n -= 1;
        else {
          // walk outward: 0, -1, 1, -2, 2, ...
          Rational v = **n;
          if (v == 0)
            **n = Rational(-1);
          else
            **n = v > 0 ? Rational(-v - 1) : Rational(-v);
        }
      }
      return make_gap(**n, **n + 1, true, true);
    });
  }
  auto tree = std::make_shared<CantorGapTree>(b.lo.value, b.hi.value, b.carrier.rho);
  auto idx = std::make_shared<std::size_t>(0);
  return Stream<Gap>([tree, idx]() -> std::optional<Gap> {
    GapPair g = tree->gap_by_index((*idx)++);
    return make_gap(g.left, g.right, true, true);
  });
}

// --- topology agreement -------------------------------------------------------

struct TopologyAgreement {
  bool agree;
  std::optional<Gap> witness;  // a pseudo-gap, when !agree
};

// Direct boundary parity scan: the order and subspace topologies agree
// exactly when no complement component is half-open, i.e. when no boundary
// pair has odd attainment parity. Deliberately derives only parities, not the
// full taxonomy, so classify_gaps can be cross-checked against it.
inline TopologyAgreement topologies_agree(const SetExpr& e) {
  if (e.blocks.empty()) throw std::domain_error("topologies_agree: empty set");
  std::vector<detail::Segment> segs = detail::collect_segments(e);
  detail::Segment cover = segs.front();
  for (std::size_t i = 1; i < segs.size(); ++i) {
    const detail::Segment& nxt = segs[i];
    if (cover.hi < nxt.lo && cover.hi_att != nxt.lo_att)
      return {false, make_gap(cover.hi.value, nxt.lo.value, cover.hi_att, nxt.lo_att)};
    if (cover.hi < nxt.hi) {
      cover.hi = nxt.hi;
      cover.hi_att = nxt.hi_att;
    } else if (cover.hi == nxt.hi) {
      cover.hi_att = cover.hi_att || nxt.hi_att;
    }
  }
  return {true, std::nullopt};
}

// --- property report -----------------------------------------------------------

struct Finding {
  Tri value = Tri::Unknown;
  std::string note;
  std::vector<Quad> witnesses;

  bool yes() const { return value == Tri::Yes; }
  bool no() const { return value == Tri::No; }
};

struct PropertyReport {
  Finding countable;
  Finding compact;
  Finding perfect;
  Finding nowhere_dense;
  Finding has_isolated_points;
  Finding all_points_two_sided_limits;
};

namespace detail {

inline bool block_is_finite_set(const Block& b) {
  if (b.carrier.kind == CarrierKind::FinitePoints) return true;
  if (b.carrier.kind == CarrierKind::Integers)
    return b.lo.finite_tag() && b.hi.finite_tag();
  return false;
}

inline Quad irrational_inside(const Block& b) {
  if (b.lo.finite_tag() && b.hi.finite_tag())
    return Quad{b.lo.value, (b.hi.value - b.lo.value) / 4};  // lo + w*sqrt2/4
  if (b.lo.finite_tag()) return Quad{b.lo.value, 1};
  if (b.hi.finite_tag()) return Quad{b.hi.value, -1};
  return Quad{0, 1};
}

// Closed as a subset of the line?
inline Finding block_closed(const Block& b) {
  switch (b.carrier.kind) {
    case CarrierKind::Integers:
    case CarrierKind::FinitePoints:
      return {Tri::Yes, "", {}};
    case CarrierKind::Reals: {
      if (b.lo.finite_tag() && !b.lo_closed)
        return {Tri::No, "missing endpoint " + rat_to_string(b.lo.value) + " of " + to_string(b),
                {Quad{b.lo.value, 0}}};
      if (b.hi.finite_tag() && !b.hi_closed)
        return {Tri::No, "missing endpoint " + rat_to_string(b.hi.value) + " of " + to_string(b),
                {Quad{b.hi.value, 0}}};
      return {Tri::Yes, "", {}};
    }
    case CarrierKind::Rationals:
    case CarrierKind::Dyadics:
      return {Tri::No, "irrational limit points of " + to_string(b) + " are not members",
              {irrational_inside(b)}};
    case CarrierKind::Cantor: {
      if (!b.lo_closed)
        return {Tri::No, "missing endpoint " + rat_to_string(b.lo.value) + " of " + to_string(b),
                {Quad{b.lo.value, 0}}};
      if (!b.hi_closed)
        return {Tri::No, "missing endpoint " + rat_to_string(b.hi.value) + " of " + to_string(b),
                {Quad{b.hi.value, 0}}};
      return {Tri::Yes, "", {}};
    }
    case CarrierKind::CantorEnds: {
      // a 2-cycle of the construction orbit: a member of the Cantor set that
      // is never an endpoint, hence a limit of endpoints outside the set
      const Rational& rho = b.carrier.rho;
      Rational t = rho / (1 + rho);
      Rational w = b.lo.value + t * (b.hi.value - b.lo.value);
      return {Tri::No,
              "limit point " + rat_to_string(w) + " of " + to_string(b) + " is not a member",
              {Quad{w, 0}}};
    }
  }
  return {Tri::Unknown, "", {}};
}

// Closed hull reached by a block's accumulation points, for coverage logic.
// Dense carriers accumulate on their whole closed interval; Cantor carriers
// only on their member set; discrete carriers nowhere.
struct Hull {
  ExtendedReal lo, hi;
  const Block* cantor = nullptr;  // set when accumulation needs a member test
};

inline std::vector<Hull> accumulation_hulls(const SetExpr& e, const Block* skip = nullptr) {
  std::vector<Hull> hulls;
  for (const Block& b : e.blocks) {
    if (&b == skip) continue;
    switch (b.carrier.kind) {
      case CarrierKind::Reals:
      case CarrierKind::Rationals:
      case CarrierKind::Dyadics:
        hulls.push_back({b.lo, b.hi, nullptr});
        break;
      case CarrierKind::Cantor:
      case CarrierKind::CantorEnds:
        hulls.push_back({b.lo, b.hi, &b});
        break;
      default:
        break;
    }
  }
  return hulls;
}

// Smallest integer in [lo, hi] (closed), if any.
inline std::optional<Rational> integer_in(const ExtendedReal& lo, const ExtendedReal& hi) {
  if (hi < lo) return std::nullopt;
  if (!lo.finite_tag()) {
    if (!hi.finite_tag()) return Rational(0);
    return Rational(floor_rat(hi.value));
  }
  Rational n(ceil_rat(lo.value));
  if (hi.finite_tag() && ExtendedReal::finite(n) > hi) return std::nullopt;
  return n;
}

}  // namespace detail

inline PropertyReport check_properties(const SetExpr& e) {
  if (e.blocks.empty()) throw std::domain_error("check_properties: empty set");
  PropertyReport r;

  // countable (countably infinite)
  {
    r.countable = {Tri::Yes, "", {}};
    bool all_finite = true;
    for (const Block& b : e.blocks) {
      if (b.carrier.kind == CarrierKind::Reals || b.carrier.kind == CarrierKind::Cantor) {
        r.countable = {Tri::No, "uncountable block " + to_string(b), {}};
        break;
      }
      all_finite = all_finite && detail::block_is_finite_set(b);
    }
    if (r.countable.yes() && all_finite)
      r.countable = {Tri::No, "the set is finite", {}};
  }

  // closedness per block, compactness overall
  Finding closed_all{Tri::Yes, "", {}};
  for (const Block& b : e.blocks) {
    Finding f = detail::block_closed(b);
    if (f.no()) {
      closed_all = f;
      break;
    }
    if (f.value == Tri::Unknown && closed_all.yes()) closed_all = f;
  }
  {
    Bounds bd = bounds(e);
    if (!bd.inf.finite_tag() || !bd.sup.finite_tag())
      r.compact = {Tri::No, "the set is unbounded", {}};
    else
      r.compact = closed_all;
  }

  // nowhere dense: no block's closure contains an interval
  {
    r.nowhere_dense = {Tri::Yes, "", {}};
    for (const Block& b : e.blocks) {
      if (b.carrier.kind == CarrierKind::Reals || b.carrier.kind == CarrierKind::Rationals ||
          b.carrier.kind == CarrierKind::Dyadics) {
        r.nowhere_dense = {Tri::No, "closure of " + to_string(b) + " has nonempty interior",
                           {}};
        break;
      }
    }
  }

  // isolated points: only discrete-carrier members are candidates
  {
    r.has_isolated_points = {Tri::No, "", {}};
    bool unknown = false;
    auto record = [&](const Rational& p) {
      r.has_isolated_points.value = Tri::Yes;
      r.has_isolated_points.witnesses.push_back(Quad{p, 0});
    };
    auto point_isolated = [&](const Rational& p) -> Tri {
      Tri below = accumulates(e, p, true);
      Tri above = accumulates(e, p, false);
      if (below == Tri::Yes || above == Tri::Yes) return Tri::No;
      if (below == Tri::Unknown || above == Tri::Unknown) return Tri::Unknown;
      return Tri::Yes;
    };
    for (const Block& b : e.blocks) {
      if (r.has_isolated_points.value == Tri::Yes) break;
      if (b.carrier.kind == CarrierKind::FinitePoints) {
        for (const Rational& p : b.carrier.points) {
          Tri t = point_isolated(p);
          if (t == Tri::Yes) {
            record(p);
            break;
          }
          if (t == Tri::Unknown) unknown = true;
        }
      } else if (b.carrier.kind == CarrierKind::Integers) {
        if (b.lo.finite_tag() && b.hi.finite_tag() && b.hi.value - b.lo.value <= 4096) {
          for (Rational n = b.lo.value; n <= b.hi.value; n += 1) {
            Tri t = point_isolated(n);
            if (t == Tri::Yes) {
              record(n);
              break;
            }
            if (t == Tri::Unknown) unknown = true;
          }
        } else {
          // find a member integer left uncovered by every accumulation hull
          auto hulls = detail::accumulation_hulls(e, &b);
          std::vector<std::pair<ExtendedReal, ExtendedReal>> regions{{b.lo, b.hi}};
          for (const auto& h : hulls) {
            std::vector<std::pair<ExtendedReal, ExtendedReal>> next;
            for (auto& reg : regions) {
              if (h.hi < reg.first || reg.second < h.lo) {
                next.push_back(reg);
                continue;
              }
              if (reg.first < h.lo && h.lo.finite_tag())
                next.emplace_back(reg.first,
                                  ExtendedReal::finite(h.lo.value - Rational(1, 2)));
              if (h.hi < reg.second && h.hi.finite_tag())
                next.emplace_back(ExtendedReal::finite(h.hi.value + Rational(1, 2)),
                                  reg.second);
            }
            regions = std::move(next);
          }
          bool found = false;
          for (const auto& reg : regions) {
            auto n = detail::integer_in(reg.first, reg.second);
            if (n && interval_contains(b, *n)) {
              Tri t = point_isolated(*n);
              if (t == Tri::Yes) {
                record(*n);
                found = true;
              } else if (t == Tri::Unknown)
                unknown = true;
              break;
            }
          }
          if (!found) {
            // members inside cantor hulls may still be isolated non-members
            for (const auto& h : hulls) {
              if (!h.cantor || r.has_isolated_points.value == Tri::Yes) continue;
              auto n0 = detail::integer_in(h.lo, h.hi);
              if (!n0) continue;
              Rational n = *n0;
              std::size_t scanned = 0;
              while (ExtendedReal::finite(n) <= h.hi && scanned++ < 4096) {
                if (interval_contains(b, n)) {
                  Tri t = point_isolated(n);
                  if (t == Tri::Yes) {
                    record(n);
                    break;
                  }
                  if (t == Tri::Unknown) unknown = true;
                }
                n += 1;
              }
            }
          }
        }
      }
    }
    if (r.has_isolated_points.value == Tri::No && unknown)
      r.has_isolated_points.value = Tri::Unknown;
    if (r.has_isolated_points.value == Tri::Yes)
      r.has_isolated_points.note = "isolated point found";
  }

  // perfect: closed and no isolated points
  {
    if (closed_all.no())
      r.perfect = closed_all;
    else if (r.has_isolated_points.value == Tri::Yes)
      r.perfect = {Tri::No, "the set has isolated points", r.has_isolated_points.witnesses};
    else if (closed_all.yes() && r.has_isolated_points.no())
      r.perfect = {Tri::Yes, "", {}};
    else
      r.perfect = {Tri::Unknown, "undecided closedness or isolation", {}};
  }

  // every member a 2-sided limit point
  {
    Finding f{Tri::Yes, "", {}};
    bool unknown = false;
    std::set<Rational> checked;
    auto fail = [&](const Rational& p) {
      f.value = Tri::No;
      f.witnesses.push_back(Quad{p, 0});
    };
    auto check_point = [&](const Rational& p) {
      if (!checked.insert(p).second) return;
      Tri below = accumulates(e, p, true);
      Tri above = accumulates(e, p, false);
      if (below == Tri::No || above == Tri::No) {
        fail(p);
        return;
      }
      if (below == Tri::Unknown || above == Tri::Unknown) unknown = true;
    };
    if (r.has_isolated_points.value == Tri::Yes) {
      f.value = Tri::No;
      f.witnesses = r.has_isolated_points.witnesses;
    } else {
      for (const Block& b : e.blocks) {
        // attained extremes of every block are one-sided unless a neighbor covers them
        MemberBound mi = member_inf(b), ms = member_sup(b);
        if (mi.attained) check_point(mi.value.value);
        if (ms.attained && !(mi.attained && ms.value == mi.value))
          check_point(ms.value.value);
        if (b.carrier.kind == CarrierKind::FinitePoints) {
          for (const Rational& p : b.carrier.points) check_point(p);
        } else if (b.carrier.kind == CarrierKind::Integers) {
          // one-sided failures can only sit at hull endpoints or uncovered members
          auto hulls = detail::accumulation_hulls(e, &b);
          std::vector<Rational> candidates;
          if (b.lo.finite_tag()) candidates.push_back(b.lo.value);
          if (b.hi.finite_tag()) candidates.push_back(b.hi.value);
          for (const auto& h : hulls) {
            for (const ExtendedReal& end : {h.lo, h.hi}) {
              if (!end.finite_tag()) continue;
              Rational fl(floor_rat(end.value));
              for (const Rational& c : {Rational(fl - 1), fl, Rational(fl + 1)})
                if (interval_contains(b, c)) candidates.push_back(c);
            }
          }
          if (b.lo.finite_tag() && b.hi.finite_tag() && b.hi.value - b.lo.value <= 4096)
            for (Rational n = b.lo.value; n <= b.hi.value; n += 1) candidates.push_back(n);
          std::sort(candidates.begin(), candidates.end());
          candidates.erase(std::unique(candidates.begin(), candidates.end()),
                           candidates.end());
          for (const Rational& c : candidates) {
            check_point(c);
            if (f.value != Tri::Yes) break;
          }
        } else if (b.carrier.kind == CarrierKind::Cantor ||
                   b.carrier.kind == CarrierKind::CantorEnds) {
          // gap endpoints are one-sided unless a neighboring block fills the
          // gap side; a dense hull covering the whole base interval fills all
          // of them at once
          auto hulls = detail::accumulation_hulls(e, &b);
          bool covered = false;
          for (const auto& h : hulls)
            if (!h.cantor && h.lo <= b.lo && b.hi <= h.hi) covered = true;
          if (!covered) {
            CantorGapTree tree(b.lo.value, b.hi.value, b.carrier.rho);
            bool found = false;
            for (std::size_t g = 1; g <= 12 && !found; ++g) {
              for (const GapPair& gp : tree.generation(g)) {
                Tri above = accumulates(e, gp.left, false);
                if (above == Tri::No) {
                  fail(gp.left);
                  found = true;
                  break;
                }
                Tri below = accumulates(e, gp.right, true);
                if (below == Tri::No) {
                  fail(gp.right);
                  found = true;
                  break;
                }
              }
            }
            if (!found) unknown = true;  // partial cover: undecided at this depth
          }
        }
      }
    }
    if (f.value == Tri::Yes && unknown) f.value = Tri::Unknown;
    if (f.no()) f.note = "member is not a 2-sided limit point";
    r.all_points_two_sided_limits = f;
  }

  return r;
}

// --- verdicts -----------------------------------------------------------------

enum class VerdictKind { OrderHomeoToQ, OrderHomeoToC, HomeoToQNotOrder, None };

struct Verdict {
  VerdictKind kind;
  std::vector<std::string> justification;
};

inline std::string to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::OrderHomeoToQ: return "OrderHomeoToQ";
    case VerdictKind::OrderHomeoToC: return "OrderHomeoToC";
    case VerdictKind::HomeoToQNotOrder: return "HomeoToQNotOrder";
    default: return "None";
  }
}

inline std::string to_string(Tri t) {
  switch (t) {
    case Tri::Yes: return "yes";
    case Tri::No: return "no";
    default: return "unknown";
  }
}

inline Verdict characterize(const SetExpr& e) {
  PropertyReport p = check_properties(e);
  auto cite = [](const std::string& name, const Finding& f) {
    std::string s = name + ": " + to_string(f.value);
    if (!f.note.empty()) s += " (" + f.note + ")";
    if (!f.witnesses.empty()) s += " [witness " + quad_to_string(f.witnesses.front()) + "]";
    return s;
  };
  Verdict v{VerdictKind::None, {}};
  if (p.perfect.yes() && p.nowhere_dense.yes() && p.compact.yes()) {
    v.kind = VerdictKind::OrderHomeoToC;
    v.justification = {cite("perfect", p.perfect), cite("nowhere_dense", p.nowhere_dense),
                       cite("compact", p.compact)};
    return v;
  }
  if (p.countable.yes() && p.all_points_two_sided_limits.yes()) {
    v.kind = VerdictKind::OrderHomeoToQ;
    v.justification = {cite("countable", p.countable),
                       cite("all_points_two_sided_limits", p.all_points_two_sided_limits)};
    return v;
  }
  if (p.countable.yes() && p.has_isolated_points.no()) {
    v.kind = VerdictKind::HomeoToQNotOrder;
    v.justification = {cite("countable", p.countable),
                       cite("has_isolated_points", p.has_isolated_points),
                       cite("all_points_two_sided_limits", p.all_points_two_sided_limits)};
    return v;
  }
  v.justification = {cite("countable", p.countable), cite("compact", p.compact),
                     cite("perfect", p.perfect), cite("nowhere_dense", p.nowhere_dense),
                     cite("has_isolated_points", p.has_isolated_points),
                     cite("all_points_two_sided_limits", p.all_points_two_sided_limits)};
  return v;
}

// --- JSON ----------------------------------------------------------------------

inline std::string to_string(GapShape s) {
  switch (s) {
    case GapShape::Open: return "open";
    case GapShape::Closed: return "closed";
    case GapShape::Singleton: return "singleton";
    case GapShape::LeftOpen: return "left-open";
    default: return "right-open";
  }
}

inline std::string to_string(GapKind k) {
  switch (k) {
    case GapKind::Essential: return "essential";
    case GapKind::Dedekind: return "dedekind";
    default: return "pseudo";
  }
}

inline GapShape gap_shape_from_string(const std::string& s) {
  if (s == "open") return GapShape::Open;
  if (s == "closed") return GapShape::Closed;
  if (s == "singleton") return GapShape::Singleton;
  if (s == "left-open") return GapShape::LeftOpen;
  if (s == "right-open") return GapShape::RightOpen;
  throw std::domain_error("unknown gap shape: " + s);
}

inline void to_json(nlohmann::json& j, const Gap& g) {
  j = {{"lo", rat_to_string(g.lo)},
       {"hi", rat_to_string(g.hi)},
       {"shape", to_string(g.shape)},
       {"kind", to_string(g.kind)}};
}

inline void from_json(const nlohmann::json& j, Gap& g) {
  g.lo = parse_rational(j.at("lo").get<std::string>());
  g.hi = parse_rational(j.at("hi").get<std::string>());
  g.shape = gap_shape_from_string(j.at("shape").get<std::string>());
  g.kind = kind_of(g.shape);
}

inline void to_json(nlohmann::json& j, const GapFamily& f) {
  j = {{"block", to_string(f.host_block)},
       {"kind", to_string(f.kind)},
       {"cardinality", f.cardinality == Cardinality::Countable ? "countable" : "uncountable"},
       {"description", f.description}};
}

inline void to_json(nlohmann::json& j, const Ray& r) {
  j = {{"side", r.below ? "below" : "above"},
       {"bound", to_string(r.bound)},
       {"closed", r.closed}};
}

inline ExtendedReal extended_from_string(const std::string& s) {
  if (s == "-inf") return ExtendedReal::neg_inf();
  if (s == "+inf" || s == "inf") return ExtendedReal::pos_inf();
  return ExtendedReal::finite(parse_rational(s));
}

inline void from_json(const nlohmann::json& j, Ray& r) {
  r.below = j.at("side").get<std::string>() == "below";
  r.bound = extended_from_string(j.at("bound").get<std::string>());
  r.closed = j.at("closed").get<bool>();
}

inline void from_json(const nlohmann::json& j, GapFamily& f) {
  SetExpr host = parse_set(j.at("block").get<std::string>());
  f.host_block = host.blocks.at(0);
  std::string kind = j.at("kind").get<std::string>();
  f.kind = kind == "essential" ? GapKind::Essential
                               : (kind == "dedekind" ? GapKind::Dedekind : GapKind::Pseudo);
  f.cardinality = j.at("cardinality").get<std::string>() == "countable"
                      ? Cardinality::Countable
                      : Cardinality::Uncountable;
  f.description = j.value("description", "");
}

inline void from_json(const nlohmann::json& j, GapReport& r) {
  r.explicit_gaps = j.at("explicit").get<std::vector<Gap>>();
  r.families = j.at("families").get<std::vector<GapFamily>>();
  r.rays = j.at("rays").get<std::vector<Ray>>();
}

inline void to_json(nlohmann::json& j, const GapReport& r) {
  j = {{"explicit", r.explicit_gaps}, {"families", r.families}, {"rays", r.rays}};
}

}  // namespace ordtop
