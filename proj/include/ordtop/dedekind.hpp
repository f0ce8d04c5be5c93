#pragma once

// Unique extension of an order isomorphism of dense subsets to the Dedekind
// completions, evaluated as shrinking exact brackets, and the assembly of the
// completion map between Cantor-like sets: match the gap-endpoint skeletons
// (left with left, right with right, extremes with extremes) and extend. When
// a query lands on a gap endpoint the image is exact; everywhere else the
// answer is a bracket of requested width that provably contains the value.

#include <memory>
#include <variant>

#include "ordtop/backforth.hpp"
#include "ordtop/bracket.hpp"
#include "ordtop/gaps.hpp"
#include "ordtop/gaptree.hpp"

namespace ordtop {

struct not_in_domain : std::domain_error {
  using std::domain_error::domain_error;
};

// One deleted interval, as a unit of the gap order.
struct GapUnit {
  std::size_t index;  // position in the canonical enumeration
  Rational left, right;
};

struct GapUnitLess {
  bool operator()(const GapUnit& x, const GapUnit& y) const { return x.left < y.left; }
};

namespace detail {

// Canonical gap enumeration of a union of Cantor-like blocks: stage 1 holds
// the explicit between-block gaps and every block's first-generation gap,
// stage k the k-th generation of every block; within a stage, left to right.
inline Stream<GapUnit> gap_unit_stream(const SetExpr& e) {
  auto trees = std::make_shared<std::vector<CantorGapTree>>();
  for (const Block& b : e.blocks)
    if (b.carrier.kind == CarrierKind::Cantor || b.carrier.kind == CarrierKind::CantorEnds)
      trees->emplace_back(b.lo.value, b.hi.value, b.carrier.rho);
  GapReport report = classify_gaps(e);
  auto explicit_gaps = std::make_shared<std::vector<Gap>>(report.explicit_gaps);
  struct St {
    std::size_t stage = 0;
    std::vector<GapPair> buf;
    std::size_t i = 0;
    std::size_t emitted = 0;
  };
  auto st = std::make_shared<St>();
  return Stream<GapUnit>([trees, explicit_gaps, st]() -> std::optional<GapUnit> {
    while (st->i >= st->buf.size()) {
      ++st->stage;
      st->buf.clear();
      st->i = 0;
      if (st->stage == 1)
        for (const Gap& g : *explicit_gaps) st->buf.push_back({g.lo, g.hi});
      for (const auto& tree : *trees)
        for (const GapPair& gp : tree.generation(st->stage)) st->buf.push_back(gp);
      std::sort(st->buf.begin(), st->buf.end(),
                [](const GapPair& x, const GapPair& y) { return x.left < y.left; });
      if (st->buf.empty() && st->stage > 64) return std::nullopt;  // no gaps at all
    }
    const GapPair& gp = st->buf[st->i++];
    return GapUnit{st->emitted++, gp.left, gp.right};
  });
}

}  // namespace detail

struct GapEndpoints {
  Stream<Rational> left, right;  // paired: k-th left belongs with k-th right
  Rational a, b;                 // the extremes
};

// pre: the description characterizes as order-homeomorphic to the Cantor set
inline GapEndpoints gap_endpoints(const SetExpr& e) {
  Verdict v = characterize(e);
  if (v.kind != VerdictKind::OrderHomeoToC) {
    std::string why;
    for (const auto& s : v.justification) why += "; " + s;
    throw not_in_domain("gap_endpoints: set is not order-homeomorphic to the Cantor set" +
                        why);
  }
  Bounds bd = bounds(e);
  auto units = detail::gap_unit_stream(e);
  return GapEndpoints{
      units.map<Rational>([](const GapUnit& u) { return u.left; }),
      units.map<Rational>([](const GapUnit& u) { return u.right; }),
      bd.inf.value, bd.sup.value};
}

// --- the completion map -------------------------------------------------------

class CompletionMap {
 public:
  // Wrap an arbitrary base isomorphism of dense suborders A -> B; the
  // extension to the completions is evaluated by bracketing queries between
  // absorbed base points.
  CompletionMap(QuadEnumOrder domain_enum, QuadEnumOrder codomain_enum, SetExpr domain_desc,
                SetExpr codomain_desc)
      : state_(std::make_shared<State>(State{
            PlainState{QuadLazyIso(domain_enum, codomain_enum), domain_enum, codomain_enum},
            std::move(domain_desc), std::move(codomain_desc)})) {}

  static CompletionMap paired_cantor(const SetExpr& X, const SetExpr& Y) {
    const Block& bx = X.blocks.front();
    const Block& by = Y.blocks.front();
    PairedState ps{CantorGapTree(bx.lo.value, bx.hi.value, bx.carrier.rho),
                   CantorGapTree(by.lo.value, by.hi.value, by.carrier.rho)};
    return CompletionMap(std::make_shared<State>(State{std::move(ps), X, Y}));
  }

  static CompletionMap generic_gaps(const SetExpr& X, const SetExpr& Y) {
    auto ux = detail::gap_unit_stream(X);
    auto uy = detail::gap_unit_stream(Y);
    Bounds bx = bounds(X), by = bounds(Y);
    GenericState gs{
        LazyIso<GapUnit, GapUnit, GapUnitLess, GapUnitLess>(
            EnumOrder<GapUnit, GapUnitLess>{ux}, EnumOrder<GapUnit, GapUnitLess>{uy}),
        ux, uy, bx.inf.value, bx.sup.value, by.inf.value, by.sup.value};
    return CompletionMap(std::make_shared<State>(State{std::move(gs), X, Y}));
  }

  const SetExpr& domain_desc() const { return state_->domain_desc; }
  const SetExpr& codomain_desc() const { return state_->codomain_desc; }

  // Degenerate bracket on base points, otherwise a bracket of width <= eps
  // containing the unique extension value.
  Bracket extend_eval(const Quad& x, const Quad& eps, std::size_t budget) {
    if (quad_sign(eps) <= 0) throw std::domain_error("extend_eval: eps must be positive");
    if (auto* ps = std::get_if<PairedState>(&state_->impl))
      return eval_paired(*ps, x, eps, budget);
    if (auto* gs = std::get_if<GenericState>(&state_->impl))
      return eval_generic(*gs, x, eps, budget);
    return eval_plain(std::get<PlainState>(state_->impl), x, eps, budget);
  }

 private:
  struct PlainState {
    QuadLazyIso base;
    QuadEnumOrder domain_enum;
    QuadEnumOrder codomain_enum;
  };
  struct PairedState {
    CantorGapTree X, Y;
  };
  struct GenericState {
    LazyIso<GapUnit, GapUnit, GapUnitLess, GapUnitLess> iso;
    Stream<GapUnit> ux, uy;
    Rational ax, bx, ay, by;
  };
  struct State {
    std::variant<PlainState, PairedState, GenericState> impl;
    SetExpr domain_desc, codomain_desc;
  };

  explicit CompletionMap(std::shared_ptr<State> st) : state_(std::move(st)) {}

  static Bracket eval_plain(PlainState& ps, const Quad& x, const Quad& eps,
                            std::size_t budget) {
    std::optional<Quad> below, above, below_img, above_img;
    for (std::size_t i = 0; i < budget; ++i) {
      auto cand = ps.domain_enum.elements.at(i);
      if (!cand) break;  // finite base enumeration
      if (*cand == x) return Bracket(ps.base.eval(x, budget));
      if (*cand < x) {
        if (!below || *below < *cand) {
          below = cand;
          below_img.reset();
        }
      } else if (!above || *cand < *above) {
        above = cand;
        above_img.reset();
      }
      if (below && above) {
        if (!below_img) below_img = ps.base.eval(*below, budget);
        if (!above_img) above_img = ps.base.eval(*above, budget);
        if (*above_img - *below_img <= eps) return Bracket(*below_img, *above_img);
      }
    }
    throw budget_exhausted("extend_eval: no bracket of requested width within budget",
                           budget);
  }

  // Same-index matching of the two construction trees: the k-th gap of X in
  // breadth-first order corresponds to the k-th gap of Y, extremes to
  // extremes. Refinement walks the generations, narrowing the enclosing pair
  // of matched endpoints by binary search within each generation.
  static Bracket eval_paired(PairedState& ps, const Quad& x, const Quad& eps,
                             std::size_t budget) {
    const Rational &ax = ps.X.a(), &bx = ps.X.b();
    if (x == Quad(ax)) return Bracket(Quad(ps.Y.a()));
    if (x == Quad(bx)) return Bracket(Quad(ps.Y.b()));
    if (x < Quad(ax) || Quad(bx) < x)
      throw not_in_domain("extend_eval: query outside the domain interval");

    // rational endpoints are recognized exactly, at their own generation
    std::size_t endpoint_generation = 0;
    if (x.is_rational()) {
      Rational t = (x.a - ax) / (bx - ax);
      CantorOrbit orbit = classify_unit_cantor_orbit(ps.X.rho(), t, 4096);
      if (orbit.cls == CantorClass::NotMember)
        throw not_in_domain("extend_eval: query is not in the domain set");
      if (orbit.cls == CantorClass::MemberLeftEnd || orbit.cls == CantorClass::MemberRightEnd)
        endpoint_generation = orbit.steps;  // deleted at this construction stage
    }

    Quad below_img(ps.Y.a()), above_img(ps.Y.b());
    Quad below(ax), above(bx);
    for (std::size_t g = 1; g <= budget; ++g) {
      const auto& gen = ps.X.generation(g);
      const auto& img = ps.Y.generation(g);
      // first gap whose left endpoint is >= x
      std::size_t lo = 0, hi = gen.size();
      while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (Quad(gen[mid].left) < x)
          lo = mid + 1;
        else
          hi = mid;
      }
      if (lo < gen.size()) {
        const GapPair& gp = gen[lo];
        if (Quad(gp.left) == x) return Bracket(Quad(img[lo].left));
        if (x < Quad(gp.right) && Quad(gp.left) < x)
          throw not_in_domain("extend_eval: query lies inside a deleted interval");
        if (Quad(gp.left) < above) {
          above = Quad(gp.left);
          above_img = Quad(img[lo].left);
        }
      }
      if (lo > 0) {
        const GapPair& gp = gen[lo - 1];
        if (Quad(gp.right) == x) return Bracket(Quad(img[lo - 1].right));
        if (Quad(gp.left) < x && x < Quad(gp.right))
          throw not_in_domain("extend_eval: query lies inside a deleted interval");
        if (below < Quad(gp.right)) {
          below = Quad(gp.right);
          below_img = Quad(img[lo - 1].right);
        }
      }
      // an expected endpoint hit happens exactly at its generation; do not
      // settle for a bracket before then
      if (g >= endpoint_generation && above_img - below_img <= eps)
        return Bracket(below_img, above_img);
    }
    throw budget_exhausted("extend_eval: refinement budget exhausted", budget);
  }

  static Bracket eval_generic(GenericState& gs, const Quad& x, const Quad& eps,
                              std::size_t budget) {
    if (x == Quad(gs.ax)) return Bracket(Quad(gs.ay));
    if (x == Quad(gs.bx)) return Bracket(Quad(gs.by));
    if (x < Quad(gs.ax) || Quad(gs.bx) < x)
      throw not_in_domain("extend_eval: query outside the domain interval");
    auto image_of = [&](const GapUnit& u, bool left_side) {
      GapUnit v = gs.iso.eval(u, budget);
      return Quad(left_side ? v.left : v.right);
    };
    Quad below(gs.ax), above(gs.bx);
    Quad below_img(gs.ay), above_img(gs.by);
    for (std::size_t i = 0; i < budget; ++i) {
      auto u = gs.ux.at(i);
      if (!u) break;
      if (Quad(u->left) == x) return Bracket(image_of(*u, true));
      if (Quad(u->right) == x) return Bracket(image_of(*u, false));
      if (Quad(u->left) < x && x < Quad(u->right))
        throw not_in_domain("extend_eval: query lies inside a deleted interval");
      bool improved = false;
      if (Quad(u->right) < x && below < Quad(u->right)) {
        below = Quad(u->right);
        below_img = image_of(*u, false);
        improved = true;
      } else if (x < Quad(u->left) && Quad(u->left) < above) {
        above = Quad(u->left);
        above_img = image_of(*u, true);
        improved = true;
      }
      if (improved && above_img - below_img <= eps) return Bracket(below_img, above_img);
    }
    throw budget_exhausted("extend_eval: no bracket of requested width within budget",
                           budget);
  }

  std::shared_ptr<State> state_;
};

inline Bracket extend_eval(CompletionMap& m, const Quad& x, const Quad& eps,
                           std::size_t budget) {
  return m.extend_eval(x, eps, budget);
}

// The completion map between two Cantor-characterized sets. Single-block
// descriptions pair the k-th breadth-first gap of X with the k-th of Y (the
// construction trees share their in-order structure, so the matching is order
// preserving); everything else goes through the generic back-and-forth on gap
// units with first-fit witnesses.
inline CompletionMap brouwer_map(const SetExpr& X, const SetExpr& Y) {
  for (const SetExpr* e : {&X, &Y}) {
    Verdict v = characterize(*e);
    if (v.kind != VerdictKind::OrderHomeoToC) {
      std::string why;
      for (const auto& s : v.justification) why += "; " + s;
      throw not_in_domain("brouwer_map: '" + to_string(*e) +
                          "' is not order-homeomorphic to the Cantor set" + why);
    }
  }
  bool paired = X.blocks.size() == 1 && Y.blocks.size() == 1 &&
                X.blocks[0].carrier.kind == CarrierKind::Cantor &&
                Y.blocks[0].carrier.kind == CarrierKind::Cantor;
  if (paired) return CompletionMap::paired_cantor(X, Y);
  return CompletionMap::generic_gaps(X, Y);
}

}  // namespace ordtop
