#pragma once

// The engine behind the countable dense linear order isomorphism: alternately
// absorb the next domain element and the next range element into a finite
// order-preserving partial map, choosing each witness as the first element in
// enumeration order that fits the required position. First-fit makes the
// construction canonical, deterministic, and testable; density and
// unboundedness of the orders are asserted claims of the caller, surfaced as
// budget errors when a witness search comes up empty.

#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ordtop/quad.hpp"
#include "ordtop/stream.hpp"

namespace ordtop {

// Signals a violated density/unboundedness claim or an insufficient budget;
// the scan count lets the caller tell the two apart by retry policy.
struct budget_exhausted : std::runtime_error {
  std::size_t scanned;
  budget_exhausted(const std::string& what, std::size_t n)
      : std::runtime_error(what + " (scanned " + std::to_string(n) + ")"), scanned(n) {}
};

template <typename T, typename Less = std::less<T>>
struct EnumOrder {
  Stream<T> elements;  // injective
  bool no_min = true;
  bool no_max = true;
  bool no_essential_gaps = true;
  Less less{};
};

template <typename A, typename B, typename LessA = std::less<A>, typename LessB = std::less<B>>
class PartialIso {
 public:
  using Pair = std::pair<A, B>;

  const std::vector<Pair>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }

  bool in_domain(const A& a) const {
    auto it = lower_bound_first(a);
    return it != pairs_.end() && !less_a_(a, it->first);
  }

  bool in_range(const B& b) const {
    auto it = lower_bound_second(b);
    return it != pairs_.end() && !less_b_(b, it->second);
  }

  std::optional<B> image(const A& a) const {
    auto it = lower_bound_first(a);
    if (it != pairs_.end() && !less_a_(a, it->first)) return it->second;
    return std::nullopt;
  }

  std::optional<A> preimage(const B& b) const {
    auto it = lower_bound_second(b);
    if (it != pairs_.end() && !less_b_(b, it->second)) return it->first;
    return std::nullopt;
  }

  // open window (lo, hi) the image of a new domain point must fall in
  struct BWindow {
    std::optional<B> lo, hi;
  };
  BWindow window_for_domain(const A& a) const {
    BWindow w;
    auto it = lower_bound_first(a);
    if (it != pairs_.begin()) w.lo = std::prev(it)->second;
    if (it != pairs_.end()) w.hi = it->second;
    return w;
  }

  struct AWindow {
    std::optional<A> lo, hi;
  };
  AWindow window_for_range(const B& b) const {
    AWindow w;
    auto it = lower_bound_second(b);
    if (it != pairs_.begin()) w.lo = std::prev(it)->first;
    if (it != pairs_.end()) w.hi = it->first;
    return w;
  }

  // Insert a pair; both coordinates must slot strictly between the same
  // neighbors or the map would stop being order preserving.
  void insert(A a, B b) {
    auto it = lower_bound_first(a);
    if (it != pairs_.end() && !less_a_(a, it->first))
      throw std::logic_error("partial iso: domain point inserted twice");
    bool ok = (it == pairs_.begin() || less_b_(std::prev(it)->second, b)) &&
              (it == pairs_.end() || less_b_(b, it->second));
    if (!ok) throw std::logic_error("partial iso: insertion violates order preservation");
    pairs_.insert(it, Pair{std::move(a), std::move(b)});
  }

 private:
  typename std::vector<Pair>::const_iterator lower_bound_first(const A& a) const {
    return std::lower_bound(pairs_.begin(), pairs_.end(), a,
                            [this](const Pair& p, const A& v) { return less_a_(p.first, v); });
  }
  typename std::vector<Pair>::iterator lower_bound_first(const A& a) {
    return std::lower_bound(pairs_.begin(), pairs_.end(), a,
                            [this](const Pair& p, const A& v) { return less_a_(p.first, v); });
  }
  typename std::vector<Pair>::const_iterator lower_bound_second(const B& b) const {
    // order preservation keeps pairs_ sorted by both coordinates
    return std::lower_bound(pairs_.begin(), pairs_.end(), b,
                            [this](const Pair& p, const B& v) { return less_b_(p.second, v); });
  }

  std::vector<Pair> pairs_;
  LessA less_a_{};
  LessB less_b_{};
};

// Extend the domain by `a`, mapping it to the first element of B's
// enumeration that sits strictly inside the required window. No-op when `a`
// is already covered.
template <typename A, typename B, typename LessA, typename LessB, typename LessBO>
PartialIso<A, B, LessA, LessB> extend_domain(PartialIso<A, B, LessA, LessB> phi, const A& a,
                                             const EnumOrder<B, LessBO>& order,
                                             std::size_t budget) {
  if (phi.in_domain(a)) return phi;
  auto w = phi.window_for_domain(a);
  LessBO less = order.less;
  for (std::size_t i = 0; i < budget; ++i) {
    auto cand = order.elements.at(i);
    if (!cand) throw budget_exhausted("extend_domain: enumeration ended without a witness", i);
    if (w.lo && !less(*w.lo, *cand)) continue;
    if (w.hi && !less(*cand, *w.hi)) continue;
    phi.insert(a, std::move(*cand));
    return phi;
  }
  throw budget_exhausted("extend_domain: no witness within budget", budget);
}

// Mirror image: extend the range by `b`.
template <typename A, typename B, typename LessA, typename LessB, typename LessAO>
PartialIso<A, B, LessA, LessB> extend_range(PartialIso<A, B, LessA, LessB> phi, const B& b,
                                            const EnumOrder<A, LessAO>& order,
                                            std::size_t budget) {
  if (phi.in_range(b)) return phi;
  auto w = phi.window_for_range(b);
  LessAO less = order.less;
  for (std::size_t i = 0; i < budget; ++i) {
    auto cand = order.elements.at(i);
    if (!cand) throw budget_exhausted("extend_range: enumeration ended without a witness", i);
    if (w.lo && !less(*w.lo, *cand)) continue;
    if (w.hi && !less(*cand, *w.hi)) continue;
    phi.insert(std::move(*cand), b);
    return phi;
  }
  throw budget_exhausted("extend_range: no witness within budget", budget);
}

// An order isomorphism materialized pair by pair. Step 2k-1 of the schedule
// puts the k-th element of A's enumeration into the domain, step 2k puts the
// k-th element of B's enumeration into the range, exactly the alternation of
// the classical construction.
template <typename A, typename B = A, typename LessA = std::less<A>,
          typename LessB = std::less<B>>
class LazyIso {
 public:
  LazyIso(EnumOrder<A, LessA> a, EnumOrder<B, LessB> b)
      : a_order_(std::move(a)), b_order_(std::move(b)) {}

  std::size_t steps() const { return steps_; }
  const PartialIso<A, B, LessA, LessB>& state() const { return state_; }

  void step(std::size_t budget) {
    if (steps_ % 2 == 0) {
      auto a = a_order_.elements.at(a_next_);
      if (!a) throw budget_exhausted("schedule: domain enumeration ended", a_next_);
      ++a_next_;
      state_ = extend_domain(std::move(state_), *a, b_order_, budget);
    } else {
      auto b = b_order_.elements.at(b_next_);
      if (!b) throw budget_exhausted("schedule: range enumeration ended", b_next_);
      ++b_next_;
      state_ = extend_range(std::move(state_), *b, a_order_, budget);
    }
    ++steps_;
  }

  // Advance the schedule until x is in the domain; stable across calls.
  B eval(const A& x, std::size_t budget) {
    if (auto img = state_.image(x)) return *img;
    for (std::size_t i = 0; i < budget; ++i) {
      step(budget);
      if (auto img = state_.image(x)) return *img;
    }
    throw budget_exhausted("eval: element not absorbed within budget", budget);
  }

 private:
  EnumOrder<A, LessA> a_order_;
  EnumOrder<B, LessB> b_order_;
  PartialIso<A, B, LessA, LessB> state_;
  std::size_t steps_ = 0, a_next_ = 0, b_next_ = 0;
};

template <typename A, typename B, typename LessA, typename LessB>
LazyIso<A, B, LessA, LessB> build_iso(EnumOrder<A, LessA> a, EnumOrder<B, LessB> b) {
  return LazyIso<A, B, LessA, LessB>(std::move(a), std::move(b));
}

template <typename A, typename B, typename LessA, typename LessB>
B eval_iso(LazyIso<A, B, LessA, LessB>& iso, const A& x, std::size_t budget) {
  return iso.eval(x, budget);
}

using QuadEnumOrder = EnumOrder<Quad>;
using QuadPartialIso = PartialIso<Quad, Quad>;
using QuadLazyIso = LazyIso<Quad, Quad>;

}  // namespace ordtop
