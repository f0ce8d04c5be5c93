#pragma once

// The deleted-interval tree of a single Cantor-style block: at each stage
// every kept closed interval of relative length rho is split again, deleting
// the open middle. Generations are materialized lazily and cached; within a
// generation gaps are ordered left to right.

#include <cstddef>
#include <utility>
#include <vector>

#include "ordtop/rational.hpp"

namespace ordtop {

struct GapPair {
  Rational left, right;
  bool operator==(const GapPair&) const = default;
};

class CantorGapTree {
 public:
  CantorGapTree(Rational a, Rational b, Rational rho)
      : a_(std::move(a)), b_(std::move(b)), rho_(std::move(rho)) {
    kept_.emplace_back(a_, b_);
  }

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  const Rational& rho() const { return rho_; }

  // Generation g >= 1 holds 2^(g-1) gaps.
  const std::vector<GapPair>& generation(std::size_t g) const {
    while (gens_.size() < g) grow();
    return gens_[g - 1];
  }

  std::size_t generations_built() const { return gens_.size(); }

  // BFS flattening: gap 0 is generation 1, gaps 1..2 generation 2, ...
  GapPair gap_by_index(std::size_t k) const {
    std::size_t g = 1, count = 1, base = 0;
    while (k >= base + count) {
      base += count;
      count *= 2;
      ++g;
    }
    return generation(g)[k - base];
  }

  // Width of a kept interval at depth g.
  Rational kept_width(std::size_t g) const {
    return (b_ - a_) * pow_rat(rho_, static_cast<unsigned>(g));
  }

 private:
  void grow() const {
    std::vector<GapPair> gaps;
    std::vector<std::pair<Rational, Rational>> next;
    gaps.reserve(kept_.size());
    next.reserve(kept_.size() * 2);
    for (const auto& [lo, hi] : kept_) {
      Rational w = hi - lo;
      Rational gl = lo + rho_ * w;
      Rational gr = hi - rho_ * w;
      gaps.push_back({gl, gr});
      next.emplace_back(lo, gl);
      next.emplace_back(gr, hi);
    }
    gens_.push_back(std::move(gaps));
    kept_ = std::move(next);
  }

  Rational a_, b_, rho_;
  mutable std::vector<std::pair<Rational, Rational>> kept_;  // deepest level built
  mutable std::vector<std::vector<GapPair>> gens_;
};

}  // namespace ordtop
