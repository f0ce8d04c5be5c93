#pragma once

// Closed interval [lo, hi] with exact endpoints. The honest answer type for
// values that are typically irrational: exact when degenerate, otherwise a
// verified enclosure.

#include "ordtop/quad.hpp"

namespace ordtop {

struct Bracket {
  Quad lo, hi;

  Bracket(Quad l, Quad h) : lo(std::move(l)), hi(std::move(h)) {}
  explicit Bracket(const Quad& point) : lo(point), hi(point) {}

  bool degenerate() const { return lo == hi; }
  Quad width() const { return hi - lo; }
  bool contains(const Quad& x) const { return lo <= x && x <= hi; }
  bool contains(const Bracket& other) const { return lo <= other.lo && other.hi <= hi; }

  bool operator==(const Bracket&) const = default;
};

}  // namespace ordtop
