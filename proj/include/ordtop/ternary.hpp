#pragma once

// Exact base-3 expansions of rationals in [0,1], as (preperiod, period) digit
// lists. The terminating expansion is the canonical one when two exist; the
// 2-repeating alternate can be requested explicitly, which is what membership
// tests for the middle-thirds set need.

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ordtop/rational.hpp"

namespace ordtop {

struct TernaryExpansion {
  std::vector<int> preperiod;
  std::vector<int> period;  // nonempty; [0] means the expansion terminates

  bool terminating() const { return period.size() == 1 && period[0] == 0; }

  bool operator==(const TernaryExpansion&) const = default;
};

// q = 0.(preperiod)(period period ...)_3 exactly, 0 <= q <= 1.
inline TernaryExpansion ternary_expansion(const Rational& q) {
  if (q < 0 || q > 1) throw std::domain_error("ternary_expansion: input outside [0,1]");
  if (q == 1) return {{}, {2}};  // 0.222..._3 is the only 0.xxx form of 1
  Integer n = numerator(q), d = denominator(q);
  std::vector<int> digits;
  std::map<Integer, std::size_t> seen;  // remainder -> index of digit it produces
  Integer r = n;
  while (true) {
    if (r == 0) return {digits, {0}};
    auto it = seen.find(r);
    if (it != seen.end()) {
      std::vector<int> pre(digits.begin(), digits.begin() + static_cast<long>(it->second));
      std::vector<int> per(digits.begin() + static_cast<long>(it->second), digits.end());
      return {pre, per};
    }
    seen.emplace(r, digits.size());
    r *= 3;
    Integer digit = r / d;
    r %= d;
    digits.push_back(static_cast<int>(digit));
  }
}

// The non-terminating twin of a terminating expansion (last nonzero digit
// decremented, then 2s forever). Exists exactly when q has two expansions.
inline std::optional<TernaryExpansion> ternary_alternate(const Rational& q) {
  TernaryExpansion canon = ternary_expansion(q);
  if (!canon.terminating() || canon.preperiod.empty()) return std::nullopt;
  std::vector<int> pre = canon.preperiod;
  while (!pre.empty() && pre.back() == 0) pre.pop_back();
  if (pre.empty()) return std::nullopt;  // q == 0
  pre.back() -= 1;
  return TernaryExpansion{pre, {2}};
}

// Exact value of an expansion, by the closed geometric-series form:
// q = (H(preperiod) + H(period) / (3^p - 1)) / 3^L with H the base-3 Horner
// sum, L = |preperiod|, p = |period|.
inline Rational ternary_value(const TernaryExpansion& e) {
  auto horner = [](const std::vector<int>& digits) {
    Integer v = 0;
    for (int d : digits) v = v * 3 + d;
    return v;
  };
  Integer three_L = 1;
  for (std::size_t i = 0; i < e.preperiod.size(); ++i) three_L *= 3;
  Integer three_p = 1;
  for (std::size_t i = 0; i < e.period.size(); ++i) three_p *= 3;
  Rational tail(horner(e.period), three_p - 1);
  return (horner(e.preperiod) + tail) / Rational(three_L);
}

}  // namespace ordtop
