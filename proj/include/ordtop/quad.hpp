#pragma once

// Values of the form a + b*sqrt(2) with a, b rational. All the distances the
// library ever compares against are rational, so any value with b != 0 is
// guaranteed to differ from every one of them; comparisons stay exact and are
// decided by sign analysis and one squaring, never by floating point.

#include <compare>
#include <string>
#include <string_view>

#include "ordtop/rational.hpp"

namespace ordtop {

struct Quad {
  Rational a;  // rational part
  Rational b;  // coefficient of sqrt(2)

  Quad() = default;
  Quad(Rational a_, Rational b_) : a(std::move(a_)), b(std::move(b_)) {}
  explicit Quad(const Rational& r) : a(r), b(0) {}
  explicit Quad(int n) : a(n), b(0) {}

  bool is_rational() const { return b == 0; }

  friend Quad operator+(const Quad& x, const Quad& y) { return {x.a + y.a, x.b + y.b}; }
  friend Quad operator-(const Quad& x, const Quad& y) { return {x.a - y.a, x.b - y.b}; }
  friend Quad operator-(const Quad& x) { return {-x.a, -x.b}; }
  friend Quad operator*(const Quad& x, const Quad& y) {
    return {x.a * y.a + 2 * x.b * y.b, x.a * y.b + x.b * y.a};
  }
  friend Quad operator*(const Rational& s, const Quad& x) { return {s * x.a, s * x.b}; }
  friend Quad operator/(const Quad& x, const Rational& s) { return {x.a / s, x.b / s}; }

  friend bool operator==(const Quad& x, const Quad& y) { return x.a == y.a && x.b == y.b; }
};

// Sign of a + b*sqrt(2). Exact: when the terms pull in opposite directions
// the comparison reduces to a^2 vs 2 b^2 (a/b = +-sqrt(2) is impossible for
// nonzero rationals, so the squares never tie).
inline int quad_sign(const Quad& x) {
  int sa = sign_of(x.a), sb = sign_of(x.b);
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  Rational a2 = x.a * x.a;
  Rational b2 = 2 * x.b * x.b;
  return a2 > b2 ? sa : sb;
}

inline std::strong_ordering quad_cmp(const Quad& x, const Quad& y) {
  int s = quad_sign(x - y);
  if (s < 0) return std::strong_ordering::less;
  if (s > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

inline bool operator<(const Quad& x, const Quad& y) { return quad_cmp(x, y) < 0; }
inline bool operator>(const Quad& x, const Quad& y) { return quad_cmp(x, y) > 0; }
inline bool operator<=(const Quad& x, const Quad& y) { return quad_cmp(x, y) <= 0; }
inline bool operator>=(const Quad& x, const Quad& y) { return quad_cmp(x, y) >= 0; }

inline Quad quad_abs(const Quad& x) { return quad_sign(x) < 0 ? -x : x; }
inline Quad quad_min(const Quad& x, const Quad& y) { return x < y ? x : y; }
inline Quad quad_max(const Quad& x, const Quad& y) { return x < y ? y : x; }

// "p/q" when b = 0, otherwise "p/q + r/s*sqrt2".
inline std::string quad_to_string(const Quad& x) {
  if (x.b == 0) return rat_to_string(x.a);
  return rat_to_string(x.a) + " + " + rat_to_string(x.b) + "*sqrt2";
}

inline Quad parse_quad(std::string_view text) {
  // strip spaces first; the grammar is tiny
  std::string s;
  for (char c : text)
    if (c != ' ' && c != '\t') s += c;
  std::size_t pos = 0;
  auto first = detail::try_parse_rational(s, pos);
  if (!first) throw parse_error("invalid quad: '" + std::string(text) + "'", 0, "rational");
  if (pos == s.size()) return Quad(*first);
  // expect "+r/s*sqrt2" or "-r/s*sqrt2"
  if (s[pos] != '+' && s[pos] != '-')
    throw parse_error("invalid quad: '" + std::string(text) + "'", pos, "'+' or '-'");
  bool neg = s[pos] == '-';
  ++pos;
  auto second = detail::try_parse_rational(s, pos);
  if (!second)
    throw parse_error("invalid quad: '" + std::string(text) + "'", pos, "rational");
  if (s.substr(pos) != "*sqrt2")
    throw parse_error("invalid quad: '" + std::string(text) + "'", pos, "*sqrt2");
  return Quad(*first, neg ? Rational(-*second) : *second);
}

// Decimal rendering: needs sqrt(2) to the requested precision, computed from
// an integer square root with two guard digits.
inline std::string quad_to_decimal(const Quad& x, unsigned digits) {
  if (x.b == 0) return rat_to_decimal(x.a, digits);
  Integer scale = 1;
  for (unsigned i = 0; i < digits + 2; ++i) scale *= 10;
  Integer sqrt2_scaled = boost::multiprecision::sqrt(Integer(2) * scale * scale);
  Rational approx = x.a + x.b * Rational(sqrt2_scaled, scale);
  return rat_to_decimal(approx, digits);
}

}  // namespace ordtop
