#pragma once

// Exact rational arithmetic used everywhere in the library. Backed by
// Boost.Multiprecision so numerators and denominators never overflow.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ordtop {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Thrown when a textual number cannot be parsed.
struct parse_error : std::runtime_error {
  std::size_t position;
  std::string expected;
  parse_error(std::string msg, std::size_t pos, std::string exp)
      : std::runtime_error(std::move(msg)), position(pos), expected(std::move(exp)) {}
};

inline Integer rat_num(const Rational& q) { return numerator(q); }
inline Integer rat_den(const Rational& q) { return denominator(q); }

inline int sign_of(const Rational& q) {
  if (q > 0) return 1;
  if (q < 0) return -1;
  return 0;
}

inline Integer floor_rat(const Rational& q) {
  Integer n = numerator(q), d = denominator(q);
  Integer t = n / d;  // truncates toward zero
  if (n < 0 && t * d != n) --t;
  return t;
}

inline Integer ceil_rat(const Rational& q) {
  Integer n = numerator(q), d = denominator(q);
  Integer t = n / d;
  if (n > 0 && t * d != n) ++t;
  return t;
}

inline bool is_integer(const Rational& q) { return denominator(q) == 1; }

inline bool is_dyadic(const Rational& q) {
  Integer d = denominator(q);
  while (d % 2 == 0) d /= 2;
  return d == 1;
}

inline Rational pow_rat(const Rational& base, unsigned exp) {
  Rational r = 1, b = base;
  while (exp > 0) {
    if (exp & 1u) r *= b;
    b *= b;
    exp >>= 1u;
  }
  return r;
}

// "p/q" or "p", optional leading '-'.
inline std::string rat_to_string(const Rational& q) {
  std::string s = numerator(q).str();
  if (denominator(q) != 1) {
    s += "/";
    s += denominator(q).str();
  }
  return s;
}

namespace detail {
inline std::optional<Rational> try_parse_rational(std::string_view text, std::size_t& pos) {
  std::size_t p = pos;
  bool neg = false;
  if (p < text.size() && (text[p] == '-' || text[p] == '+')) {
    neg = text[p] == '-';
    ++p;
  }
  std::size_t digits_start = p;
  while (p < text.size() && text[p] >= '0' && text[p] <= '9') ++p;
  if (p == digits_start) return std::nullopt;
  Integer num(std::string(text.substr(digits_start, p - digits_start)));
  Integer den = 1;
  if (p < text.size() && text[p] == '/') {
    ++p;
    std::size_t den_start = p;
    while (p < text.size() && text[p] >= '0' && text[p] <= '9') ++p;
    if (p == den_start) return std::nullopt;
    den = Integer(std::string(text.substr(den_start, p - den_start)));
    if (den == 0) return std::nullopt;
  }
  pos = p;
  Rational r(num, den);
  if (neg) r = -r;
  return r;
}
}  // namespace detail

inline Rational parse_rational(std::string_view text) {
  std::size_t pos = 0;
  auto r = detail::try_parse_rational(text, pos);
  if (!r || pos != text.size())
    throw parse_error("invalid rational: '" + std::string(text) + "'", pos, "rational p or p/q");
  return *r;
}

// Decimal rendering with `digits` fractional digits, truncated toward zero.
inline std::string rat_to_decimal(const Rational& q, unsigned digits) {
  Rational a = q < 0 ? Rational(-q) : q;
  Integer ipart = floor_rat(a);
  Rational frac = a - Rational(ipart);
  Integer scale = 1;
  for (unsigned i = 0; i < digits; ++i) scale *= 10;
  Integer fdigits = floor_rat(frac * Rational(scale));
  std::string fs = fdigits.str();
  if (fs.size() < digits) fs.insert(fs.begin(), digits - fs.size(), '0');
  std::string out;
  if (q < 0) out += "-";
  out += ipart.str();
  if (digits > 0) {
    out += ".";
    out += fs;
  }
  return out;
}

}  // namespace ordtop
