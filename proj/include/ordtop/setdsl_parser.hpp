#pragma once

// Parser for the textual set language:
//
//   expr     := term { "u" term }
//   term     := interval [ "&" carrier ] | pointset | named
//   interval := ("(" | "[") bound "," bound (")" | "]")
//   bound    := rational | "-inf" | "+inf"
//   pointset := "{" rational { "," rational } "}"
//   carrier  := "Q" | "R" | "D" | "Z" | "cantor" "(" rational ")" | "ends" "(" rational ")"
//   named    := "C" | "E" | "Q" | "D" | "Z"
//
// Whitespace insensitive; "u" is union. Errors carry position and the token
// that was expected.

#include <cctype>
#include <string>
#include <string_view>

#include "ordtop/setexpr.hpp"

namespace ordtop {

namespace detail {

class SetParser {
 public:
  explicit SetParser(std::string_view text) : text_(text) {}

  SetExpr parse() {
    SetExpr e;
    e.blocks.push_back(parse_term());
    skip_ws();
    while (!done()) {
      expect_union();
      e.blocks.push_back(parse_term());
      skip_ws();
    }
    return e;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& expected) {
    throw parse_error("parse error at position " + std::to_string(pos_) + ": expected " +
                          expected,
                      pos_, expected);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool done() {
    skip_ws();
    return pos_ >= text_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect_union() {
    skip_ws();
    if (pos_ < text_.size() && (text_[pos_] == 'u' || text_[pos_] == 'U')) {
      ++pos_;
      return;
    }
    fail("'u' (union)");
  }

  bool word_ahead(std::string_view w) {
    skip_ws();
    if (text_.substr(pos_, w.size()) != w) return false;
    std::size_t after = pos_ + w.size();
    if (after < text_.size() && std::isalnum(static_cast<unsigned char>(text_[after])))
      return false;
    return true;
  }

  Rational parse_rational_token() {
    skip_ws();
    auto r = try_parse_rational(text_, pos_);
    if (!r) fail("rational");
    return *r;
  }

  ExtendedReal parse_bound() {
    skip_ws();
    if (word_ahead("-inf")) {
      pos_ += 4;
      return ExtendedReal::neg_inf();
    }
    if (word_ahead("+inf") || word_ahead("inf")) {
      pos_ += word_ahead("+inf") ? 4 : 3;
      return ExtendedReal::pos_inf();
    }
    return ExtendedReal::finite(parse_rational_token());
  }

  Carrier parse_carrier() {
    skip_ws();
    std::size_t at = pos_;
    if (word_ahead("cantor") || word_ahead("ends")) {
      bool is_cantor = word_ahead("cantor");
      pos_ += is_cantor ? 6 : 4;
      if (!eat('(')) fail("'('");
      Rational rho = parse_rational_token();
      if (!eat(')')) fail("')'");
      if (!(rho > 0 && rho < Rational(1, 2)))
        throw parse_error("carrier parameter out of range at position " + std::to_string(at) +
                              ": need 0 < rho < 1/2, got " + rat_to_string(rho),
                          at, "0 < rho < 1/2");
      return is_cantor ? Carrier::cantor(rho) : Carrier::cantor_ends(rho);
    }
    char c = peek();
    ++pos_;
    switch (c) {
      case 'Q': return Carrier::rationals();
      case 'R': return Carrier::reals();
      case 'D': return Carrier::dyadics();
      case 'Z': return Carrier::integers();
      default: --pos_; fail("carrier (Q, R, D, Z, cantor(r), ends(r))");
    }
  }

  Block parse_term() {
    skip_ws();
    std::size_t at = pos_;
    char c = peek();
    if (c == '{') {
      ++pos_;
      std::vector<Rational> pts;
      pts.push_back(parse_rational_token());
      while (eat(',')) pts.push_back(parse_rational_token());
      if (!eat('}')) fail("'}' or ','");
      return point_block(std::move(pts));
    }
    if (c == '(' || c == '[') {
      bool lo_closed = c == '[';
      ++pos_;
      ExtendedReal lo = parse_bound();
      if (!eat(',')) fail("','");
      ExtendedReal hi = parse_bound();
      bool hi_closed;
      if (eat(']'))
        hi_closed = true;
      else if (eat(')'))
        hi_closed = false;
      else
        fail("')' or ']'");
      Carrier carrier = Carrier::reals();
      if (eat('&')) carrier = parse_carrier();
      try {
        return make_block(std::move(lo), std::move(hi), lo_closed, hi_closed,
                          std::move(carrier));
      } catch (const std::domain_error& err) {
        throw parse_error(std::string(err.what()) + " at position " + std::to_string(at), at,
                          "valid interval");
      }
    }
    // named constant
    ++pos_;
    switch (c) {
      case 'C':
        return make_block(ExtendedReal::finite(0), ExtendedReal::finite(1), true, true,
                          Carrier::cantor(Rational(1, 3)));
      case 'E':
        return make_block(ExtendedReal::finite(0), ExtendedReal::finite(1), true, true,
                          Carrier::cantor_ends(Rational(1, 3)));
      case 'Q':
        return make_block(ExtendedReal::neg_inf(), ExtendedReal::pos_inf(), false, false,
                          Carrier::rationals());
      case 'D':
        return make_block(ExtendedReal::neg_inf(), ExtendedReal::pos_inf(), false, false,
                          Carrier::dyadics());
      case 'Z':
        return make_block(ExtendedReal::neg_inf(), ExtendedReal::pos_inf(), false, false,
                          Carrier::integers());
      default:
        --pos_;
        fail("interval, point set, or named constant (C, E, Q, D, Z)");
    }
  }
};

}  // namespace detail

// Parse and normalize a set description.
inline SetExpr parse_set(std::string_view text) {
  detail::SetParser p(text);
  return normalize(p.parse());
}

}  // namespace ordtop
