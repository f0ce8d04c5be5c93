#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ordtop/dedekind.hpp"
#include "ordtop/enumerate.hpp"
#include "ordtop/setdsl_parser.hpp"

using namespace ordtop;

namespace {

Stream<Quad> as_quads(Stream<Rational> s) {
  return s.map<Quad>([](const Rational& q) { return Quad(q); });
}

// Independent lock-step oracle: descend both construction trees together,
// mapping kept interval to kept interval, until the target interval is small
// or the query hits an interval endpoint. Never builds the endpoint iso.
struct OracleResult {
  Quad lo, hi;
};
OracleResult lockstep_oracle(const Rational& x, const Rational& rho_x, const Rational& rho_y,
                             const Rational& tol) {
  Rational xl = 0, xh = 1, yl = 0, yh = 1;
  for (int iter = 0; iter < 4000; ++iter) {
    if (x == xl) return {Quad(yl), Quad(yl)};
    if (x == xh) return {Quad(yh), Quad(yh)};
    if (yh - yl <= tol) return {Quad(yl), Quad(yh)};
    Rational wx = xh - xl, wy = yh - yl;
    Rational gxl = xl + rho_x * wx, gxh = xh - rho_x * wx;
    Rational gyl = yl + rho_y * wy, gyh = yh - rho_y * wy;
    if (x <= gxl) {
      xh = gxl;
      yh = gyl;
    } else if (x >= gxh) {
      xl = gxh;
      yl = gyh;
    } else {
      throw std::logic_error("oracle: query not in the domain set");
    }
  }
  throw std::logic_error("oracle: did not converge");
}

// members of the middle-thirds set with small ternary period, via the codec
std::vector<Rational> cantor_members(unsigned seed, int count) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> bit(0, 1), len(1, 10);
  std::vector<Rational> out;
  std::set<Rational> seen;
  while (static_cast<int>(out.size()) < count) {
    Integer pre = 0, three_L = 1, per = 0, three_p = 1;
    int L = len(rng), P = len(rng);
    for (int k = 0; k < L; ++k) {
      pre = pre * 3 + 2 * bit(rng);
      three_L *= 3;
    }
    for (int k = 0; k < P; ++k) {
      per = per * 3 + 2 * bit(rng);
      three_p *= 3;
    }
    Rational q = Rational(pre, three_L) + Rational(per, three_p - 1) / Rational(three_L);
    if (seen.insert(q).second) out.push_back(q);
  }
  return out;
}

}  // namespace

TEST_CASE("plain completion map on the identity") {
  QuadEnumOrder q{as_quads(enum_rationals())};
  CompletionMap m(q, q, parse_set("(-inf,+inf)"), parse_set("(-inf,+inf)"));
  Bracket at0 = extend_eval(m, Quad(0), Quad{Rational(1, 100), 0}, 100000);
  CHECK(at0 == Bracket(Quad(0)));

  // 1 + sqrt2 is not a base point: bracket of width <= 1/100 containing it
  Quad target{1, 1};
  Bracket b = extend_eval(m, target, Quad{Rational(1, 100), 0}, 200000);
  CHECK(b.lo < target);
  CHECK(target < b.hi);
  CHECK(b.width() <= Quad{Rational(1, 100), 0});

  // nested refinements
  Bracket b10 = extend_eval(m, target, Quad{Rational(1, 10), 0}, 200000);
  Bracket b1000 = extend_eval(m, target, Quad{Rational(1, 1000), 0}, 400000);
  CHECK(b10.contains(b));
  CHECK(b.contains(b1000));
  CHECK(b1000.contains(target));
}

TEST_CASE("gap endpoint streams") {
  GapEndpoints g = gap_endpoints(parse_set("C"));
  CHECK(g.a == 0);
  CHECK(g.b == 1);
  auto lefts = g.left.take(3);
  auto rights = g.right.take(3);
  CHECK(lefts == std::vector<Rational>{Rational(1, 3), Rational(1, 9), Rational(7, 9)});
  CHECK(rights == std::vector<Rational>{Rational(2, 3), Rational(2, 9), Rational(8, 9)});

  GapEndpoints f = gap_endpoints(parse_set("[0,1]&cantor(2/5)"));
  CHECK(f.left.at(0) == Rational(2, 5));
  CHECK(f.right.at(0) == Rational(3, 5));

  CHECK_THROWS_AS(gap_endpoints(parse_set("[0,1]")), not_in_domain);
}

TEST_CASE("left and right endpoint streams are paired and disjoint") {
  GapEndpoints g = gap_endpoints(parse_set("C"));
  auto lefts = g.left.take(100);
  auto rights = g.right.take(100);
  std::set<Rational> left_set(lefts.begin(), lefts.end());
  for (std::size_t k = 0; k < 100; ++k) {
    CHECK(lefts[k] < rights[k]);  // same gap, in order
    CHECK(!left_set.count(rights[k]));
  }
}

TEST_CASE("brouwer map of a set with itself is the identity") {
  SetExpr c = parse_set("C");
  CompletionMap m = brouwer_map(c, c);
  for (const Rational& q : {Rational(0), Rational(1), Rational(1, 3), Rational(2, 3),
                            Rational(1, 9), Rational(8, 9)}) {
    Bracket b = extend_eval(m, Quad(q), Quad{Rational(1, 1000000), 0}, 64);
    CHECK(b == Bracket(Quad(q)));
  }
  // a non-endpoint member: bracket containing the point itself
  Bracket b = extend_eval(m, Quad(Rational(1, 4)), Quad{Rational(1, 1000000), 0}, 64);
  CHECK(b.contains(Quad(Rational(1, 4))));
  CHECK(b.width() <= Quad{Rational(1, 1000000), 0});
}

TEST_CASE("thirds to fifths endpoint images") {
  CompletionMap m = brouwer_map(parse_set("C"), parse_set("[0,1]&cantor(2/5)"));
  auto eps = Quad{Rational(1, 1000000), 0};
  CHECK(extend_eval(m, Quad(0), eps, 64) == Bracket(Quad(0)));
  CHECK(extend_eval(m, Quad(1), eps, 64) == Bracket(Quad(1)));
  CHECK(extend_eval(m, Quad(Rational(1, 3)), eps, 64) == Bracket(Quad(Rational(2, 5))));
  CHECK(extend_eval(m, Quad(Rational(2, 3)), eps, 64) == Bracket(Quad(Rational(3, 5))));
  // second generation: left endpoint of (1/9,2/9) pairs with (4/25,6/25)
  CHECK(extend_eval(m, Quad(Rational(1, 9)), eps, 64) == Bracket(Quad(Rational(4, 25))));
}

TEST_CASE("endpoint fidelity across the first generations") {
  CompletionMap m = brouwer_map(parse_set("C"), parse_set("[0,1]&cantor(2/5)"));
  GapEndpoints gx = gap_endpoints(parse_set("C"));
  GapEndpoints gy = gap_endpoints(parse_set("[0,1]&cantor(2/5)"));
  auto eps = Quad{Rational(1, 1000), 0};
  for (std::size_t k = 0; k < 30; ++k) {
    Bracket bl = extend_eval(m, Quad(*gx.left.at(k)), eps, 64);
    REQUIRE(bl.degenerate());
    CHECK(bl.lo == Quad(*gy.left.at(k)));
    Bracket br = extend_eval(m, Quad(*gx.right.at(k)), eps, 64);
    REQUIRE(br.degenerate());
    CHECK(br.lo == Quad(*gy.right.at(k)));
  }
}

TEST_CASE("brackets agree with the lock-step oracle") {
  CompletionMap m = brouwer_map(parse_set("C"), parse_set("[0,1]&cantor(2/5)"));
  auto queries = cantor_members(101, 60);
  Quad eps{Rational(1, 1000000), 0};
  for (const Rational& q : queries) {
    Bracket b = extend_eval(m, Quad(q), eps, 64);
    CHECK(b.width() <= eps);
    // drive the oracle until its interval fits inside the bracket
    Rational tol(1, 1000000);
    OracleResult o = lockstep_oracle(q, Rational(1, 3), Rational(2, 5), tol);
    int tries = 0;
    while (!(b.lo <= o.lo && o.hi <= b.hi) && tries++ < 30) {
      tol /= 1000;
      o = lockstep_oracle(q, Rational(1, 3), Rational(2, 5), tol);
    }
    CHECK(b.lo <= o.lo);
    CHECK(o.hi <= b.hi);
  }
}

TEST_CASE("monotone across queries") {
  CompletionMap m = brouwer_map(parse_set("C"), parse_set("[0,1]&cantor(2/5)"));
  auto queries = cantor_members(77, 40);
  std::sort(queries.begin(), queries.end());
  Quad eps{Rational(1, 100000), 0};
  std::vector<Bracket> brackets;
  for (const Rational& q : queries) brackets.push_back(extend_eval(m, Quad(q), eps, 64));
  for (std::size_t i = 0; i + 1 < brackets.size(); ++i) {
    // disjoint brackets of increasing queries must be ordered
    if (brackets[i].hi < brackets[i + 1].lo || brackets[i + 1].hi < brackets[i].lo)
      CHECK(brackets[i].hi < brackets[i + 1].lo);
  }
}

TEST_CASE("queries outside the set are rejected") {
  CompletionMap m = brouwer_map(parse_set("C"), parse_set("[0,1]&cantor(2/5)"));
  Quad eps{Rational(1, 1000), 0};
  CHECK_THROWS_AS(extend_eval(m, Quad(Rational(1, 2)), eps, 64), not_in_domain);
  CHECK_THROWS_AS(extend_eval(m, Quad(2), eps, 64), not_in_domain);
  CHECK_THROWS_AS(extend_eval(m, Quad(Rational(-1, 2)), eps, 64), not_in_domain);
}

TEST_CASE("generic matching handles multi-block unions") {
  SetExpr x = parse_set("C u [2,3]&cantor(1/3)");
  REQUIRE(characterize(x).kind == VerdictKind::OrderHomeoToC);
  CompletionMap m = brouwer_map(x, x);
  Quad eps{Rational(1, 1000), 0};
  // first-fit matching of a set with itself fixes every tested endpoint
  for (const Rational& q :
       {Rational(0), Rational(3), Rational(1, 3), Rational(2, 3), Rational(7, 3)}) {
    Bracket b = extend_eval(m, Quad(q), eps, 3000);
    CHECK(b == Bracket(Quad(q)));
  }
  // the explicit between-block gap maps to itself as well
  Bracket b = extend_eval(m, Quad(1), eps, 3000);
  CHECK(b == Bracket(Quad(1)));
}

TEST_CASE("brouwer precondition failures carry the failing property") {
  CHECK_THROWS_AS(brouwer_map(parse_set("[0,1]"), parse_set("C")), not_in_domain);
  CHECK_THROWS_AS(brouwer_map(parse_set("C"), parse_set("E")), not_in_domain);
  try {
    brouwer_map(parse_set("[0,1]"), parse_set("C"));
  } catch (const not_in_domain& e) {
    CHECK(std::string(e.what()).find("nowhere_dense") != std::string::npos);
  }
}
