#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "ordtop/bitstream.hpp"
#include "ordtop/quad.hpp"
#include "ordtop/rational.hpp"
#include "ordtop/ternary.hpp"

using namespace ordtop;

namespace {

// Test-side oracle: decimal comparison of a + b*sqrt2 at 50 digits, computed
// independently of quad_cmp's sign analysis.
int oracle_quad_cmp(const Quad& x, const Quad& y) {
  Integer scale = 1;
  for (int i = 0; i < 50; ++i) scale *= 10;
  Integer root = boost::multiprecision::sqrt(Integer(2) * scale * scale);
  Rational approx_x = x.a + x.b * Rational(root, scale);
  Rational approx_y = y.a + y.b * Rational(root, scale);
  // the approximation error is ~1e-50; inputs in these tests are far coarser
  if (approx_x < approx_y - Rational(1, 1000000)) return -1;
  if (approx_x > approx_y + Rational(1, 1000000)) return 1;
  return 0;
}

// Test-side oracle: resum digits by the closed geometric-series form,
// written against integer sums rather than the library's helper.
Rational resum(const std::vector<int>& pre, const std::vector<int>& per) {
  Integer pre_sum = 0, per_sum = 0, three_L = 1, three_p = 1;
  for (int d : pre) {
    pre_sum = pre_sum * 3 + d;
    three_L *= 3;
  }
  for (int d : per) {
    per_sum = per_sum * 3 + d;
    three_p *= 3;
  }
  return Rational(pre_sum, three_L) + Rational(per_sum, three_p - 1) / Rational(three_L);
}

}  // namespace

TEST_CASE("rational parse and print round") {
  CHECK(rat_to_string(parse_rational("3/4")) == "3/4");
  CHECK(rat_to_string(parse_rational("-6/8")) == "-3/4");
  CHECK(rat_to_string(parse_rational("7")) == "7");
  CHECK(parse_rational("2/4") == Rational(1, 2));
  CHECK_THROWS_AS(parse_rational("1/0"), parse_error);
  CHECK_THROWS_AS(parse_rational("x"), parse_error);
  CHECK(rat_den(parse_rational("-10/4")) == 2);  // canonical: positive denominator, reduced
}

TEST_CASE("quad comparison examples") {
  CHECK(quad_cmp(Quad{0, 1}, Quad{1, 0}) == std::strong_ordering::greater);
  // 3/2 vs sqrt2: squares 9/4 vs 2
  Quad threehalves{Rational(3, 2), 0};
  Quad sqrt2{0, 1};
  CHECK(oracle_quad_cmp(threehalves, sqrt2) == 1);
  CHECK(quad_cmp(threehalves, sqrt2) == std::strong_ordering::greater);
  CHECK(quad_cmp(Quad{Rational(1, 2), Rational(1, 3)}, Quad{Rational(1, 2), Rational(1, 3)}) ==
        std::strong_ordering::equal);
}

TEST_CASE("quad comparison agrees with decimal oracle and is a total order") {
  std::mt19937 rng(42);
  std::uniform_int_distribution<int> num(-20, 20), den(1, 9);
  std::vector<Quad> sample;
  for (int i = 0; i < 100; ++i)
    sample.push_back(Quad{Rational(num(rng), den(rng)), Rational(num(rng), den(rng))});
  for (std::size_t i = 0; i < sample.size(); ++i) {
    for (std::size_t j = 0; j < sample.size(); ++j) {
      auto c = quad_cmp(sample[i], sample[j]);
      int o = oracle_quad_cmp(sample[i], sample[j]);
      CHECK((c < 0 ? -1 : (c > 0 ? 1 : 0)) == o);
      // antisymmetry
      auto r = quad_cmp(sample[j], sample[i]);
      CHECK((c < 0) == (r > 0));
      CHECK((c == 0) == (r == 0));
    }
  }
  // transitivity on random triples
  std::uniform_int_distribution<std::size_t> pick(0, sample.size() - 1);
  for (int t = 0; t < 2000; ++t) {
    const Quad &x = sample[pick(rng)], &y = sample[pick(rng)], &z = sample[pick(rng)];
    if (quad_cmp(x, y) <= 0 && quad_cmp(y, z) <= 0) CHECK(quad_cmp(x, z) <= 0);
  }
}

TEST_CASE("quad arithmetic and printing") {
  Quad x{Rational(1, 2), Rational(1, 3)};
  CHECK(quad_to_string(x) == "1/2 + 1/3*sqrt2");
  CHECK(quad_to_string(Quad{Rational(3, 4), 0}) == "3/4");
  CHECK(parse_quad("1/2 + 1/3*sqrt2") == x);
  CHECK(parse_quad("1/2 - 1/3*sqrt2") == Quad{Rational(1, 2), Rational(-1, 3)});
  CHECK(parse_quad("-5/7") == Quad{Rational(-5, 7), 0});
  Quad sq = x * x;  // (1/2 + 1/3 s)^2 = 1/4 + 2/9 + 1/3 s
  CHECK(sq == Quad{Rational(1, 4) + Rational(2, 9), Rational(1, 3)});
  CHECK(quad_to_decimal(Quad{0, 1}, 6) == "1.414213");
}

TEST_CASE("ternary expansion examples") {
  CHECK(ternary_expansion(Rational(1, 4)) == TernaryExpansion{{}, {0, 2}});
  CHECK(ternary_expansion(Rational(2, 3)) == TernaryExpansion{{2}, {0}});
  CHECK(ternary_expansion(Rational(0)) == TernaryExpansion{{}, {0}});
  CHECK(ternary_expansion(Rational(1)) == TernaryExpansion{{}, {2}});
  CHECK(ternary_expansion(Rational(1, 3)) == TernaryExpansion{{1}, {0}});
  CHECK_THROWS_AS(ternary_expansion(Rational(5, 4)), std::domain_error);
  CHECK_THROWS_AS(ternary_expansion(Rational(-1, 4)), std::domain_error);
}

TEST_CASE("ternary alternate form") {
  auto alt = ternary_alternate(Rational(1, 3));
  REQUIRE(alt);
  CHECK(*alt == TernaryExpansion{{0}, {2}});
  CHECK(resum(alt->preperiod, alt->period) == Rational(1, 3));
  CHECK(!ternary_alternate(Rational(1, 4)));  // non-terminating: unique expansion
  CHECK(!ternary_alternate(Rational(0)));
}

TEST_CASE("ternary expansion resums exactly for random rationals") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<long> dd(1, 10000);
  for (int i = 0; i < 80; ++i) {
    long d = dd(rng);
    std::uniform_int_distribution<long> nn(0, d);
    Rational q(nn(rng), d);
    auto e = ternary_expansion(q);
    CHECK(resum(e.preperiod, e.period) == q);
  }
}

TEST_CASE("bitstream prefix stability and determinism") {
  int calls = 0;
  auto s = BitStream::from_generator([&calls](std::size_t i) {
    ++calls;
    return (i * i + i) % 3 == 0;
  });
  std::vector<bool> first;
  for (std::size_t i = 0; i < 64; ++i) first.push_back(s.bit(i));
  int calls_after_first = calls;
  for (std::size_t i = 0; i < 64; ++i) CHECK(s.bit(i) == first[i]);
  CHECK(calls == calls_after_first);  // memoized: generator consulted once per index
  // extending the prefix never changes previously read bits
  s.bit(200);
  for (std::size_t i = 0; i < 64; ++i) CHECK(s.bit(i) == first[i]);
}

TEST_CASE("periodic bitstreams answer symbolically") {
  auto p = BitStream::periodic({true}, {false, true});
  CHECK(p.bit(0));
  CHECK(!p.bit(1));
  CHECK(p.bit(2));
  CHECK(!p.bit(3));
  REQUIRE(p.symbolic());
  CHECK(p.prefix_string(4) == "1010...[periodic]");
}
