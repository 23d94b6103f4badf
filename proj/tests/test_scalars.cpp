#include <doctest.h>

#include "abkit/linalg.hpp"
#include "abkit/scalars.hpp"

using namespace abkit;

TEST_CASE("rationals stay canonical") {
  Rational x = make_rational(6, -4);
  CHECK(x.get_str() == "-3/2");
  CHECK(parse_rational("10/4").get_str() == "5/2");
  CHECK_THROWS(parse_rational("1/0"));
  CHECK(factorial(6) == 720);
  CHECK(binomial(8, 3) == 56);
}

TEST_CASE("parameter ring arithmetic is truncated") {
  auto s = ParamScalar::variable(1, 4, 0);
  ParamScalar one(1, 4, Rational(1));
  auto inv = (one + s).inverse();
  // 1 - s + s^2 - s^3
  CHECK(inv.to_string() == ParamScalar(1, 4, {{{0}, 1}, {{1}, -1}, {{2}, 1}, {{3}, -1}}).to_string());
  CHECK(((one + s) * inv) == one);
  CHECK((s * s * s * s).is_zero());
  CHECK_FALSE(s.is_unit());
  CHECK_THROWS(s.inverse());
  CHECK((s * s + s * s * s).divide_monomial({2}) == one + s);
  CHECK((s * s + s).monomial_gcd() == std::vector<int>{1});
  CHECK((one + s * s).specialize({Rational(-2)}) == 5);
}

TEST_CASE("dense inverse solves the augmented system") {
  QMatrix m = {{3, 0}, {0, 2}};
  auto inv = q_inverse(m);
  REQUIRE(inv);
  CHECK((*inv)[0][0] == make_rational(1, 3));
  CHECK((*inv)[1][1] == make_rational(1, 2));
  QMatrix g = {{1, 2, 0}, {2, 1, 1}, {0, 1, 3}};
  auto gi = q_inverse(g);
  REQUIRE(gi);
  CHECK(q_mul(g, *gi) == q_identity(3));
  CHECK_FALSE(q_inverse(QMatrix{{1, 2}, {2, 4}}));
}

TEST_CASE("kernels and ranks") {
  QMatrix m = {{1, 2, 3}, {2, 4, 6}};
  CHECK(q_rank(m) == 1);
  auto k = q_kernel(m, 3);
  CHECK(k.size() == 2);
  for (const auto& v : k) CHECK(v[0] + 2 * v[1] + 3 * v[2] == 0);
}

TEST_CASE("characteristic polynomial and rational roots") {
  QMatrix m = {{make_rational(5, 6), 1}, {0, make_rational(7, 6)}};
  auto r = rational_roots(charpoly(m));
  REQUIRE(r.roots.size() == 2);
  CHECK(r.roots[0].first == make_rational(5, 6));
  CHECK(r.roots[1].first == make_rational(7, 6));
  CHECK(r.unresolved_degree == 0);
  // x^2 - 2 has no rational root
  auto irr = rational_roots(charpoly(QMatrix{{0, 2}, {1, 0}}));
  CHECK(irr.roots.empty());
  CHECK(irr.unresolved_degree == 2);
}

TEST_CASE("tracked elimination records combinations") {
  Echelon<Rational> e(RationalRing{}, true);
  CHECK(e.insert({{0, 1}, {1, 1}}));
  CHECK(e.insert({{1, 1}, {2, 1}}));
  auto red = e.reduce_tracked({{0, 1}, {2, -1}});
  CHECK(red.remainder.empty());
  // (1,0,-1) = g0 - g1
  std::map<int, Rational> c(red.combination.begin(), red.combination.end());
  CHECK(c[0] == 1);
  CHECK(c[1] == -1);
  CHECK_FALSE(e.insert({{0, 2}, {1, 1}, {2, -1}}));
}

TEST_CASE("parameter elimination divides monomials only when flat") {
  ParamRing ring{1, 3};
  auto s = ParamScalar::variable(1, 3, 0);
  Echelon<ParamScalar> e(ring);
  CHECK(e.insert({{0, s}, {1, s * s}}));
  CHECK(e.precision_lost() == 1);
  Echelon<ParamScalar> tracked(ring, true);
  CHECK_THROWS_AS(tracked.insert({{0, s}}), NonFreeError);
}
