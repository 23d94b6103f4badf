#include <doctest.h>

#include <cmath>
#include <random>

#include "abkit/xi.hpp"
#include "oracles.hpp"

using namespace abkit;
using namespace abkit::xi;

namespace {

XiShape shape_three() { return XiShape{{make_rational(1, 3), make_rational(1, 2), Rational(1)}, 2, 10}; }

XiElement random_element(const XiShape& s, std::mt19937& rng, int max_m) {
  XiElement x;
  for (const auto& l : s.lambdas)
    for (int j = 0; j <= s.k; ++j) {
      QSeries ser(s.b_truncation, Rational(0));
      for (int m = 0; m <= max_m && m < s.b_truncation; ++m) ser[m] = static_cast<int>(rng() % 7) - 3;
      x.coeffs[{l, j}] = ser;
    }
  return normalize(s, x);
}

XiElement sub(const XiShape& s, const XiElement& x, const XiElement& y) { return add(s, x, scale(s, y, Rational(-1))); }

}  // namespace

TEST_CASE("generator action") {
  XiShape s = shape_three();
  auto e1 = make_generator(s, make_rational(1, 2), 1);
  auto ae = act_a(s, e1);
  // a e_1 = b (lambda e_1 + e_0)
  XiElement expect;
  QSeries c1(10, Rational(0)), c0(10, Rational(0));
  c1[1] = make_rational(1, 2);
  c0[1] = 1;
  expect.coeffs[{make_rational(1, 2), 1}] = c1;
  expect.coeffs[{make_rational(1, 2), 0}] = c0;
  CHECK(ae == normalize(s, expect));
}

TEST_CASE("commutation relation on random elements") {
  XiShape s = shape_three();
  std::mt19937 rng(3);
  for (int i = 0; i < 100; ++i) {
    auto x = random_element(s, rng, 6);
    auto ab = act_a(s, act_b(s, x)), ba = act_b(s, act_a(s, x)), bb = act_b(s, act_b(s, x));
    CHECK(sub(s, ab, ba) == bb);
  }
}

TEST_CASE("action matches the calculus model") {
  XiShape s{{make_rational(1, 3), make_rational(1, 2), Rational(1)}, 1, 6};
  std::mt19937 rng(9);
  for (int i = 0; i < 4; ++i) {
    auto x = random_element(s, rng, 2);
    for (double at : {0.4, 0.9}) {
      double lhs = oracle::xi_value(act_a(s, x), at);
      CHECK(lhs == doctest::Approx(at * oracle::xi_value(x, at)).epsilon(1e-6));
      // b is integration from 0: its derivative gives back x
      const double h = 1e-4;
      auto bx = act_b(s, x);
      double deriv = (oracle::xi_value(bx, at + h) - oracle::xi_value(bx, at - h)) / (2 * h);
      CHECK(deriv == doctest::Approx(oracle::xi_value(x, at)).epsilon(1e-5));
    }
  }
}

TEST_CASE("free a-basis round trip") {
  XiShape s = shape_three();
  std::mt19937 rng(21);
  for (int i = 0; i < 20; ++i) {
    auto x = random_element(s, rng, 9);
    auto c = to_a_basis(s, x, 10);
    CHECK(from_a_basis(s, c) == x);
  }
  auto e = make_generator(s, Rational(1), 0);
  auto ae = act_a(s, e);
  CHECK(a_valuation(to_a_basis(s, ae, 10)) == 1);
}

TEST_CASE("monodromy is quasi-unipotent") {
  auto md = monodromy(shape_three());
  CHECK(semisimple_power_trivial(md, 6));
  CHECK_FALSE(semisimple_power_trivial(md, 3));
  CHECK(unipotent_blocks_valid(md));
  REQUIRE(md.blocks.size() == 3);
  CHECK(md.blocks[2].label == 0);
  // tau^2 / 2 in the corner of the k = 2 block
  CHECK(md.blocks[0].unipotent[0][2] == UPoly{0, 0, make_rational(1, 2)});
}

TEST_CASE("shape validation") {
  CHECK_THROWS(XiShape{{Rational(0)}, 0, 4}.validate());
  CHECK_THROWS(XiShape{{make_rational(3, 2)}, 0, 4}.validate());
  CHECK(tensor_with_V(shape_three(), 2).rank() == 18);
}
