#include <doctest.h>

#include <random>

#include "abkit/derham.hpp"
#include "abkit/parse.hpp"
#include "abkit/poly.hpp"

using namespace abkit;
using namespace abkit::poly;

namespace {

const std::vector<std::string> XY{"x", "y"};
const std::vector<std::string> XYZ{"x", "y", "z"};

Form<Rational> P(const std::string& s, const std::vector<std::string>& v = XY) { return parse::parse_poly(s, v); }

Form<Rational> form(int n, Key k, const Rational& c = 1) { return monomial_form<Rational>(n, RationalRing{}, k, c); }

Form<Rational> random_form(std::mt19937& rng, int n, int p) {
  Form<Rational> f = form(n, 0, 0);
  for (int t = 0; t < 4; ++t) {
    unsigned m = 0;
    while (__builtin_popcount(m) != p) m = rng() % (1u << n);
    std::vector<int> e(n);
    for (auto& x : e) x = rng() % 4;
    f.add_term(make_key(e, m), Rational(static_cast<int>(rng() % 7) - 3));
  }
  return f;
}

}  // namespace

TEST_CASE("parser positions and identifiers") {
  try {
    parse::parse_poly("x + $", XY);
    FAIL("expected a syntax error");
  } catch (const parse::ParseError& e) {
    CHECK(e.column() == 5);
    CHECK(std::string(e.what()) == "syntax error at column 5: unexpected character '$'");
  }
  CHECK_THROWS_AS(parse::parse_poly("x + w", XY), parse::ParseError);
  CHECK_THROWS_AS(parse::parse_poly("x / y", XY), parse::ParseError);
  CHECK_THROWS_AS(parse::parse_poly("(x + y", XY), parse::ParseError);
  CHECK(parse::infer_variables("z^2 + x*y") == XYZ);
  CHECK(parse::infer_parameter_arity("x^3 + s*y") == 1);
  CHECK(parse::infer_parameter_arity("x^3 + s2*y") == 2);
  CHECK(P(" x ^ 2+y^2 ") == P("y^2 + x^2"));
  CHECK(P("(x+y)^2") == P("x^2 + 2*x*y + y^2"));
  CHECK(P("x/2 + 1/3") == P("1/2*x + 1/3"));
}

TEST_CASE("render round trip") {
  std::mt19937 rng(4);
  for (int i = 0; i < 30; ++i) {
    auto f = random_form(rng, 3, 0);
    CHECK(parse::parse_poly(render(f, XYZ), XYZ) == f);
  }
  auto g = parse::parse_param_poly("x^3 + y^7 + s*x*y^5 - (1+s)/2*y", XY, 1, 3);
  CHECK(parse::parse_param_poly(render(g, XY), XY, 1, 3) == g);
}

TEST_CASE("wedge with df examples") {
  auto dx = form(2, make_key({0, 0}, 1)), dy = form(2, make_key({0, 0}, 2));
  auto vol = make_key({0, 0}, 3);
  // f = x^2 + y^2, df ∧ dx = 2y dy∧dx = -2y dx∧dy
  CHECK(wedge_df(P("x^2+y^2"), dx) == form(2, with_mask(make_key({0, 1}), 3), -2));
  CHECK(wedge_df(P("x^2+y^2"), d(P("x^2+y^2"))).is_zero());
  // f = x^3 + y^2, x dy -> 3x^3 dx∧dy
  CHECK(wedge_df(P("x^3+y^2"), wedge(P("x"), dy)) == form(2, with_mask(make_key({3, 0}), 3), 3));
  CHECK(d(P("x*y")) == wedge(P("y"), dx) + wedge(P("x"), dy));
  (void)vol;
}

TEST_CASE("sign conventions") {
  std::mt19937 rng(8);
  auto f = P("x^3 + y^2*z + z^4 - x*y", XYZ);
  for (int p = 0; p <= 2; ++p)
    for (int i = 0; i < 10; ++i) {
      auto w = random_form(rng, 3, p);
      CHECK(d(d(w)).is_zero());
      CHECK(wedge_df(f, wedge_df(f, w)).is_zero());
      CHECK(d(wedge_df(f, w)) == -wedge_df(f, d(w)));
    }
}

TEST_CASE("parameters are constants for d") {
  auto g = parse::parse_param_poly("s*x", XY, 1, 3);
  auto expect = wedge(parse::parse_param_poly("s", XY, 1, 3),
                      monomial_form<ParamScalar>(2, ParamRing{1, 3}, make_key({0, 0}, 1), ParamScalar(1, 3, 1)));
  CHECK(d(g) == expect);
}

TEST_CASE("b on top forms through the Euler contraction") {
  auto f = P("x^2+y^2");
  auto w = derham::find_weights(f);
  auto vol = form(2, make_key({0, 0}, 3));
  // b[dx∧dy] = [f dx∧dy] for the Morse function
  CHECK(derham::b_action_top(f, w, vol) == wedge(f, vol));
  auto cusp = P("x^3+y^2");
  auto wc = derham::find_weights(cusp);
  CHECK(wc.L == 6);
  CHECK(wc.w == std::vector<int>{2, 3});
  // d of the primitive gives back the form: d(iota_E(w)/wt) = w
  auto xi = scale(euler_contract(vol, wc.w), make_rational(1, 5));
  CHECK(d(xi) == vol);
  // a = (5/6) b on dx∧dy, exactly on the polynomial level since f = sum w_i x_i d_i f
  CHECK(scale(derham::b_action_top(cusp, wc, vol), make_rational(5, 6)) == wedge(cusp, vol));
  auto two = vol + form(2, with_mask(make_key({1, 0}), 3));
  CHECK(derham::b_action_top(cusp, wc, two) ==
        derham::b_action_top(cusp, wc, vol) + derham::b_action_top(cusp, wc, form(2, with_mask(make_key({1, 0}), 3))));
}

TEST_CASE("weights") {
  auto w = derham::find_weights(P("x^3+y^7+x*y^5"));
  CHECK(w.found);
  CHECK_FALSE(w.quasi_homogeneous);
  CHECK(w.L == 21);
  CHECK(w.w == std::vector<int>{7, 3});
  CHECK(w.socle() == 32);
  auto q = derham::find_weights(P("x^2*y + y^3", XY));
  CHECK(q.quasi_homogeneous);
  CHECK_FALSE(derham::find_weights(P("x^2*y^2")).found);
}
