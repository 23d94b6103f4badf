#include <doctest.h>

#include "abkit/abmod.hpp"
#include "abkit/derham.hpp"
#include "abkit/parse.hpp"
#include "oracles.hpp"

using namespace abkit;
using namespace abkit::derham;
using poly::Form;

namespace {

Form<Rational> P(const std::string& s) { return parse::parse_poly(s, parse::infer_variables(s)); }

std::vector<Rational> spectrum_values(const BrieskornResult<Rational>& r) {
  std::vector<Rational> v;
  for (const auto& [x, m] : abmod::spectrum(to_module(r)).spectrum)
    for (int i = 0; i < m; ++i) v.push_back(x);
  return v;
}

std::string bp_text(const std::vector<int>& p) {
  static const char* names[] = {"x", "y", "z"};
  std::string s;
  for (size_t i = 0; i < p.size(); ++i) s += (i ? "+" : "") + std::string(names[i]) + "^" + std::to_string(p[i]);
  return s;
}

}  // namespace

TEST_CASE("Brieskorn-Pham examples against the monomial count and weight formula") {
  for (const auto& [p, J] : std::vector<std::pair<std::vector<int>, int>>{
           {{2, 2}, 8}, {{3, 2}, 8}, {{3, 3, 3}, 4}, {{3, 7}, 4}, {{2, 5}, 6}, {{4, 3}, 5}}) {
    CAPTURE(bp_text(p));
    Engine<Rational> e(P(bp_text(p)), Options{30, J});
    const auto& r = e.result();
    CHECK(r.exact);
    CHECK(r.mu == oracle::bp_milnor(p));
    CHECK(r.coker_b == r.mu);
    CHECK(r.ker_b_zero);
    CHECK(r.commutation);
    CHECK(r.diag_sigma);
    CHECK(r.jacobian_pivots_consistent);
    CHECK(spectrum_values(r) == oracle::bp_spectrum(p));
    // standard monomials are exactly x^alpha with alpha_i <= p_i - 2
    std::vector<std::vector<int>> basis;
    for (auto k : r.basis) {
      std::vector<int> a;
      for (size_t i = 0; i < p.size(); ++i) a.push_back(poly::exponent(k, i));
      basis.push_back(a);
    }
    auto expect = oracle::bp_basis(p);
    std::sort(basis.begin(), basis.end());
    std::sort(expect.begin(), expect.end());
    CHECK(basis == expect);
  }
}

TEST_CASE("a non-diagonal quasi-homogeneous singularity") {
  auto r = brieskorn(P("x^2*y + y^3"), Options{30, 4});
  CHECK(r.mu == 4);
  CHECK(r.diag_sigma);
  CHECK(spectrum_values(r) == std::vector<Rational>{make_rational(2, 3), 1, 1, make_rational(4, 3)});
}

TEST_CASE("semi-quasi-homogeneous input is stamped at cutoff") {
  auto r = brieskorn(P("x^3+y^7+x*y^5"), Options{30, 4});
  CHECK_FALSE(r.exact);
  CHECK(stamp(r) == "at-cutoff");
  CHECK(r.mu == 12);
  CHECK(r.commutation);
  CHECK(r.coker_b == 12);
  auto g = abmod::is_geometric(to_module(r));
  CHECK(g.verdict == abmod::Verdict::Yes);
}

TEST_CASE("rejections") {
  CHECK_THROWS_AS(brieskorn(P("x*y*z"), Options{}), NonIsolatedError);
  CHECK_THROWS_AS(brieskorn(P("x^2*y^2"), Options{}), NonIsolatedError);
  CHECK_THROWS_AS(brieskorn(P("x^3+y^7"), Options{30, 8}), CutoffError);
  CHECK_THROWS_AS(brieskorn(P("x^2+y^2+1"), Options{}), std::invalid_argument);
  CHECK(milnor_number(P("x^3+y^7"), Options{30, 1}) == 12);
}

TEST_CASE("nullstellensatz exponents") {
  Engine<Rational> cusp(P("x^3+y^2"), Options{24, 6});
  auto n = nullstellensatz(cusp);
  CHECK(n.n_ki == 1);
  CHECK(n.n_ab == 1);
  CHECK(n.k_equals_i);
  CHECK(n.euler);
  Engine<Rational> semi(P("x^3+y^7+x*y^5"), Options{30, 4});
  auto m = nullstellensatz(semi);
  CHECK(m.n_ki == 2);
  CHECK_FALSE(m.euler);
}

TEST_CASE("torsion properties") {
  Engine<Rational> cusp(P("x^3+y^2"), Options{24, 6});
  auto t = torsion_check(cusp);
  CHECK(t.a_torsion_zero);
  CHECK(t.b_torsion_zero);
  CHECK(t.separation_power > 0);
  CHECK(t.quotient.dim == 2);
  CHECK(t.quotient_a_nilpotency == 1);
  CHECK(t.quotient_b_nilpotency == 1);
  CHECK(t.quotient_commutation);
  CHECK(t.a_gives_b);
  Engine<Rational> a5(P("x^5+y^2"), Options{30, 3});
  // f lies in the Jacobian ideal, so a vanishes on E/bE
  CHECK(torsion_check(a5).quotient_a_nilpotency == 1);
}

TEST_CASE("quasi-isomorphism in degree 0 and top degree") {
  for (const auto* s : {"x^2+y^2", "x^3+y^2", "x^3+y^3+z^3"}) {
    CAPTURE(s);
    auto f = P(s);
    for (int p : {0, f.nvars}) {
      auto r = quasi_iso_check(f, p, Options{30, 4});
      CHECK(r.applicable);
      CHECK(r.iso);
      CHECK(r.dim_k == r.dim_kk);
      if (p == 0) CHECK(r.dim_k == 0);
    }
  }
  auto semi = quasi_iso_check(P("x^3+y^7+x*y^5"), 2, Options{30, 4});
  CHECK_FALSE(semi.applicable);
}

TEST_CASE("image of b criterion") {
  auto r = image_of_b_test(P("x^3+y^2"), 120, 1, Options{30, 4});
  CHECK(r.applicable);
  CHECK(r.samples == 120);
  CHECK(r.agreements == 120);
  CHECK(r.members > 0);
  CHECK(r.members < 120);
}

TEST_CASE("parametric engine agrees with the pointwise one at s = 0") {
  auto f = parse::parse_param_poly("x^3+y^2+s*x^2*y", {"x", "y"}, 1, 20);
  auto r = brieskorn(f, Options{24, 4});
  auto at0 = brieskorn(P("x^3+y^2"), Options{24, 4});
  CHECK(r.mu == at0.mu);
  CHECK(r.window_basis == at0.window_basis);
}
