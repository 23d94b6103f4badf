#include <doctest.h>

#include "abkit/abmod.hpp"
#include "abkit/parse.hpp"

using namespace abkit;
using namespace abkit::abmod;

namespace {

std::vector<Rational> values(const SpectralData& s) {
  std::vector<Rational> v;
  for (const auto& [x, m] : s.spectrum)
    for (int i = 0; i < m; ++i) v.push_back(x);
  return v;
}

FinitePresentation cyclic(const std::string& rel, int nb) {
  FinitePresentation p;
  p.generators = 1;
  p.b_truncation = nb;
  p.relations.push_back({parse::parse_word(rel, nb)});
  return p;
}

}  // namespace

TEST_CASE("diagonal module: spectrum is the diagonal") {
  auto m = ABModule::diagonal({make_rational(5, 6), make_rational(7, 6)}, 4);
  CHECK(is_simple_pole(m));
  CHECK(values(spectrum(m)) == std::vector<Rational>{make_rational(5, 6), make_rational(7, 6)});
  auto g = is_geometric(m);
  CHECK(g.verdict == Verdict::Yes);
  CHECK(g.regular);
  CHECK(g.positive);
}

TEST_CASE("verdicts separate falsity from indecision") {
  CHECK(is_geometric(ABModule::diagonal({make_rational(-1, 2)}, 4)).verdict == Verdict::No);
  CHECK(is_geometric(ABModule::diagonal({Rational(0)}, 4)).verdict == Verdict::No);
  // residue with characteristic polynomial x^2 - 2
  auto irr = ABModule::from_residue(QMatrix{{0, 2}, {1, 0}}, 4);
  CHECK(is_geometric(irr).verdict == Verdict::Indeterminate);
  CHECK(to_string(Verdict::Indeterminate) == "indeterminate");
}

TEST_CASE("saturation of a module without simple pole") {
  // a e = b^2 e : b^{-1} a has no pole term, so the saturation is already E
  ABModule m;
  m.rank = 2;
  m.b_truncation = 6;
  m.a_matrix = {{parse::parse_series("b", 6), parse::parse_series("0", 6)},
                {parse::parse_series("1", 6), parse::parse_series("2*b", 6)}};
  CHECK_FALSE(is_simple_pole(m));
  auto sat = saturate(m, 16);
  CHECK(sat.stabilized);
  CHECK(is_simple_pole(sat.module));
  auto sp = spectrum(m);
  CHECK(sp.saturated);
  CHECK(sp.rational());
}

TEST_CASE("commutation relation on module vectors") {
  auto m = ABModule::from_residue(QMatrix{{make_rational(1, 3), 1}, {0, make_rational(1, 3)}}, 5);
  ModuleVector v = {parse::parse_series("1 + b", 5), parse::parse_series("2 - b^3", 5)};
  auto ab = act_a(m, act_b(m, v)), ba = act_b(m, act_a(m, v)), bb = act_b(m, act_b(m, v));
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 5; ++k) CHECK(ab[i][k] - ba[i][k] == bb[i][k]);
}

TEST_CASE("maps into expansions") {
  auto m = ABModule::diagonal({make_rational(1, 2)}, 5);
  auto h = hom_to_xi(m, xi::XiShape{{make_rational(1, 2)}, 0, 5});
  CHECK(h.dimension == 1);
  CHECK(h.intertwines);
  CHECK(h.missing_lambdas.empty());
  auto none = hom_to_xi(m, xi::XiShape{{make_rational(1, 3)}, 0, 5});
  CHECK(none.dimension == 0);
  CHECK(none.missing_lambdas == std::vector<Rational>{make_rational(1, 2)});
}

TEST_CASE("torsion of the quotient by a") {
  // a g = 0: basis b^j g, a b^j g = j b^{j+1} g, so a^3 kills at b-truncation 4
  auto p = cyclic("a", 4);
  auto fm = to_finite_module(p, 6);
  CHECK(fm.dim == 4);
  CHECK(commutation_holds(fm));
  CHECK(subspace_dim(a_torsion(fm), fm.dim) == 4);
  auto rep = is_S_small(std::nullopt, fm);
  CHECK(rep.small());
  CHECK(rep.witness_n == 3);
  CHECK(rep.b_equals_a_tilde);
  CHECK(rep.b_power_kills);
  auto ker = torsion(p, 'a', 1, 6);
  CHECK(ker.dimension == 2);
}

TEST_CASE("torsion of the quotient by a - 1") {
  auto fm = to_finite_module(cyclic("a - 1", 4), 6);
  CHECK(fm.dim == 4);
  CHECK(subspace_dim(a_torsion(fm), fm.dim) == 0);
  CHECK(subspace_dim(b_torsion(fm), fm.dim) == 4);
  auto rep = is_S_small(std::nullopt, fm);
  CHECK_FALSE(rep.cond_b_in_a);
  CHECK(rep.cond_a_nilpotent);
  CHECK_FALSE(rep.small());
}

TEST_CASE("infinite presentations are reported as undecided") {
  CHECK_THROWS_AS(to_finite_module(cyclic("b^2", 4), 6), TruncationInsufficient);
}
