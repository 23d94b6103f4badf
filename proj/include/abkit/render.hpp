#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "abkit/abmod.hpp"
#include "abkit/derham.hpp"
#include "abkit/family.hpp"
#include "abkit/ncab.hpp"
#include "abkit/xi.hpp"

// JSON views of results. Rationals are exact fraction strings, counts are ints.
namespace abkit::render {

using Json = nlohmann::json;

std::string q(const Rational& x);
Json matrix(const QMatrix& m);
Json series_matrix(const abmod::SeriesMatrix& m);
// Spectrum values repeated by multiplicity, ascending.
Json spectrum_list(const std::vector<std::pair<Rational, int>>& s);

// c*b^j*a^k terms in left-b normal form.
std::string word(const ncab::QElement& x);
std::string xi_element(const xi::XiElement& x);

Json weights(const derham::Weights& w);
Json geometric(const abmod::GeometricReport& g);
Json smallness(const abmod::SmallnessReport& s);
Json finite_module(const abmod::FiniteModule& m);
Json quasi_iso(const derham::QuasiIsoReport& r);
Json torsion(const derham::TorsionCheck& t);
Json nullstellensatz(const derham::NullstellensatzReport& n);
Json image_of_b(const derham::ImageOfBReport& r);
Json hom(const abmod::HomToXi& h);
Json family(const family::FamilyReport& r);

// Brieskorn module summary; names are the variable names used for monomials.
Json brieskorn(const derham::BrieskornResult<Rational>& r, const std::vector<std::string>& names);

}  // namespace abkit::render
