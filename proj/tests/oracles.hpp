#pragma once

// Independent reference computations used by the tests. None of these go
// through the library's normal-form, elimination or spectrum code.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "abkit/xi.hpp"

namespace oracle {

using abkit::Rational;

// Normal form of a word in the letters a, b by repeated rewriting ab -> ba + bb,
// dropping words with nb or more b's. Keys are (b-power, a-power).
using Terms = std::map<std::pair<int, int>, Rational>;
Terms rewrite(const std::string& word, int nb);
Terms rewrite_sum(const std::vector<std::pair<Rational, std::string>>& words, int nb);

// Brieskorn-Pham x1^p1 + ... + xn^pn.
int bp_milnor(const std::vector<int>& p);
// Spectrum (with multiplicity, sorted) from the weight formula sum (alpha_i + 1) / p_i.
std::vector<Rational> bp_spectrum(const std::vector<int>& p);
// Jacobian algebra basis monomials x^alpha with alpha_i <= p_i - 2.
std::vector<std::vector<int>> bp_basis(const std::vector<int>& p);

// Value at x > 0 of the multivalued expansion sum c * b^m e_j(lambda), where
// e_j = x^{lambda-1} (log x)^j / j! and b is integration from 0, by quadrature.
double xi_value(const abkit::xi::XiElement& x, double at);

// a^N applied to a chain (w_0, w_1, ...) of scalars with (aW)_j = f w_j + (j-1) w_{j-1}.
std::vector<Rational> chain_power(const std::vector<Rational>& w, const Rational& f, int n);

}  // namespace oracle
