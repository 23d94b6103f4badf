#pragma once

#include <map>
#include <utility>
#include <vector>

#include "abkit/linalg.hpp"
#include "abkit/series.hpp"

namespace abkit::xi {

// Generators e_j(lambda), lambda in Lambda (rationals in (0,1]), 0 <= j <= k,
// with coefficients in Q[[b]] truncated at b^{b_truncation}.
struct XiShape {
  std::vector<Rational> lambdas;
  int k = 0;
  int b_truncation = 1;

  void validate() const;
  bool has(const Rational& lambda, int j) const;
  int rank() const { return static_cast<int>(lambdas.size()) * (k + 1); }
};

using Generator = std::pair<Rational, int>;  // (lambda, j)

struct XiElement {
  std::map<Generator, QSeries> coeffs;

  bool is_zero() const { return coeffs.empty(); }
  bool operator==(const XiElement& o) const { return coeffs == o.coeffs; }
  // Smallest power of b present; -1 for zero.
  int b_valuation() const;
};

XiElement make_generator(const XiShape& shape, const Rational& lambda, int j);
// Normalizes: pads series to the shape's truncation, drops zero series and
// rejects generators outside the shape.
XiElement normalize(const XiShape& shape, XiElement x);

XiElement add(const XiShape& shape, const XiElement& x, const XiElement& y);
XiElement scale(const XiShape& shape, const XiElement& x, const Rational& c);
// Multiplication by a b-series (the free [[b]]-module structure).
XiElement mul_series(const XiShape& shape, const XiElement& x, const QSeries& s);

// a e_j = lambda b e_j + b e_{j-1}; extended by a(S v) = S a(v) + b^2 S'(b) v.
XiElement act_a(const XiShape& shape, const XiElement& x);
XiElement act_b(const XiShape& shape, const XiElement& x);

// x = sum_m a^m sum_{lambda,j} c[(lambda,j)][m] e_j(lambda) modulo a-order na.
using ABasisCoeffs = std::map<Generator, std::vector<Rational>>;
ABasisCoeffs to_a_basis(const XiShape& shape, const XiElement& x, int na);
XiElement from_a_basis(const XiShape& shape, const ABasisCoeffs& c);
int a_valuation(const ABasisCoeffs& c);

// Monodromy: e_j -> exp(2 pi i lambda) sum_{i<=j} tau^{j-i}/(j-i)! e_i with tau formal.
struct MonodromyBlock {
  Rational lambda;
  Rational label;  // lambda mod 1, marker for exp(2 pi i lambda)
  // unipotent[i][j]: polynomial in tau (lowest degree first), coefficient of e_i in T(e_j)
  std::vector<std::vector<UPoly>> unipotent;
};

struct MonodromyData {
  std::vector<MonodromyBlock> blocks;
};

MonodromyData monodromy(const XiShape& shape);
// True when q * label is an integer for every block, i.e. (T_ss)^q = 1.
bool semisimple_power_trivial(const MonodromyData& m, int q);
// True when every unipotent block U satisfies (U - 1)^{k+1} = 0 and is upper unitriangular.
bool unipotent_blocks_valid(const MonodromyData& m);

struct ShapeWithMultiplicity {
  XiShape shape;
  int multiplicity = 1;
  int rank() const { return multiplicity * shape.rank(); }
};

ShapeWithMultiplicity tensor_with_V(const XiShape& shape, int dim);

}  // namespace abkit::xi
