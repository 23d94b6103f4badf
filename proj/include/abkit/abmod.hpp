#pragma once

#include <optional>
#include <string>
#include <vector>

#include "abkit/linalg.hpp"
#include "abkit/ncab.hpp"
#include "abkit/series.hpp"
#include "abkit/xi.hpp"

namespace abkit::abmod {

// a_matrix[l][i] is the coefficient series of e_l in a(e_i).
using SeriesMatrix = std::vector<std::vector<QSeries>>;

class TruncationInsufficient : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Free module over Q[[b]]/(b^J) of rank k with an a-action; a extends by
// a(S v) = S a(v) + b^2 S'(b) v.
struct ABModule {
  int rank = 0;
  int b_truncation = 1;
  SeriesMatrix a_matrix;

  void validate() const;
  static ABModule diagonal(const std::vector<Rational>& lambdas, int b_truncation);
  static ABModule from_residue(const QMatrix& residue, int b_truncation);
};

using ModuleVector = std::vector<QSeries>;

ModuleVector act_a(const ABModule& m, const ModuleVector& x);
ModuleVector act_b(const ABModule& m, const ModuleVector& x);

bool is_simple_pole(const ABModule& m);
// Coefficient of b^1 in a_matrix, i.e. b^{-1}a on E/bE for a simple-pole module.
QMatrix residue(const ABModule& m);

SeriesMatrix series_matrix_mul(const SeriesMatrix& x, const SeriesMatrix& y, int order);
std::optional<SeriesMatrix> series_matrix_inverse(const SeriesMatrix& p, int order);
// Module in the basis given by the columns of p: P^{-1}(A P + b^2 P').
ABModule base_change(const ABModule& m, const SeriesMatrix& p);

struct Saturation {
  bool stabilized = false;
  int steps = 0;       // rounds of b^{-1}a needed
  int pole_order = 0;  // deepest negative power of b in the saturated basis
  ABModule module;
  std::string diagnostic;
};

Saturation saturate(const ABModule& m, int max_steps);

enum class Verdict { Yes, No, Indeterminate };
std::string to_string(Verdict v);

struct SpectralData {
  std::vector<std::pair<Rational, int>> spectrum;
  int unresolved_degree = 0;  // characteristic factors without rational roots
  bool saturated = false;
  std::string diagnostic;
  bool rational() const { return unresolved_degree == 0; }
};

SpectralData spectrum(const ABModule& m, int max_steps = 16);

struct GeometricReport {
  Verdict verdict = Verdict::Indeterminate;
  bool regular = false;
  bool rational = false;
  bool positive = false;
  SpectralData spectral;
  std::string certificate;
};

GeometricReport is_geometric(const ABModule& m, int max_steps = 16);

struct HomToXi {
  int dimension = 0;
  // generators[g][i] = image of e_i under the g-th map
  std::vector<std::vector<xi::XiElement>> generators;
  std::vector<Rational> missing_lambdas;
  bool intertwines = false;  // substitution re-check
};

HomToXi hom_to_xi(const ABModule& m, const xi::XiShape& shape);

// ---- finite models of torsion ----

// Module generated by `generators` over the algebra truncated at b^{b_truncation},
// modulo the left submodule spanned by the relation rows.
struct FinitePresentation {
  int generators = 1;
  int b_truncation = 4;
  std::vector<std::vector<ncab::QElement>> relations;
};

struct TorsionResult {
  int dimension = 0;
  int window_dimension = 0;
  std::vector<std::vector<Rational>> basis;  // in window coordinates
  std::vector<std::string> labels;           // window coordinate names
  bool stabilized = false;
};

// Ker(a^N) or Ker(b^N) on the quotient at a-degree window K.
TorsionResult torsion(const FinitePresentation& p, char which, int n, int a_window);

// Finite-dimensional Q-vector space with commuting-relation endomorphisms a, b
// (columns are images).
struct FiniteModule {
  int dim = 0;
  QMatrix a;
  QMatrix b;
  std::vector<std::string> labels;
};

FiniteModule to_finite_module(const FinitePresentation& p, int a_window);

using Subspace = std::vector<std::vector<Rational>>;  // spanning vectors

Subspace kernel_of_power(const QMatrix& x, int n, int dim);
int subspace_dim(const Subspace& s, int dim);
bool subspace_contains(const Subspace& big, const Subspace& small, int dim);
Subspace subspace_image(const QMatrix& x, const Subspace& s);
Subspace subspace_intersection(const Subspace& u, const Subspace& v, int dim);
// Smallest n with x^n s = 0, or -1 if none up to dim.
int nilpotency_on(const QMatrix& x, const Subspace& s, int dim);

Subspace a_torsion(const FiniteModule& m);
Subspace b_torsion(const FiniteModule& m);
// Largest subspace of A(E) stable under a and b.
Subspace a_tilde(const FiniteModule& m);
bool commutation_holds(const FiniteModule& m);

struct SmallnessReport {
  bool cond_intersection = false;  // ∩ b^m E ⊂ A(E)
  bool cond_b_in_a = false;        // B(E) ⊂ A(E)
  bool cond_a_nilpotent = false;   // a^N A(E) = 0
  int witness_n = 0;
  bool cond_coherent = false;      // Ker b, Coker b finitely generated
  std::vector<std::vector<Rational>> ker_b_generators;
  std::vector<std::vector<Rational>> coker_b_generators;
  bool b_equals_a_tilde = false;
  bool b_power_kills = false;  // b^{2N} B(E) = 0
  bool small() const { return cond_intersection && cond_b_in_a && cond_a_nilpotent && cond_coherent; }
  std::string certificate;
};

// Family given as a free part (torsion-free, contributes nothing to A and B) plus
// a finite torsion part.
SmallnessReport is_S_small(const std::optional<ABModule>& free_part, const FiniteModule& torsion_part);

}  // namespace abkit::abmod
