#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "abkit/abmod.hpp"
#include "abkit/linalg.hpp"
#include "abkit/poly.hpp"
#include "abkit/series.hpp"

namespace abkit::derham {

class NonIsolatedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CutoffError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  int max_degree = 30;  // D: bound on total x-degree of any materialized monomial
  int b_order = 4;      // J: number of b-powers kept in the a-matrix
};

// Integer weights W_i with f of weight >= L (weights w_i = W_i / L).
struct Weights {
  std::vector<int> w;
  int L = 1;
  bool found = false;              // a quasi-homogeneous principal part exists
  bool quasi_homogeneous = false;  // every monomial has weight exactly L
  std::vector<Rational> rational() const;
  int total() const;
  // Highest form weight of the Jacobian algebra, sum (L - W_i).
  long socle() const;
};

template <class S>
Weights find_weights(const poly::Form<S>& f);

// Class representative of b on a top-degree form: df ∧ ι_E(ω) / wt(ω), per monomial.
template <class S>
poly::Form<S> b_action_top(const poly::Form<S>& f, const Weights& w, const poly::Form<S>& omega);

template <class S>
using DenseMatrix = std::vector<std::vector<S>>;

template <class S>
struct BrieskornResult {
  int nvars = 0;
  Weights weights;
  long socle = 0;
  long window = 0;
  bool exact = false;  // quasi-homogeneous input: every graded piece is exact
  int mu = 0;
  std::vector<poly::Key> basis;          // Jacobian standard monomials (top forms)
  std::vector<long> basis_weights;
  std::vector<poly::Key> window_basis;   // basis of the truncated quotient
  std::vector<long> window_weights;
  DenseMatrix<S> a_win, b_win;           // columns are images
  std::vector<std::vector<Series<S>>> a_series;  // a(m_j) = sum_l a_series[l][j] m_l
  int rank_b = 0;
  int coker_b = 0;
  bool ker_b_zero = false;
  bool commutation = false;  // A B - B A = B^2 on the window
  bool diag_sigma = false;   // A = B diag(wt / L) (checked only when exact)
  bool jacobian_pivots_consistent = false;
  int precision_lost = 0;
};

template <class S>
class Engine {
 public:
  Engine(const poly::Form<S>& f, const Options& opt);

  const BrieskornResult<S>& result() const { return res_; }
  const poly::Form<S>& f() const { return f_; }
  const Options& options() const { return opt_; }
  int column(poly::Key k) const;
  poly::Key key(int col) const { return cols_[col]; }
  int columns() const { return cols_.size(); }
  long weight_of(poly::Key k) const { return poly::weight(k, res_.weights.w); }
  // Coordinates of a top form in the window columns (terms above the window dropped).
  SparseVec<S> to_vec(const poly::Form<S>& w) const;
  SparseVec<S> jacobian_reduce(const SparseVec<S>& v) const { return jac_.reduce(v); }
  SparseVec<S> window_reduce(const SparseVec<S>& v) const { return rel_.reduce(v); }
  int window_index(int col) const;

 private:
  void choose_window();
  void build_jacobian();
  void build_relations();
  void build_window_maps();
  void build_series();

  poly::Form<S> f_;
  Options opt_;
  typename RingOf<S>::type ring_;
  int n_ = 0;  // number of variables
  unsigned top_ = 0;
  std::vector<poly::Key> cols_;
  std::unordered_map<poly::Key, int> colmap_;
  std::unordered_map<int, int> qpos_;
  Echelon<S> jac_;
  Echelon<S> rel_;
  BrieskornResult<S> res_;
};

template <class S>
BrieskornResult<S> brieskorn(const poly::Form<S>& f, const Options& opt) {
  return Engine<S>(f, opt).result();
}

abmod::ABModule to_module(const BrieskornResult<Rational>& r);
std::string stamp(const BrieskornResult<Rational>& r);

int milnor_number(const poly::Form<Rational>& f, const Options& opt);

struct NullstellensatzReport {
  int n_ki = -1;  // minimal N with f^N Ω^{n+1} ⊂ df∧Ω^n in the window
  int n_ab = -1;  // minimal N with a^N E ⊂ b E in the window
  bool k_equals_i = false;  // K^p = I^p for 1 <= p <= n on the checked pieces
  bool euler = false;       // N_KI = 1 and N_ab = 1 for quasi-homogeneous input
};

NullstellensatzReport nullstellensatz(const Engine<Rational>& e);

struct TorsionCheck {
  bool a_torsion_zero = false;  // Ker a^N = 0 on Q_{W-NL} -> Q_W for N <= 3
  bool b_torsion_zero = false;
  int separation_power = -1;  // smallest m with b^m Q_W = 0
  // E / bE as a finite module
  abmod::FiniteModule quotient;
  int quotient_a_nilpotency = -1;  // N
  int quotient_b_nilpotency = -1;  // N'
  bool quotient_commutation = false;
  bool a_gives_b = false;  // N' <= 2N
};

TorsionCheck torsion_check(const Engine<Rational>& e);

struct PieceReport {
  long weight = 0;
  int h_k = 0;
  int h_kk = 0;
  bool injective = false;
  bool surjective = false;
};

struct QuasiIsoReport {
  int degree = 0;
  bool applicable = false;  // quasi-homogeneous input
  bool iso = false;
  int dim_k = 0;
  int dim_kk = 0;
  long max_weight = 0;
  std::vector<PieceReport> pieces;
  std::string note;
};

QuasiIsoReport quasi_iso_check(const poly::Form<Rational>& f, int p, const Options& opt);

struct ImageOfBReport {
  bool applicable = false;
  int samples = 0;
  int agreements = 0;
  int members = 0;  // chains found in b·E (both sides true)
};

ImageOfBReport image_of_b_test(const poly::Form<Rational>& f, int samples, unsigned seed, const Options& opt);

}  // namespace abkit::derham
