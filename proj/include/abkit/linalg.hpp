#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "abkit/scalars.hpp"

namespace abkit {

// Sorted (index, value) pairs with no zero values.
template <class S>
using SparseVec = std::vector<std::pair<int, S>>;

template <class S>
SparseVec<S> sparse_axpy(const SparseVec<S>& x, const S& c, const SparseVec<S>& y) {
  // x + c*y
  SparseVec<S> out;
  out.reserve(x.size() + y.size());
  size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
      out.push_back(x[i++]);
    } else if (i == x.size() || y[j].first < x[i].first) {
      S v = c * y[j].second;
      if (!is_zero(v)) out.emplace_back(y[j].first, std::move(v));
      ++j;
    } else {
      S v = x[i].second + c * y[j].second;
      if (!is_zero(v)) out.emplace_back(x[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

template <class S>
SparseVec<S> sparse_scale(const SparseVec<S>& x, const S& c) {
  SparseVec<S> out;
  out.reserve(x.size());
  for (const auto& [i, v] : x) {
    S w = c * v;
    if (!is_zero(w)) out.emplace_back(i, std::move(w));
  }
  return out;
}

template <class S>
SparseVec<S> sparse_from_map(const std::map<int, S>& m) {
  SparseVec<S> out;
  for (const auto& [i, v] : m)
    if (!is_zero(v)) out.emplace_back(i, v);
  return out;
}

template <class S>
std::optional<S> sparse_get(const SparseVec<S>& x, int index) {
  auto it = std::lower_bound(x.begin(), x.end(), index,
                             [](const auto& p, int k) { return p.first < k; });
  if (it != x.end() && it->first == index) return it->second;
  return std::nullopt;
}

// Raised when elimination over a local ring meets a row whose leading entry is
// not a unit even after removing common parameter monomials.
class NonFreeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline bool try_unitize(SparseVec<Rational>&, int&) { return false; }

inline bool try_unitize(SparseVec<ParamScalar>& row, int& lost) {
  // Divide by the common parameter monomial; valid when the quotient module is
  // torsion-free over the parameter ring (flat families).
  if (row.empty()) return false;
  auto g = row.front().second.monomial_gcd();
  for (const auto& [i, v] : row) {
    auto h = v.monomial_gcd();
    for (size_t k = 0; k < g.size(); ++k) g[k] = std::min(g[k], h[k]);
  }
  int t = 0;
  for (int v : g) t += v;
  if (t == 0) return false;
  for (auto& [i, v] : row) v = v.divide_monomial(g);
  lost = std::max(lost, t);
  return true;
}

}  // namespace detail

// Incremental row echelon form. Columns are plain ints; the caller chooses the
// ordering (leading entry = smallest column index). Optionally tracks, for each
// stored row, its expression in terms of the inserted generators.
template <class S>
class Echelon {
 public:
  using Ring = typename RingOf<S>::type;

  explicit Echelon(Ring ring = Ring{}, bool track = false) : ring_(ring), track_(track) {}

  int rank() const { return static_cast<int>(rows_.size()); }
  bool has_pivot(int col) const { return rows_.count(col) > 0; }
  std::vector<int> pivots() const {
    std::vector<int> p;
    for (const auto& [c, r] : rows_) p.push_back(c);
    return p;
  }
  // Largest power of a parameter monomial divided out of any row (0 over Q).
  int precision_lost() const { return lost_; }
  int generators() const { return ngen_; }

  struct Reduced {
    SparseVec<S> remainder;
    SparseVec<S> combination;  // remainder = v - sum combination[g] * generator g
  };

  Reduced reduce_tracked(const SparseVec<S>& v) const {
    std::map<int, S> work(v.begin(), v.end());
    std::map<int, S> comb;
    SparseVec<S> out;
    while (!work.empty()) {
      auto it = work.begin();
      int col = it->first;
      S c = it->second;
      work.erase(it);
      if (is_zero(c)) continue;
      auto r = rows_.find(col);
      if (r == rows_.end()) {
        out.emplace_back(col, std::move(c));
        continue;
      }
      const auto& row = r->second.row;
      for (size_t k = 1; k < row.size(); ++k) {
        auto [w, fresh] = work.emplace(row[k].first, S(ring_.zero()));
        w->second -= c * row[k].second;
      }
      if (track_) {
        for (const auto& [g, x] : r->second.comb) {
          auto [w, fresh] = comb.emplace(g, S(ring_.zero()));
          w->second += c * x;
        }
      }
    }
    return {std::move(out), sparse_from_map(comb)};
  }

  SparseVec<S> reduce(const SparseVec<S>& v) const {
    if (!track_) return reduce_fast(v);
    return reduce_tracked(v).remainder;
  }

  bool contains(const SparseVec<S>& v) const { return reduce(v).empty(); }

  // Inserts v as generator number generators(); returns true when it was independent.
  // When dependent and tracking is on, the relation is available via last_relation().
  bool insert(const SparseVec<S>& v) {
    int gen = ngen_++;
    Reduced red;
    if (track_) {
      red = reduce_tracked(v);
    } else {
      red.remainder = reduce_fast(v);
    }
    if (red.remainder.empty()) {
      if (track_) {
        // v - sum comb = 0  =>  relation: e_gen - sum comb = 0
        last_relation_ = sparse_scale(red.combination, S(ring_.from(Rational(-1))));
        last_relation_.emplace_back(gen, ring_.one());
      }
      return false;
    }
    SparseVec<S> row = std::move(red.remainder);
    SparseVec<S> comb;
    if (track_) {
      comb = sparse_scale(red.combination, S(ring_.from(Rational(-1))));
      comb.emplace_back(gen, ring_.one());
    }
    if (!is_unit(row.front().second)) {
      // Over the parameter ring: divide out the common monomial (tracking is then unreliable).
      if (!detail::try_unitize(row, lost_) || !is_unit(row.front().second))
        throw NonFreeError("elimination met a non-unit pivot");
      if (track_) throw NonFreeError("tracked elimination met a non-unit pivot");
    }
    S inv = inverse(row.front().second);
    row = sparse_scale(row, inv);
    if (track_) comb = sparse_scale(comb, inv);
    int col = row.front().first;
    rows_.emplace(col, Row{std::move(row), std::move(comb)});
    return true;
  }

  const SparseVec<S>& last_relation() const { return last_relation_; }

 private:
  struct Row {
    SparseVec<S> row;
    SparseVec<S> comb;
  };

  SparseVec<S> reduce_fast(const SparseVec<S>& v) const {
    std::map<int, S> work(v.begin(), v.end());
    SparseVec<S> out;
    while (!work.empty()) {
      auto it = work.begin();
      int col = it->first;
      S c = std::move(it->second);
      work.erase(it);
      if (is_zero(c)) continue;
      auto r = rows_.find(col);
      if (r == rows_.end()) {
        out.emplace_back(col, std::move(c));
        continue;
      }
      const auto& row = r->second.row;
      for (size_t k = 1; k < row.size(); ++k) {
        auto [w, fresh] = work.emplace(row[k].first, S(ring_.zero()));
        w->second -= c * row[k].second;
      }
    }
    return out;
  }

  Ring ring_;
  bool track_;
  int ngen_ = 0;
  int lost_ = 0;
  std::map<int, Row> rows_;
  SparseVec<S> last_relation_;
};

// Dense matrices over Q for small problems.
using QMatrix = std::vector<std::vector<Rational>>;

QMatrix q_zero(int rows, int cols);
QMatrix q_identity(int n);
QMatrix q_mul(const QMatrix& a, const QMatrix& b);
QMatrix q_sub(const QMatrix& a, const QMatrix& b);
QMatrix q_add(const QMatrix& a, const QMatrix& b);
QMatrix q_power(const QMatrix& a, int n);
int q_rank(const QMatrix& a);
// Basis of the right kernel {x : a x = 0}.
std::vector<std::vector<Rational>> q_kernel(const QMatrix& a, int cols);
std::optional<QMatrix> q_inverse(const QMatrix& a);

// Dense univariate polynomials over Q, lowest degree first.
using UPoly = std::vector<Rational>;

UPoly upoly_trim(UPoly p);
UPoly upoly_mul(const UPoly& a, const UPoly& b);
UPoly upoly_sub(const UPoly& a, const UPoly& b);
UPoly upoly_derivative(const UPoly& a);
std::pair<UPoly, UPoly> upoly_divmod(const UPoly& a, const UPoly& b);
UPoly upoly_gcd(const UPoly& a, const UPoly& b);
Rational upoly_eval(const UPoly& p, const Rational& x);

UPoly charpoly(const QMatrix& m);

struct RationalRoots {
  std::vector<std::pair<Rational, int>> roots;  // sorted, with multiplicity
  int unresolved_degree = 0;                    // degree left without rational roots
};

// Rational roots with multiplicity of a nonzero polynomial.
RationalRoots rational_roots(const UPoly& p);

}  // namespace abkit
