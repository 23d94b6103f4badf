#include "abkit/derham.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "abkit/parallel.hpp"

namespace abkit::derham {

using poly::Form;
using poly::Key;

std::vector<Rational> Weights::rational() const {
  std::vector<Rational> r;
  for (int x : w) r.push_back(make_rational(x, L));
  return r;
}

int Weights::total() const { return std::accumulate(w.begin(), w.end(), 0); }

long Weights::socle() const {
  long s = 0;
  for (int x : w) s += L - x;
  return s;
}

namespace {

Rational constant_of(const Rational& c) { return c; }
Rational constant_of(const ParamScalar& c) { return c.constant_term(); }

// Calls fn for every exponent vector alpha with sum alpha_i w_i <= budget
// (or == budget when exact).
void enumerate_exponents(const std::vector<int>& w, long budget, bool exact,
                         const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> a(w.size(), 0);
  std::function<void(size_t, long)> rec = [&](size_t i, long left) {
    if (i == w.size()) {
      if (!exact || left == 0) fn(a);
      return;
    }
    for (int e = 0; static_cast<long>(e) * w[i] <= left; ++e) {
      if (e > poly::kMaxExponent) throw CutoffError("exponent exceeds the packed monomial range");
      a[i] = e;
      rec(i + 1, left - static_cast<long>(e) * w[i]);
    }
    a[i] = 0;
  };
  if (budget >= 0) rec(0, budget);
}

std::vector<unsigned> masks_of_size(int n, int p) {
  std::vector<unsigned> out;
  if (p < 0 || p > n) return out;
  for (unsigned m = 0; m < (1u << n); ++m)
    if (__builtin_popcount(m) == p) out.push_back(m);
  return out;
}

long mask_weight(unsigned m, const std::vector<int>& w) {
  long t = 0;
  for (size_t i = 0; i < w.size(); ++i)
    if (m & (1u << i)) t += w[i];
  return t;
}

bool arnold_condition(const std::vector<Key>& f0, int n) {
  for (int i = 0; i < n; ++i) {
    bool ok = false;
    for (Key k : f0) {
      if (poly::exponent(k, i) < 1) continue;
      int others = poly::total_degree(k, n) - poly::exponent(k, i);
      if (others <= 1) ok = true;
    }
    if (!ok) return false;
  }
  return true;
}

Integer lcm_of_denominators(const std::vector<Rational>& w) {
  Integer l = 1;
  for (const auto& x : w) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  return l;
}

}  // namespace

template <class S>
Weights find_weights(const Form<S>& f) {
  const int n = f.nvars;
  std::vector<Key> all, unit;
  for (const auto& [k, c] : f.terms) {
    if (poly::mask(k) != 0) throw std::invalid_argument("expected a function, got a form");
    all.push_back(k);
    if (sgn(constant_of(c)) != 0) unit.push_back(k);
  }
  Weights out;
  if (static_cast<int>(unit.size()) >= n && n > 0) {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    const int m = unit.size();
    for (;;) {
      QMatrix e = q_zero(n, n);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) e[r][c] = poly::exponent(unit[idx[r]], c);
      if (auto inv = q_inverse(e)) {
        std::vector<Rational> w(n, Rational(0));
        bool positive = true;
        for (int i = 0; i < n; ++i) {
          for (int r = 0; r < n; ++r) w[i] += (*inv)[i][r];
          if (sgn(w[i]) <= 0) positive = false;
        }
        if (positive) {
          auto wt = [&](Key k) {
            Rational t = 0;
            for (int i = 0; i < n; ++i) t += w[i] * poly::exponent(k, i);
            return t;
          };
          bool above = true, qh = true;
          std::vector<Key> f0;
          for (Key k : all) {
            Rational t = wt(k);
            if (t < 1) above = false;
            if (t != 1) qh = false;
          }
          for (Key k : unit)
            if (wt(k) == 1) f0.push_back(k);
          if (above && arnold_condition(f0, n)) {
            Integer L = lcm_of_denominators(w);
            out.found = true;
            out.quasi_homogeneous = qh;
            out.L = L.get_si();
            for (const auto& x : w) out.w.push_back(Rational(x * Rational(L)).get_num().get_si());
            return out;
          }
        }
      }
      int i = n - 1;
      while (i >= 0 && idx[i] == m - n + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  out.w.assign(n, 1);
  int ord = -1;
  bool homogeneous = true;
  for (Key k : all) {
    int d = poly::total_degree(k, n);
    if (ord >= 0 && d != ord) homogeneous = false;
    ord = ord < 0 ? d : std::min(ord, d);
  }
  out.L = std::max(ord, 1);
  out.quasi_homogeneous = false;
  (void)homogeneous;
  return out;
}

template <class S>
Form<S> b_action_top(const Form<S>& f, const Weights& w, const Form<S>& omega) {
  Form<S> df = poly::d(f);
  Form<S> out = poly::zero_like(f);
  for (const auto& [k, c] : omega.terms) {
    long wt = poly::weight(k, w.w);
    if (wt <= 0) throw std::logic_error("graded piece of weight zero");
    auto mono = poly::monomial_form<S>(f.nvars, f.ring, k, c);
    auto xi = poly::scale(poly::euler_contract(mono, w.w), f.ring.from(make_rational(1, wt)));
    out = out + poly::wedge(df, xi);
  }
  return out;
}

// ---- Engine ----

template <class S>
Engine<S>::Engine(const Form<S>& f, const Options& opt)
    : f_(f), opt_(opt), ring_(f.ring), n_(f.nvars), jac_(f.ring), rel_(f.ring) {
  if (n_ < 1) throw std::invalid_argument("need at least one variable");
  if (opt.b_order < 1 || opt.max_degree < 1) throw std::invalid_argument("cutoffs must be positive");
  for (const auto& [k, c] : f.terms)
    if (k == 0) throw std::invalid_argument("f must vanish at the origin");
  if (f.terms.empty()) throw NonIsolatedError("non-isolated singularity: f is zero");
  top_ = (1u << n_) - 1;
  res_.nvars = n_;
  res_.weights = find_weights(f);
  res_.exact = res_.weights.quasi_homogeneous;
  choose_window();
  build_relations();
  build_window_maps();
  build_series();
  res_.precision_lost = std::max(jac_.precision_lost(), rel_.precision_lost());
}

template <class S>
int Engine<S>::column(Key k) const {
  auto it = colmap_.find(k);
  return it == colmap_.end() ? -1 : it->second;
}

template <class S>
int Engine<S>::window_index(int col) const {
  auto it = qpos_.find(col);
  return it == qpos_.end() ? -1 : it->second;
}

template <class S>
SparseVec<S> Engine<S>::to_vec(const Form<S>& w) const {
  std::map<int, S> m;
  for (const auto& [k, c] : w.terms) {
    if (poly::mask(k) != top_) throw std::logic_error("expected a top-degree form");
    if (poly::weight(k, res_.weights.w) > res_.window) continue;
    int col = column(k);
    if (col < 0) throw std::logic_error("monomial missing from the window");
    auto [it, fresh] = m.emplace(col, c);
    if (!fresh) it->second += c;
  }
  SparseVec<S> out;
  for (auto& [c, v] : m)
    if (!is_zero(v)) out.emplace_back(c, v);
  return out;
}

template <class S>
void Engine<S>::choose_window() {
  const auto& w = res_.weights.w;
  const int L = res_.weights.L;
  const int J = opt_.b_order;
  const long base = res_.weights.total();
  const int wmin = *std::min_element(w.begin(), w.end());

  auto materialize = [&](long W) {
    res_.window = W;
    cols_.clear();
    colmap_.clear();
    enumerate_exponents(w, W - base, false, [&](const std::vector<int>& a) {
      cols_.push_back(poly::make_key(a, top_));
    });
    std::stable_sort(cols_.begin(), cols_.end(), [&](Key x, Key y) {
      long wx = poly::weight(x, w), wy = poly::weight(y, w);
      return wx != wy ? wx < wy : x < y;
    });
    for (size_t i = 0; i < cols_.size(); ++i) colmap_[cols_[i]] = i;
    jac_ = Echelon<S>(ring_);
    build_jacobian();
  };

  if (res_.weights.found) {
    res_.socle = res_.weights.socle();
    long W = res_.socle + static_cast<long>(J - 1) * L;
    long maxdeg = (W - base) / wmin;
    if (maxdeg > opt_.max_degree)
      throw CutoffError("cutoff insufficient: window needs total degree " + std::to_string(maxdeg) +
                        " > max-degree " + std::to_string(opt_.max_degree));
    materialize(W);
  } else {
    long W0 = opt_.max_degree + n_;
    materialize(W0);
    long top = -1;
    for (int c = 0; c < static_cast<int>(cols_.size()); ++c)
      if (!jac_.has_pivot(c)) top = std::max(top, poly::weight(cols_[c], w));
    if (top > W0 - L) throw NonIsolatedError("non-isolated singularity: Jacobian quotient reaches the cutoff");
    res_.socle = std::max<long>(top, base);
    long W = res_.socle + static_cast<long>(J - 1) * L;
    if (W > W0)
      throw CutoffError("cutoff insufficient: window needs total degree " + std::to_string(W - base) +
                        " > max-degree " + std::to_string(opt_.max_degree));
    materialize(W);
  }

  res_.basis.clear();
  res_.basis_weights.clear();
  for (int c = 0; c < static_cast<int>(cols_.size()); ++c) {
    if (jac_.has_pivot(c)) continue;
    long wt = poly::weight(cols_[c], w);
    if (wt > res_.socle)
      throw NonIsolatedError("non-isolated singularity: Jacobian quotient has elements above the socle weight");
    res_.basis.push_back(cols_[c]);
    res_.basis_weights.push_back(wt);
  }
  res_.mu = res_.basis.size();
}

template <class S>
void Engine<S>::build_jacobian() {
  const auto& w = res_.weights.w;
  const long W = res_.window;
  for (int i = 0; i < n_; ++i) {
    Form<S> p = poly::partial(f_, i);
    for (Key k : cols_) {
      std::map<int, S> row;
      for (const auto& [t, c] : p.terms) {
        Key key = poly::with_mask(poly::with_mask(k, 0) + t, top_);
        if (poly::weight(key, w) > W) continue;
        int col = column(key);
        auto [it, fresh] = row.emplace(col, c);
        if (!fresh) it->second += c;
      }
      jac_.insert(sparse_from_map(row));
    }
  }
}

template <class S>
void Engine<S>::build_relations() {
  const auto& w = res_.weights.w;
  const long W = res_.window;
  const int L = res_.weights.L;
  if (n_ >= 2) {
    Form<S> df = poly::d(f_);
    for (unsigned m : masks_of_size(n_, n_ - 2)) {
      long base = mask_weight(m, w);
      enumerate_exponents(w, W - L - base, false, [&](const std::vector<int>& a) {
        auto eta = poly::monomial_form<S>(n_, ring_, poly::make_key(a, m), ring_.one());
        auto deta = poly::d(eta);
        if (deta.is_zero()) return;
        rel_.insert(to_vec(poly::wedge(df, deta)));
      });
    }
  }
  res_.window_basis.clear();
  res_.window_weights.clear();
  qpos_.clear();
  for (int c = 0; c < static_cast<int>(cols_.size()); ++c) {
    if (rel_.has_pivot(c)) continue;
    qpos_[c] = res_.window_basis.size();
    res_.window_basis.push_back(cols_[c]);
    res_.window_weights.push_back(poly::weight(cols_[c], w));
  }
  res_.jacobian_pivots_consistent = true;
  for (Key k : res_.basis)
    if (rel_.has_pivot(column(k))) res_.jacobian_pivots_consistent = false;
}

namespace {

template <class S, class R>
DenseMatrix<S> dense_mul(const DenseMatrix<S>& x, const DenseMatrix<S>& y, const R& ring) {
  const size_t n = x.size(), m = y.empty() ? 0 : y[0].size(), k = y.size();
  DenseMatrix<S> z(n, std::vector<S>(m, ring.zero()));
  for (size_t i = 0; i < n; ++i)
    for (size_t l = 0; l < k; ++l) {
      if (is_zero(x[i][l])) continue;
      for (size_t j = 0; j < m; ++j)
        if (!is_zero(y[l][j])) z[i][j] += x[i][l] * y[l][j];
    }
  return z;
}

template <class S>
SparseVec<S> dense_column(const DenseMatrix<S>& x, int c) {
  SparseVec<S> out;
  for (size_t r = 0; r < x.size(); ++r)
    if (!is_zero(x[r][c])) out.emplace_back(r, x[r][c]);
  return out;
}

template <class S, class R>
SparseVec<S> dense_apply(const DenseMatrix<S>& x, const SparseVec<S>& v, const R& ring) {
  std::vector<S> acc(x.size(), ring.zero());
  for (const auto& [c, val] : v)
    for (size_t r = 0; r < x.size(); ++r)
      if (!is_zero(x[r][c])) acc[r] += x[r][c] * val;
  SparseVec<S> out;
  for (size_t r = 0; r < acc.size(); ++r)
    if (!is_zero(acc[r])) out.emplace_back(r, acc[r]);
  return out;
}

}  // namespace

template <class S>
void Engine<S>::build_window_maps() {
  const auto& w = res_.weights.w;
  const long W = res_.window;
  const int L = res_.weights.L;
  const int q = res_.window_basis.size();
  Form<S> df = poly::d(f_);
  res_.a_win.assign(q, std::vector<S>(q, ring_.zero()));
  res_.b_win.assign(q, std::vector<S>(q, ring_.zero()));

  std::vector<SparseVec<S>> acols(q), bcols(q);
  parallel_for(q, [&](int c) {
    Key k = res_.window_basis[c];
    std::map<int, S> fm;
    for (const auto& [t, coef] : f_.terms) {
      Key key = poly::with_mask(poly::with_mask(k, 0) + t, top_);
      if (poly::weight(key, w) > W) continue;
      auto [it, fresh] = fm.emplace(column(key), coef);
      if (!fresh) it->second += coef;
    }
    acols[c] = rel_.reduce(sparse_from_map(fm));
    long wt = poly::weight(k, w);
    auto mono = poly::monomial_form<S>(n_, ring_, k, ring_.one());
    auto xi = poly::scale(poly::euler_contract(mono, w), ring_.from(make_rational(1, wt)));
    bcols[c] = rel_.reduce(to_vec(poly::wedge(df, xi)));
  });
  for (int c = 0; c < q; ++c) {
    for (const auto& [col, v] : acols[c]) res_.a_win[qpos_.at(col)][c] = v;
    for (const auto& [col, v] : bcols[c]) res_.b_win[qpos_.at(col)][c] = v;
  }

  const auto& A = res_.a_win;
  const auto& B = res_.b_win;
  auto ab = dense_mul(A, B, ring_), ba = dense_mul(B, A, ring_), bb = dense_mul(B, B, ring_);
  res_.commutation = true;
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j)
      if (ab[i][j] - ba[i][j] != bb[i][j]) res_.commutation = false;

  res_.diag_sigma = false;
  if (res_.exact) {
    res_.diag_sigma = true;
    for (int j = 0; j < q; ++j) {
      S sigma = ring_.from(make_rational(res_.window_weights[j], L));
      for (int i = 0; i < q; ++i)
        if (A[i][j] != B[i][j] * sigma) res_.diag_sigma = false;
    }
  }

  Echelon<S> rb(ring_);
  for (int c = 0; c < q; ++c) rb.insert(dense_column(B, c));
  res_.rank_b = rb.rank();
  res_.coker_b = q - res_.rank_b;
  Echelon<S> kb(ring_);
  int count = 0;
  res_.ker_b_zero = true;
  for (int c = 0; c < q; ++c) {
    if (res_.window_weights[c] > W - L) continue;
    ++count;
    if (!kb.insert(dense_column(B, c))) res_.ker_b_zero = false;
  }
  (void)count;
}

template <class S>
void Engine<S>::build_series() {
  const long W = res_.window;
  const int L = res_.weights.L;
  const int J = opt_.b_order;
  const int q = res_.window_basis.size();
  const int mu = res_.mu;
  Echelon<S> tr(ring_, true);
  std::vector<std::pair<int, int>> gen_of;  // (k, j)
  std::vector<int> qidx(mu);
  for (int j = 0; j < mu; ++j) {
    qidx[j] = window_index(column(res_.basis[j]));
    if (qidx[j] < 0) throw std::logic_error("Jacobian standard monomial is not a window basis element");
    SparseVec<S> v{{qidx[j], ring_.one()}};
    for (int k = 0; res_.basis_weights[j] + static_cast<long>(k) * L <= W; ++k) {
      if (!tr.insert(v)) throw std::logic_error("b-powers of the Jacobian basis are dependent");
      gen_of.emplace_back(k, j);
      v = dense_apply(res_.b_win, v, ring_);
    }
  }
  if (static_cast<int>(gen_of.size()) != q)
    throw std::logic_error("b-powers of the Jacobian basis do not span the window (" +
                           std::to_string(gen_of.size()) + " vs " + std::to_string(q) + ")");
  res_.a_series.assign(mu, std::vector<Series<S>>(mu, Series<S>(J, ring_.zero())));
  for (int j = 0; j < mu; ++j) {
    auto red = tr.reduce_tracked(dense_column(res_.a_win, qidx[j]));
    if (!red.remainder.empty()) throw std::logic_error("a-image outside the span of the b-basis");
    for (const auto& [g, c] : red.combination) {
      auto [k, l] = gen_of[g];
      if (k < J) res_.a_series[l][j][k] = c;
    }
  }
}

template class Engine<Rational>;
template class Engine<ParamScalar>;
template Weights find_weights(const Form<Rational>&);
template Weights find_weights(const Form<ParamScalar>&);
template Form<Rational> b_action_top(const Form<Rational>&, const Weights&, const Form<Rational>&);
template Form<ParamScalar> b_action_top(const Form<ParamScalar>&, const Weights&, const Form<ParamScalar>&);

abmod::ABModule to_module(const BrieskornResult<Rational>& r) {
  abmod::ABModule m;
  m.rank = r.mu;
  m.b_truncation = r.a_series.empty() ? 1 : r.a_series[0][0].size();
  m.a_matrix = r.a_series;
  return m;
}

std::string stamp(const BrieskornResult<Rational>& r) { return r.exact ? "exact" : "at-cutoff"; }

int milnor_number(const Form<Rational>& f, const Options& opt) { return Engine<Rational>(f, opt).result().mu; }

// ---- graded pieces (quasi-homogeneous input) ----

namespace {

using Vec = std::vector<Rational>;

int span_rank(const std::vector<Vec>& vs) {
  Echelon<Rational> e;
  for (const auto& v : vs) {
    SparseVec<Rational> s;
    for (size_t i = 0; i < v.size(); ++i)
      if (sgn(v[i]) != 0) s.emplace_back(i, v[i]);
    e.insert(s);
  }
  return e.rank();
}

SparseVec<Rational> to_sparse(const Vec& v) {
  SparseVec<Rational> s;
  for (size_t i = 0; i < v.size(); ++i)
    if (sgn(v[i]) != 0) s.emplace_back(i, v[i]);
  return s;
}

Vec apply(const QMatrix& m, const Vec& v, int rows) {
  Vec out(rows, Rational(0));
  for (int r = 0; r < rows; ++r)
    for (size_t c = 0; c < v.size(); ++c)
      if (sgn(v[c]) != 0 && sgn(m[r][c]) != 0) out[r] += m[r][c] * v[c];
  return out;
}

// Right kernel of a rows x cols matrix, with the empty-row case handled.
std::vector<Vec> kernel(const QMatrix& m, int rows, int cols) {
  if (cols == 0) return {};
  if (rows == 0) {
    std::vector<Vec> id;
    for (int i = 0; i < cols; ++i) {
      Vec e(cols, Rational(0));
      e[i] = 1;
      id.push_back(e);
    }
    return id;
  }
  return q_kernel(m, cols);
}

class Pieces {
 public:
  Pieces(const Form<Rational>& f, const Weights& w) : f_(f), df_(poly::d(f)), w_(w), n_(f.nvars) {}

  int L() const { return w_.L; }
  int nvars() const { return n_; }

  std::vector<Key> forms(int p, long nu) const {
    std::vector<Key> out;
    if (p < 0 || p > n_ || nu < 0) return out;
    for (unsigned m : masks_of_size(n_, p)) {
      long base = mask_weight(m, w_.w);
      enumerate_exponents(w_.w, nu - base, true,
                          [&](const std::vector<int>& a) { out.push_back(poly::make_key(a, m)); });
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  // d: Ω^p_nu -> Ω^{p+1}_nu (rows target, cols source).
  QMatrix d_matrix(int p, long nu) const { return map_matrix(p, nu, nu, false); }
  // df∧: Ω^p_nu -> Ω^{p+1}_{nu+L}.
  QMatrix df_matrix(int p, long nu) const { return map_matrix(p, nu, nu + w_.L, true); }

  std::vector<Vec> k_basis(int p, long nu) const {
    int cols = forms(p, nu).size();
    int rows = forms(p + 1, nu + w_.L).size();
    return kernel(df_matrix(p, nu), rows, cols);
  }

 private:
  QMatrix map_matrix(int p, long nu, long target_nu, bool wedge_df) const {
    auto src = forms(p, nu);
    auto dst = forms(p + 1, target_nu);
    std::map<Key, int> pos;
    for (size_t i = 0; i < dst.size(); ++i) pos[dst[i]] = i;
    QMatrix m = q_zero(dst.size(), src.size());
    for (size_t c = 0; c < src.size(); ++c) {
      auto mono = poly::monomial_form<Rational>(n_, RationalRing{}, src[c], Rational(1));
      auto img = wedge_df ? poly::wedge(df_, mono) : poly::d(mono);
      for (const auto& [k, v] : img.terms) m[pos.at(k)][c] = v;
    }
    return m;
  }

  Form<Rational> f_, df_;
  Weights w_;
  int n_;
};

// Chains sum_j b^j ω_j of degree p and total weight nu, block j of weight nu - jL.
struct ChainSpace {
  const Pieces& P;
  int p;
  long nu;
  std::vector<int> offsets;  // start of each block
  std::vector<int> sizes;
  int total = 0;

  ChainSpace(const Pieces& pieces, int degree, long weight) : P(pieces), p(degree), nu(weight) {
    for (long j = 0; nu - j * P.L() >= 0; ++j) {
      offsets.push_back(total);
      int s = P.forms(p, nu - j * P.L()).size();
      sizes.push_back(s);
      total += s;
    }
  }
  int blocks() const { return sizes.size(); }

  // Basis of chains whose block 0 lies in K^p.
  std::vector<Vec> constrained_basis() const {
    std::vector<Vec> out;
    if (blocks() == 0) return out;
    for (const auto& k : P.k_basis(p, nu)) {
      Vec v(total, Rational(0));
      for (int i = 0; i < sizes[0]; ++i) v[i] = k[i];
      out.push_back(v);
    }
    for (int i = sizes.empty() ? 0 : sizes[0]; i < total; ++i) {
      Vec v(total, Rational(0));
      v[i] = 1;
      out.push_back(v);
    }
    return out;
  }
};

// D: chains of degree p -> chains of degree p+1, component j = dω_j - df∧ω_{j+1}.
Vec apply_D(const ChainSpace& src, const ChainSpace& dst, const std::vector<QMatrix>& dm,
            const std::vector<QMatrix>& dfm, const Vec& x) {
  Vec out(dst.total, Rational(0));
  for (int j = 0; j < dst.blocks(); ++j) {
    if (j < src.blocks() && src.sizes[j] > 0 && dst.sizes[j] > 0) {
      Vec part(x.begin() + src.offsets[j], x.begin() + src.offsets[j] + src.sizes[j]);
      Vec img = apply(dm[j], part, dst.sizes[j]);
      for (int i = 0; i < dst.sizes[j]; ++i) out[dst.offsets[j] + i] += img[i];
    }
    if (j + 1 < src.blocks() && src.sizes[j + 1] > 0 && dst.sizes[j] > 0) {
      Vec part(x.begin() + src.offsets[j + 1], x.begin() + src.offsets[j + 1] + src.sizes[j + 1]);
      Vec img = apply(dfm[j + 1], part, dst.sizes[j]);
      for (int i = 0; i < dst.sizes[j]; ++i) out[dst.offsets[j] + i] -= img[i];
    }
  }
  return out;
}

struct DMaps {
  std::vector<QMatrix> d, df;  // per block of the source space
};

DMaps d_maps(const Pieces& P, const ChainSpace& src) {
  DMaps m;
  for (int j = 0; j < src.blocks(); ++j) {
    long w = src.nu - j * P.L();
    m.d.push_back(P.d_matrix(src.p, w));
    m.df.push_back(P.df_matrix(src.p, w));
  }
  return m;
}

PieceReport quasi_iso_piece(const Pieces& P, int p, long nu) {
  PieceReport rep;
  rep.weight = nu;
  const int L = P.L();
  (void)L;
  int dim_p = P.forms(p, nu).size();
  int dim_p1 = P.forms(p + 1, nu).size();

  // K side
  auto K = P.k_basis(p, nu);
  std::vector<Vec> zk;
  if (!K.empty()) {
    QMatrix dp = P.d_matrix(p, nu);
    QMatrix m = q_zero(dim_p1, K.size());
    for (size_t c = 0; c < K.size(); ++c) {
      Vec img = apply(dp, K[c], dim_p1);
      for (int r = 0; r < dim_p1; ++r) m[r][c] = img[r];
    }
    for (const auto& y : kernel(m, dim_p1, K.size())) {
      Vec z(dim_p, Rational(0));
      for (size_t c = 0; c < K.size(); ++c)
        for (int r = 0; r < dim_p; ++r) z[r] += y[c] * K[c][r];
      zk.push_back(z);
    }
  }
  std::vector<Vec> bk;
  if (p >= 1) {
    QMatrix dm = P.d_matrix(p - 1, nu);
    for (const auto& k : P.k_basis(p - 1, nu)) bk.push_back(apply(dm, k, dim_p));
  }
  rep.h_k = span_rank(zk) - span_rank(bk);

  // chain side
  ChainSpace Cp(P, p, nu), Cp1(P, p + 1, nu), Cm(P, p - 1, nu);
  DMaps Dp = d_maps(P, Cp);
  auto basis = Cp.constrained_basis();
  std::vector<Vec> zkk;
  if (!basis.empty()) {
    QMatrix m = q_zero(Cp1.total, basis.size());
    for (size_t c = 0; c < basis.size(); ++c) {
      Vec img = apply_D(Cp, Cp1, Dp.d, Dp.df, basis[c]);
      for (int r = 0; r < Cp1.total; ++r) m[r][c] = img[r];
    }
    for (const auto& y : kernel(m, Cp1.total, basis.size())) {
      Vec z(Cp.total, Rational(0));
      for (size_t c = 0; c < basis.size(); ++c)
        if (sgn(y[c]) != 0)
          for (int r = 0; r < Cp.total; ++r) z[r] += y[c] * basis[c][r];
      zkk.push_back(z);
    }
  }
  std::vector<Vec> bkk;
  if (p >= 1) {
    DMaps Dm = d_maps(P, Cm);
    for (const auto& v : Cm.constrained_basis()) bkk.push_back(apply_D(Cm, Cp, Dm.d, Dm.df, v));
  }
  int rz = span_rank(zkk), rb = span_rank(bkk);
  rep.h_kk = rz - rb;
  std::vector<Vec> sum = bkk;
  for (const auto& z : zk) {
    Vec v(Cp.total, Rational(0));
    for (int i = 0; i < dim_p; ++i) v[i] = z[i];
    sum.push_back(v);
  }
  int rs = span_rank(sum);
  rep.injective = (rs - rb) == rep.h_k;
  rep.surjective = rs == rz;
  return rep;
}

}  // namespace

QuasiIsoReport quasi_iso_check(const Form<Rational>& f, int p, const Options& opt) {
  QuasiIsoReport rep;
  rep.degree = p;
  Weights w = find_weights(f);
  if (p < 0 || p > f.nvars) throw std::invalid_argument("degree out of range");
  if (!w.quasi_homogeneous) {
    rep.note = "graded pieces are exact only for quasi-homogeneous input";
    return rep;
  }
  // reject non-isolated input the same way the main pipeline does
  Engine<Rational> probe(f, Options{opt.max_degree, 1});
  rep.applicable = true;
  Pieces P(f, w);
  long lo = (p == f.nvars) ? w.total() : 0;
  long hi = w.socle() + 2L * w.L;
  rep.max_weight = hi;
  std::vector<long> nus;
  for (long nu = lo; nu <= hi; ++nu) nus.push_back(nu);
  std::vector<PieceReport> out(nus.size());
  parallel_for(nus.size(), [&](int i) { out[i] = quasi_iso_piece(P, p, nus[i]); });
  rep.iso = true;
  for (const auto& r : out) {
    if (r.h_k == 0 && r.h_kk == 0 && r.injective && r.surjective) {
      rep.pieces.push_back(r);
      continue;
    }
    rep.pieces.push_back(r);
  }
  for (const auto& r : rep.pieces) {
    rep.dim_k += r.h_k;
    rep.dim_kk += r.h_kk;
    if (!r.injective || !r.surjective) rep.iso = false;
  }
  return rep;
}

ImageOfBReport image_of_b_test(const Form<Rational>& f, int samples, unsigned seed, const Options& opt) {
  ImageOfBReport rep;
  Weights w = find_weights(f);
  if (!w.quasi_homogeneous) return rep;
  Engine<Rational> probe(f, Options{opt.max_degree, 1});
  rep.applicable = true;
  Pieces P(f, w);
  const int top = f.nvars, n = top - 1, L = w.L;
  struct Piece {
    long nu;
    ChainSpace Ctop, Clow, Cprev;
    DMaps Dlow;
    std::vector<Vec> low_basis;
    Echelon<Rational> lhs, rhs;
  };
  std::vector<std::unique_ptr<Piece>> pieces;
  for (long nu = w.total(); nu <= w.socle() + 2L * L; ++nu) {
    auto pc = std::unique_ptr<Piece>(new Piece{nu, ChainSpace(P, top, nu), ChainSpace(P, n, nu),
                                               ChainSpace(P, top, nu - L), {}, {},
                                               Echelon<Rational>(), Echelon<Rational>()});
    if (pc->Ctop.total == 0 || pc->Ctop.sizes[0] == 0) continue;
    pc->Dlow = d_maps(P, pc->Clow);
    pc->low_basis = pc->Clow.constrained_basis();
    // b·Z_{nu-L} is every chain with zero block 0
    for (int i = pc->Ctop.sizes[0]; i < pc->Ctop.total; ++i) pc->lhs.insert({{i, Rational(1)}});
    for (const auto& u : pc->low_basis) pc->lhs.insert(to_sparse(apply_D(pc->Clow, pc->Ctop, pc->Dlow.d, pc->Dlow.df, u)));
    // I^{top} + dK^{n} inside Ω^{top}_nu
    int d0 = pc->Ctop.sizes[0];
    QMatrix dm = P.d_matrix(n, nu);
    for (const auto& k : P.k_basis(n, nu)) pc->rhs.insert(to_sparse(apply(dm, k, d0)));
    QMatrix dfm = P.df_matrix(n, nu - L);
    int src = P.forms(n, nu - L).size();
    for (int c = 0; c < src; ++c) {
      Vec e(src, Rational(0));
      e[c] = 1;
      pc->rhs.insert(to_sparse(apply(dfm, e, d0)));
    }
    pieces.push_back(std::move(pc));
  }
  if (pieces.empty()) return rep;
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> coef(-3, 3);
  for (int s = 0; s < samples; ++s) {
    Piece& pc = *pieces[s % pieces.size()];
    Vec x(pc.Ctop.total, Rational(0));
    if (s % 2 == 0) {
      for (auto& v : x) v = coef(rng);
    } else {
      // b·Y + D·U
      for (int i = pc.Ctop.sizes[0]; i < pc.Ctop.total; ++i) x[i] = coef(rng);
      for (const auto& u : pc.low_basis) {
        int c = coef(rng);
        if (c == 0) continue;
        Vec img = apply_D(pc.Clow, pc.Ctop, pc.Dlow.d, pc.Dlow.df, u);
        for (int i = 0; i < pc.Ctop.total; ++i) x[i] += Rational(c) * img[i];
      }
    }
    Vec x0(x.begin(), x.begin() + pc.Ctop.sizes[0]);
    bool left = pc.lhs.contains(to_sparse(x));
    bool right = pc.rhs.contains(to_sparse(x0));
    ++rep.samples;
    if (left == right) ++rep.agreements;
    if (left && right) ++rep.members;
  }
  return rep;
}

NullstellensatzReport nullstellensatz(const Engine<Rational>& e) {
  NullstellensatzReport rep;
  const auto& r = e.result();
  const int L = r.weights.L;
  const long W = r.window;
  const int cap = 2 * r.mu + 2;
  Form<Rational> fn = poly::monomial_form<Rational>(r.nvars, RationalRing{}, 0, Rational(1));
  for (int N = 1; N <= cap && rep.n_ki < 0; ++N) {
    fn = poly::wedge(fn, e.f());
    bool ok = true;
    bool any = false;
    for (int c = 0; c < e.columns() && ok; ++c) {
      Key k = e.key(c);
      if (e.weight_of(k) + static_cast<long>(N) * L > W) continue;
      any = true;
      auto m = poly::monomial_form<Rational>(r.nvars, RationalRing{}, k, Rational(1));
      if (!e.jacobian_reduce(e.to_vec(poly::wedge(fn, m))).empty()) ok = false;
    }
    if (!any) break;
    if (ok) rep.n_ki = N;
  }

  const int q = r.window_basis.size();
  Echelon<Rational> span;
  for (int c = 0; c < q; ++c) span.insert(dense_column(r.b_win, c));
  DenseMatrix<Rational> power = r.a_win;
  for (int N = 1; N <= cap && rep.n_ab < 0; ++N) {
    bool ok = true;
    for (int c = 0; c < q && ok; ++c)
      if (!span.contains(dense_column(power, c))) ok = false;
    if (ok) rep.n_ab = N;
    power = dense_mul(power, r.a_win, RationalRing{});
  }

  rep.k_equals_i = true;
  if (r.exact) {
    Pieces P(e.f(), r.weights);
    for (int p = 1; p < r.nvars; ++p)
      for (long nu = 0; nu <= r.socle + L; ++nu) {
        int kdim = P.k_basis(p, nu).size();
        QMatrix dfm = P.df_matrix(p - 1, nu - L);
        int src = P.forms(p - 1, nu - L).size(), dst = P.forms(p, nu).size();
        std::vector<Vec> img;
        for (int c = 0; c < src; ++c) {
          Vec v(src, Rational(0));
          v[c] = 1;
          img.push_back(apply(dfm, v, dst));
        }
        if (span_rank(img) != kdim) rep.k_equals_i = false;
      }
  }
  rep.euler = r.exact && rep.n_ki == 1 && rep.n_ab == 1;
  return rep;
}

TorsionCheck torsion_check(const Engine<Rational>& e) {
  TorsionCheck t;
  const auto& r = e.result();
  const int q = r.window_basis.size();
  const int L = r.weights.L;
  const long W = r.window;
  auto injective_on_low = [&](const DenseMatrix<Rational>& x, int N) {
    DenseMatrix<Rational> p = x;
    for (int i = 1; i < N; ++i) p = dense_mul(p, x, RationalRing{});
    Echelon<Rational> ech;
    for (int c = 0; c < q; ++c) {
      if (r.window_weights[c] > W - static_cast<long>(N) * L) continue;
      if (!ech.insert(dense_column(p, c))) return false;
    }
    return true;
  };
  t.a_torsion_zero = t.b_torsion_zero = true;
  for (int N = 1; N <= 3; ++N) {
    if (!injective_on_low(r.a_win, N)) t.a_torsion_zero = false;
    if (!injective_on_low(r.b_win, N)) t.b_torsion_zero = false;
  }
  DenseMatrix<Rational> p = r.b_win;
  for (int m = 1; m <= W / L + 2; ++m) {
    bool zero = true;
    for (const auto& row : p)
      for (const auto& v : row)
        if (sgn(v) != 0) zero = false;
    if (zero) {
      t.separation_power = m;
      break;
    }
    p = dense_mul(p, r.b_win, RationalRing{});
  }

  // E / bE = Ω^{n+1} / df∧Ω^n with a = multiplication by f and b = 0
  abmod::FiniteModule fm;
  fm.dim = r.mu;
  fm.a = q_zero(r.mu, r.mu);
  fm.b = q_zero(r.mu, r.mu);
  std::map<int, int> pos;
  for (int j = 0; j < r.mu; ++j) {
    pos[e.column(r.basis[j])] = j;
    fm.labels.push_back(poly::key_to_string(poly::with_mask(r.basis[j], 0), r.nvars, poly::default_names(r.nvars)));
  }
  for (int j = 0; j < r.mu; ++j) {
    auto m = poly::monomial_form<Rational>(r.nvars, RationalRing{}, r.basis[j], Rational(1));
    for (const auto& [c, v] : e.jacobian_reduce(e.to_vec(poly::wedge(e.f(), m)))) {
      auto it = pos.find(c);
      if (it == pos.end()) throw std::logic_error("Jacobian normal form outside the standard monomials");
      fm.a[it->second][j] = v;
    }
  }
  abmod::Subspace whole;
  for (int i = 0; i < fm.dim; ++i) {
    std::vector<Rational> v(fm.dim, Rational(0));
    v[i] = 1;
    whole.push_back(v);
  }
  t.quotient_a_nilpotency = abmod::nilpotency_on(fm.a, whole, fm.dim);
  t.quotient_b_nilpotency = abmod::nilpotency_on(fm.b, whole, fm.dim);
  t.quotient_commutation = abmod::commutation_holds(fm);
  t.a_gives_b = t.quotient_a_nilpotency >= 0 && t.quotient_b_nilpotency >= 0 &&
                t.quotient_b_nilpotency <= 2 * t.quotient_a_nilpotency;
  t.quotient = std::move(fm);
  return t;
}

}  // namespace abkit::derham
