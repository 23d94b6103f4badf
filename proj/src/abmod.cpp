#include "abkit/abmod.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace abkit::abmod {

void ABModule::validate() const {
  if (rank < 0 || b_truncation < 1) throw std::invalid_argument("bad module shape");
  if (static_cast<int>(a_matrix.size()) != rank) throw std::invalid_argument("a_matrix has wrong row count");
  for (const auto& row : a_matrix)
    if (static_cast<int>(row.size()) != rank) throw std::invalid_argument("a_matrix has wrong column count");
}

ABModule ABModule::diagonal(const std::vector<Rational>& lambdas, int b_truncation) {
  QMatrix r = q_zero(lambdas.size(), lambdas.size());
  for (size_t i = 0; i < lambdas.size(); ++i) r[i][i] = lambdas[i];
  return from_residue(r, b_truncation);
}

ABModule ABModule::from_residue(const QMatrix& residue, int b_truncation) {
  ABModule m;
  m.rank = residue.size();
  m.b_truncation = b_truncation;
  m.a_matrix.assign(m.rank, std::vector<QSeries>(m.rank, QSeries(b_truncation, Rational(0))));
  if (b_truncation > 1)
    for (int l = 0; l < m.rank; ++l)
      for (int i = 0; i < m.rank; ++i) m.a_matrix[l][i][1] = residue[l][i];
  return m;
}

namespace {

QSeries padded(QSeries s, int n) {
  s.resize(n, Rational(0));
  return s;
}

QSeries derivative_times_b2(const QSeries& s, int n) {
  QSeries r(n, Rational(0));
  for (size_t m = 1; m < s.size(); ++m)
    if (static_cast<int>(m) + 1 < n) r[m + 1] = Rational(static_cast<long>(m)) * s[m];
  return r;
}

}  // namespace

ModuleVector act_a(const ABModule& m, const ModuleVector& x) {
  const int n = m.b_truncation;
  ModuleVector out(m.rank, QSeries(n, Rational(0)));
  for (int i = 0; i < m.rank; ++i) {
    QSeries xi = padded(x[i], n);
    for (int l = 0; l < m.rank; ++l) {
      QSeries t = series_mul(m.a_matrix[l][i], xi, n);
      for (int r = 0; r < n; ++r) out[l][r] += t[r];
    }
    QSeries d = derivative_times_b2(xi, n);
    for (int r = 0; r < n; ++r) out[i][r] += d[r];
  }
  return out;
}

ModuleVector act_b(const ABModule& m, const ModuleVector& x) {
  ModuleVector out(m.rank, QSeries(m.b_truncation, Rational(0)));
  for (int i = 0; i < m.rank; ++i)
    for (int r = 0; r + 1 < m.b_truncation && r < static_cast<int>(x[i].size()); ++r) out[i][r + 1] = x[i][r];
  return out;
}

bool is_simple_pole(const ABModule& m) {
  for (const auto& row : m.a_matrix)
    for (const auto& s : row)
      if (!s.empty() && sgn(s[0]) != 0) return false;
  return true;
}

QMatrix residue(const ABModule& m) {
  QMatrix r = q_zero(m.rank, m.rank);
  for (int l = 0; l < m.rank; ++l)
    for (int i = 0; i < m.rank; ++i)
      if (m.a_matrix[l][i].size() > 1) r[l][i] = m.a_matrix[l][i][1];
  return r;
}

SeriesMatrix series_matrix_mul(const SeriesMatrix& x, const SeriesMatrix& y, int order) {
  size_t rows = x.size(), inner = y.size(), cols = inner ? y[0].size() : 0;
  SeriesMatrix z(rows, std::vector<QSeries>(cols, QSeries(order, Rational(0))));
  for (size_t i = 0; i < rows; ++i)
    for (size_t l = 0; l < inner; ++l)
      for (size_t j = 0; j < cols; ++j) {
        QSeries t = series_mul(x[i][l], y[l][j], order);
        for (int r = 0; r < order; ++r) z[i][j][r] += t[r];
      }
  return z;
}

std::optional<SeriesMatrix> series_matrix_inverse(const SeriesMatrix& p, int order) {
  const int n = p.size();
  auto coeff = [&](int r) {
    QMatrix c = q_zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (r < static_cast<int>(p[i][j].size())) c[i][j] = p[i][j][r];
    return c;
  };
  auto inv0 = q_inverse(coeff(0));
  if (!inv0) return std::nullopt;
  std::vector<QMatrix> x{*inv0};
  for (int m = 1; m < order; ++m) {
    QMatrix acc = q_zero(n, n);
    for (int r = 1; r <= m; ++r) acc = q_add(acc, q_mul(coeff(r), x[m - r]));
    QMatrix xm = q_mul(*inv0, acc);
    for (auto& row : xm)
      for (auto& v : row) v = -v;
    x.push_back(xm);
  }
  SeriesMatrix out(n, std::vector<QSeries>(n, QSeries(order, Rational(0))));
  for (int m = 0; m < order; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out[i][j][m] = x[m][i][j];
  return out;
}

ABModule base_change(const ABModule& m, const SeriesMatrix& p) {
  const int n = m.b_truncation;
  auto inv = series_matrix_inverse(p, n);
  if (!inv) throw std::invalid_argument("base change matrix is not invertible");
  SeriesMatrix ap = series_matrix_mul(m.a_matrix, p, n);
  for (int i = 0; i < m.rank; ++i)
    for (int j = 0; j < m.rank; ++j) {
      QSeries d = derivative_times_b2(padded(p[i][j], n), n);
      for (int r = 0; r < n; ++r) ap[i][j][r] += d[r];
    }
  ABModule out = m;
  out.a_matrix = series_matrix_mul(*inv, ap, n);
  return out;
}

// ---- saturation ----

namespace {

constexpr int kOffset = 1 << 12;

using Laurent = SparseVec<Rational>;

struct LaurentSpace {
  int rank;
  int col(int m, int i) const { return (m + kOffset) * rank + i; }
  int degree(int c) const { return c / rank - kOffset; }
  int index(int c) const { return c % rank; }

  int lowest(const Laurent& v) const { return v.empty() ? kOffset : degree(v.front().first); }

  Laurent truncate(const Laurent& v, int q) const {
    Laurent out;
    for (const auto& [c, x] : v)
      if (degree(c) < q) out.emplace_back(c, x);
    return out;
  }
  Laurent shift(const Laurent& v, int r) const {
    Laurent out;
    for (const auto& [c, x] : v) out.emplace_back(col(degree(c) + r, index(c)), x);
    return out;
  }
  // b^{-1} a, truncated below degree q.
  Laurent b_inv_a(const ABModule& m, const Laurent& v, int q) const {
    std::map<int, Rational> acc;
    for (const auto& [c, x] : v) {
      int d = degree(c), i = index(c);
      for (int l = 0; l < rank; ++l) {
        const auto& s = m.a_matrix[l][i];
        for (size_t r = 0; r < s.size(); ++r) {
          if (sgn(s[r]) == 0) continue;
          int e = d - 1 + static_cast<int>(r);
          if (e < q) acc[col(e, l)] += x * s[r];
        }
      }
      if (d != 0 && d < q) acc[col(d, i)] += Rational(d) * x;
    }
    return sparse_from_map(acc);
  }
};

Echelon<Rational> closure(const LaurentSpace& sp, const std::vector<Laurent>& gens, int q, int from_power) {
  Echelon<Rational> e;
  for (const auto& g : gens) {
    int d = sp.lowest(g);
    for (int r = from_power; r + d < q; ++r) e.insert(sp.truncate(sp.shift(g, r), q));
  }
  return e;
}

std::vector<Laurent> minimal_generators(const LaurentSpace& sp, std::vector<Laurent> gens, int q) {
  for (auto& g : gens) g = sp.truncate(g, q);
  std::stable_sort(gens.begin(), gens.end(),
                   [&](const Laurent& x, const Laurent& y) { return sp.lowest(x) < sp.lowest(y); });
  Echelon<Rational> e = closure(sp, gens, q, 1);
  std::vector<Laurent> out;
  for (const auto& g : gens)
    if (!g.empty() && e.insert(g)) out.push_back(g);
  return out;
}

}  // namespace

Saturation saturate(const ABModule& m, int max_steps) {
  m.validate();
  Saturation res;
  if (is_simple_pole(m)) {
    res.stabilized = true;
    res.module = m;
    return res;
  }
  const int k = m.rank;
  const int J = m.b_truncation;
  LaurentSpace sp{k};
  std::vector<Laurent> gens;
  for (int i = 0; i < k; ++i) gens.push_back({{sp.col(0, i), Rational(1)}});
  int q = J;
  for (int step = 1; step <= max_steps; ++step) {
    int mmin = kOffset;
    for (const auto& g : gens) mmin = std::min(mmin, sp.lowest(g));
    int q2 = std::min(q - 1, J - 1 + mmin);
    if (q2 - mmin < 2) {
      res.steps = step;
      res.diagnostic = "precision exhausted before the lattice stabilized";
      return res;
    }
    std::vector<Laurent> next = gens;
    for (const auto& g : gens) next.push_back(sp.b_inv_a(m, g, q2));
    int old_rank = closure(sp, gens, q2, 0).rank();
    int new_rank = closure(sp, next, q2, 0).rank();
    gens = minimal_generators(sp, next, q2);
    q = q2;
    if (old_rank == new_rank) {
      res.steps = step - 1;
      res.stabilized = true;
      break;
    }
    res.steps = step;
  }
  if (!res.stabilized) {
    res.diagnostic = "lattice did not stabilize within the step limit";
    return res;
  }
  if (static_cast<int>(gens.size()) != k) {
    res.stabilized = false;
    res.diagnostic = "generator count differs from rank at this truncation";
    return res;
  }

  int mmin = kOffset, dmax = -kOffset;
  for (const auto& g : gens) {
    mmin = std::min(mmin, sp.lowest(g));
    dmax = std::max(dmax, sp.lowest(g));
  }
  int q3 = std::min(q - 1, J - 1 + mmin);
  int qeff = std::min(q, q3 + 1);
  int jout = qeff - dmax;
  if (jout < 2) {
    res.stabilized = false;
    res.diagnostic = "saturated lattice leaves no precision for the a-matrix";
    return res;
  }
  Echelon<Rational> basis(RationalRing{}, true);
  std::vector<std::pair<int, int>> gen_of;  // generator number -> (l, r)
  for (int l = 0; l < k; ++l) {
    int d = sp.lowest(gens[l]);
    for (int r = 0; r + d < qeff; ++r) {
      basis.insert(sp.truncate(sp.shift(gens[l], r), qeff));
      gen_of.emplace_back(l, r);
    }
  }
  ABModule out;
  out.rank = k;
  out.b_truncation = jout;
  out.a_matrix.assign(k, std::vector<QSeries>(k, QSeries(jout, Rational(0))));
  for (int i = 0; i < k; ++i) {
    Laurent au = sp.truncate(sp.shift(sp.b_inv_a(m, gens[i], q3), 1), qeff);
    auto red = basis.reduce_tracked(au);
    if (!red.remainder.empty()) {
      res.stabilized = false;
      res.diagnostic = "a-image left the saturated lattice";
      return res;
    }
    for (const auto& [g, c] : red.combination) {
      auto [l, r] = gen_of[g];
      if (r < jout) out.a_matrix[l][i][r] = c;
    }
  }
  res.pole_order = std::max(0, -mmin);
  res.module = out;
  return res;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "true";
    case Verdict::No: return "false";
    default: return "indeterminate";
  }
}

SpectralData spectrum(const ABModule& m, int max_steps) {
  SpectralData out;
  Saturation sat = saturate(m, max_steps);
  out.saturated = sat.stabilized;
  if (!sat.stabilized) {
    out.diagnostic = sat.diagnostic;
    out.unresolved_degree = m.rank;
    return out;
  }
  if (sat.module.b_truncation < 2) {
    out.saturated = false;
    out.diagnostic = "b-truncation too small to read the residue";
    out.unresolved_degree = m.rank;
    return out;
  }
  if (m.rank == 0) return out;
  auto roots = rational_roots(charpoly(residue(sat.module)));
  out.spectrum = roots.roots;
  out.unresolved_degree = roots.unresolved_degree;
  if (out.unresolved_degree > 0) out.diagnostic = "characteristic polynomial has factors without rational roots";
  return out;
}

GeometricReport is_geometric(const ABModule& m, int max_steps) {
  GeometricReport g;
  g.spectral = spectrum(m, max_steps);
  g.regular = g.spectral.saturated;
  g.rational = g.regular && g.spectral.rational();
  g.positive = g.rational;
  for (const auto& [l, mult] : g.spectral.spectrum)
    if (sgn(l) <= 0) g.positive = false;
  std::ostringstream cert;
  if (!g.regular) {
    g.verdict = Verdict::Indeterminate;
    cert << "regularity undecided: " << g.spectral.diagnostic;
  } else if (!g.rational) {
    g.verdict = Verdict::Indeterminate;
    cert << "non-geometric at this truncation: irrational factor of degree " << g.spectral.unresolved_degree;
  } else if (!g.positive) {
    g.verdict = Verdict::No;
    cert << "positivity fails:";
    for (const auto& [l, mult] : g.spectral.spectrum)
      if (sgn(l) <= 0) cert << " " << l.get_str();
  } else {
    g.verdict = Verdict::Yes;
    cert << "regular, rational, positive";
  }
  g.certificate = cert.str();
  return g;
}

// ---- Hom(E, Xi) ----

HomToXi hom_to_xi(const ABModule& m, const xi::XiShape& shape_in) {
  m.validate();
  shape_in.validate();
  HomToXi out;
  xi::XiShape shape = shape_in;
  const int J = std::min(shape.b_truncation, m.b_truncation);
  shape.b_truncation = J;
  const int T = std::max(1, J - 1);
  const int k = m.rank;

  std::vector<xi::Generator> gens;
  for (const auto& l : shape.lambdas)
    for (int j = 0; j <= shape.k; ++j) gens.emplace_back(l, j);
  const int ng = gens.size();

  auto unknown = [&](int i, int g, int ord) { return (i * ng + g) * T + ord; };
  auto equation = [&](int i, int g, int ord) { return (i * ng + g) * J + ord; };
  std::map<xi::Generator, int> gen_index;
  for (int g = 0; g < ng; ++g) gen_index[gens[g]] = g;

  const int nu = k * ng * T, ne = k * ng * J;
  QMatrix sys = q_zero(ne, nu);
  for (int l = 0; l < k; ++l)
    for (int g = 0; g < ng; ++g)
      for (int ord = 0; ord < T; ++ord) {
        xi::XiElement base = xi::make_generator(shape, gens[g].first, gens[g].second);
        QSeries shift(J, Rational(0));
        if (ord < J) shift[ord] = 1;
        base = xi::mul_series(shape, base, shift);
        int u = unknown(l, g, ord);
        // a(phi(e_l)) enters the equation block of e_l
        for (const auto& [gen, s] : xi::act_a(shape, base).coeffs)
          for (int r = 0; r < J; ++r) sys[equation(l, gen_index[gen], r)][u] += s[r];
        // phi(a e_i) = sum_l A_{li} phi(e_l)
        for (int i = 0; i < k; ++i) {
          for (const auto& [gen, s] : xi::mul_series(shape, base, padded(m.a_matrix[l][i], J)).coeffs)
            for (int r = 0; r < J; ++r) sys[equation(i, gen_index[gen], r)][u] -= s[r];
        }
      }
  auto ker = nu > 0 ? q_kernel(sys, nu) : std::vector<std::vector<Rational>>{};
  out.dimension = ker.size();
  out.intertwines = true;
  for (const auto& v : ker) {
    std::vector<xi::XiElement> images(k);
    for (int i = 0; i < k; ++i) {
      xi::XiElement e;
      for (int g = 0; g < ng; ++g) {
        QSeries s(J, Rational(0));
        for (int ord = 0; ord < T; ++ord) s[ord] = v[unknown(i, g, ord)];
        if (!series_is_zero(s)) e.coeffs[gens[g]] = s;
      }
      images[i] = xi::normalize(shape, e);
    }
    for (int i = 0; i < k; ++i) {
      xi::XiElement rhs;
      for (int l = 0; l < k; ++l)
        rhs = xi::add(shape, rhs, xi::mul_series(shape, images[l], padded(m.a_matrix[l][i], J)));
      if (!(xi::act_a(shape, images[i]) == rhs)) out.intertwines = false;
    }
    out.generators.push_back(std::move(images));
  }

  SpectralData sd = spectrum(m);
  for (const auto& [l, mult] : sd.spectrum) {
    Rational frac = l - Rational(Integer(l.get_num() / l.get_den()));
    if (sgn(frac) <= 0) frac += 1;
    if (std::find(shape.lambdas.begin(), shape.lambdas.end(), frac) == shape.lambdas.end() &&
        std::find(out.missing_lambdas.begin(), out.missing_lambdas.end(), frac) == out.missing_lambdas.end())
      out.missing_lambdas.push_back(frac);
  }
  return out;
}

// ---- finite presentations ----

namespace {

struct Window {
  int g, nb, K;
  int col(int i, int j, int k) const { return ((K - 1 - k) * nb + j) * g + i; }
  std::tuple<int, int, int> decode(int c) const {
    int i = c % g;
    int rest = c / g;
    int j = rest % nb;
    int k = K - 1 - rest / nb;
    return {i, j, k};
  }
  int size() const { return g * nb * K; }
};

std::string monomial_label(int i, int j, int k) {
  std::ostringstream s;
  if (j > 0) s << "b" << (j > 1 ? "^" + std::to_string(j) : "") << "*";
  if (k > 0) s << "a" << (k > 1 ? "^" + std::to_string(k) : "") << "*";
  s << "g" << i;
  return s.str();
}

struct PresentedWindow {
  Window w;
  Echelon<Rational> rel;
  std::vector<std::tuple<int, int, int>> standard;  // sorted by window column
  std::map<std::tuple<int, int, int>, int> position;

  PresentedWindow(const FinitePresentation& p, int K) : w{p.generators, p.b_truncation, K} {
    for (const auto& r : p.relations) {
      if (static_cast<int>(r.size()) != p.generators) throw std::invalid_argument("relation has wrong length");
      for (int j = 0; j < w.nb; ++j)
        for (int k = 0; k < K; ++k) {
          auto y = ncab::QElement::monomial(j, k, w.nb);
          std::map<int, Rational> v;
          bool fits = true;
          for (int i = 0; i < w.g && fits; ++i) {
            if (r[i].b_truncation() != w.nb) throw ncab::TruncationMismatch("relation truncation differs");
            for (const auto& [jj, kk, c] : y.mul(r[i]).terms()) {
              if (kk >= K) {
                fits = false;
                break;
              }
              v[w.col(i, jj, kk)] += c;
            }
          }
          if (fits) rel.insert(sparse_from_map(v));
        }
    }
    for (int c = 0; c < w.size(); ++c)
      if (!rel.has_pivot(c)) {
        position[w.decode(c)] = standard.size();
        standard.push_back(w.decode(c));
      }
  }

  // Coordinates (over standard monomials) of sum c * b^j a^k g_i.
  std::vector<Rational> reduce(const std::vector<std::tuple<int, int, int, Rational>>& terms) const {
    std::map<int, Rational> v;
    for (const auto& [i, j, k, c] : terms) {
      if (k >= w.K) throw TruncationInsufficient("term outside the a-degree window");
      v[w.col(i, j, k)] += c;
    }
    std::vector<Rational> out(standard.size(), Rational(0));
    for (const auto& [c, x] : rel.reduce(sparse_from_map(v))) out[position.at(w.decode(c))] = x;
    return out;
  }
};

std::vector<std::tuple<int, int, int, Rational>> left_multiply(const ncab::QElement& op, int i, int j, int k,
                                                               int nb) {
  std::vector<std::tuple<int, int, int, Rational>> out;
  for (const auto& [jj, kk, c] : op.mul(ncab::QElement::monomial(j, k, nb)).terms()) out.emplace_back(i, jj, kk, c);
  return out;
}

QMatrix columns_to_matrix(const std::vector<std::vector<Rational>>& cols, int rows) {
  QMatrix m = q_zero(rows, cols.size());
  for (size_t c = 0; c < cols.size(); ++c)
    for (int r = 0; r < rows; ++r) m[r][c] = cols[c][r];
  return m;
}

}  // namespace

TorsionResult torsion(const FinitePresentation& p, char which, int n, int a_window) {
  if (which != 'a' && which != 'b') throw std::invalid_argument("torsion kind must be a or b");
  if (n < 1 || a_window < 1) throw std::invalid_argument("exponent and window must be positive");
  PresentedWindow base(p, a_window);
  PresentedWindow target(p, a_window + (which == 'a' ? n : 0));
  PresentedWindow wider(p, a_window + 2);
  auto gen = which == 'a' ? ncab::QElement::gen_a(p.b_truncation) : ncab::QElement::gen_b(p.b_truncation);
  auto op = gen.pow(n);
  auto one = ncab::QElement::scalar(Rational(1), p.b_truncation);

  std::vector<std::vector<Rational>> image, incl;
  for (const auto& [i, j, k] : base.standard) {
    image.push_back(target.reduce(left_multiply(op, i, j, k, p.b_truncation)));
    incl.push_back(target.reduce(left_multiply(one, i, j, k, p.b_truncation)));
  }
  const int dim = base.standard.size();
  TorsionResult res;
  res.window_dimension = dim;
  for (const auto& [i, j, k] : base.standard) res.labels.push_back(monomial_label(i, j, k));
  res.stabilized = base.standard == wider.standard;
  if (dim == 0) return res;
  int rows = target.standard.size();
  auto ker = rows ? q_kernel(columns_to_matrix(image, rows), dim) : q_kernel(q_zero(1, dim), dim);
  auto dead = rows ? q_kernel(columns_to_matrix(incl, rows), dim) : q_kernel(q_zero(1, dim), dim);
  res.basis = ker;
  res.dimension = ker.size() - dead.size();
  return res;
}

FiniteModule to_finite_module(const FinitePresentation& p, int a_window) {
  PresentedWindow base(p, a_window);
  PresentedWindow up(p, a_window + 1);
  PresentedWindow wider(p, a_window + 2);
  if (base.standard != up.standard || base.standard != wider.standard)
    throw TruncationInsufficient("presentation is not finite-dimensional at this a-degree window");
  FiniteModule fm;
  fm.dim = base.standard.size();
  fm.a = q_zero(fm.dim, fm.dim);
  fm.b = q_zero(fm.dim, fm.dim);
  auto a = ncab::QElement::gen_a(p.b_truncation);
  auto b = ncab::QElement::gen_b(p.b_truncation);
  for (int c = 0; c < fm.dim; ++c) {
    auto [i, j, k] = base.standard[c];
    fm.labels.push_back(monomial_label(i, j, k));
    auto va = up.reduce(left_multiply(a, i, j, k, p.b_truncation));
    auto vb = base.reduce(left_multiply(b, i, j, k, p.b_truncation));
    for (int r = 0; r < fm.dim; ++r) {
      fm.a[r][c] = va[r];
      fm.b[r][c] = vb[r];
    }
  }
  return fm;
}

// ---- subspaces ----

namespace {

Subspace basis_of(const Subspace& s, int dim) {
  Echelon<Rational> e;
  Subspace out;
  for (const auto& v : s) {
    std::map<int, Rational> m;
    for (int i = 0; i < dim; ++i)
      if (sgn(v[i]) != 0) m[i] = v[i];
    if (e.insert(sparse_from_map(m))) out.push_back(v);
  }
  return out;
}

std::vector<Rational> apply(const QMatrix& x, const std::vector<Rational>& v) {
  std::vector<Rational> out(x.size(), Rational(0));
  for (size_t r = 0; r < x.size(); ++r)
    for (size_t c = 0; c < v.size(); ++c)
      if (sgn(v[c]) != 0) out[r] += x[r][c] * v[c];
  return out;
}

}  // namespace

Subspace kernel_of_power(const QMatrix& x, int n, int dim) {
  if (dim == 0) return {};
  return q_kernel(q_power(x, n), dim);
}

int subspace_dim(const Subspace& s, int dim) { return basis_of(s, dim).size(); }

bool subspace_contains(const Subspace& big, const Subspace& small, int dim) {
  Subspace all = big;
  all.insert(all.end(), small.begin(), small.end());
  return subspace_dim(all, dim) == subspace_dim(big, dim);
}

Subspace subspace_image(const QMatrix& x, const Subspace& s) {
  Subspace out;
  for (const auto& v : s) out.push_back(apply(x, v));
  return out;
}

Subspace subspace_intersection(const Subspace& u0, const Subspace& v0, int dim) {
  Subspace u = basis_of(u0, dim), v = basis_of(v0, dim);
  if (u.empty() || v.empty()) return {};
  const int p = u.size(), q = v.size();
  QMatrix m = q_zero(dim, p + q);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < p; ++c) m[r][c] = u[c][r];
    for (int c = 0; c < q; ++c) m[r][p + c] = -v[c][r];
  }
  Subspace out;
  for (const auto& y : q_kernel(m, p + q)) {
    std::vector<Rational> w(dim, Rational(0));
    for (int c = 0; c < p; ++c)
      for (int r = 0; r < dim; ++r) w[r] += y[c] * u[c][r];
    out.push_back(w);
  }
  return basis_of(out, dim);
}

int nilpotency_on(const QMatrix& x, const Subspace& s, int dim) {
  Subspace cur = s;
  for (int n = 0; n <= dim + 1; ++n) {
    if (subspace_dim(cur, dim) == 0) return n;
    cur = subspace_image(x, cur);
  }
  return -1;
}

Subspace a_torsion(const FiniteModule& m) { return kernel_of_power(m.a, std::max(1, m.dim), m.dim); }
Subspace b_torsion(const FiniteModule& m) { return kernel_of_power(m.b, std::max(1, m.dim), m.dim); }

Subspace a_tilde(const FiniteModule& m) {
  Subspace s = basis_of(a_torsion(m), m.dim);
  while (!s.empty()) {
    const int p = s.size(), d = m.dim;
    QMatrix sys = q_zero(2 * d, 3 * p);
    auto as = subspace_image(m.a, s), bs = subspace_image(m.b, s);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < p; ++c) {
        sys[r][c] = as[c][r];
        sys[r][p + c] = -s[c][r];
        sys[d + r][c] = bs[c][r];
        sys[d + r][2 * p + c] = -s[c][r];
      }
    Subspace next;
    for (const auto& y : q_kernel(sys, 3 * p)) {
      std::vector<Rational> w(d, Rational(0));
      for (int c = 0; c < p; ++c)
        for (int r = 0; r < d; ++r) w[r] += y[c] * s[c][r];
      next.push_back(w);
    }
    next = basis_of(next, d);
    if (next.size() == s.size()) break;
    s = next;
  }
  return s;
}

bool commutation_holds(const FiniteModule& m) {
  if (m.dim == 0) return true;
  return q_sub(q_mul(m.a, m.b), q_mul(m.b, m.a)) == q_mul(m.b, m.b);
}

SmallnessReport is_S_small(const std::optional<ABModule>& free_part, const FiniteModule& t) {
  if (free_part) free_part->validate();
  SmallnessReport rep;
  const int d = t.dim;
  Subspace whole;
  for (int i = 0; i < d; ++i) {
    std::vector<Rational> e(d, Rational(0));
    e[i] = 1;
    whole.push_back(e);
  }
  Subspace A = a_torsion(t), B = b_torsion(t);

  Subspace inter = whole;
  for (int m = 0; m <= d; ++m) {
    Subspace next = basis_of(subspace_image(t.b, inter), d);
    if (subspace_dim(next, d) == subspace_dim(inter, d)) break;
    inter = next;
  }
  rep.cond_intersection = subspace_contains(A, inter, d);
  rep.cond_b_in_a = subspace_contains(A, B, d);
  rep.witness_n = nilpotency_on(t.a, A, d);
  rep.cond_a_nilpotent = rep.witness_n >= 0;

  rep.ker_b_generators = d ? q_kernel(t.b, d) : Subspace{};
  Subspace img = basis_of(subspace_image(t.b, whole), d);
  Subspace span = img;
  for (const auto& e : whole)
    if (!subspace_contains(span, {e}, d)) {
      span.push_back(e);
      rep.coker_b_generators.push_back(e);
    }
  rep.cond_coherent = true;

  Subspace at = a_tilde(t);
  rep.b_equals_a_tilde = subspace_contains(at, B, d) && subspace_contains(B, at, d);
  int n = std::max(rep.witness_n, 0);
  Subspace kb = B;
  for (int i = 0; i < 2 * n; ++i) kb = subspace_image(t.b, kb);
  rep.b_power_kills = subspace_dim(kb, d) == 0;

  std::ostringstream c;
  c << "free rank " << (free_part ? free_part->rank : 0) << ", torsion dim " << d << "; ";
  c << "1:" << (rep.cond_intersection ? "ok" : "fails") << " 2:" << (rep.cond_b_in_a ? "ok" : "fails")
    << " 3:" << (rep.cond_a_nilpotent ? "ok (N=" + std::to_string(rep.witness_n) + ")" : "fails")
    << " 4:ok (" << rep.ker_b_generators.size() << " kernel, " << rep.coker_b_generators.size()
    << " cokernel generators)";
  rep.certificate = c.str();
  return rep;
}

}  // namespace abkit::abmod
