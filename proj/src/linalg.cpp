#include "abkit/linalg.hpp"

#include <cmath>
#include <complex>

namespace abkit {

QMatrix q_zero(int rows, int cols) {
  return QMatrix(rows, std::vector<Rational>(cols, Rational(0)));
}

QMatrix q_identity(int n) {
  QMatrix m = q_zero(n, n);
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

QMatrix q_mul(const QMatrix& a, const QMatrix& b) {
  int n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  QMatrix c = q_zero(n, m);
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < k; ++l) {
      if (sgn(a[i][l]) == 0) continue;
      for (int j = 0; j < m; ++j)
        if (sgn(b[l][j]) != 0) c[i][j] += a[i][l] * b[l][j];
    }
  return c;
}

QMatrix q_add(const QMatrix& a, const QMatrix& b) {
  QMatrix c = a;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[i].size(); ++j) c[i][j] += b[i][j];
  return c;
}

QMatrix q_sub(const QMatrix& a, const QMatrix& b) {
  QMatrix c = a;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[i].size(); ++j) c[i][j] -= b[i][j];
  return c;
}

QMatrix q_power(const QMatrix& a, int n) {
  QMatrix r = q_identity(a.size());
  for (int i = 0; i < n; ++i) r = q_mul(r, a);
  return r;
}

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<int> rref(QMatrix& m, int cols) {
  std::vector<int> piv;
  int rows = m.size(), r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = -1;
    for (int i = r; i < rows; ++i)
      if (sgn(m[i][c]) != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(m[p], m[r]);
    const int width = m[r].size();
    Rational inv = Rational(1) / m[r][c];
    for (int j = c; j < width; ++j) m[r][j] *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || sgn(m[i][c]) == 0) continue;
      Rational f = m[i][c];
      for (int j = c; j < width; ++j) m[i][j] -= f * m[r][j];
    }
    piv.push_back(c);
    ++r;
  }
  return piv;
}

}  // namespace

int q_rank(const QMatrix& a) {
  if (a.empty()) return 0;
  QMatrix m = a;
  return rref(m, a[0].size()).size();
}

std::vector<std::vector<Rational>> q_kernel(const QMatrix& a, int cols) {
  QMatrix m = a;
  auto piv = rref(m, cols);
  std::vector<bool> is_piv(cols, false);
  for (int c : piv) is_piv[c] = true;
  std::vector<std::vector<Rational>> basis;
  for (int free = 0; free < cols; ++free) {
    if (is_piv[free]) continue;
    std::vector<Rational> v(cols, Rational(0));
    v[free] = 1;
    for (size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -m[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<QMatrix> q_inverse(const QMatrix& a) {
  int n = a.size();
  QMatrix m = q_zero(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m[i][j] = a[i][j];
    m[i][n + i] = 1;
  }
  auto piv = rref(m, n);
  if (static_cast<int>(piv.size()) < n) return std::nullopt;
  QMatrix inv = q_zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv[i][j] = m[i][n + j];
  return inv;
}

UPoly upoly_trim(UPoly p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
  return p;
}

UPoly upoly_mul(const UPoly& a, const UPoly& b) {
  if (a.empty() || b.empty()) return {};
  UPoly c(a.size() + b.size() - 1, Rational(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return upoly_trim(c);
}

UPoly upoly_sub(const UPoly& a, const UPoly& b) {
  UPoly c(std::max(a.size(), b.size()), Rational(0));
  for (size_t i = 0; i < a.size(); ++i) c[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) c[i] -= b[i];
  return upoly_trim(c);
}

UPoly upoly_derivative(const UPoly& a) {
  UPoly d;
  for (size_t i = 1; i < a.size(); ++i) d.push_back(a[i] * Rational(static_cast<long>(i)));
  return upoly_trim(d);
}

std::pair<UPoly, UPoly> upoly_divmod(const UPoly& a, const UPoly& b) {
  UPoly r = upoly_trim(a), bb = upoly_trim(b);
  if (bb.empty()) throw std::domain_error("polynomial division by zero");
  if (r.size() < bb.size()) return {{}, r};
  UPoly q(r.size() - bb.size() + 1, Rational(0));
  while (!r.empty() && r.size() >= bb.size()) {
    size_t shift = r.size() - bb.size();
    Rational c = r.back() / bb.back();
    q[shift] = c;
    for (size_t i = 0; i < bb.size(); ++i) r[shift + i] -= c * bb[i];
    r = upoly_trim(r);
  }
  return {upoly_trim(q), r};
}

UPoly upoly_gcd(const UPoly& a, const UPoly& b) {
  UPoly x = upoly_trim(a), y = upoly_trim(b);
  while (!y.empty()) {
    UPoly r = upoly_divmod(x, y).second;
    x = std::move(y);
    y = std::move(r);
  }
  if (!x.empty()) {
    Rational lc = x.back();
    for (auto& c : x) c /= lc;
  }
  return x;
}

Rational upoly_eval(const UPoly& p, const Rational& x) {
  Rational v = 0;
  for (size_t i = p.size(); i-- > 0;) v = v * x + p[i];
  return v;
}

UPoly charpoly(const QMatrix& m) {
  // Faddeev-LeVerrier: det(xI - M).
  int n = m.size();
  UPoly c(n + 1, Rational(0));
  c[n] = 1;
  QMatrix mk = q_zero(n, n);  // M_0 = 0
  QMatrix id = q_identity(n);
  for (int k = 1; k <= n; ++k) {
    // M_k = M (M_{k-1} + c_{n-k+1} I), c_{n-k} = -tr(M_k)/k
    QMatrix t = mk;
    for (int i = 0; i < n; ++i) t[i][i] += c[n - k + 1];
    mk = q_mul(m, t);
    Rational tr = 0;
    for (int i = 0; i < n; ++i) tr += mk[i][i];
    c[n - k] = -tr / Rational(k);
  }
  return c;
}

namespace {

using cplx = std::complex<long double>;

std::vector<cplx> aberth(const std::vector<long double>& coef) {
  int n = static_cast<int>(coef.size()) - 1;
  std::vector<cplx> z(n);
  long double bound = 0;
  for (int i = 0; i < n; ++i) bound = std::max(bound, std::fabs(coef[i] / coef[n]));
  bound += 1;
  for (int i = 0; i < n; ++i)
    z[i] = std::polar(bound * 0.5L, 2 * 3.14159265358979323846L * (i + 0.25L) / n);
  auto eval = [&](cplx x, cplx& d) {
    cplx v = coef[n], dv = 0;
    for (int i = n - 1; i >= 0; --i) {
      dv = dv * x + v;
      v = v * x + coef[i];
    }
    d = dv;
    return v;
  };
  for (int iter = 0; iter < 500; ++iter) {
    long double change = 0;
    for (int i = 0; i < n; ++i) {
      cplx d;
      cplx v = eval(z[i], d);
      if (std::abs(v) == 0) continue;
      cplx ratio = v / d;
      cplx s = 0;
      for (int j = 0; j < n; ++j)
        if (j != i) s += 1.0L / (z[i] - z[j]);
      cplx w = ratio / (1.0L - ratio * s);
      z[i] -= w;
      change = std::max(change, std::abs(w) / (1 + std::abs(z[i])));
    }
    if (change < 1e-17L) break;
  }
  return z;
}

// Newton refinement of a simple real root with GMP floats.
mpf_class refine(const UPoly& p, long double start) {
  const int bits = 512;
  std::vector<mpf_class> c;
  for (const auto& q : p) c.emplace_back(q, bits);
  UPoly dp = upoly_derivative(p);
  std::vector<mpf_class> dc;
  for (const auto& q : dp) dc.emplace_back(q, bits);
  mpf_class x(static_cast<double>(start), bits);
  for (int it = 0; it < 200; ++it) {
    mpf_class v(0, bits), d(0, bits);
    for (size_t i = c.size(); i-- > 0;) v = v * x + c[i];
    for (size_t i = dc.size(); i-- > 0;) d = d * x + dc[i];
    if (d == 0) break;
    mpf_class step(v / d, bits);
    x -= step;
    if (abs(step) < mpf_class(1e-120, bits) * (1 + abs(x))) break;
  }
  return x;
}

// Rational roots of a square-free polynomial (each simple).
std::vector<Rational> simple_rational_roots(UPoly p) {
  std::vector<Rational> found;
  p = upoly_trim(p);
  while (p.size() > 1) {
    // Integer primitive form to bound denominators: a rational root r of a
    // primitive integer polynomial with leading coefficient lc has lc*r integral.
    Integer den = 1;
    for (const auto& c : p) {
      Integer g;
      mpz_lcm(g.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
      den = g;
    }
    std::vector<Integer> ic;
    for (const auto& c : p) ic.push_back(Integer(c * Rational(den)));
    Integer g = 0;
    for (const auto& c : ic) {
      Integer t;
      mpz_gcd(t.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
      g = t;
    }
    for (auto& c : ic) c /= g;
    Integer lc = abs(ic.back());

    if (p.size() == 2) {
      found.push_back(-p[0] / p[1]);
      break;
    }
    std::vector<long double> coef;
    for (const auto& c : p) coef.push_back(static_cast<long double>(c.get_d()));
    auto approx = aberth(coef);
    bool progress = false;
    for (const auto& z : approx) {
      if (std::fabs(z.imag()) > 1e-6L * (1 + std::fabs(z.real()))) continue;
      mpf_class x = refine(p, z.real());
      mpf_class scaled = x * mpf_class(lc, 512) + mpf_class(0.5, 512);
      mpf_class fl = floor(scaled);
      Integer num(fl);
      Rational cand(num, lc);
      cand.canonicalize();
      if (sgn(upoly_eval(p, cand)) == 0) {
        found.push_back(cand);
        p = upoly_divmod(p, UPoly{-cand, Rational(1)}).first;
        progress = true;
        break;
      }
    }
    if (!progress) break;
  }
  return found;
}

}  // namespace

RationalRoots rational_roots(const UPoly& poly) {
  RationalRoots out;
  UPoly p = upoly_trim(poly);
  if (p.empty()) throw std::domain_error("zero polynomial has no root set");
  std::map<Rational, int> mult;
  int zeros = 0;
  while (p.size() > 1 && sgn(p[0]) == 0) {
    p.erase(p.begin());
    ++zeros;
  }
  if (zeros) mult[Rational(0)] += zeros;
  // Yun's square-free decomposition: p = prod a_i^i.
  int remaining = 0;
  if (p.size() > 1) {
    UPoly dp = upoly_derivative(p);
    UPoly a = upoly_gcd(p, dp);
    UPoly b = upoly_divmod(p, a).first;
    UPoly c = upoly_divmod(dp, a).first;
    UPoly d = upoly_sub(c, upoly_derivative(b));
    int i = 1;
    while (b.size() > 1) {
      UPoly ai = upoly_gcd(b, d);
      if (ai.size() > 1) {
        auto roots = simple_rational_roots(ai);
        for (const auto& r : roots) mult[r] += i;
        remaining += (static_cast<int>(ai.size()) - 1 - static_cast<int>(roots.size())) * i;
      }
      b = upoly_divmod(b, ai).first;
      c = upoly_divmod(d, ai).first;
      d = upoly_sub(c, upoly_derivative(b));
      ++i;
    }
  }
  for (const auto& [r, m] : mult) out.roots.emplace_back(r, m);
  out.unresolved_degree = remaining;
  return out;
}

}  // namespace abkit
