#include "abkit/xi.hpp"

#include <algorithm>
#include <sstream>

namespace abkit {

namespace {

template <class S>
std::string render_series_impl(const Series<S>& s, const std::string& var) {
  std::ostringstream out;
  bool first = true;
  for (size_t m = 0; m < s.size(); ++m) {
    if (is_zero(s[m])) continue;
    std::string c = to_string(s[m]);
    bool compound = c.find(' ') != std::string::npos;
    bool negative = !compound && c[0] == '-';
    std::string mag = negative ? c.substr(1) : c;
    if (compound) mag = "(" + c + ")";
    out << (first ? (negative ? "-" : "") : (negative ? " - " : " + "));
    first = false;
    if (m == 0) {
      out << mag;
      continue;
    }
    if (mag != "1") out << mag << "*";
    out << var;
    if (m > 1) out << "^" << m;
  }
  return first ? "0" : out.str();
}

}  // namespace

std::string render_series(const QSeries& s, const std::string& var) {
  return render_series_impl(s, var);
}
std::string render_series(const Series<ParamScalar>& s, const std::string& var) {
  return render_series_impl(s, var);
}

}  // namespace abkit

namespace abkit::xi {

void XiShape::validate() const {
  if (k < 0) throw std::invalid_argument("log-degree k must be non-negative");
  if (b_truncation < 1) throw std::invalid_argument("b-truncation must be positive");
  for (const auto& l : lambdas)
    if (sgn(l) <= 0 || l > 1) throw std::invalid_argument("lambda must lie in (0,1]");
}

bool XiShape::has(const Rational& lambda, int j) const {
  return j >= 0 && j <= k && std::find(lambdas.begin(), lambdas.end(), lambda) != lambdas.end();
}

int XiElement::b_valuation() const {
  int v = -1;
  for (const auto& [g, s] : coeffs) {
    int w = series_valuation(s);
    if (w >= 0 && (v < 0 || w < v)) v = w;
  }
  return v;
}

XiElement normalize(const XiShape& shape, XiElement x) {
  for (auto it = x.coeffs.begin(); it != x.coeffs.end();) {
    if (!shape.has(it->first.first, it->first.second))
      throw std::invalid_argument("generator outside the shape");
    it->second.resize(shape.b_truncation, Rational(0));
    if (series_is_zero(it->second))
      it = x.coeffs.erase(it);
    else
      ++it;
  }
  return x;
}

XiElement make_generator(const XiShape& shape, const Rational& lambda, int j) {
  XiElement x;
  QSeries s(shape.b_truncation, Rational(0));
  s[0] = 1;
  x.coeffs[{lambda, j}] = s;
  return normalize(shape, x);
}

XiElement add(const XiShape& shape, const XiElement& x, const XiElement& y) {
  XiElement r = x;
  for (const auto& [g, s] : y.coeffs) {
    auto& t = r.coeffs[g];
    t.resize(shape.b_truncation, Rational(0));
    for (size_t m = 0; m < s.size() && m < t.size(); ++m) t[m] += s[m];
  }
  return normalize(shape, r);
}

XiElement scale(const XiShape& shape, const XiElement& x, const Rational& c) {
  XiElement r = x;
  for (auto& [g, s] : r.coeffs)
    for (auto& v : s) v *= c;
  return normalize(shape, r);
}

XiElement mul_series(const XiShape& shape, const XiElement& x, const QSeries& f) {
  XiElement r;
  for (const auto& [g, s] : x.coeffs) r.coeffs[g] = series_mul(s, f, shape.b_truncation);
  return normalize(shape, r);
}

XiElement act_a(const XiShape& shape, const XiElement& x) {
  const int n = shape.b_truncation;
  XiElement r;
  for (const auto& [g, s] : x.coeffs) {
    const auto& [lambda, j] = g;
    for (size_t m = 0; m < s.size(); ++m) {
      if (sgn(s[m]) == 0 || static_cast<int>(m) + 1 >= n) continue;
      auto& same = r.coeffs[g];
      same.resize(n, Rational(0));
      same[m + 1] += (lambda + Rational(static_cast<long>(m))) * s[m];
      if (j >= 1) {
        auto& lower = r.coeffs[{lambda, j - 1}];
        lower.resize(n, Rational(0));
        lower[m + 1] += s[m];
      }
    }
  }
  return normalize(shape, r);
}

XiElement act_b(const XiShape& shape, const XiElement& x) {
  XiElement r;
  for (const auto& [g, s] : x.coeffs) {
    QSeries t(shape.b_truncation, Rational(0));
    for (size_t m = 0; m + 1 < t.size() && m < s.size(); ++m) t[m + 1] = s[m];
    r.coeffs[g] = t;
  }
  return normalize(shape, r);
}

ABasisCoeffs to_a_basis(const XiShape& shape, const XiElement& x, int na) {
  shape.validate();
  const int n = shape.b_truncation;
  const int k = shape.k;
  ABasisCoeffs out;
  for (const auto& lambda : shape.lambdas)
    for (int j = 0; j <= k; ++j) out[{lambda, j}] = std::vector<Rational>(na, Rational(0));

  // powers[m][j] = a^m e_j(lambda), per lambda.
  XiElement residual = x;
  for (const auto& lambda : shape.lambdas) {
    std::vector<XiElement> cur;
    for (int j = 0; j <= k; ++j) cur.push_back(make_generator(shape, lambda, j));
    for (int m = 0; m < na && m < n; ++m) {
      // The b^m coefficients of a^m e_j form an invertible (k+1)x(k+1) matrix.
      QMatrix p = q_zero(k + 1, k + 1);
      for (int j = 0; j <= k; ++j)
        for (int i = 0; i <= k; ++i) {
          auto it = cur[j].coeffs.find({lambda, i});
          if (it != cur[j].coeffs.end()) p[i][j] = it->second[m];
        }
      auto inv = q_inverse(p);
      if (!inv) throw std::logic_error("singular change of basis");
      std::vector<Rational> v(k + 1, Rational(0));
      for (int i = 0; i <= k; ++i) {
        auto it = residual.coeffs.find({lambda, i});
        if (it != residual.coeffs.end()) v[i] = it->second[m];
      }
      for (int j = 0; j <= k; ++j) {
        Rational c = 0;
        for (int i = 0; i <= k; ++i) c += (*inv)[j][i] * v[i];
        if (sgn(c) == 0) continue;
        out[{lambda, j}][m] = c;
        residual = add(shape, residual, scale(shape, cur[j], -c));
      }
      for (auto& e : cur) e = act_a(shape, e);
    }
  }
  return out;
}

XiElement from_a_basis(const XiShape& shape, const ABasisCoeffs& c) {
  XiElement total;
  for (const auto& [g, coeffs] : c) {
    XiElement term = make_generator(shape, g.first, g.second);
    for (size_t m = 0; m < coeffs.size(); ++m) {
      if (sgn(coeffs[m]) != 0) total = add(shape, total, scale(shape, term, coeffs[m]));
      term = act_a(shape, term);
    }
  }
  return total;
}

int a_valuation(const ABasisCoeffs& c) {
  int v = -1;
  for (const auto& [g, coeffs] : c)
    for (size_t m = 0; m < coeffs.size(); ++m)
      if (sgn(coeffs[m]) != 0) {
        if (v < 0 || static_cast<int>(m) < v) v = m;
        break;
      }
  return v;
}

MonodromyData monodromy(const XiShape& shape) {
  shape.validate();
  MonodromyData md;
  for (const auto& lambda : shape.lambdas) {
    MonodromyBlock blk;
    blk.lambda = lambda;
    Rational lab = lambda - Rational(Integer(lambda.get_num() / lambda.get_den()));
    if (sgn(lab) < 0) lab += 1;
    blk.label = lab;
    int n = shape.k + 1;
    blk.unipotent.assign(n, std::vector<UPoly>(n));
    // (log x + tau)^j / j! = sum_i (log x)^i / i! * tau^{j-i} / (j-i)!
    for (int j = 0; j < n; ++j)
      for (int i = 0; i <= j; ++i) {
        UPoly p(j - i + 1, Rational(0));
        p[j - i] = Rational(1, 1) / Rational(factorial(j - i));
        blk.unipotent[i][j] = p;
      }
    md.blocks.push_back(std::move(blk));
  }
  return md;
}

bool semisimple_power_trivial(const MonodromyData& m, int q) {
  for (const auto& b : m.blocks) {
    Rational t = b.label * Rational(q);
    if (t.get_den() != 1) return false;
  }
  return true;
}

bool unipotent_blocks_valid(const MonodromyData& m) {
  for (const auto& b : m.blocks) {
    int n = b.unipotent.size();
    // N = U - 1 over Q[tau]; check triangularity and N^n = 0.
    std::vector<std::vector<UPoly>> nm = b.unipotent;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < i; ++j)
        if (!upoly_trim(nm[i][j]).empty()) return false;
      if (upoly_trim(nm[i][i]) != UPoly{Rational(1)}) return false;
      nm[i][i] = {};
    }
    auto mul = [n](const std::vector<std::vector<UPoly>>& x, const std::vector<std::vector<UPoly>>& y) {
      std::vector<std::vector<UPoly>> z(n, std::vector<UPoly>(n));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          UPoly acc;
          for (int l = 0; l < n; ++l) {
            UPoly t = upoly_mul(x[i][l], y[l][j]);
            UPoly s(std::max(acc.size(), t.size()), Rational(0));
            for (size_t c = 0; c < acc.size(); ++c) s[c] += acc[c];
            for (size_t c = 0; c < t.size(); ++c) s[c] += t[c];
            acc = upoly_trim(s);
          }
          z[i][j] = acc;
        }
      return z;
    };
    auto power = nm;
    for (int e = 1; e < n; ++e) power = mul(power, nm);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (!upoly_trim(power[i][j]).empty()) return false;
  }
  return true;
}

ShapeWithMultiplicity tensor_with_V(const XiShape& shape, int dim) {
  if (dim < 0) throw std::invalid_argument("dimension must be non-negative");
  return {shape, dim};
}

}  // namespace abkit::xi
