#include "abkit/ncab.hpp"

#include <sstream>

namespace abkit::ncab {

bool powers_identity(int k, int nb) {
  if (k < 0) throw std::invalid_argument("negative power");
  auto a = QElement::gen_a(nb);
  auto b = QElement::gen_b(nb);
  QElement lhs = a.pow(k).mul(b);
  QElement rhs = b.mul((a + b).pow(k));
  return lhs == rhs;
}

bool lemma_a_gives_b(int n, int nb) {
  if (n < 1) throw std::invalid_argument("N must be positive");
  if (nb <= 2 * n) throw NotEnoughPrecision("b-truncation must exceed 2N");
  auto a = QElement::gen_a(nb);
  auto b = QElement::gen_b(nb);
  QElement an = a.pow(n);
  QElement lhs = b.pow(2 * n).scaled(Rational(factorial(n)));
  QElement rhs(nb);
  for (int j = 0; j <= n; ++j) {
    Rational c(binomial(n, j));
    if (j % 2) c = -c;
    rhs = rhs + b.pow(j).mul(an).mul(b.pow(n - j)).scaled(c);
  }
  return lhs == rhs;
}

ActionTable action_polys(int n, int jmax) {
  if (n < 0 || jmax < 0) throw std::invalid_argument("negative index");
  auto make = [&](int N) {
    ActionTable t(jmax + 1);
    for (int j = 0; j <= jmax; ++j) t[j].resize(j + 1);
    (void)N;
    return t;
  };
  ActionTable cur = make(0);
  for (int j = 0; j <= jmax; ++j) cur[j][0].coeffs = {Rational(1)};
  for (int step = 0; step < n; ++step) {
    ActionTable next = make(step + 1);
    for (int j = 0; j <= jmax; ++j) {
      for (int h = 0; h <= j; ++h) {
        std::vector<Rational> p;
        const auto& prev = cur[j][h].coeffs;
        p.assign(prev.size() + 1, Rational(0));
        for (size_t k = 0; k < prev.size(); ++k) p[k + 1] += prev[k];
        if (j >= 1 && h >= 1) {
          const auto& low = cur[j - 1][h - 1].coeffs;
          if (p.size() < low.size()) p.resize(low.size(), Rational(0));
          for (size_t k = 0; k < low.size(); ++k) p[k] += Rational(j - 1) * low[k];
        }
        APoly<Rational> q{p, 0};
        trim(q);
        next[j][h] = std::move(q);
      }
    }
    cur = std::move(next);
  }
  return cur;
}

bool action_polys_bounds_hold(const ActionTable& t, int n) {
  for (size_t j = 0; j < t.size(); ++j)
    for (size_t h = 0; h < t[j].size(); ++h) {
      const auto& p = t[j][h];
      if (p.zero()) continue;
      if (p.degree() > n) return false;
      if (p.valuation() < n - static_cast<int>(h)) return false;
    }
  return true;
}

std::string render_apoly(const std::vector<Rational>& coeffs, const std::string& var) {
  std::ostringstream out;
  bool first = true;
  for (size_t k = 0; k < coeffs.size(); ++k) {
    const Rational& c = coeffs[k];
    if (sgn(c) == 0) continue;
    Rational mag = abs(c);
    out << (first ? (sgn(c) < 0 ? "-" : "") : (sgn(c) < 0 ? " - " : " + "));
    first = false;
    if (k == 0) {
      out << mag.get_str();
      continue;
    }
    if (mag != 1) out << mag.get_str() << "*";
    out << var;
    if (k > 1) out << "^" << k;
  }
  return first ? "0" : out.str();
}

}  // namespace abkit::ncab
