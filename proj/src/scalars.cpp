#include "abkit/scalars.hpp"

#include <algorithm>
#include <sstream>

namespace abkit {

Rational make_rational(long num, long den) {
  if (den == 0) throw std::domain_error("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational parse_rational(const std::string& text) {
  Rational q;
  if (q.set_str(text, 10) != 0) throw std::invalid_argument("not a rational: " + text);
  if (q.get_den() == 0) throw std::domain_error("zero denominator");
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

Rational inverse(const Rational& q) {
  if (sgn(q) == 0) throw NotAUnit("zero has no inverse");
  return Rational(1) / q;
}

Integer factorial(unsigned n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

Integer binomial(unsigned n, unsigned k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

namespace {

int total(const ParamScalar::Exponent& e) {
  int t = 0;
  for (int v : e) t += v;
  return t;
}

}  // namespace

std::string param_name(int arity, int index) {
  if (arity == 1) return "s";
  return "s" + std::to_string(index + 1);
}

ParamScalar::ParamScalar(int arity, int order) : arity_(arity), order_(order) {
  if (arity < 0 || order < 1) throw std::invalid_argument("bad parameter ring");
}

ParamScalar::ParamScalar(int arity, int order, const Rational& c) : ParamScalar(arity, order) {
  if (sgn(c) != 0) terms_[Exponent(arity, 0)] = c;
}

ParamScalar::ParamScalar(int arity, int order, Terms terms)
    : ParamScalar(arity, order) {
  terms_ = std::move(terms);
  normalize();
}

ParamScalar ParamScalar::variable(int arity, int order, int index) {
  if (index < 0 || index >= arity) throw std::out_of_range("parameter index");
  ParamScalar x(arity, order);
  if (order > 1) {
    Exponent e(arity, 0);
    e[index] = 1;
    x.terms_[e] = 1;
  }
  return x;
}

void ParamScalar::normalize() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (static_cast<int>(it->first.size()) != arity_) throw RingMismatch("exponent arity");
    if (sgn(it->second) == 0 || total(it->first) >= order_)
      it = terms_.erase(it);
    else
      ++it;
  }
}

void ParamScalar::check_same(const ParamScalar& o) const {
  if (arity_ != o.arity_ || order_ != o.order_)
    throw RingMismatch("parameter rings differ");
}

bool ParamScalar::is_unit() const {
  auto it = terms_.find(Exponent(arity_, 0));
  return it != terms_.end();
}

Rational ParamScalar::constant_term() const {
  auto it = terms_.find(Exponent(arity_, 0));
  return it == terms_.end() ? Rational(0) : it->second;
}

int ParamScalar::valuation() const {
  int v = -1;
  for (const auto& [e, c] : terms_) {
    int t = total(e);
    if (v < 0 || t < v) v = t;
  }
  return v;
}

int ParamScalar::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, total(e));
  return d;
}

ParamScalar ParamScalar::operator+(const ParamScalar& o) const {
  check_same(o);
  ParamScalar r = *this;
  for (const auto& [e, c] : o.terms_) {
    auto [it, fresh] = r.terms_.emplace(e, c);
    if (!fresh) {
      it->second += c;
      if (sgn(it->second) == 0) r.terms_.erase(it);
    }
  }
  return r;
}

ParamScalar ParamScalar::operator-() const {
  ParamScalar r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

ParamScalar ParamScalar::operator-(const ParamScalar& o) const { return *this + (-o); }

ParamScalar ParamScalar::operator*(const ParamScalar& o) const {
  check_same(o);
  ParamScalar r(arity_, order_);
  Exponent e(arity_);
  for (const auto& [e1, c1] : terms_) {
    int t1 = total(e1);
    for (const auto& [e2, c2] : o.terms_) {
      if (t1 + total(e2) >= order_) continue;
      for (int i = 0; i < arity_; ++i) e[i] = e1[i] + e2[i];
      auto [it, fresh] = r.terms_.emplace(e, c1 * c2);
      if (!fresh) it->second += c1 * c2;
    }
  }
  for (auto it = r.terms_.begin(); it != r.terms_.end();) {
    if (sgn(it->second) == 0)
      it = r.terms_.erase(it);
    else
      ++it;
  }
  return r;
}

bool ParamScalar::operator==(const ParamScalar& o) const {
  return arity_ == o.arity_ && order_ == o.order_ && terms_ == o.terms_;
}

ParamScalar ParamScalar::inverse() const {
  if (!is_unit()) throw NotAUnit("parameter-ring element has zero constant term");
  // x = c(1 - n) with n nilpotent; x^{-1} = c^{-1}(1 + n + n^2 + ...), finite since n^order = 0.
  Rational c = constant_term();
  ParamScalar one(arity_, order_, Rational(1));
  ParamScalar n = one - ParamScalar(arity_, order_, Rational(1) / c) * (*this);
  ParamScalar sum = one, power = one;
  for (int k = 1; k < order_; ++k) {
    power = power * n;
    if (power.is_zero()) break;
    sum = sum + power;
  }
  return ParamScalar(arity_, order_, Rational(1) / c) * sum;
}

ParamScalar::Exponent ParamScalar::monomial_gcd() const {
  Exponent g(arity_, 0);
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (first) {
      g = e;
      first = false;
    } else {
      for (int i = 0; i < arity_; ++i) g[i] = std::min(g[i], e[i]);
    }
  }
  return g;
}

ParamScalar ParamScalar::divide_monomial(const Exponent& d) const {
  Terms out;
  for (const auto& [e, c] : terms_) {
    Exponent q(arity_);
    for (int i = 0; i < arity_; ++i) {
      q[i] = e[i] - d[i];
      if (q[i] < 0) throw std::domain_error("monomial does not divide");
    }
    out[q] = c;
  }
  return ParamScalar(arity_, order_, std::move(out));
}

Rational ParamScalar::specialize(const std::vector<Rational>& point) const {
  if (static_cast<int>(point.size()) != arity_)
    throw RingMismatch("specialization point has wrong arity");
  Rational sum = 0;
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    for (int i = 0; i < arity_; ++i) {
      Rational p = 1;
      for (int k = 0; k < e[i]; ++k) p *= point[i];
      t *= p;
    }
    sum += t;
  }
  return sum;
}

std::string ParamScalar::to_string() const {
  if (terms_.empty()) return "0";
  // Graded order: lower total degree first, then lexicographic by exponent.
  std::vector<std::pair<Exponent, Rational>> items(terms_.begin(), terms_.end());
  std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    return total(a.first) < total(b.first);
  });
  std::ostringstream out;
  bool first = true;
  for (const auto& [e, c] : items) {
    Rational mag = abs(c);
    bool constant = total(e) == 0;
    if (first) {
      if (sgn(c) < 0) out << "-";
    } else {
      out << (sgn(c) < 0 ? " - " : " + ");
    }
    first = false;
    bool wrote = false;
    if (constant || mag != 1) {
      out << mag.get_str();
      wrote = true;
    }
    for (int i = 0; i < arity_; ++i) {
      if (e[i] == 0) continue;
      if (wrote) out << "*";
      out << param_name(arity_, i);
      if (e[i] > 1) out << "^" << e[i];
      wrote = true;
    }
  }
  return out.str();
}

}  // namespace abkit
