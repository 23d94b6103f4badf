#pragma once

#include <map>
#include <string>
#include <vector>

#include "abkit/scalars.hpp"

namespace abkit::ncab {

// Polynomial (or a-adically truncated series) in a; coefficient k multiplies a^k.
// a_truncation == 0 means no truncation.
template <class S>
struct APoly {
  std::vector<S> coeffs;
  int a_truncation = 0;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  int valuation() const {
    for (size_t k = 0; k < coeffs.size(); ++k)
      if (!is_zero(coeffs[k])) return static_cast<int>(k);
    return -1;
  }
  bool zero() const { return coeffs.empty(); }
};

template <class S>
void trim(APoly<S>& p) {
  if (p.a_truncation > 0 && static_cast<int>(p.coeffs.size()) > p.a_truncation)
    p.coeffs.resize(p.a_truncation);
  while (!p.coeffs.empty() && is_zero(p.coeffs.back())) p.coeffs.pop_back();
}

class TruncationMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Element sum_j b^j P_j(a) of the algebra, kept in left-b normal form modulo
// b^{Nb} (and a^{Na} when Na > 0).
template <class S>
class ABElement {
 public:
  using Ring = typename RingOf<S>::type;

  ABElement(int nb, int na = 0, Ring ring = Ring{}) : nb_(nb), na_(na), ring_(ring) {
    if (nb < 1 || na < 0) throw std::invalid_argument("bad truncation");
  }

  static ABElement scalar(const S& c, int nb, int na = 0) {
    ABElement x(nb, na, ring_of(c));
    x.add_term(0, 0, c);
    return x;
  }
  static ABElement monomial(int j, int k, int nb, int na = 0, Ring ring = Ring{}) {
    // b^j a^k
    ABElement x(nb, na, ring);
    x.add_term(j, k, ring.one());
    return x;
  }
  static ABElement gen_a(int nb, int na = 0, Ring ring = Ring{}) { return monomial(0, 1, nb, na, ring); }
  static ABElement gen_b(int nb, int na = 0, Ring ring = Ring{}) { return monomial(1, 0, nb, na, ring); }

  int b_truncation() const { return nb_; }
  int a_truncation() const { return na_; }
  const Ring& ring() const { return ring_; }

  // Coefficient of b^j a^k.
  S coeff(int j, int k) const {
    if (j < 0 || j >= static_cast<int>(comp_.size())) return ring_.zero();
    const auto& c = comp_[j];
    if (k < 0 || k >= static_cast<int>(c.size())) return ring_.zero();
    return c[k];
  }
  APoly<S> component(int j) const {
    APoly<S> p{{}, na_};
    if (j >= 0 && j < static_cast<int>(comp_.size())) p.coeffs = comp_[j];
    return p;
  }
  int num_components() const { return static_cast<int>(comp_.size()); }
  bool is_zero() const { return comp_.empty(); }

  // Lowest j with P_j != 0; -1 for zero.
  int b_valuation() const {
    for (size_t j = 0; j < comp_.size(); ++j)
      if (!comp_[j].empty()) return static_cast<int>(j);
    return -1;
  }

  void add_term(int j, int k, const S& c) {
    if (j >= nb_ || (na_ > 0 && k >= na_) || abkit::is_zero(c)) return;
    if (static_cast<int>(comp_.size()) <= j) comp_.resize(j + 1);
    auto& p = comp_[j];
    if (static_cast<int>(p.size()) <= k) p.resize(k + 1, ring_.zero());
    p[k] += c;
    normalize();
  }

  ABElement operator+(const ABElement& o) const {
    check(o);
    ABElement r = *this;
    if (r.comp_.size() < o.comp_.size()) r.comp_.resize(o.comp_.size());
    for (size_t j = 0; j < o.comp_.size(); ++j) {
      auto& p = r.comp_[j];
      if (p.size() < o.comp_[j].size()) p.resize(o.comp_[j].size(), ring_.zero());
      for (size_t k = 0; k < o.comp_[j].size(); ++k) p[k] += o.comp_[j][k];
    }
    r.normalize();
    return r;
  }
  ABElement operator-() const {
    ABElement r = *this;
    for (auto& p : r.comp_)
      for (auto& c : p) c = -c;
    return r;
  }
  ABElement operator-(const ABElement& o) const { return *this + (-o); }
  ABElement scaled(const S& c) const {
    ABElement r = *this;
    for (auto& p : r.comp_)
      for (auto& x : p) x = c * x;
    r.normalize();
    return r;
  }
  bool operator==(const ABElement& o) const {
    return nb_ == o.nb_ && na_ == o.na_ && comp_ == o.comp_;
  }

  // b * x: shift of components.
  ABElement left_mul_b() const {
    ABElement r(nb_, na_, ring_);
    r.comp_.reserve(comp_.size() + 1);
    r.comp_.push_back({});
    for (const auto& p : comp_) r.comp_.push_back(p);
    r.normalize();
    return r;
  }

  // a * x: component j becomes a*P_j + (j-1)*P_{j-1}, from a b^j = b^j a + j b^{j+1}.
  ABElement left_mul_a() const {
    ABElement r(nb_, na_, ring_);
    r.comp_.resize(comp_.size() + 1);
    for (size_t j = 0; j < comp_.size(); ++j) {
      const auto& p = comp_[j];
      auto& out = r.comp_[j];
      if (out.size() < p.size() + 1) out.resize(p.size() + 1, ring_.zero());
      for (size_t k = 0; k < p.size(); ++k) out[k + 1] += p[k];
      auto& nxt = r.comp_[j + 1];
      if (nxt.size() < p.size()) nxt.resize(p.size(), ring_.zero());
      S jj = ring_.from(Rational(static_cast<long>(j)));
      for (size_t k = 0; k < p.size(); ++k) nxt[k] += jj * p[k];
    }
    r.normalize();
    return r;
  }

  // Normal-form product.
  ABElement mul(const ABElement& y) const {
    check(y);
    ABElement total(nb_, na_, ring_);
    for (size_t j = comp_.size(); j-- > 0;) {
      const auto& p = comp_[j];
      if (p.empty()) continue;
      // P(a) * y by Horner in a.
      ABElement acc(nb_, na_, ring_);
      for (size_t k = p.size(); k-- > 0;) {
        acc = acc.left_mul_a();
        if (!abkit::is_zero(p[k])) acc = acc + y.scaled(p[k]);
      }
      for (size_t s = 0; s < j; ++s) acc = acc.left_mul_b();
      total = total + acc;
    }
    return total;
  }

  ABElement right_mul_a() const { return mul(gen_a(nb_, na_, ring_)); }
  ABElement right_mul_b() const { return mul(gen_b(nb_, na_, ring_)); }

  ABElement pow(int n) const {
    ABElement r = scalar(ring_.one(), nb_, na_);
    r.ring_ = ring_;
    for (int i = 0; i < n; ++i) r = r.mul(*this);
    return r;
  }

  // Terms (j, k, coefficient) in increasing (j, k).
  std::vector<std::tuple<int, int, S>> terms() const {
    std::vector<std::tuple<int, int, S>> t;
    for (size_t j = 0; j < comp_.size(); ++j)
      for (size_t k = 0; k < comp_[j].size(); ++k)
        if (!abkit::is_zero(comp_[j][k])) t.emplace_back(j, k, comp_[j][k]);
    return t;
  }

 private:
  void check(const ABElement& o) const {
    if (nb_ != o.nb_ || na_ != o.na_) throw TruncationMismatch("truncation orders differ");
    if (!(ring_ == o.ring_)) throw RingMismatch("scalar rings differ");
  }
  void normalize() {
    if (static_cast<int>(comp_.size()) > nb_) comp_.resize(nb_);
    for (auto& p : comp_) {
      if (na_ > 0 && static_cast<int>(p.size()) > na_) p.resize(na_);
      while (!p.empty() && abkit::is_zero(p.back())) p.pop_back();
    }
    while (!comp_.empty() && comp_.back().empty()) comp_.pop_back();
  }

  int nb_;
  int na_;
  Ring ring_;
  std::vector<std::vector<S>> comp_;
};

using QElement = ABElement<Rational>;

template <class S>
ABElement<S> nf_mul(const ABElement<S>& x, const ABElement<S>& y) {
  return x.mul(y);
}

// a^k * b == b * (a+b)^k in the algebra truncated at b^{nb}.
bool powers_identity(int k, int nb);

class NotEnoughPrecision : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// N! b^{2N} == sum_j (-1)^j C(N,j) b^j a^N b^{N-j}; needs nb > 2N.
bool lemma_a_gives_b(int n, int nb);

// Table T[j][h] (0 <= h <= j <= jmax) of the polynomials giving the j-th component
// of a^N applied to a chain sum b^j w_j in the complex with a-action
// (aW)_j = f w_j + (j-1) w_{j-1}.
using ActionTable = std::vector<std::vector<APoly<Rational>>>;
ActionTable action_polys(int n, int jmax);

// Degree <= N and valuation >= N - h for every nonzero entry.
bool action_polys_bounds_hold(const ActionTable& t, int n);

std::string render_apoly(const std::vector<Rational>& coeffs, const std::string& var = "a");

}  // namespace abkit::ncab
