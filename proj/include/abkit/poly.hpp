#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "abkit/scalars.hpp"

namespace abkit::poly {

// Packed monomial x^alpha dx_I: eight bits per exponent for up to seven
// variables, the top byte is the bitmask I.
using Key = std::uint64_t;
constexpr int kMaxVars = 7;
constexpr int kMaxExponent = 255;

inline int exponent(Key k, int i) { return static_cast<int>((k >> (8 * i)) & 0xff); }
inline unsigned mask(Key k) { return static_cast<unsigned>(k >> 56); }
inline Key with_mask(Key k, unsigned m) { return (k & ((Key(1) << 56) - 1)) | (Key(m) << 56); }
inline Key raise(Key k, int i, int by) { return k + (Key(by) << (8 * i)); }
inline Key lower(Key k, int i) { return k - (Key(1) << (8 * i)); }
inline int form_degree(Key k) { return __builtin_popcount(mask(k)); }

Key make_key(const std::vector<int>& exps, unsigned dx_mask = 0);
int total_degree(Key k, int nvars);
// Weighted degree including the dx factors.
long weight(Key k, const std::vector<int>& w);
std::string key_to_string(Key k, int nvars, const std::vector<std::string>& names);

std::string variable_name(int nvars, int i);
std::vector<std::string> default_names(int nvars);

// Sum of terms c * x^alpha dx_I (dx_I in increasing index order).
template <class S>
struct Form {
  using Ring = typename RingOf<S>::type;
  int nvars = 0;
  Ring ring{};
  std::map<Key, S> terms;

  bool is_zero() const { return terms.empty(); }
  void add_term(Key k, const S& c) {
    if (abkit::is_zero(c)) return;
    auto [it, fresh] = terms.emplace(k, c);
    if (!fresh) {
      it->second += c;
      if (abkit::is_zero(it->second)) terms.erase(it);
    }
  }
  bool operator==(const Form& o) const { return nvars == o.nvars && terms == o.terms; }
};

template <class S>
using Poly = Form<S>;

template <class S>
Form<S> zero_like(const Form<S>& f) {
  Form<S> r;
  r.nvars = f.nvars;
  r.ring = f.ring;
  return r;
}

template <class S>
Form<S> operator+(const Form<S>& x, const Form<S>& y) {
  Form<S> r = x;
  for (const auto& [k, c] : y.terms) r.add_term(k, c);
  return r;
}

template <class S>
Form<S> operator-(const Form<S>& x) {
  Form<S> r = zero_like(x);
  for (const auto& [k, c] : x.terms) r.terms.emplace(k, -c);
  return r;
}

template <class S>
Form<S> operator-(const Form<S>& x, const Form<S>& y) {
  return x + (-y);
}

template <class S>
Form<S> scale(const Form<S>& x, const S& c) {
  Form<S> r = zero_like(x);
  for (const auto& [k, v] : x.terms) r.add_term(k, c * v);
  return r;
}

// Sign of moving dx_i to its place inside dx_I: (-1)^{#{l in I : l < i}}.
inline int insertion_sign(unsigned m, int i) {
  return (__builtin_popcount(m & ((1u << i) - 1)) % 2) ? -1 : 1;
}

// Product of a function and a form, or of two forms (wedge).
template <class S>
Form<S> wedge(const Form<S>& x, const Form<S>& y) {
  Form<S> r = zero_like(x);
  for (const auto& [kx, cx] : x.terms)
    for (const auto& [ky, cy] : y.terms) {
      unsigned mx = mask(kx), my = mask(ky);
      if (mx & my) continue;
      int sign = 1;
      // move each dx of y (left to right) past the larger indices of x
      for (int i = 0; i < x.nvars; ++i)
        if (my & (1u << i)) {
          unsigned bigger = mx & ~((1u << (i + 1)) - 1);
          if (__builtin_popcount(bigger) % 2) sign = -sign;
        }
      Key k = with_mask(with_mask(kx, 0) + with_mask(ky, 0), mx | my);
      S c = cx * cy;
      r.add_term(k, sign > 0 ? c : -c);
    }
  return r;
}

template <class S>
Form<S> partial(const Form<S>& f, int i) {
  Form<S> r = zero_like(f);
  for (const auto& [k, c] : f.terms) {
    int e = exponent(k, i);
    if (e == 0) continue;
    r.add_term(lower(k, i), f.ring.from(Rational(e)) * c);
  }
  return r;
}

// Exterior derivative in the x variables; parameters are constants.
template <class S>
Form<S> d(const Form<S>& w) {
  Form<S> r = zero_like(w);
  for (const auto& [k, c] : w.terms) {
    unsigned m = mask(k);
    for (int i = 0; i < w.nvars; ++i) {
      int e = exponent(k, i);
      if (e == 0 || (m & (1u << i))) continue;
      S v = w.ring.from(Rational(e)) * c;
      r.add_term(with_mask(lower(k, i), m | (1u << i)), insertion_sign(m, i) > 0 ? v : -v);
    }
  }
  return r;
}

template <class S>
Form<S> differential(const Form<S>& f) {
  return d(f);
}

// df ∧ w.
template <class S>
Form<S> wedge_df(const Form<S>& f, const Form<S>& w) {
  return wedge(d(f), w);
}

// Contraction with the weighted Euler field sum w_i x_i d/dx_i.
template <class S>
Form<S> euler_contract(const Form<S>& w, const std::vector<int>& weights) {
  Form<S> r = zero_like(w);
  for (const auto& [k, c] : w.terms) {
    unsigned m = mask(k);
    int pos = 0;
    for (int i = 0; i < w.nvars; ++i) {
      if (!(m & (1u << i))) continue;
      S v = w.ring.from(Rational(weights[i])) * c;
      r.add_term(with_mask(raise(k, i, 1), m & ~(1u << i)), pos % 2 ? -v : v);
      ++pos;
    }
  }
  return r;
}

template <class S>
Form<S> monomial_form(int nvars, typename Form<S>::Ring ring, Key k, const S& c) {
  Form<S> r;
  r.nvars = nvars;
  r.ring = ring;
  r.add_term(k, c);
  return r;
}

inline Form<Rational> specialize_form(const Form<Rational>& f, const std::vector<Rational>&) { return f; }
inline Form<Rational> specialize_form(const Form<ParamScalar>& f, const std::vector<Rational>& point) {
  Form<Rational> r;
  r.nvars = f.nvars;
  for (const auto& [k, c] : f.terms) r.add_term(k, c.specialize(point));
  return r;
}

std::string render(const Form<Rational>& f, const std::vector<std::string>& names);
std::string render(const Form<ParamScalar>& f, const std::vector<std::string>& names);

}  // namespace abkit::poly
