#pragma once

#include <gmpxx.h>

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace abkit {

// Exact rationals. mpq_class keeps values canonical (gcd 1, positive denominator)
// as long as every construction from a raw fraction goes through make_rational.
using Rational = mpq_class;
using Integer = mpz_class;

class RingMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotAUnit : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

Rational make_rational(long num, long den = 1);
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }
inline bool is_unit(const Rational& q) { return sgn(q) != 0; }
Rational inverse(const Rational& q);

Integer factorial(unsigned n);
Integer binomial(unsigned n, unsigned k);

// Truncated parameter ring Q[s_1..s_r]/(s)^m.
class ParamScalar {
 public:
  using Exponent = std::vector<int>;
  using Terms = std::map<Exponent, Rational>;

  ParamScalar() = default;
  ParamScalar(int arity, int order);
  ParamScalar(int arity, int order, const Rational& c);
  ParamScalar(int arity, int order, Terms terms);

  static ParamScalar variable(int arity, int order, int index);

  int arity() const { return arity_; }
  int order() const { return order_; }
  const Terms& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_unit() const;
  Rational constant_term() const;
  // Lowest total degree present; -1 for zero.
  int valuation() const;
  // Highest total degree present; -1 for zero.
  int degree() const;

  ParamScalar operator+(const ParamScalar& o) const;
  ParamScalar operator-(const ParamScalar& o) const;
  ParamScalar operator-() const;
  ParamScalar operator*(const ParamScalar& o) const;
  ParamScalar& operator+=(const ParamScalar& o) { return *this = *this + o; }
  ParamScalar& operator-=(const ParamScalar& o) { return *this = *this - o; }
  ParamScalar& operator*=(const ParamScalar& o) { return *this = *this * o; }
  bool operator==(const ParamScalar& o) const;
  bool operator!=(const ParamScalar& o) const { return !(*this == o); }

  ParamScalar inverse() const;
  // Componentwise minimum exponent over all terms (the largest monomial dividing x).
  Exponent monomial_gcd() const;
  // Exact division by s^e; requires every term to be divisible.
  ParamScalar divide_monomial(const Exponent& e) const;

  Rational specialize(const std::vector<Rational>& point) const;
  std::string to_string() const;

 private:
  void check_same(const ParamScalar& o) const;
  void normalize();

  int arity_ = 0;
  int order_ = 1;
  Terms terms_;
};

inline bool is_zero(const ParamScalar& x) { return x.is_zero(); }
inline bool is_unit(const ParamScalar& x) { return x.is_unit(); }
inline ParamScalar inverse(const ParamScalar& x) { return x.inverse(); }
inline std::string to_string(const ParamScalar& x) { return x.to_string(); }
std::string param_name(int arity, int index);

// Ring contexts let generic code create constants without knowing the scalar type.
struct RationalRing {
  using Scalar = Rational;
  Rational zero() const { return Rational(0); }
  Rational one() const { return Rational(1); }
  Rational from(const Rational& q) const { return q; }
  bool operator==(const RationalRing&) const { return true; }
};

struct ParamRing {
  using Scalar = ParamScalar;
  int arity = 1;
  int order = 1;
  ParamScalar zero() const { return ParamScalar(arity, order); }
  ParamScalar one() const { return ParamScalar(arity, order, Rational(1)); }
  ParamScalar from(const Rational& q) const { return ParamScalar(arity, order, q); }
  bool operator==(const ParamRing& o) const { return arity == o.arity && order == o.order; }
};

template <class S>
struct RingOf;
template <>
struct RingOf<Rational> {
  using type = RationalRing;
};
template <>
struct RingOf<ParamScalar> {
  using type = ParamRing;
};

inline RationalRing ring_of(const Rational&) { return {}; }
inline ParamRing ring_of(const ParamScalar& x) { return {x.arity(), x.order()}; }

inline Rational specialize(const Rational& q, const std::vector<Rational>&) { return q; }
inline Rational specialize(const ParamScalar& x, const std::vector<Rational>& p) {
  return x.specialize(p);
}

}  // namespace abkit
