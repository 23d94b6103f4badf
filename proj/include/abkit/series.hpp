#pragma once

#include <string>
#include <vector>

#include "abkit/scalars.hpp"

namespace abkit {

// Truncated power series in b; entry m is the coefficient of b^m. The length is
// the truncation order (terms b^m with m >= length are dropped).
template <class S>
using Series = std::vector<S>;
using QSeries = Series<Rational>;

template <class S>
Series<S> series_mul(const Series<S>& x, const Series<S>& y, int order, const S& zero) {
  Series<S> r(order, zero);
  for (size_t i = 0; i < x.size() && static_cast<int>(i) < order; ++i) {
    if (is_zero(x[i])) continue;
    for (size_t j = 0; j < y.size() && static_cast<int>(i + j) < order; ++j)
      if (!is_zero(y[j])) r[i + j] += x[i] * y[j];
  }
  return r;
}

inline QSeries series_mul(const QSeries& x, const QSeries& y, int order) {
  return series_mul(x, y, order, Rational(0));
}

template <class S>
int series_valuation(const Series<S>& x) {
  for (size_t i = 0; i < x.size(); ++i)
    if (!is_zero(x[i])) return static_cast<int>(i);
  return -1;
}

template <class S>
bool series_is_zero(const Series<S>& x) {
  return series_valuation(x) < 0;
}

std::string render_series(const QSeries& s, const std::string& var = "b");
std::string render_series(const Series<ParamScalar>& s, const std::string& var = "b");

}  // namespace abkit
