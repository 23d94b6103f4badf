#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "abkit/ncab.hpp"
#include "abkit/poly.hpp"
#include "abkit/series.hpp"

namespace abkit::parse {

class ParseError : public std::runtime_error {
 public:
  ParseError(int column, const std::string& message)
      : std::runtime_error("syntax error at column " + std::to_string(column) + ": " + message), column_(column) {}
  int column() const { return column_; }

 private:
  int column_;
};

// Variables x, y, z, x0..x6 appearing in the text, in canonical order.
std::vector<std::string> infer_variables(const std::string& text);
// Largest parameter index among s (=s1), s1..sR; 0 when none.
int infer_parameter_arity(const std::string& text);
bool is_variable_name(const std::string& id);
bool is_parameter_name(const std::string& id);

poly::Form<Rational> parse_poly(const std::string& text, const std::vector<std::string>& vars);
poly::Form<ParamScalar> parse_param_poly(const std::string& text, const std::vector<std::string>& vars, int arity,
                                         int order);

// Words in a, b with integer or rational scalars.
ncab::QElement parse_word(const std::string& text, int nb, int na = 0);

// Truncated series in b.
QSeries parse_series(const std::string& text, int order);

}  // namespace abkit::parse
