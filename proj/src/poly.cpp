#include "abkit/poly.hpp"

#include <sstream>
#include <stdexcept>

namespace abkit::poly {

Key make_key(const std::vector<int>& exps, unsigned dx_mask) {
  if (exps.size() > static_cast<size_t>(kMaxVars)) throw std::invalid_argument("too many variables");
  Key k = 0;
  for (size_t i = 0; i < exps.size(); ++i) {
    if (exps[i] < 0 || exps[i] > kMaxExponent) throw std::out_of_range("exponent out of range");
    k |= Key(exps[i]) << (8 * i);
  }
  return with_mask(k, dx_mask);
}

int total_degree(Key k, int nvars) {
  int t = 0;
  for (int i = 0; i < nvars; ++i) t += exponent(k, i);
  return t;
}

long weight(Key k, const std::vector<int>& w) {
  long t = 0;
  unsigned m = mask(k);
  for (size_t i = 0; i < w.size(); ++i) {
    t += static_cast<long>(exponent(k, i)) * w[i];
    if (m & (1u << i)) t += w[i];
  }
  return t;
}

std::string variable_name(int nvars, int i) {
  static const char* small[] = {"x", "y", "z"};
  if (nvars <= 3) return small[i];
  return "x" + std::to_string(i);
}

std::vector<std::string> default_names(int nvars) {
  std::vector<std::string> n;
  for (int i = 0; i < nvars; ++i) n.push_back(variable_name(nvars, i));
  return n;
}

std::string key_to_string(Key k, int nvars, const std::vector<std::string>& names) {
  std::vector<std::string> parts;
  for (int i = 0; i < nvars; ++i) {
    int e = exponent(k, i);
    if (e == 0) continue;
    parts.push_back(e == 1 ? names[i] : names[i] + "^" + std::to_string(e));
  }
  std::string dx;
  for (int i = 0; i < nvars; ++i)
    if (mask(k) & (1u << i)) dx += (dx.empty() ? "d" : "^d") + names[i];
  if (!dx.empty()) parts.push_back(dx);
  if (parts.empty()) return "1";
  std::string out = parts[0];
  for (size_t i = 1; i < parts.size(); ++i) out += "*" + parts[i];
  return out;
}

namespace {

template <class S>
std::string render_impl(const Form<S>& f, const std::vector<std::string>& names) {
  if (f.terms.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [k, c] : f.terms) {
    std::string cs = to_string(c);
    bool compound = cs.find(' ') != std::string::npos;
    bool negative = !compound && cs[0] == '-';
    std::string mag = negative ? cs.substr(1) : cs;
    if (compound) mag = "(" + cs + ")";
    out << (first ? (negative ? "-" : "") : (negative ? " - " : " + "));
    first = false;
    std::string mono = key_to_string(k, f.nvars, names);
    if (mono == "1")
      out << mag;
    else if (mag == "1")
      out << mono;
    else
      out << mag << "*" << mono;
  }
  return out.str();
}

}  // namespace

std::string render(const Form<Rational>& f, const std::vector<std::string>& names) {
  return render_impl(f, names);
}
std::string render(const Form<ParamScalar>& f, const std::vector<std::string>& names) {
  return render_impl(f, names);
}

}  // namespace abkit::poly
