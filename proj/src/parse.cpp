#include "abkit/parse.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <regex>

namespace abkit::parse {

namespace {

struct Token {
  enum Kind { Number, Ident, Op, End } kind;
  std::string text;
  int column;
};

std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < s.size()) {
    unsigned char c = s[i];
    int col = static_cast<int>(i) + 1;
    if (std::isspace(c)) {
      ++i;
    } else if (std::isdigit(c)) {
      size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Token::Number, s.substr(i, j - i), col});
      i = j;
    } else if (std::isalpha(c) || c == '_') {
      size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Token::Ident, s.substr(i, j - i), col});
      i = j;
    } else if (std::string("+-*/^()").find(c) != std::string::npos) {
      out.push_back({Token::Op, std::string(1, c), col});
      ++i;
    } else {
      throw ParseError(col, std::string("unexpected character '") + s[i] + "'");
    }
  }
  out.push_back({Token::End, "", static_cast<int>(s.size()) + 1});
  return out;
}

// Recursive descent over + - * / ^ and parentheses; the builder supplies the
// value type.
template <class B>
class ExprParser {
 public:
  using V = typename B::Value;

  ExprParser(const std::string& text, B& builder) : toks_(tokenize(text)), b_(builder) {}

  V parse() {
    if (toks_.front().kind == Token::End) throw ParseError(1, "empty expression");
    V v = expr();
    if (peek().kind != Token::End) throw ParseError(peek().column, "unexpected '" + peek().text + "'");
    return v;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool accept(const std::string& op) {
    if (peek().kind == Token::Op && peek().text == op) {
      ++pos_;
      return true;
    }
    return false;
  }

  V expr() {
    V v = term();
    for (;;) {
      if (accept("+"))
        v = b_.add(v, term());
      else if (accept("-"))
        v = b_.sub(v, term());
      else
        return v;
    }
  }

  V term() {
    V v = unary();
    for (;;) {
      if (accept("*")) {
        v = b_.mul(v, unary());
      } else if (peek().kind == Token::Op && peek().text == "/") {
        int col = peek().column;
        ++pos_;
        V den = unary();
        auto q = b_.constant(den);
        if (!q) throw ParseError(col, "division is only allowed by numbers");
        if (sgn(*q) == 0) throw ParseError(col, "division by zero");
        v = b_.scale(v, Rational(1) / *q);
      } else {
        return v;
      }
    }
  }

  V unary() {
    if (accept("-")) return b_.neg(unary());
    if (accept("+")) return unary();
    return power();
  }

  V power() {
    V v = atom();
    if (accept("^")) {
      const Token& t = peek();
      if (t.kind != Token::Number) throw ParseError(t.column, "exponent must be a non-negative integer");
      ++pos_;
      if (t.text.size() > 4) throw ParseError(t.column, "exponent too large");
      v = b_.pow(v, std::stoi(t.text));
    }
    return v;
  }

  V atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Token::Number:
        ++pos_;
        return b_.number(Rational(Integer(t.text)));
      case Token::Ident:
        ++pos_;
        return b_.ident(t.text, t.column);
      case Token::Op:
        if (t.text == "(") {
          ++pos_;
          V v = expr();
          if (!accept(")")) throw ParseError(peek().column, "expected ')'");
          return v;
        }
        throw ParseError(t.column, "unexpected '" + t.text + "'");
      default:
        throw ParseError(t.column, "unexpected end of input");
    }
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  B& b_;
};

int parameter_index(const std::string& id) {
  if (id == "s") return 0;
  static const std::regex re("s([1-9][0-9]?)");
  std::smatch m;
  if (std::regex_match(id, m, re)) return std::stoi(m[1]) - 1;
  return -1;
}

template <class S>
struct PolyBuilder {
  using Value = poly::Form<S>;
  int nvars;
  typename Value::Ring ring;
  std::map<std::string, int> index;

  Value constant_poly(const S& c) const {
    Value v;
    v.nvars = nvars;
    v.ring = ring;
    v.add_term(0, c);
    return v;
  }
  Value number(const Rational& q) const { return constant_poly(ring.from(q)); }
  Value ident(const std::string& id, int col) const {
    auto it = index.find(id);
    if (it != index.end()) {
      std::vector<int> e(nvars, 0);
      e[it->second] = 1;
      Value v;
      v.nvars = nvars;
      v.ring = ring;
      v.add_term(poly::make_key(e), ring.one());
      return v;
    }
    if constexpr (std::is_same_v<S, ParamScalar>) {
      int p = parameter_index(id);
      if (p >= 0 && p < ring.arity) return constant_poly(ParamScalar::variable(ring.arity, ring.order, p));
    }
    throw ParseError(col, "unknown identifier '" + id + "'");
  }
  Value add(const Value& x, const Value& y) const { return x + y; }
  Value sub(const Value& x, const Value& y) const { return x - y; }
  Value neg(const Value& x) const { return -x; }
  Value mul(const Value& x, const Value& y) const { return poly::wedge(x, y); }
  Value scale(const Value& x, const Rational& q) const { return poly::scale(x, ring.from(q)); }
  Value pow(const Value& x, int n) const {
    Value r = number(Rational(1));
    for (int i = 0; i < n; ++i) r = mul(r, x);
    return r;
  }
  std::optional<Rational> constant(const Value& v) const {
    if (v.terms.empty()) return Rational(0);
    if (v.terms.size() != 1 || v.terms.begin()->first != 0) return std::nullopt;
    const S& c = v.terms.begin()->second;
    if constexpr (std::is_same_v<S, ParamScalar>) {
      if (c.degree() > 0) return std::nullopt;
      return c.constant_term();
    } else {
      return c;
    }
  }
};

struct WordBuilder {
  using Value = ncab::QElement;
  int nb, na;
  Value number(const Rational& q) const { return Value::scalar(q, nb, na); }
  Value ident(const std::string& id, int col) const {
    if (id == "a") return Value::gen_a(nb, na);
    if (id == "b") return Value::gen_b(nb, na);
    throw ParseError(col, "unknown identifier '" + id + "' (expected a or b)");
  }
  Value add(const Value& x, const Value& y) const { return x + y; }
  Value sub(const Value& x, const Value& y) const { return x - y; }
  Value neg(const Value& x) const { return -x; }
  Value mul(const Value& x, const Value& y) const { return ncab::nf_mul(x, y); }
  Value scale(const Value& x, const Rational& q) const { return x.scaled(q); }
  Value pow(const Value& x, int n) const { return x.pow(n); }
  std::optional<Rational> constant(const Value& v) const {
    auto t = v.terms();
    if (t.empty()) return Rational(0);
    if (t.size() == 1 && std::get<0>(t[0]) == 0 && std::get<1>(t[0]) == 0) return std::get<2>(t[0]);
    return std::nullopt;
  }
};

struct SeriesBuilder {
  using Value = QSeries;
  int order;
  Value number(const Rational& q) const {
    Value v(order, Rational(0));
    v[0] = q;
    return v;
  }
  Value ident(const std::string& id, int col) const {
    if (id != "b") throw ParseError(col, "unknown identifier '" + id + "' (expected b)");
    Value v(order, Rational(0));
    if (order > 1) v[1] = 1;
    return v;
  }
  Value add(const Value& x, const Value& y) const {
    Value r = x;
    for (int i = 0; i < order; ++i) r[i] += y[i];
    return r;
  }
  Value neg(const Value& x) const {
    Value r = x;
    for (auto& c : r) c = -c;
    return r;
  }
  Value sub(const Value& x, const Value& y) const { return add(x, neg(y)); }
  Value mul(const Value& x, const Value& y) const { return series_mul(x, y, order); }
  Value scale(const Value& x, const Rational& q) const {
    Value r = x;
    for (auto& c : r) c *= q;
    return r;
  }
  Value pow(const Value& x, int n) const {
    Value r = number(Rational(1));
    for (int i = 0; i < n; ++i) r = mul(r, x);
    return r;
  }
  std::optional<Rational> constant(const Value& v) const {
    for (int i = 1; i < order; ++i)
      if (sgn(v[i]) != 0) return std::nullopt;
    return v[0];
  }
};

template <class S>
PolyBuilder<S> make_poly_builder(const std::vector<std::string>& vars, typename RingOf<S>::type ring) {
  if (vars.empty()) throw std::invalid_argument("no variables");
  if (vars.size() > static_cast<size_t>(poly::kMaxVars)) throw std::invalid_argument("at most 7 variables");
  PolyBuilder<S> b{static_cast<int>(vars.size()), ring, {}};
  for (size_t i = 0; i < vars.size(); ++i) {
    if (!is_variable_name(vars[i])) throw std::invalid_argument("bad variable name '" + vars[i] + "'");
    if (!b.index.emplace(vars[i], i).second) throw std::invalid_argument("repeated variable '" + vars[i] + "'");
  }
  return b;
}

}  // namespace

bool is_variable_name(const std::string& id) {
  static const std::regex re("x|y|z|x[0-6]");
  return std::regex_match(id, re);
}

bool is_parameter_name(const std::string& id) { return parameter_index(id) >= 0; }

std::vector<std::string> infer_variables(const std::string& text) {
  std::vector<std::string> found;
  for (const auto& t : tokenize(text))
    if (t.kind == Token::Ident && is_variable_name(t.text) &&
        std::find(found.begin(), found.end(), t.text) == found.end())
      found.push_back(t.text);
  auto rank = [](const std::string& v) {
    if (v == "x") return 0;
    if (v == "y") return 1;
    if (v == "z") return 2;
    return 3 + (v[1] - '0');
  };
  std::sort(found.begin(), found.end(), [&](const auto& a, const auto& b) { return rank(a) < rank(b); });
  return found;
}

int infer_parameter_arity(const std::string& text) {
  int arity = 0;
  for (const auto& t : tokenize(text))
    if (t.kind == Token::Ident) arity = std::max(arity, parameter_index(t.text) + 1);
  return arity;
}

poly::Form<Rational> parse_poly(const std::string& text, const std::vector<std::string>& vars) {
  auto b = make_poly_builder<Rational>(vars, RationalRing{});
  return ExprParser<PolyBuilder<Rational>>(text, b).parse();
}

poly::Form<ParamScalar> parse_param_poly(const std::string& text, const std::vector<std::string>& vars, int arity,
                                         int order) {
  auto b = make_poly_builder<ParamScalar>(vars, ParamRing{arity, order});
  return ExprParser<PolyBuilder<ParamScalar>>(text, b).parse();
}

ncab::QElement parse_word(const std::string& text, int nb, int na) {
  WordBuilder b{nb, na};
  return ExprParser<WordBuilder>(text, b).parse();
}

QSeries parse_series(const std::string& text, int order) {
  SeriesBuilder b{order};
  return ExprParser<SeriesBuilder>(text, b).parse();
}

}  // namespace abkit::parse
