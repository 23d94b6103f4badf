#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace oracle {

namespace {

void accumulate(Terms& into, const Terms& from, const Rational& c) {
  for (const auto& [k, v] : from) {
    Rational& slot = into[k];
    slot += c * v;
    if (slot == 0) into.erase(k);
  }
}

}  // namespace

Terms rewrite(const std::string& word, int nb) {
  static std::map<std::pair<std::string, int>, Terms> memo;
  if (std::count(word.begin(), word.end(), 'b') >= nb) return {};
  auto key = std::make_pair(word, nb);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  Terms out;
  auto pos = word.find("ab");
  if (pos == std::string::npos) {
    int j = std::count(word.begin(), word.end(), 'b');
    out[{j, static_cast<int>(word.size()) - j}] = 1;
  } else {
    std::string left = word.substr(0, pos), right = word.substr(pos + 2);
    accumulate(out, rewrite(left + "ba" + right, nb), 1);
    accumulate(out, rewrite(left + "bb" + right, nb), 1);
  }
  memo[key] = out;
  return out;
}

Terms rewrite_sum(const std::vector<std::pair<Rational, std::string>>& words, int nb) {
  Terms out;
  for (const auto& [c, w] : words) accumulate(out, rewrite(w, nb), c);
  return out;
}

int bp_milnor(const std::vector<int>& p) {
  int m = 1;
  for (int x : p) m *= x - 1;
  return m;
}

std::vector<std::vector<int>> bp_basis(const std::vector<int>& p) {
  std::vector<std::vector<int>> out{{}};
  for (int x : p) {
    std::vector<std::vector<int>> next;
    for (const auto& a : out)
      for (int e = 0; e <= x - 2; ++e) {
        auto b = a;
        b.push_back(e);
        next.push_back(b);
      }
    out = next;
  }
  return out;
}

std::vector<Rational> bp_spectrum(const std::vector<int>& p) {
  std::vector<Rational> out;
  for (const auto& a : bp_basis(p)) {
    Rational s = 0;
    for (size_t i = 0; i < p.size(); ++i) s += abkit::make_rational(a[i] + 1, p[i]);
    s.canonicalize();
    out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double xi_value(const abkit::xi::XiElement& x, double at) {
  // b^m g (x) = int_0^x (x - t)^{m-1} / (m-1)! g(t) dt; substitute t = x e^{-u}.
  double total = 0;
  for (const auto& [gen, series] : x.coeffs) {
    double lambda = gen.first.get_d();
    int j = gen.second;
    double jfact = std::tgamma(j + 1.0);
    auto e = [&](double t) { return std::pow(t, lambda - 1) * std::pow(std::log(t), j) / jfact; };
    for (size_t m = 0; m < series.size(); ++m) {
      double c = series[m].get_d();
      if (c == 0) continue;
      if (m == 0) {
        total += c * e(at);
        continue;
      }
      double mfact = std::tgamma(static_cast<double>(m));
      const double umax = 80.0 / lambda;
      const int steps = 40000;
      const double h = umax / steps;
      double acc = 0;
      for (int s = 0; s <= steps; ++s) {
        double u = s * h;
        double t = at * std::exp(-u);
        double f = std::pow(at - t, static_cast<double>(m - 1)) / mfact * e(t) * t;
        double wgt = (s == 0 || s == steps) ? 1 : (s % 2 ? 4 : 2);
        acc += wgt * f;
      }
      total += c * acc * h / 3;
    }
  }
  return total;
}

std::vector<Rational> chain_power(const std::vector<Rational>& w, const Rational& f, int n) {
  std::vector<Rational> cur = w;
  for (int step = 0; step < n; ++step) {
    std::vector<Rational> next(cur.size());
    for (size_t j = 0; j < cur.size(); ++j) {
      next[j] = f * cur[j];
      if (j >= 1) next[j] += Rational(static_cast<long>(j) - 1) * cur[j - 1];
    }
    cur = next;
  }
  return cur;
}

}  // namespace oracle
