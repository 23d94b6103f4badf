// Acceptance run: one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "abkit/abmod.hpp"
#include "abkit/derham.hpp"
#include "abkit/family.hpp"
#include "abkit/ncab.hpp"
#include "abkit/parse.hpp"
#include "abkit/xi.hpp"
#include "oracles.hpp"

using namespace abkit;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (!pass) detail << "; ";
      pass = false;
      detail << what;
    }
  }
};

struct Example {
  std::string poly;
  std::vector<int> exponents;
  int b_order;
};

const std::vector<Example> kExamples = {
    {"x^2+y^2", {2, 2}, 8}, {"x^3+y^2", {3, 2}, 8}, {"x^3+y^3+z^3", {3, 3, 3}, 8}, {"x^3+y^7", {3, 7}, 4}};

poly::Form<Rational> P(const std::string& s) { return parse::parse_poly(s, parse::infer_variables(s)); }

derham::Options options_for(const Example& e) { return {30, e.b_order}; }

std::vector<Rational> spectrum_values(const std::vector<std::pair<Rational, int>>& s) {
  std::vector<Rational> v;
  for (const auto& [x, m] : s)
    for (int i = 0; i < m; ++i) v.push_back(x);
  return v;
}

ncab::QElement random_element(std::mt19937& rng, int nb) {
  std::uniform_int_distribution<int> coef(-3, 3), deg(0, 3);
  ncab::QElement x(nb);
  int terms = 1 + deg(rng);
  for (int t = 0; t < terms; ++t) x.add_term(deg(rng), deg(rng), Rational(coef(rng)));
  return x;
}

// ---- criteria ----

void algebra_identities(Outcome& o) {
  std::mt19937 rng(1);
  const int nb = 14;
  auto a = ncab::QElement::gen_a(nb), b = ncab::QElement::gen_b(nb);
  auto rel = a.mul(b) - b.mul(a) - b.mul(b);
  int comm = 0;
  for (int i = 0; i < 1000; ++i) {
    auto x = random_element(rng, nb), y = random_element(rng, nb);
    comm += x.mul(rel).mul(y).is_zero();
  }
  o.require(comm == 1000, "commutation on " + std::to_string(comm) + "/1000 pairs");
  int assoc = 0;
  for (int i = 0; i < 200; ++i) {
    auto x = random_element(rng, nb), y = random_element(rng, nb), z = random_element(rng, nb);
    assoc += x.mul(y).mul(z) == x.mul(y.mul(z));
  }
  o.require(assoc == 200, "associativity on " + std::to_string(assoc) + "/200 triples");
  int rewrites = 0;
  for (int i = 0; i < 200; ++i) {
    std::string w;
    for (int l = 0, n = 1 + rng() % 8; l < n; ++l) w += rng() % 2 ? 'a' : 'b';
    auto x = ncab::QElement::scalar(Rational(1), 8);
    for (char c : w) x = x.mul(c == 'a' ? ncab::QElement::gen_a(8) : ncab::QElement::gen_b(8));
    oracle::Terms t;
    for (const auto& [j, k, c] : x.terms()) t[{j, k}] = c;
    rewrites += t == oracle::rewrite(w, 8);
  }
  o.require(rewrites == 200, "rewriting oracle on " + std::to_string(rewrites) + "/200 words");
  for (int n = 1; n <= 6; ++n) o.require(ncab::lemma_a_gives_b(n, 2 * n + 1), "b^{2N} identity N=" + std::to_string(n));
  for (int n = 0; n <= 8; ++n) {
    auto t = ncab::action_polys(n, 8);
    o.require(ncab::action_polys_bounds_hold(t, n), "table bounds N=" + std::to_string(n));
    std::vector<Rational> w(9);
    for (auto& x : w) x = static_cast<int>(rng() % 9) - 4;
    Rational f = make_rational(static_cast<int>(rng() % 7) - 3, 1 + rng() % 4);
    auto direct = oracle::chain_power(w, f, n);
    for (int j = 0; j <= 8; ++j) {
      Rational sum = 0;
      for (int h = 0; h <= j; ++h) {
        Rational val = 0, pw = 1;
        for (const auto& c : t[j][h].coeffs) {
          val += c * pw;
          pw *= f;
        }
        sum += val * w[j - h];
      }
      o.require(sum == direct[j], "table recursion N=" + std::to_string(n) + " j=" + std::to_string(j));
    }
  }
  for (int k = 0; k <= 8; ++k) o.require(ncab::powers_identity(k, 10), "a^k b = b (a+b)^k for k=" + std::to_string(k));
  o.detail << (o.pass ? "1000 pairs, 200 triples, N<=6, table N,j<=8, k<=8" : "");
}

void xi_module(Outcome& o) {
  xi::XiShape s{{make_rational(1, 3), make_rational(1, 2), Rational(1)}, 2, 10};
  std::mt19937 rng(2);
  auto random = [&]() {
    xi::XiElement x;
    for (const auto& l : s.lambdas)
      for (int j = 0; j <= s.k; ++j) {
        QSeries ser(s.b_truncation, Rational(0));
        for (auto& c : ser) c = static_cast<int>(rng() % 7) - 3;
        x.coeffs[{l, j}] = ser;
      }
    return xi::normalize(s, x);
  };
  int comm = 0, trip = 0;
  for (int i = 0; i < 500; ++i) {
    auto x = random();
    auto ab = xi::act_a(s, xi::act_b(s, x)), ba = xi::act_b(s, xi::act_a(s, x)), bb = xi::act_b(s, xi::act_b(s, x));
    comm += xi::add(s, ab, xi::scale(s, ba, Rational(-1))) == bb;
    if (i < 100) trip += xi::from_a_basis(s, xi::to_a_basis(s, x, 10)) == x;
  }
  o.require(comm == 500, "commutation on " + std::to_string(comm) + "/500");
  o.require(trip == 100, "a-basis round trip on " + std::to_string(trip) + "/100");
  int gens = 0;
  for (const auto& l : s.lambdas)
    for (int j = 0; j <= s.k; ++j) {
      auto e = xi::make_generator(s, l, j);
      gens += xi::from_a_basis(s, xi::to_a_basis(s, e, 10)) == e;
    }
  o.require(gens == s.rank(), "generator round trip");
  auto md = xi::monodromy(s);
  o.require(xi::semisimple_power_trivial(md, 6), "(T_ss)^6 = 1");
  o.require(xi::unipotent_blocks_valid(md), "unipotent blocks");
  o.detail << (o.pass ? "500 elements, Na=Nb=10, (T_ss)^6 = 1" : "");
}

void brieskorn_values(Outcome& o) {
  std::ostringstream d;
  for (const auto& ex : kExamples) {
    auto r = derham::brieskorn(P(ex.poly), options_for(ex));
    auto sp = spectrum_values(abmod::spectrum(derham::to_module(r)).spectrum);
    o.require(r.mu == oracle::bp_milnor(ex.exponents), ex.poly + " mu=" + std::to_string(r.mu));
    o.require(sp == oracle::bp_spectrum(ex.exponents), ex.poly + " spectrum");
    o.require(r.coker_b == r.mu, ex.poly + " coker b");
    o.require(r.ker_b_zero, ex.poly + " ker b");
    d << ex.poly << " mu=" << r.mu << " ";
  }
  o.detail << (o.pass ? d.str() : "");
}

void module_relation(Outcome& o) {
  int n = 0;
  for (const auto& ex : kExamples) {
    auto r = derham::brieskorn(P(ex.poly), options_for(ex));
    o.require(r.commutation, ex.poly + " ab - ba = b^2");
    o.require(r.diag_sigma, ex.poly + " a = diag(sigma) b");
    ++n;
  }
  for (const auto* s : {"x^3+y^7+x*y^5", "x^3+y^7-2*x*y^5", "x^2*y+y^3"}) {
    auto r = derham::brieskorn(P(s), derham::Options{30, 4});
    o.require(r.commutation, std::string(s) + " ab - ba = b^2");
    if (r.exact) o.require(r.diag_sigma, std::string(s) + " a = diag(sigma) b");
    ++n;
  }
  o.detail << (o.pass ? std::to_string(n) + " modules" : "");
}

void quasi_iso(Outcome& o) {
  for (const auto& ex : kExamples) {
    auto f = P(ex.poly);
    for (int p : {0, f.nvars}) {
      auto r = derham::quasi_iso_check(f, p, options_for(ex));
      o.require(r.applicable && r.iso && r.dim_k == r.dim_kk,
                ex.poly + " p=" + std::to_string(p) + " (" + std::to_string(r.dim_k) + " vs " +
                    std::to_string(r.dim_kk) + ")");
    }
  }
  o.detail << (o.pass ? "4 examples, p = 0 and top" : "");
}

void image_of_b(Outcome& o) {
  int total = 0;
  for (const auto& ex : kExamples) {
    auto r = derham::image_of_b_test(P(ex.poly), 100, 17, options_for(ex));
    o.require(r.applicable && r.samples >= 100 && r.agreements == r.samples,
              ex.poly + " " + std::to_string(r.agreements) + "/" + std::to_string(r.samples));
    o.require(r.members > 0 && r.members < r.samples, ex.poly + " samples cover both outcomes");
    total += r.samples;
  }
  o.detail << (o.pass ? std::to_string(total) + " chains" : "");
}

void construction_properties(Outcome& o) {
  for (const auto& ex : kExamples) {
    derham::Engine<Rational> e(P(ex.poly), options_for(ex));
    auto t = derham::torsion_check(e);
    auto n = derham::nullstellensatz(e);
    o.require(t.a_torsion_zero && t.b_torsion_zero, ex.poly + " torsion");
    o.require(t.separation_power > 0, ex.poly + " separation");
    o.require(t.a_gives_b, ex.poly + " E/bE exponents");
    o.require(n.n_ab == 1 && n.n_ki == 1, ex.poly + " a E in b E with N=1");
  }
  for (int nb : {3, 4, 6}) {
    abmod::FinitePresentation p;
    p.b_truncation = nb;
    p.relations.push_back({parse::parse_word("a", nb)});
    auto rep = abmod::is_S_small(std::nullopt, abmod::to_finite_module(p, 2 * nb));
    o.require(rep.b_power_kills, "b^{2N} kills b-torsion of A/Aa at truncation " + std::to_string(nb));
    o.require(rep.cond_intersection, "intersection of b^m at truncation " + std::to_string(nb));
  }
  o.detail << (o.pass ? "A = B = 0, N' <= 2N, N_ab = 1" : "");
}

void functoriality(Outcome& o) {
  family::FamilySpec s;
  s.poly = "x^3 + y^7 + s*x*y^5";
  s.options = {30, 4};
  s.points = {{0}, {1}, {-2}};
  auto r = family::run_family(s);
  o.require(r.precision_ok, "parameter precision");
  for (const auto& p : r.points) {
    std::string at = "s=" + p.point[0].get_str();
    o.require(p.mu_param == 12 && p.mu_direct == 12, at + " mu");
    o.require(p.spectra_equal, at + " spectra");
    o.require(p.basis_equal && p.a_win_equal && p.b_win_equal && p.a_series_equal, at + " matrices");
  }
  o.require(r.labels_constant, "spectrum mod 1 across points");
  o.detail << (o.pass ? "mu=12 at s in {0,1,-2}, order " + std::to_string(r.order) : "");
}

void smallness(Outcome& o) {
  for (const auto& ex : kExamples) {
    auto g = abmod::is_geometric(derham::to_module(derham::brieskorn(P(ex.poly), options_for(ex))));
    o.require(g.verdict == abmod::Verdict::Yes, ex.poly + " geometric");
  }
  auto g = abmod::is_geometric(derham::to_module(derham::brieskorn(P("x^3+y^7+x*y^5"), derham::Options{30, 4})));
  o.require(g.verdict == abmod::Verdict::Yes, "x^3+y^7+x*y^5 geometric");
  abmod::FinitePresentation p;
  p.b_truncation = 4;
  p.relations.push_back({parse::parse_word("a - 1", 4)});
  auto rep = abmod::is_S_small(std::nullopt, abmod::to_finite_module(p, 8));
  o.require(!rep.cond_a_nilpotent, "a g = g: condition 3 holds (N=" + std::to_string(rep.witness_n) +
                                       "), condition 2 " + (rep.cond_b_in_a ? "holds" : "fails"));
  o.detail << (o.pass ? "5 modules geometric, a g = g fails condition 3" : "");
}

std::string run_cli(const std::string& threads, const std::string& args, int& status) {
  std::string cmd = "ABKIT_THREADS=" + threads + " '" + ABKIT_CLI + "' " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    status = -1;
    return "";
  }
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  int st = pclose(pipe);
  status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return out;
}

void determinism(Outcome& o) {
  const std::vector<std::pair<std::string, int>> runs = {
      {"brieskorn --poly 'x^3+y^2' --vars x,y --max-degree 24 --b-order 8", 0},
      {"brieskorn --poly 'x^3+y^3+z^3' --b-order 4", 0},
      {"family --poly 'x^3 + y^7 + s*x*y^5' --points '0;1;-2' --b-order 4", 0},
      {"verify-identities --max-n 6", 0}};
  for (const auto& [args, expect] : runs) {
    int s1, s2, s3;
    auto a = run_cli("1", args, s1);
    auto b = run_cli("1", args, s2);
    auto c = run_cli("4", args, s3);
    o.require(s1 == expect && s2 == expect && s3 == expect, args + " exit " + std::to_string(s1));
    o.require(!a.empty() && a == b && a == c, args + " output differs");
  }
  int st;
  run_cli("1", "brieskorn --poly 'x*y*z'", st);
  o.require(st == 1, "non-isolated exit code " + std::to_string(st));
  run_cli("1", "brieskorn --poly 'x + $'", st);
  o.require(st == 2, "syntax error exit code " + std::to_string(st));
  run_cli("1", "brieskorn --poly 'x^3+y^7' --b-order 8", st);
  o.require(st == 3, "cutoff exit code " + std::to_string(st));
  o.detail << (o.pass ? "4 commands x 3 runs, threads 1 and 4" : "");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"algebra identities", algebra_identities},
      {"expansion module", xi_module},
      {"Brieskorn exact values", brieskorn_values},
      {"module relation and diagonal a", module_relation},
      {"quasi-isomorphism", quasi_iso},
      {"image of b", image_of_b},
      {"torsion and separation", construction_properties},
      {"functoriality", functoriality},
      {"geometric and smallness predicates", smallness},
      {"CLI determinism", determinism}};
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %zu (%s): %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.str().c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
