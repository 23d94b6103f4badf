// abkit: command-line front end for the (a,b)-module toolkit.
//
// Exit codes: 0 success, 1 a mathematical check failed, 2 usage or parse
// error, 3 the requested cutoff cannot decide.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "abkit/abmod.hpp"
#include "abkit/derham.hpp"
#include "abkit/family.hpp"
#include "abkit/ncab.hpp"
#include "abkit/parse.hpp"
#include "abkit/render.hpp"

using namespace abkit;
using render::Json;

namespace {

enum Exit { kOk = 0, kFail = 1, kUsage = 2, kCutoff = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\n");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\n") - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, sep)) out.push_back(trim(part));
  return out;
}

Rational rational_arg(const std::string& s) {
  try {
    return parse_rational(trim(s));
  } catch (const std::exception&) {
    throw UsageError("not a rational number: '" + s + "'");
  }
}

std::vector<std::string> variables(const std::string& poly, const std::string& vars) {
  if (vars.empty()) {
    auto v = parse::infer_variables(poly);
    if (v.empty()) throw UsageError("no variables in polynomial; pass --vars");
    return v;
  }
  return split(vars, ',');
}

struct PolyInput {
  poly::Form<Rational> f;
  std::vector<std::string> names;
};

PolyInput read_poly(const std::string& text, const std::string& vars) {
  auto names = variables(text, vars);
  if (parse::infer_parameter_arity(text) > 0)
    throw UsageError("parameters are only accepted by the family subcommand");
  return {parse::parse_poly(text, names), names};
}

abmod::ABModule read_module(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open module file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const std::exception& e) {
    throw UsageError("module file: " + std::string(e.what()));
  }
  auto to_rational = [](const Json& v) {
    return v.is_number_integer() ? Rational(v.get<long>()) : rational_arg(v.get<std::string>());
  };
  int J = j.value("b_truncation", 4);
  if (J < 1) throw UsageError("module file: b_truncation must be positive");
  if (j.contains("diagonal")) {
    std::vector<Rational> lambdas;
    for (const auto& v : j["diagonal"]) lambdas.push_back(to_rational(v));
    return abmod::ABModule::diagonal(lambdas, J);
  }
  if (j.contains("residue")) {
    QMatrix r;
    for (const auto& row : j["residue"]) {
      r.emplace_back();
      for (const auto& v : row) r.back().push_back(to_rational(v));
    }
    return abmod::ABModule::from_residue(r, J);
  }
  if (!j.contains("a_matrix")) throw UsageError("module file needs a_matrix, residue or diagonal");
  abmod::ABModule m;
  m.b_truncation = J;
  for (const auto& row : j["a_matrix"]) {
    m.a_matrix.emplace_back();
    for (const auto& v : row)
      m.a_matrix.back().push_back(parse::parse_series(v.is_string() ? v.get<std::string>() : v.dump(), J));
  }
  m.rank = m.a_matrix.size();
  m.validate();
  return m;
}

// ---- verify-identities ----

ncab::QElement random_element(std::mt19937& rng, int nb) {
  std::uniform_int_distribution<int> coef(-3, 3), deg(0, 3);
  ncab::QElement x(nb);
  int terms = 1 + deg(rng);
  for (int t = 0; t < terms; ++t) x.add_term(deg(rng), deg(rng), Rational(coef(rng)));
  return x;
}

int verify_identities(int max_n, int pairs, int triples, unsigned seed, Json& out) {
  std::mt19937 rng(seed);
  const int nb = 2 * max_n + 2;
  auto a = ncab::QElement::gen_a(nb), b = ncab::QElement::gen_b(nb);
  auto rel = a.mul(b) - b.mul(a) - b.mul(b);
  int comm_ok = 0;
  for (int i = 0; i < pairs; ++i) {
    auto x = random_element(rng, nb), y = random_element(rng, nb);
    // x (ab - ba - b^2) y vanishes, and the product respects the relation on x, y directly
    bool ok = x.mul(rel).mul(y).is_zero() && (x.mul(a).mul(b) - x.mul(b).mul(a)) == x.mul(b).mul(b) &&
              (a.mul(b).mul(y) - b.mul(a).mul(y)) == b.mul(b).mul(y);
    comm_ok += ok;
  }
  int assoc_ok = 0;
  for (int i = 0; i < triples; ++i) {
    auto x = random_element(rng, nb), y = random_element(rng, nb), z = random_element(rng, nb);
    assoc_ok += x.mul(y).mul(z) == x.mul(y.mul(z));
  }
  Json lemma = Json::object(), powers = Json::object(), table = Json::object();
  bool all = comm_ok == pairs && assoc_ok == triples;
  for (int n = 1; n <= max_n; ++n) {
    bool ok = ncab::lemma_a_gives_b(n, 2 * n + 1);
    lemma[std::to_string(n)] = ok;
    all = all && ok;
  }
  const int tmax = std::max(max_n, 8);
  for (int k = 0; k <= tmax; ++k) {
    bool ok = ncab::powers_identity(k, tmax + 2);
    powers[std::to_string(k)] = ok;
    all = all && ok;
  }
  for (int n = 1; n <= tmax; ++n) {
    bool ok = ncab::action_polys_bounds_hold(ncab::action_polys(n, tmax), n);
    table[std::to_string(n)] = ok;
    all = all && ok;
  }
  out = {{"commutation", {{"samples", pairs}, {"passed", comm_ok}}},
         {"associativity", {{"samples", triples}, {"passed", assoc_ok}}},
         {"a_gives_b", lemma},
         {"power_shift", powers},
         {"action_table_bounds", table},
         {"seed", seed},
         {"ok", all}};
  return all ? kOk : kFail;
}

// ---- brieskorn ----

int brieskorn_cmd(const PolyInput& in, const derham::Options& opt, bool checks, int samples, unsigned seed,
                  Json& out) {
  derham::Engine<Rational> e(in.f, opt);
  const auto& r = e.result();
  out = render::brieskorn(r, in.names);
  auto geo = abmod::is_geometric(derham::to_module(r));
  out["spectrum"] = render::spectrum_list(geo.spectral.spectrum);
  bool ok = r.commutation && r.ker_b_zero && r.coker_b == r.mu && r.jacobian_pivots_consistent &&
            (!r.exact || r.diag_sigma) && geo.verdict != abmod::Verdict::No;
  Json c = {{"geometric", render::geometric(geo)}};
  if (checks) {
    Json qi = Json::object();
    for (int p : {0, in.f.nvars}) {
      auto rep = derham::quasi_iso_check(in.f, p, opt);
      qi[std::to_string(p)] = render::quasi_iso(rep);
      if (rep.applicable && !rep.iso) ok = false;
    }
    auto tc = derham::torsion_check(e);
    auto ns = derham::nullstellensatz(e);
    auto ib = derham::image_of_b_test(in.f, samples, seed, opt);
    c["quasi_iso"] = qi;
    c["torsion"] = render::torsion(tc);
    c["nullstellensatz"] = render::nullstellensatz(ns);
    c["image_of_b"] = render::image_of_b(ib);
    if (!tc.a_torsion_zero || !tc.b_torsion_zero || !tc.a_gives_b) ok = false;
    if (r.exact && !ns.euler) ok = false;
    if (ib.applicable && ib.agreements != ib.samples) ok = false;
  }
  out["checks"] = c;
  out["ok"] = ok;
  if (!ok) return kFail;
  return geo.verdict == abmod::Verdict::Indeterminate ? kCutoff : kOk;
}

int spectrum_cmd(const abmod::ABModule& m, Json& out) {
  auto geo = abmod::is_geometric(m);
  out = render::geometric(geo);
  out["rank"] = m.rank;
  out["simple_pole"] = abmod::is_simple_pole(m);
  out["saturated"] = geo.spectral.saturated;
  if (!geo.spectral.diagnostic.empty()) out["diagnostic"] = geo.spectral.diagnostic;
  switch (geo.verdict) {
    case abmod::Verdict::Yes:
      return kOk;
    case abmod::Verdict::No:
      return kFail;
    default:
      return kCutoff;
  }
}

int torsion_presentation(const std::vector<std::string>& relations, int nb, int window, Json& out) {
  abmod::FinitePresentation p;
  p.generators = 1;
  p.b_truncation = nb;
  for (const auto& r : relations) p.relations.push_back({parse::parse_word(r, nb)});
  auto ta = abmod::torsion(p, 'a', window, window);
  auto tb = abmod::torsion(p, 'b', nb, window);
  auto fm = abmod::to_finite_module(p, window);
  auto sm = abmod::is_S_small(std::nullopt, fm);
  out = {{"relations", relations},
         {"b_truncation", nb},
         {"a_window", window},
         {"a_torsion_dimension", ta.dimension},
         {"b_torsion_dimension", tb.dimension},
         {"stabilized", ta.stabilized && tb.stabilized},
         {"module", render::finite_module(fm)},
         {"smallness", render::smallness(sm)}};
  return sm.small() ? kOk : kFail;
}

std::vector<std::vector<Rational>> parse_points(const std::string& text) {
  std::vector<std::vector<Rational>> pts;
  for (const auto& p : split(text, ';')) {
    if (p.empty()) continue;
    std::vector<Rational> coords;
    for (const auto& c : split(p, ',')) coords.push_back(rational_arg(c));
    pts.push_back(coords);
  }
  if (pts.empty()) throw UsageError("no points given");
  return pts;
}

void emit(const Json& j, const std::string& path) {
  std::string text = j.dump(2) + "\n";
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw UsageError("cannot write '" + path + "'");
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"abkit: exact computations with (a,b)-modules and Brieskorn modules"};
  app.require_subcommand(1);
  std::string output;
  app.add_option("--output,-o", output, "write JSON here instead of stdout");

  int max_n = 6, pairs = 1000, triples = 200;
  unsigned seed = 20240607;
  auto* ident = app.add_subcommand("verify-identities", "check the algebra identities");
  ident->add_option("--max-n", max_n)->check(CLI::PositiveNumber);
  ident->add_option("--pairs", pairs)->check(CLI::PositiveNumber);
  ident->add_option("--triples", triples)->check(CLI::PositiveNumber);
  ident->add_option("--seed", seed);

  std::string expr;
  int b_order = 4;
  auto* mul = app.add_subcommand("mul", "normal form of a word in a, b");
  mul->add_option("--expr", expr)->required();
  mul->add_option("--b-order", b_order)->check(CLI::PositiveNumber);

  std::string poly_text, vars, module_path;
  derham::Options opt;
  bool no_checks = false;
  int samples = 100;
  auto add_poly = [&](CLI::App* sc, bool required) {
    auto* o = sc->add_option("--poly", poly_text, "polynomial in x, y, z or x0..x6");
    if (required) o->required();
    sc->add_option("--vars", vars, "comma-separated variable list");
    sc->add_option("--max-degree", opt.max_degree, "largest total degree materialized")->check(CLI::PositiveNumber);
    sc->add_option("--b-order", opt.b_order, "number of b-powers kept")->check(CLI::PositiveNumber);
    return o;
  };

  auto* bries = app.add_subcommand("brieskorn", "Brieskorn module of an isolated singularity");
  add_poly(bries, true);
  bries->add_flag("--no-checks", no_checks, "skip the complex-level checks");
  bries->add_option("--samples", samples)->check(CLI::PositiveNumber);
  bries->add_option("--seed", seed);

  auto* spec = app.add_subcommand("spectrum", "spectrum and geometric verdict");
  auto* spec_poly = add_poly(spec, false);
  auto* spec_mod = spec->add_option("--module", module_path, "JSON module file");
  spec_poly->excludes(spec_mod);

  int degree = -1;
  auto* qi = app.add_subcommand("quasi-iso", "compare the two de Rham cohomologies");
  add_poly(qi, true);
  qi->add_option("--degree", degree, "form degree (default: 0 and top)")->check(CLI::NonNegativeNumber);

  std::vector<std::string> relations;
  int a_window = 6;
  auto* tor = app.add_subcommand("torsion", "torsion of a Brieskorn module or a cyclic presentation");
  auto* tor_poly = add_poly(tor, false);
  auto* tor_rel = tor->add_option("--relation", relations, "relation word for a cyclic presentation");
  tor->add_option("--a-window", a_window)->check(CLI::PositiveNumber);
  tor_poly->excludes(tor_rel);

  std::string points = "0;1;-2";
  int order = 0;
  auto* fam = app.add_subcommand("family", "compare parametric and pointwise runs");
  add_poly(fam, true);
  fam->add_option("--points", points, "points separated by ';', coordinates by ','");
  fam->add_option("--order", order, "parameter truncation (default: from the window)")->check(CLI::PositiveNumber);

  std::string lambdas;
  int k = 0;
  auto* hom = app.add_subcommand("hom-xi", "maps into the module of asymptotic expansions");
  auto* hom_poly = add_poly(hom, false);
  auto* hom_mod = hom->add_option("--module", module_path, "JSON module file");
  hom->add_option("--lambdas", lambdas, "comma-separated exponents")->required();
  hom->add_option("--k", k, "largest log power")->check(CLI::NonNegativeNumber);
  hom_poly->excludes(hom_mod);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    Json out;
    int code = kOk;
    if (*ident) {
      code = verify_identities(max_n, pairs, triples, seed, out);
    } else if (*mul) {
      auto x = parse::parse_word(expr, b_order);
      out = {{"expr", expr}, {"b_order", b_order}, {"normal_form", render::word(x)}};
    } else if (*bries) {
      code = brieskorn_cmd(read_poly(poly_text, vars), opt, !no_checks, samples, seed, out);
    } else if (*spec) {
      if (!module_path.empty()) {
        code = spectrum_cmd(read_module(module_path), out);
      } else if (!poly_text.empty()) {
        auto in = read_poly(poly_text, vars);
        auto r = derham::brieskorn(in.f, opt);
        code = spectrum_cmd(derham::to_module(r), out);
        out["mu"] = r.mu;
        out["exactness"] = derham::stamp(r);
      } else {
        throw UsageError("spectrum needs --poly or --module");
      }
    } else if (*qi) {
      auto in = read_poly(poly_text, vars);
      std::vector<int> degrees = degree >= 0 ? std::vector<int>{degree} : std::vector<int>{0, in.f.nvars};
      out = Json::object();
      bool ok = true;
      for (int p : degrees) {
        auto rep = derham::quasi_iso_check(in.f, p, opt);
        out[std::to_string(p)] = render::quasi_iso(rep);
        if (!rep.applicable) code = kCutoff;
        if (rep.applicable && !rep.iso) ok = false;
      }
      if (!ok) code = kFail;
    } else if (*tor) {
      if (!relations.empty()) {
        code = torsion_presentation(relations, opt.b_order, a_window, out);
      } else if (!poly_text.empty()) {
        auto in = read_poly(poly_text, vars);
        derham::Engine<Rational> e(in.f, opt);
        auto tc = derham::torsion_check(e);
        out = render::torsion(tc);
        out["nullstellensatz"] = render::nullstellensatz(derham::nullstellensatz(e));
        if (!tc.a_torsion_zero || !tc.b_torsion_zero || !tc.a_gives_b) code = kFail;
      } else {
        throw UsageError("torsion needs --poly or --relation");
      }
    } else if (*fam) {
      family::FamilySpec s;
      s.poly = poly_text;
      if (!vars.empty()) s.vars = split(vars, ',');
      s.order = order;
      s.options = opt;
      s.points = parse_points(points);
      auto r = family::run_family(s);
      out = render::family(r);
      for (const auto& p : r.points)
        if (!p.isolated) {
          std::cerr << "abkit: " << p.error << "\n";
          code = kFail;
        }
      if (!r.agree || !r.geometric) code = kFail;
    } else if (*hom) {
      abmod::ABModule m;
      if (!module_path.empty())
        m = read_module(module_path);
      else if (!poly_text.empty())
        m = derham::to_module(derham::brieskorn(read_poly(poly_text, vars).f, opt));
      else
        throw UsageError("hom-xi needs --poly or --module");
      xi::XiShape shape;
      for (const auto& l : split(lambdas, ',')) shape.lambdas.push_back(rational_arg(l));
      shape.k = k;
      shape.b_truncation = m.b_truncation;
      shape.validate();
      auto h = abmod::hom_to_xi(m, shape);
      out = render::hom(h);
      if (!h.intertwines) code = kFail;
    }
    emit(out, output);
    return code;
  } catch (const UsageError& e) {
    std::cerr << "abkit: " << e.what() << "\n";
    return kUsage;
  } catch (const parse::ParseError& e) {
    std::cerr << "abkit: " << e.what() << "\n";
    return kUsage;
  } catch (const derham::NonIsolatedError& e) {
    std::cerr << "abkit: " << e.what() << "\n";
    return kFail;
  } catch (const derham::CutoffError& e) {
    std::cerr << "abkit: " << e.what() << "\n";
    return kCutoff;
  } catch (const abmod::TruncationInsufficient& e) {
    std::cerr << "abkit: " << e.what() << "\n";
    return kCutoff;
  } catch (const ncab::NotEnoughPrecision& e) {
    std::cerr << "abkit: " << e.what() << "\n";
    return kCutoff;
  } catch (const std::invalid_argument& e) {
    std::cerr << "abkit: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "abkit: internal error: " << e.what() << "\n";
    return kFail;
  }
}
