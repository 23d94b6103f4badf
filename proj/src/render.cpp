#include "abkit/render.hpp"

#include <sstream>

namespace abkit::render {

std::string q(const Rational& x) { return x.get_str(); }

Json matrix(const QMatrix& m) {
  Json out = Json::array();
  for (const auto& row : m) {
    Json r = Json::array();
    for (const auto& x : row) r.push_back(q(x));
    out.push_back(r);
  }
  return out;
}

Json series_matrix(const abmod::SeriesMatrix& m) {
  Json out = Json::array();
  for (const auto& row : m) {
    Json r = Json::array();
    for (const auto& s : row) r.push_back(render_series(s));
    out.push_back(r);
  }
  return out;
}

Json spectrum_list(const std::vector<std::pair<Rational, int>>& s) {
  Json out = Json::array();
  for (const auto& [x, m] : s)
    for (int i = 0; i < m; ++i) out.push_back(q(x));
  return out;
}

namespace {

std::string monomial(int j, int k) {
  std::string s;
  if (j > 0) s = j == 1 ? "b" : "b^" + std::to_string(j);
  if (k > 0) s += (s.empty() ? "" : "*") + (k == 1 ? std::string("a") : "a^" + std::to_string(k));
  return s;
}

std::string join_terms(const std::vector<std::pair<std::string, std::string>>& terms) {
  // terms: (coefficient string, monomial string)
  if (terms.empty()) return "0";
  std::string out;
  for (const auto& [c, m] : terms) {
    bool compound = c.find(' ') != std::string::npos;
    bool negative = !compound && c[0] == '-';
    std::string mag = negative ? c.substr(1) : c;
    if (compound) mag = "(" + c + ")";
    out += out.empty() ? (negative ? "-" : "") : (negative ? " - " : " + ");
    if (m.empty())
      out += mag;
    else if (mag == "1")
      out += m;
    else
      out += mag + "*" + m;
  }
  return out;
}

}  // namespace

std::string word(const ncab::QElement& x) {
  std::vector<std::pair<std::string, std::string>> terms;
  for (const auto& [j, k, c] : x.terms()) terms.emplace_back(q(c), monomial(j, k));
  return join_terms(terms);
}

std::string xi_element(const xi::XiElement& x) {
  std::vector<std::pair<std::string, std::string>> terms;
  for (const auto& [g, s] : x.coeffs)
    terms.emplace_back(render_series(s), "e(" + q(g.first) + "," + std::to_string(g.second) + ")");
  return join_terms(terms);
}

Json weights(const derham::Weights& w) {
  Json r = Json::array();
  for (const auto& x : w.rational()) r.push_back(q(x));
  return {{"found", w.found}, {"quasi_homogeneous", w.quasi_homogeneous}, {"integer", w.w}, {"degree", w.L},
          {"rational", r}};
}

Json geometric(const abmod::GeometricReport& g) {
  return {{"verdict", abmod::to_string(g.verdict)},
          {"regular", g.regular},
          {"rational", g.rational},
          {"positive", g.positive},
          {"spectrum", spectrum_list(g.spectral.spectrum)},
          {"unresolved_degree", g.spectral.unresolved_degree},
          {"certificate", g.certificate}};
}

Json smallness(const abmod::SmallnessReport& s) {
  return {{"small", s.small()},
          {"intersection_in_a_torsion", s.cond_intersection},
          {"b_torsion_in_a_torsion", s.cond_b_in_a},
          {"a_nilpotent_on_a_torsion", s.cond_a_nilpotent},
          {"witness_n", s.witness_n},
          {"kernel_cokernel_finite", s.cond_coherent},
          {"kernel_generators", matrix(s.ker_b_generators)},
          {"cokernel_generators", matrix(s.coker_b_generators)},
          {"b_torsion_equals_a_tilde", s.b_equals_a_tilde},
          {"b_power_kills_b_torsion", s.b_power_kills},
          {"certificate", s.certificate}};
}

Json finite_module(const abmod::FiniteModule& m) {
  return {{"dimension", m.dim}, {"a", matrix(m.a)}, {"b", matrix(m.b)}, {"labels", m.labels}};
}

Json quasi_iso(const derham::QuasiIsoReport& r) {
  Json pieces = Json::array();
  for (const auto& p : r.pieces)
    pieces.push_back({{"weight", p.weight},
                      {"dim_k", p.h_k},
                      {"dim_chain", p.h_kk},
                      {"injective", p.injective},
                      {"surjective", p.surjective}});
  Json out = {{"degree", r.degree},      {"applicable", r.applicable}, {"iso", r.iso}, {"dim_k", r.dim_k},
              {"dim_chain", r.dim_kk},   {"max_weight", r.max_weight}, {"pieces", pieces}};
  if (!r.note.empty()) out["note"] = r.note;
  return out;
}

Json torsion(const derham::TorsionCheck& t) {
  return {{"a_torsion_zero", t.a_torsion_zero},
          {"b_torsion_zero", t.b_torsion_zero},
          {"separation_power", t.separation_power},
          {"quotient", finite_module(t.quotient)},
          {"quotient_a_nilpotency", t.quotient_a_nilpotency},
          {"quotient_b_nilpotency", t.quotient_b_nilpotency},
          {"quotient_commutation", t.quotient_commutation},
          {"b_exponent_within_twice_a_exponent", t.a_gives_b}};
}

Json nullstellensatz(const derham::NullstellensatzReport& n) {
  return {{"n_ki", n.n_ki}, {"n_ab", n.n_ab}, {"k_equals_i", n.k_equals_i}, {"euler", n.euler}};
}

Json image_of_b(const derham::ImageOfBReport& r) {
  return {{"applicable", r.applicable},
          {"samples", r.samples},
          {"agreements", r.agreements},
          {"members", r.members},
          {"holds", r.applicable && r.samples > 0 && r.samples == r.agreements}};
}

Json hom(const abmod::HomToXi& h) {
  Json gens = Json::array();
  for (const auto& g : h.generators) {
    Json imgs = Json::array();
    for (const auto& x : g) imgs.push_back(xi_element(x));
    gens.push_back(imgs);
  }
  Json missing = Json::array();
  for (const auto& l : h.missing_lambdas) missing.push_back(q(l));
  return {{"dimension", h.dimension}, {"generators", gens}, {"missing_lambdas", missing}, {"intertwines", h.intertwines}};
}

Json family(const family::FamilyReport& r) {
  Json points = Json::array();
  Json per_point = Json::object();
  for (const auto& p : r.points) {
    Json coords = Json::array();
    for (const auto& x : p.point) coords.push_back(q(x));
    points.push_back(coords);
    std::string key;
    for (size_t i = 0; i < p.point.size(); ++i) key += (i ? "," : "") + q(p.point[i]);
    Json labels = Json::array();
    for (const auto& l : p.labels) labels.push_back(q(l));
    Json e = {{"isolated", p.isolated},
              {"mu", {{"parametric", p.mu_param}, {"direct", p.mu_direct}}},
              {"coker_b", {{"parametric", p.coker_param}, {"direct", p.coker_direct}}},
              {"basis_equal", p.basis_equal},
              {"a_matrix_equal", p.a_win_equal},
              {"b_matrix_equal", p.b_win_equal},
              {"a_series_equal", p.a_series_equal},
              {"spectra_equal", p.spectra_equal},
              {"spectrum", spectrum_list(p.spectrum)},
              {"labels", labels},
              {"geometric", abmod::to_string(p.geometric)},
              {"small", p.small},
              {"smallness", p.smallness},
              {"agree", p.agree()}};
    if (!p.error.empty()) e["error"] = p.error;
    per_point[key] = e;
  }
  return {{"poly", r.poly},
          {"parameters", r.arity},
          {"precision", {{"order", r.order},
                         {"max_parameter_degree", r.max_parameter_degree},
                         {"lost", r.precision_lost},
                         {"ok", r.precision_ok}}},
          {"points", points},
          {"per_point", per_point},
          {"agree", r.agree},
          {"labels_constant", r.labels_constant},
          {"spectra_constant", r.spectra_constant},
          {"geometric", r.geometric},
          {"small", r.small}};
}

Json brieskorn(const derham::BrieskornResult<Rational>& r, const std::vector<std::string>& names) {
  auto keys = [&](const std::vector<poly::Key>& ks) {
    Json out = Json::array();
    for (auto k : ks) out.push_back(poly::key_to_string(k, r.nvars, names));
    return out;
  };
  QMatrix a(r.a_win.begin(), r.a_win.end()), b(r.b_win.begin(), r.b_win.end());
  return {{"mu", r.mu},
          {"rank", r.mu},
          {"exactness", derham::stamp(r)},
          {"weights", weights(r.weights)},
          {"basis", keys(r.basis)},
          {"basis_weights", r.basis_weights},
          {"window", {{"weight", r.window}, {"basis", keys(r.window_basis)}, {"weights", r.window_weights}}},
          {"a_matrix", matrix(a)},
          {"b_matrix", matrix(b)},
          {"a_series", series_matrix(r.a_series)},
          {"b_truncation", r.a_series.empty() ? 0 : static_cast<int>(r.a_series[0][0].size())},
          {"rank_b", r.rank_b},
          {"coker_b", r.coker_b},
          {"ker_b_zero", r.ker_b_zero},
          {"commutation", r.commutation},
          {"a_equals_sigma_b", r.diag_sigma}};
}

}  // namespace abkit::render
