#include "abkit/family.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "abkit/parallel.hpp"
#include "abkit/parse.hpp"

namespace abkit::family {

using derham::BrieskornResult;

namespace {

derham::DenseMatrix<Rational> specialize_matrix(const derham::DenseMatrix<ParamScalar>& m, const std::vector<Rational>& pt) {
  derham::DenseMatrix<Rational> out(m.size());
  for (size_t i = 0; i < m.size(); ++i)
    for (const auto& x : m[i]) out[i].push_back(x.specialize(pt));
  return out;
}

int max_degree(const derham::DenseMatrix<ParamScalar>& m) {
  int d = 0;
  for (const auto& row : m)
    for (const auto& x : row) d = std::max(d, x.degree());
  return d;
}

Rational frac(const Rational& x) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return x - Rational(q);
}

std::string point_text(const std::vector<Rational>& p) {
  std::string s;
  for (size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + param_name(p.size(), i) + " = " + p[i].get_str();
  return s;
}

}  // namespace

BrieskornResult<Rational> specialize_result(const BrieskornResult<ParamScalar>& r, const std::vector<Rational>& pt) {
  BrieskornResult<Rational> s;
  s.nvars = r.nvars;
  s.weights = r.weights;
  s.socle = r.socle;
  s.window = r.window;
  s.exact = r.exact;
  s.mu = r.mu;
  s.basis = r.basis;
  s.basis_weights = r.basis_weights;
  s.window_basis = r.window_basis;
  s.window_weights = r.window_weights;
  s.a_win = specialize_matrix(r.a_win, pt);
  s.b_win = specialize_matrix(r.b_win, pt);
  for (const auto& row : r.a_series) {
    s.a_series.emplace_back();
    for (const auto& ser : row) {
      QSeries q;
      for (const auto& c : ser) q.push_back(c.specialize(pt));
      s.a_series.back().push_back(q);
    }
  }
  s.rank_b = r.rank_b;
  s.coker_b = r.coker_b;
  s.ker_b_zero = r.ker_b_zero;
  s.commutation = r.commutation;
  s.diag_sigma = r.diag_sigma;
  s.jacobian_pivots_consistent = r.jacobian_pivots_consistent;
  s.precision_lost = r.precision_lost;
  return s;
}

FamilyReport run_family(const FamilySpec& spec) {
  FamilyReport rep;
  rep.poly = spec.poly;
  auto vars = spec.vars.empty() ? parse::infer_variables(spec.poly) : spec.vars;
  rep.arity = spec.arity > 0 ? spec.arity : std::max(1, parse::infer_parameter_arity(spec.poly));
  for (const auto& p : spec.points)
    if (static_cast<int>(p.size()) != rep.arity)
      throw std::invalid_argument("point " + point_text(p) + " does not have " + std::to_string(rep.arity) +
                                  " coordinates");

  rep.order = spec.order;
  if (rep.order <= 0) {
    // Outputs are weighted-homogeneous when the parameters carry weight, so their
    // parameter degree is bounded by the weight span of the window.
    auto probe = parse::parse_param_poly(spec.poly, vars, rep.arity, 1);
    auto w = derham::find_weights(probe);
    long span = w.found ? w.socle() + static_cast<long>(spec.options.b_order - 1) * w.L - w.total()
                        : spec.options.max_degree;
    rep.order = static_cast<int>(span) + 2;
  }
  auto f = parse::parse_param_poly(spec.poly, vars, rep.arity, rep.order);

  std::optional<BrieskornResult<ParamScalar>> param;
  std::string param_error;
  try {
    param = derham::Engine<ParamScalar>(f, spec.options).result();
  } catch (const std::exception& e) {
    param_error = e.what();
  }
  if (param) {
    rep.precision_lost = param->precision_lost;
    rep.max_parameter_degree = std::max(max_degree(param->a_win), max_degree(param->b_win));
    for (const auto& row : param->a_series)
      for (const auto& ser : row)
        for (const auto& c : ser) rep.max_parameter_degree = std::max(rep.max_parameter_degree, c.degree());
    rep.precision_ok = rep.max_parameter_degree + rep.precision_lost < rep.order - 1;
  }

  rep.points.resize(spec.points.size());
  parallel_for(spec.points.size(), [&](int i) {
    PointReport& pr = rep.points[i];
    pr.point = spec.points[i];
    auto fs = poly::specialize_form(f, pr.point);
    std::optional<derham::Engine<Rational>> direct;
    try {
      direct.emplace(fs, spec.options);
      pr.isolated = true;
    } catch (const derham::NonIsolatedError& e) {
      pr.error = std::string(e.what()) + " at " + point_text(pr.point);
      return;
    } catch (const std::exception& e) {
      pr.error = std::string(e.what()) + " at " + point_text(pr.point);
      return;
    }
    const auto& b = direct->result();
    pr.mu_direct = b.mu;
    pr.coker_direct = b.coker_b;
    auto mb = derham::to_module(b);
    auto geo = abmod::is_geometric(mb);
    pr.spectrum = geo.spectral.spectrum;
    for (const auto& [x, m] : pr.spectrum) pr.labels.push_back(frac(x));
    std::sort(pr.labels.begin(), pr.labels.end());
    pr.labels.erase(std::unique(pr.labels.begin(), pr.labels.end()), pr.labels.end());
    pr.geometric = geo.verdict;
    auto tc = derham::torsion_check(*direct);
    auto sm = abmod::is_S_small(mb, abmod::FiniteModule{});
    pr.small = tc.a_torsion_zero && tc.b_torsion_zero && sm.small();
    pr.smallness = sm.certificate;

    if (!param) {
      pr.error = "parametric run failed: " + param_error;
      return;
    }
    auto a = specialize_result(*param, pr.point);
    pr.mu_param = a.mu;
    pr.coker_param = a.coker_b;
    pr.basis_equal = a.basis == b.basis && a.window_basis == b.window_basis;
    pr.a_win_equal = pr.basis_equal && a.a_win == b.a_win;
    pr.b_win_equal = pr.basis_equal && a.b_win == b.b_win;
    pr.a_series_equal = pr.basis_equal && a.a_series == b.a_series;
    pr.spectra_equal = abmod::spectrum(derham::to_module(a)).spectrum == pr.spectrum;
  });

  rep.agree = !rep.points.empty() && rep.precision_ok;
  rep.geometric = rep.small = !rep.points.empty();
  rep.labels_constant = rep.spectra_constant = true;
  for (const auto& p : rep.points) {
    if (!p.agree()) rep.agree = false;
    if (p.geometric != abmod::Verdict::Yes) rep.geometric = false;
    if (!p.small) rep.small = false;
    if (p.labels != rep.points.front().labels) rep.labels_constant = false;
    if (p.spectrum != rep.points.front().spectrum) rep.spectra_constant = false;
  }
  return rep;
}

}  // namespace abkit::family
