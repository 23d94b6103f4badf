#pragma once

#include <string>
#include <vector>

#include "abkit/abmod.hpp"
#include "abkit/derham.hpp"

namespace abkit::family {

struct FamilySpec {
  std::string poly;
  std::vector<std::string> vars;  // empty: inferred
  int arity = 0;                  // 0: inferred from the text
  int order = 0;                  // truncation of the parameter ring; 0: chosen from the window
  std::vector<std::vector<Rational>> points;
  derham::Options options;
};

derham::BrieskornResult<Rational> specialize_result(const derham::BrieskornResult<ParamScalar>& r,
                                                    const std::vector<Rational>& point);

struct PointReport {
  std::vector<Rational> point;
  bool isolated = false;
  std::string error;
  int mu_param = -1, mu_direct = -1;
  int coker_param = -1, coker_direct = -1;
  bool basis_equal = false;
  bool a_win_equal = false;
  bool b_win_equal = false;
  bool a_series_equal = false;
  bool spectra_equal = false;
  std::vector<std::pair<Rational, int>> spectrum;  // specialize-first route
  std::vector<Rational> labels;                    // spectrum values mod 1
  abmod::Verdict geometric = abmod::Verdict::Indeterminate;
  bool small = false;
  std::string smallness;
  bool agree() const {
    return isolated && mu_param == mu_direct && coker_param == coker_direct && basis_equal && a_win_equal &&
           b_win_equal && a_series_equal && spectra_equal;
  }
};

struct FamilyReport {
  std::string poly;
  int arity = 0;
  int order = 0;
  int precision_lost = 0;
  int max_parameter_degree = 0;  // highest s-degree met in the parametric outputs
  bool precision_ok = false;     // every parametric entry is a polynomial below the truncation
  std::vector<PointReport> points;
  bool agree = false;
  bool labels_constant = false;  // spectra agree mod 1 across points
  bool spectra_constant = false;
  bool geometric = false;
  bool small = false;
};

// Runs the Brieskorn construction over the parameter ring and at every point,
// and compares both routes.
FamilyReport run_family(const FamilySpec& spec);

}  // namespace abkit::family
