#include <doctest.h>

#include "abkit/family.hpp"
#include "oracles.hpp"

using namespace abkit;
using namespace abkit::family;

TEST_CASE("constant family gives identical outputs") {
  FamilySpec s;
  s.poly = "x^2 + y^2 + 0*s";
  s.options = {20, 4};
  s.points = {{0}, {1}, {-2}};
  auto r = run_family(s);
  CHECK(r.agree);
  CHECK(r.spectra_constant);
  CHECK(r.geometric);
  CHECK(r.small);
  for (const auto& p : r.points) CHECK(p.mu_direct == 1);
}

TEST_CASE("mu-constant deformation of x^3 + y^7") {
  FamilySpec s;
  s.poly = "x^3 + y^7 + s*x*y^5";
  s.options = {30, 4};
  s.points = {{0}, {1}, {-2}};
  auto r = run_family(s);
  CHECK(r.precision_ok);
  CHECK(r.agree);
  CHECK(r.labels_constant);
  CHECK(r.geometric);
  for (const auto& p : r.points) {
    CAPTURE(p.point[0].get_str());
    CHECK(p.mu_param == oracle::bp_milnor({3, 7}));
    CHECK(p.mu_direct == oracle::bp_milnor({3, 7}));
    CHECK(p.a_win_equal);
    CHECK(p.b_win_equal);
    CHECK(p.a_series_equal);
    CHECK(p.spectra_equal);
  }
}

TEST_CASE("a non-isolated fibre is reported with its point") {
  FamilySpec s;
  s.poly = "x^2 + s*y^2";
  s.options = {12, 2};
  s.points = {{1}, {0}};
  auto r = run_family(s);
  CHECK(r.points[0].isolated);
  CHECK_FALSE(r.points[1].isolated);
  CHECK(r.points[1].error.find("s = 0") != std::string::npos);
  CHECK_FALSE(r.agree);
}

TEST_CASE("points must match the parameter count") {
  FamilySpec s;
  s.poly = "x^2 + s*y^2";
  s.points = {{1, 2}};
  CHECK_THROWS_AS(run_family(s), std::invalid_argument);
}
