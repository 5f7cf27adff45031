#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "theta/exactverify.hpp"

using namespace theta;
using namespace theta::exactverify;

namespace {

void check_report(const Report& rep) {
  INFO(rep.scenario);
  for (const Check& c : rep.checks) {
    INFO(c.name, " ", c.note);
    CHECK(c.pass);
  }
}

}  // namespace

TEST_CASE("build P for small sizes and all square classes") {
  for (int n = 1; n <= 4; ++n)
    for (Rational d : {Rational(2), Rational(3), Rational(-1)}) check_report(verify_build_P(n, d));
  // explicit n = 2, d = 2 diagonal: 2, 2, -2, -2
  TowerPtr t = tower_spanning({{"r", Rational(2)}});
  TowerMatrix P = build_P(t, 2, Rational(2));
  TowerMatrix lhs = P.transpose() * gram_so(t, 2, Rational(1), Rational(2)) * P;
  TowerMatrix qn = matrix_Qn(t, 2);
  CHECK(lhs == qn);
  CHECK(qn.at(0, 0) == TowerElem(t, Rational(2)));
  CHECK(qn.at(3, 3) == TowerElem(t, Rational(-2)));
}

TEST_CASE("splitting vectors") {
  for (int m = 1; m <= 3; ++m) check_report(verify_sp_splitting(m));
  for (int n = 2; n <= 3; ++n)
    for (Rational d : {Rational(2), Rational(-1)}) check_report(verify_so_splitting(n, d));
}

TEST_CASE("symplectic generic-member cocycle") {
  for (int m = 1; m <= 3; ++m)
    for (Rational c : {Rational(1), Rational(-3)})
      for (int eps : {1, -1}) check_report(verify_sp_gen(m, c, eps));
  // negative control
  CHECK_FALSE(verify_sp_gen(2, Rational(1), 1, true).passed());
}

TEST_CASE("orthogonal generic-member cocycle") {
  for (int n = 1; n <= 4; ++n) {
    Rational d = (n % 2 == 0) ? Rational(1) : Rational(-1);
    check_report(verify_so_gen(n, d));
  }
  check_report(verify_so_gen(2, Rational(2)));
  check_report(verify_so_gen(3, Rational(-2)));
  CHECK_FALSE(verify_so_gen(3, Rational(-1), true).passed());
}

TEST_CASE("transfer map and the coordinate identity") {
  for (auto [m, n] : std::vector<std::pair<int, int>>{{1, 1}, {2, 2}, {1, 2}, {2, 3}})
    for (int eps : {1, -1}) check_report(verify_transfer_identity(m, n, eps));
  CHECK_FALSE(verify_transfer_identity(2, 2, 1, true).passed());
}

TEST_CASE("key diagram") {
  check_report(verify_key_diagram(-1, 1, 0, 1, 1, 1));
  check_report(verify_key_diagram(-1, 1, 1, 2, 2, 1));
  check_report(verify_key_diagram(-1, 1, 1, 2, 3, -1));
  check_report(verify_key_diagram(1, 1, 1, 2, 2, 1));
  check_report(verify_key_diagram(1, 1, 0, 1, 1, -1));
  // almost-equal-rank split branch, both variants
  check_report(verify_key_diagram(1, 1, 1, 1, 2, 1, true));
  check_report(verify_key_diagram(1, 1, 1, 1, 2, 1, false));
  check_report(verify_key_diagram(1, 2, 1, 2, 3, -1, true));
  CHECK_FALSE(verify_key_diagram(-1, 2, 0, 2, 2, 1, true, true).passed());
}

TEST_CASE("rank one nonarchimedean lift") {
  check_report(verify_lift_na(Rational(2), Rational(5)));
  check_report(verify_lift_na(Rational(-1), Rational(3)));
  CHECK_FALSE(verify_lift_na(Rational(2), Rational(5), true).passed());
}

TEST_CASE("representation matrix transport") {
  check_report(verify_rep_matrix_op());
}

TEST_CASE("registry") {
  const auto& reg = scenario_registry();
  std::set<std::string> names;
  int negatives = 0;
  for (const Scenario& s : reg) {
    CHECK(names.insert(s.name).second);  // unique names
    negatives += s.expect_fail;
  }
  CHECK(reg.size() > 60);
  CHECK(negatives == 5);
  CHECK(find_scenario("rep-matrix-op") != nullptr);
  CHECK(find_scenario("no-such-scenario") == nullptr);
}
