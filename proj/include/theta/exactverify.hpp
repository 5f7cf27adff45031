#pragma once

#include <functional>
#include <optional>

#include "theta/report.hpp"
#include "theta/tower.hpp"

// Exact matrix and cocycle verification over radical towers: the explicit
// matrices P, P0, P1, Q, h0, g0/g1, the splitting vectors, the lattice-level
// transfer map between the two anisotropic tori, the key-diagram cocycle
// identities for both quaternion branches, and the rank-one nonarchimedean
// lift identities.  Everything is a named scenario returning a Report.
namespace theta::exactverify {

using tower::GaloisAction;
using tower::TowerElem;
using tower::TowerMatrix;
using tower::TowerPtr;

struct NotIsometry : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Builds a tower spanning the square classes of the listed values, skipping
// values whose class is already generated (or trivial).
TowerPtr tower_spanning(std::vector<std::pair<std::string, Rational>> candidates);

// Gram matrices: the 2m x 2m symplectic form c^{-1}[[0, J],[-J, 0]] and the
// 2n x 2n quadratic form with J_{n-1} corners and middle diag(2c, -2dc).
TowerMatrix gram_sp(const TowerPtr& t, int m, const Rational& c);
TowerMatrix gram_so(const TowerPtr& t, int n, const Rational& c, const Rational& d);

TowerMatrix matrix_J(const TowerPtr& t, int r);
TowerMatrix matrix_Qn(const TowerPtr& t, int n);              // diag(2 I_{2t}, -2 I)
TowerMatrix matrix_Q(const TowerPtr& t, int n);               // hyperbolic splitting
TowerMatrix matrix_P0(const TowerPtr& t, int n);
TowerMatrix matrix_P1(const TowerPtr& t, int n);

// P with the d-normalizer so that P^t S_n P = Q_n holds in the tower.
TowerMatrix build_P(const TowerPtr& t, int n, const Rational& d);

// Simple-root vectors of the two splittings; named for reporting.
std::vector<std::pair<std::string, TowerMatrix>> build_sp_splitting(const TowerPtr& t, int m);
std::vector<std::pair<std::string, TowerMatrix>> build_so_splitting(const TowerPtr& t, int n,
                                                                    const Rational& d);

// Representation-matrix transport of Appendix-style isometries: checks
// A*^t R A = R, returns R A R^{-1} and asserts it equals (A*^t)^{-1}.
TowerMatrix rep_matrix_op(const TowerMatrix& R, const TowerMatrix& A, const GaloisAction& invol);

// Scenario verifications (each returns a full report of sub-checks).
Report verify_build_P(int n, const Rational& d);
Report verify_sp_splitting(int m);
Report verify_so_splitting(int n, const Rational& d);
Report verify_sp_gen(int m, const Rational& c, int eps_psi, bool perturb_h0 = false);
Report verify_so_gen(int n, const Rational& d, bool wrong_parity = false);
Report verify_transfer_identity(int m, int n, int eps_psi, bool perturb_u = false);
Report verify_key_diagram(int e_H, int p, int q, int m, int n, int eps_psi,
                          bool down_variant = true, bool mismatch_epsbar = false);
Report verify_lift_na(const Rational& a, const Rational& b, bool wrong_e11 = false);
Report verify_rep_matrix_op();

struct Scenario {
  std::string name;
  bool expect_fail = false;  // negative controls
  std::function<Report()> run;
};

const std::vector<Scenario>& scenario_registry();
const Scenario* find_scenario(const std::string& name);

struct ScenarioOutcome {
  Report report;
  bool expect_fail = false;
  bool ok = false;  // report outcome matches the expectation
};

ScenarioOutcome run_scenario(const Scenario& s);

}  // namespace theta::exactverify
