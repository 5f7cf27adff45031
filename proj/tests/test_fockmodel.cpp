#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "theta/fockmodel.hpp"
#include "theta/rootcomb.hpp"

using namespace theta;
using namespace theta::fockmodel;

namespace {

GaussianRational gr(long re, long im = 0) {
  return {Rational(re), Rational(im)};
}

SparsePoly var(const FockSpace& fs, int v) { return SparsePoly::variable(fs.vars(), v); }

}  // namespace

TEST_CASE("operator application") {
  FockSpace fs(1, 1, 1);
  SparsePoly w = var(fs, fs.w(1, 1));
  SparsePoly w2 = w * w;

  FockOperator dw(fs.vars());
  Monomial none(fs.vars(), 0), dmono(fs.vars(), 0);
  dmono[fs.w(1, 1)] = 1;
  dw.add(gr(1), none, dmono);
  CHECK(apply(dw, w2) == w * gr(2));

  FockOperator euler(fs.vars());
  Monomial wmono(fs.vars(), 0);
  wmono[fs.w(1, 1)] = 1;
  euler.add(gr(1), wmono, dmono);
  SparsePoly w5 = w2 * w2 * w;
  CHECK(apply(euler, w5) == w5 * gr(5));

  CHECK(apply(euler, SparsePoly::zero()).is_zero());
}

TEST_CASE("generator images match the displayed operators") {
  // H(1,2) at m=2, n=1: eps (w_11 d/dw_21 - z_21 d/dz_11)
  FockSpace fs(2, 1, 1);
  FockOperator h12 = generator_image(fs, {GenKind::H, 1, 2});
  SparsePoly w21 = var(fs, fs.w(2, 1));
  SparsePoly w11 = var(fs, fs.w(1, 1));
  SparsePoly z11 = var(fs, fs.z(1, 1));
  SparsePoly z21 = var(fs, fs.z(2, 1));
  CHECK(apply(h12, w21) == w11 * fs.eps());
  CHECK(apply(h12, z11) == z21 * (-fs.eps()));
  CHECK(apply(h12, z21).is_zero());

  // K(1,1) at m=2, n=1: eps (sum_c z_c1 d/dz_c1 + w_c1 d/dw_c1) + 2 eps
  FockOperator k11 = generator_image(fs, {GenKind::K, 1, 1});
  SparsePoly one = SparsePoly::constant(fs.vars(), gr(1));
  CHECK(apply(k11, one) == one * (fs.eps() * gr(2)));
  CHECK(apply(k11, w21) == w21 * (fs.eps() * gr(3)));
  CHECK(apply(k11, z11 * w21) == z11 * w21 * (fs.eps() * gr(4)));
}

TEST_CASE("P(1,1) vanishes by antisymmetry") {
  FockSpace fs(1, 1, 1);
  FockOperator p11 = generator_image(fs, {GenKind::P, 1, 1});
  SparsePoly f = var(fs, fs.z(1, 1)) + var(fs, fs.w(1, 1)) * gr(3);
  CHECK(apply(p11, f).is_zero());
}

TEST_CASE("determinant vectors") {
  FockSpace fs(2, 2, 1);
  CHECK(det_vector(fs, {1}) == var(fs, fs.w(1, 1)));
  SparsePoly d2 = det_vector(fs, {0, 1});
  SparsePoly expect = var(fs, fs.w(1, 1)) * var(fs, fs.w(2, 2)) -
                      var(fs, fs.w(1, 2)) * var(fs, fs.w(2, 1));
  CHECK(d2 == expect);
  CHECK(det_vector(fs, {0, 0}) == SparsePoly::constant(fs.vars(), gr(1)));
  CHECK_THROWS_AS(det_vector(FockSpace(1, 1, 1), {1, 1}), MinorTooLarge);
}

TEST_CASE("joint harmonics") {
  FockSpace fs22(2, 2, 1);
  CHECK(is_joint_harmonic(fs22, det_vector(fs22, {1, 1})));
  CHECK(is_joint_harmonic(fs22, SparsePoly::constant(fs22.vars(), gr(7))));
  FockSpace fs11(1, 1, 1);
  SparsePoly zw = var(fs11, fs11.z(1, 1)) * var(fs11, fs11.w(1, 1));
  CHECK_FALSE(is_joint_harmonic(fs11, zw));
}

TEST_CASE("weights of determinant vectors") {
  using rootcomb::Weight;
  FockSpace fs(1, 1, 1);
  auto wt = weight_of(fs, var(fs, fs.w(1, 1)));
  REQUIRE(wt.has_value());
  CHECK(wt->first == Weight::from_ints({1}));
  CHECK(wt->second == Weight::from_ints({2}));

  SparsePoly mixed = var(fs, fs.z(1, 1)) + var(fs, fs.w(1, 1)) * var(fs, fs.w(1, 1));
  CHECK_FALSE(weight_of(fs, mixed).has_value());

  auto wt1 = weight_of(fs, SparsePoly::constant(fs.vars(), gr(1)));
  REQUIRE(wt1.has_value());
  CHECK(wt1->first == Weight::from_ints({0}));
  CHECK(wt1->second == Weight::from_ints({1}));

  // Prop-style weight for v(r), p = n = 2, r = (1, 1):
  // alpha = (r1 + r2, r2) = (2, 1); beta = (p + r1 + r2, p + r2) = (4, 3)
  FockSpace fs22(2, 2, 1);
  auto wt22 = weight_of(fs22, det_vector(fs22, {1, 1}));
  REQUIRE(wt22.has_value());
  CHECK(wt22->first == Weight::from_ints({2, 1}));
  CHECK(wt22->second == Weight::from_ints({4, 3}));
}

TEST_CASE("maximal vectors") {
  using rootcomb::CaseSpec;
  using rootcomb::Root;
  using rootcomb::Side;
  FockSpace fs(2, 2, 1);
  CaseSpec spec(-1, 2, 2, 2, 0, 1);
  SparsePoly v = det_vector(fs, {1, 1});
  CHECK(is_maximal_vector(fs, v, Side::V, rootcomb::compact_roots(spec, Side::V)));
  CHECK(is_maximal_vector(fs, v, Side::W, rootcomb::compact_roots(spec, Side::W)));
  // w_21 fails against e1 - e2 (raises to w_11)
  SparsePoly w21 = var(fs, fs.w(2, 1));
  CHECK_FALSE(is_maximal_vector(fs, w21, Side::V, {Root::diff(1, 2)}));
  CHECK(is_maximal_vector(fs, SparsePoly::constant(fs.vars(), gr(1)), Side::V,
                          rootcomb::compact_roots(spec, Side::V)));
  CHECK_THROWS_AS(is_maximal_vector(fs, w21 + SparsePoly::constant(fs.vars(), gr(1)),
                                    Side::V, {Root::diff(1, 2)}),
                  NotWeightVector);
}

TEST_CASE("bracket consistency, small cases") {
  FockSpace fs(2, 1, 1);
  CHECK(bracket_check(fs, {GenKind::H, 1, 2}, {GenKind::H, 2, 1}, 4));
  CHECK(bracket_check(fs, {GenKind::H, 1, 2}, {GenKind::X, 2, 2}, 4));
  CHECK(bracket_check(fs, {GenKind::X, 1, 1}, {GenKind::Y, 1, 1}, 4));
  CHECK(bracket_check(fs, {GenKind::H, 1, 2}, {GenKind::K, 1, 1}, 4));  // mixed: zero
  FockSpace fs22(2, 2, 1);
  CHECK(bracket_check(fs22, {GenKind::P, 1, 2}, {GenKind::Pbar, 1, 2}, 4));
  CHECK(bracket_check(fs22, {GenKind::K, 1, 2}, {GenKind::P, 1, 2}, 4));
  CHECK(bracket_check(fs22, {GenKind::X, 1, 2}, {GenKind::X, 1, 2}, 3));  // [g,g] = 0
}

TEST_CASE("Cartan operators commute") {
  FockSpace fs(2, 2, 1);
  std::vector<LieGen> cartans = {{GenKind::H, 1, 1}, {GenKind::H, 2, 2},
                                 {GenKind::K, 1, 1}, {GenKind::K, 2, 2}};
  for (const Monomial& mono : monomials_up_to_degree(fs.vars(), 3)) {
    SparsePoly f;
    f.terms[mono] = gr(1);
    for (const LieGen& g1 : cartans)
      for (const LieGen& g2 : cartans) {
        FockOperator f1 = generator_image(fs, g1), f2 = generator_image(fs, g2);
        CHECK(apply(f1, apply(f2, f)) == apply(f2, apply(f1, f)));
      }
  }
}

TEST_CASE("flipping eps_psi conjugates the generator images") {
  FockSpace plus(2, 2, 1), minus(2, 2, -1);
  std::vector<LieGen> gens = {{GenKind::H, 1, 2}, {GenKind::X, 1, 2}, {GenKind::Y, 2, 2},
                              {GenKind::K, 1, 1}, {GenKind::P, 1, 2}, {GenKind::Pbar, 1, 2}};
  for (const LieGen& g : gens) {
    FockOperator a = generator_image(plus, g).conj_coefficients();
    FockOperator b = generator_image(minus, g);
    // compare actions on a spanning set
    for (const Monomial& mono : monomials_up_to_degree(plus.vars(), 2)) {
      SparsePoly f;
      f.terms[mono] = gr(1);
      CHECK(apply(a, f) == apply(b, f));
    }
  }
}
