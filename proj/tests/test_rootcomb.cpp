#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "theta/rootcomb.hpp"

using namespace theta;
using namespace theta::rootcomb;

namespace {

Weight W(std::vector<long> v) { return Weight::from_ints(v); }

// Brute-force enumeration of positive systems: all sign assignments over the
// +-pairs, filtered by additive closure.
std::vector<std::set<Root>> positive_systems_oracle(Family f, int rank) {
  std::vector<Root> base;
  for (const Root& r : all_roots(f, rank))
    if (r.sign == 1) base.push_back(r);
  std::vector<std::set<Root>> out;
  const int R = static_cast<int>(base.size());
  for (long mask = 0; mask < (1L << R); ++mask) {
    std::set<Root> cand;
    for (int k = 0; k < R; ++k)
      cand.insert((mask >> k) & 1 ? base[k].negated() : base[k]);
    try {
      PositiveSystem ps(f, rank, cand);
      out.push_back(cand);
    } catch (const InvalidPositiveSystem&) {
    }
  }
  return out;
}

long weyl_order(Family f, int rank) {
  long fact = 1;
  for (int k = 2; k <= rank; ++k) fact *= k;
  long order = fact << rank;           // |S'_rank|
  if (f == Family::D) order /= 2;      // even sign changes only
  return order;
}

// Reflection in a root as a signed permutation.
SignedPermutation reflection(const Root& r, int rank) {
  std::vector<int> perm(rank), signs(rank, 1);
  for (int k = 0; k < rank; ++k) perm[k] = k;
  switch (r.kind) {
    case RootKind::Diff:
      std::swap(perm[r.i - 1], perm[r.j - 1]);
      break;
    case RootKind::Sum:
      std::swap(perm[r.i - 1], perm[r.j - 1]);
      signs[r.i - 1] = signs[r.j - 1] = -1;
      break;
    case RootKind::Long:
      signs[r.i - 1] = -1;
      break;
  }
  return SignedPermutation(perm, signs);
}

// Order of the reflection subgroup generated by the listed roots.
long reflection_subgroup_order(const std::set<Root>& rs, int rank) {
  auto key = [](const SignedPermutation& w) { return std::make_pair(w.perm, w.signs); };
  std::set<std::pair<std::vector<int>, std::vector<int>>> seen;
  std::vector<SignedPermutation> frontier{SignedPermutation::identity(rank)};
  seen.insert(key(frontier[0]));
  std::vector<SignedPermutation> gens;
  for (const Root& r : rs) gens.push_back(reflection(r, rank));
  while (!frontier.empty()) {
    std::vector<SignedPermutation> next;
    for (const auto& w : frontier)
      for (const auto& g : gens) {
        SignedPermutation wg = w * g;
        if (seen.insert(key(wg)).second) next.push_back(wg);
      }
    frontier = std::move(next);
  }
  return static_cast<long>(seen.size());
}

}  // namespace

TEST_CASE("pairing evaluation") {
  CHECK(pairing(W({3, 1}), Root::diff(1, 2)) == 2);
  CHECK(pairing(W({3, 1}), Root::lng(2)) == 2);
  CHECK(pairing(W({0, 0}), Root::sum(1, 2)) == 0);
  CHECK(pairing(W({3, 1}), Root::sum(1, 2, -1)) == -4);
  CHECK_THROWS_AS(pairing(W({3}), Root::diff(1, 2)), std::out_of_range);
}

TEST_CASE("compact roots per case") {
  // e_H = 1, side V, m = 3: all differences
  CaseSpec s1(1, 3, 3, 2, 1, 1);
  CHECK(compact_roots(s1, Side::V) ==
        std::set<Root>{Root::diff(1, 2), Root::diff(1, 3), Root::diff(2, 3)});
  // e_H = -1, side V, m = 2, (p,q) = (1,1): only the long roots
  CaseSpec s2(-1, 2, 2, 1, 1, 1);
  CHECK(compact_roots(s2, Side::V) == std::set<Root>{Root::lng(1), Root::lng(2)});
  // e_H = -1, side W, n = 2: differences
  CaseSpec s3(-1, 2, 2, 2, 0, 1);
  CHECK(compact_roots(s3, Side::W) == std::set<Root>{Root::diff(1, 2)});
  // e_H = -1, (p,q) = (2,0): the full C_2 positive system is compact
  CHECK(compact_roots(s3, Side::V) == standard_positive_roots(Family::C, 2));
}

TEST_CASE("rho of standard systems") {
  CHECK(rho(standard_positive_roots(Family::C, 2), 2) == W({2, 1}));
  CHECK(rho(standard_positive_roots(Family::D, 2), 2) == W({1, 0}));
  CHECK(rho({}, 3) == W({0, 0, 0}));
  CHECK(rho(standard_positive_roots(Family::C, 3), 3) == W({3, 2, 1}));
  CHECK(rho(standard_positive_roots(Family::D, 4), 4) == W({3, 2, 1, 0}));
}

TEST_CASE("signed permutation action") {
  auto id = SignedPermutation::identity(2);
  CHECK(act(id, W({5, 3})) == W({5, 3}));
  SignedPermutation swap12({1, 0}, {1, 1});
  CHECK(act(swap12, W({5, 3})) == W({3, 5}));
  SignedPermutation flip1({0, 1}, {-1, 1});
  CHECK(act(flip1, W({5, 3})) == W({-5, 3}));
}

TEST_CASE("group action property") {
  std::mt19937 rng(5);
  auto all3 = all_signed_permutations(3);
  std::uniform_int_distribution<size_t> pick(0, all3.size() - 1);
  std::uniform_int_distribution<long> entry(-6, 6);
  for (int it = 0; it < 200; ++it) {
    const auto& w1 = all3[pick(rng)];
    const auto& w2 = all3[pick(rng)];
    Weight mu = W({entry(rng), entry(rng), entry(rng)});
    CHECK(act(w1 * w2, mu) == act(w1, act(w2, mu)));
    CHECK((w1 * w1.inverse()).is_identity());
  }
}

TEST_CASE("dominant systems") {
  PositiveSystem c2 = dominant_system(W({2, 1}), Family::C, 2);
  CHECK(c2.roots == standard_positive_roots(Family::C, 2));
  PositiveSystem d2 = dominant_system(W({2, -1}), Family::D, 2);
  CHECK(d2.contains(Root::diff(1, 2)));
  CHECK(d2.contains(Root::sum(1, 2)));
  CHECK_THROWS_AS(dominant_system(W({1, 1}), Family::C, 2), SingularWeight);
}

TEST_CASE("dominant system equivariance") {
  std::mt19937 rng(17);
  auto all3 = all_signed_permutations(3);
  std::uniform_int_distribution<size_t> pick(0, all3.size() - 1);
  int done = 0;
  while (done < 50) {
    std::uniform_int_distribution<long> entry(-7, 7);
    Weight mu = W({entry(rng), entry(rng), entry(rng)});
    try {
      PositiveSystem base = dominant_system(mu, Family::C, 3);
      const auto& w = all3[pick(rng)];
      CHECK(dominant_system(act(w, mu), Family::C, 3).roots == act(w, base.roots));
      ++done;
    } catch (const SingularWeight&) {
    }
  }
}

TEST_CASE("positive system validation") {
  CHECK_THROWS_AS(PositiveSystem(Family::C, 2,
                                 std::set<Root>{Root::diff(1, 2), Root::sum(1, 2)}),
                  InvalidPositiveSystem);
  // closure violation: e1-e2 and e2(long) positive but e1+e2 negative
  std::set<Root> bad{Root::diff(1, 2), Root::lng(2), Root::sum(1, 2, -1), Root::lng(1)};
  CHECK_THROWS_AS(PositiveSystem(Family::C, 2, bad), InvalidPositiveSystem);
}

TEST_CASE("membership in the parameter sets") {
  CaseSpec spec(-1, 2, 2, 2, 0, 1);
  PositiveSystem psi = standard_positive_system(Family::C, 2);
  CHECK(in_X(HCParameter(W({2, 1}), psi, spec, Side::V)));
  CHECK_FALSE(in_X(HCParameter(W({1, 1}), psi, spec, Side::V)));
  CHECK_FALSE(in_X(HCParameter(W({0, 0}), psi, spec, Side::V)));
}

TEST_CASE("enumerate positive systems with the closure oracle") {
  CHECK(enumerate_positive_systems(Family::C, 1, {}).size() == 2);
  CHECK(enumerate_positive_systems(Family::D, 2, {Root::diff(1, 2)}).size() == 2);
  for (int rank = 1; rank <= 3; ++rank) {
    auto fast = enumerate_positive_systems(Family::C, rank, {});
    auto slow = positive_systems_oracle(Family::C, rank);
    CHECK(fast.size() == slow.size());
    CHECK(fast.size() == static_cast<size_t>(weyl_order(Family::C, rank)));
  }
  for (int rank = 2; rank <= 3; ++rank) {
    auto fast = enumerate_positive_systems(Family::D, rank, {});
    auto slow = positive_systems_oracle(Family::D, rank);
    CHECK(fast.size() == slow.size());
    CHECK(fast.size() == static_cast<size_t>(weyl_order(Family::D, rank)));
  }
  CHECK_THROWS_AS(enumerate_positive_systems(Family::C, 7, {}), RankTooLarge);
}

TEST_CASE("counts match the Weyl index") {
  // systems containing Delta_c = |W| / |W_c| with W_c the reflection subgroup
  CaseSpec spec(-1, 2, 2, 1, 1, 1);  // Delta_c^+ = {2e_1, 2e_2}
  std::set<Root> dc = compact_roots(spec, Side::V);
  auto systems = enumerate_positive_systems(Family::C, 2, dc);
  CHECK(systems.size() ==
        static_cast<size_t>(weyl_order(Family::C, 2) / reflection_subgroup_order(dc, 2)));
  CHECK(systems.size() == 2);

  CaseSpec spec2(-1, 3, 3, 2, 1, 1);
  std::set<Root> dc2 = compact_roots(spec2, Side::V);
  auto systems2 = enumerate_positive_systems(Family::C, 3, dc2);
  for (const auto& ps : systems2) CHECK(ps.contains_all(dc2));
  CHECK(systems2.size() ==
        static_cast<size_t>(weyl_order(Family::C, 3) / reflection_subgroup_order(dc2, 3)));

  CaseSpec spec3(1, 3, 3, 2, 1, 1);  // W side, Delta_c^- = {b1 +- b2}
  std::set<Root> dc3 = compact_roots(spec3, Side::W);
  auto systems3 = enumerate_positive_systems(Family::D, 3, dc3);
  CHECK(systems3.size() ==
        static_cast<size_t>(weyl_order(Family::D, 3) / reflection_subgroup_order(dc3, 3)));
}

TEST_CASE("rho images are signed permutations of the standard vector") {
  for (int rank = 1; rank <= 4; ++rank) {
    Weight base = rho(standard_positive_roots(Family::C, rank), rank);
    for (const auto& ps : enumerate_positive_systems(Family::C, rank, {})) {
      Weight r = rho(ps.roots, rank);
      std::multiset<Rational> got, want;
      for (const auto& e : r.entries) got.insert(abs(e));
      for (const auto& e : base.entries) want.insert(abs(e));
      CHECK(got == want);
    }
  }
  // rank 5 via sampled Weyl images
  std::mt19937 rng(23);
  auto all5 = all_signed_permutations(5);
  std::uniform_int_distribution<size_t> pick(0, all5.size() - 1);
  std::set<Root> std5 = standard_positive_roots(Family::C, 5);
  for (int it = 0; it < 30; ++it) {
    const auto& w = all5[pick(rng)];
    Weight r = rho(act(w, std5), 5);
    CHECK(r == act(w, W({5, 4, 3, 2, 1})));
  }
  for (int rank = 2; rank <= 4; ++rank) {
    std::vector<long> expect;
    for (int k = rank - 1; k >= 0; --k) expect.push_back(k);
    for (const auto& ps : enumerate_positive_systems(Family::D, rank, {})) {
      Weight r = rho(ps.roots, rank);
      std::multiset<Rational> got, want;
      for (const auto& e : r.entries) got.insert(abs(e));
      for (long e : expect) want.insert(Rational(e));
      CHECK(got == want);
    }
  }
}

TEST_CASE("parameter-set membership is Weyl invariant") {
  // e_H = 1, W side: Delta_c^- = {b1 +- b2} has a nontrivial setwise stabilizer
  CaseSpec spec(1, 3, 3, 2, 1, 1);
  std::set<Root> dc = compact_roots(spec, Side::W);
  PositiveSystem psi = standard_positive_system(Family::D, 3);
  HCParameter param(W({4, 2, 1}), psi, spec, Side::W);
  REQUIRE(in_Y(param));
  int checked = 0;
  for (const SignedPermutation& w : all_signed_permutations(3)) {
    if (act(w, dc) != dc) continue;
    PositiveSystem moved_psi(Family::D, 3, act(w, param.psi.roots));
    HCParameter moved(act(w, param.mu), moved_psi, spec, Side::W);
    CHECK(in_Y(moved) == in_Y(param));
    ++checked;
  }
  CHECK(checked > 1);
}
