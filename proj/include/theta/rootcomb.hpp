#pragma once

#include <compare>
#include <set>
#include <stdexcept>
#include <vector>

#include "theta/rational.hpp"

// Root-system combinatorics for types C_m and D_n: signed permutations,
// positive systems, case-dependent compact sub-root-systems, and
// Harish-Chandra parameter validity.
namespace theta::rootcomb {

struct SingularWeight : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RankTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidPositiveSystem : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Family { C, D };
enum class Side { V, W };  // V carries type C_m, W carries type D_n

enum class RootKind { Diff, Sum, Long };  // e_i - e_j, e_i + e_j, 2e_i

// A root of C_k or D_k, stored with i < j normalization; `sign` covers the
// negative roots.  Indices are 1-based.
struct Root {
  RootKind kind;
  int i, j;   // i < j; for Long, j == i
  int sign;   // +1 or -1

  Root(RootKind k, int ii, int jj, int s = 1) : kind(k), i(ii), j(jj), sign(s) {
    if (s != 1 && s != -1) throw std::invalid_argument("root sign must be +-1");
    if (k == RootKind::Long) {
      if (jj != ii) throw std::invalid_argument("long root has a single index");
    } else if (!(ii < jj)) {
      throw std::invalid_argument("root indices must satisfy i < j");
    }
    if (ii < 1) throw std::invalid_argument("root index out of range");
  }

  static Root diff(int i, int j, int s = 1) { return Root(RootKind::Diff, i, j, s); }
  static Root sum(int i, int j, int s = 1) { return Root(RootKind::Sum, i, j, s); }
  static Root lng(int i, int s = 1) { return Root(RootKind::Long, i, i, s); }

  Root negated() const { return Root(kind, i, j, -sign); }

  auto operator<=>(const Root&) const = default;
};

// Coefficient vector of the root in the e_i basis.
std::vector<int> root_vector(const Root& r, int rank);

// All roots (both signs) and the standard positive system.
std::vector<Root> all_roots(Family f, int rank);
std::set<Root> standard_positive_roots(Family f, int rank);

struct Weight {
  std::vector<Rational> entries;

  Weight() = default;
  explicit Weight(std::vector<Rational> e) : entries(std::move(e)) {}
  static Weight zero(int rank) { return Weight(std::vector<Rational>(rank, Rational(0))); }
  static Weight from_ints(const std::vector<long>& v) {
    std::vector<Rational> e;
    e.reserve(v.size());
    for (long x : v) e.emplace_back(x);
    return Weight(std::move(e));
  }

  int rank() const { return static_cast<int>(entries.size()); }

  Weight operator+(const Weight& o) const;
  Weight operator-(const Weight& o) const;
  Weight operator*(const Rational& c) const;
  bool operator==(const Weight& o) const { return entries == o.entries; }
  bool operator!=(const Weight& o) const { return !(*this == o); }

  bool is_integral() const;
};

std::ostream& operator<<(std::ostream& os, const Weight& w);

// <mu, alpha>: Diff -> mu_i - mu_j, Sum -> mu_i + mu_j, Long -> 2 mu_i.
Rational pairing(const Weight& mu, const Root& alpha);

// Element of S'_k = S_k x| {+-1}^k.  act(w, mu)_k = signs[k] * mu[perm^{-1}(k)];
// the permutation is applied first, then the signs.
struct SignedPermutation {
  std::vector<int> perm;   // 0-based images: perm[k] = image of position k
  std::vector<int> signs;  // +-1, applied after permuting

  SignedPermutation() = default;
  SignedPermutation(std::vector<int> p, std::vector<int> s);

  static SignedPermutation identity(int k);

  int rank() const { return static_cast<int>(perm.size()); }

  // act(a*b, x) = act(a, act(b, x))
  SignedPermutation operator*(const SignedPermutation& o) const;
  SignedPermutation inverse() const;
  bool operator==(const SignedPermutation& o) const { return perm == o.perm && signs == o.signs; }
  bool is_identity() const;
};

Weight act(const SignedPermutation& w, const Weight& mu);
Root act(const SignedPermutation& w, const Root& r);
std::set<Root> act(const SignedPermutation& w, const std::set<Root>& roots);

// Enumerates all of S'_k (use only for small k).
std::vector<SignedPermutation> all_signed_permutations(int k);

// A positive system: exactly one of {alpha, -alpha} for every root, closed
// under addition.  Validated eagerly at construction.
struct PositiveSystem {
  Family family = Family::C;
  int rank = 0;
  std::set<Root> roots;

  PositiveSystem() = default;
  PositiveSystem(Family f, int rk, std::set<Root> rs);

  bool contains(const Root& r) const { return roots.count(r) > 0; }
  bool contains_all(const std::set<Root>& rs) const;
  bool operator==(const PositiveSystem& o) const {
    return family == o.family && rank == o.rank && roots == o.roots;
  }
};

PositiveSystem standard_positive_system(Family f, int rank);
PositiveSystem act(const SignedPermutation& w, const PositiveSystem& psi);

// (1/2) * sum of the listed roots.
Weight rho(const std::set<Root>& roots, int rank);

// The positive system {alpha : <alpha, mu> > 0}; throws SingularWeight.
PositiveSystem dominant_system(const Weight& mu, Family f, int rank);

// Case data: e_H = j^2 of the quaternion algebra, m = dim V, n = dim W
// (n = m or m+1), (p, q) the signature of the side whose group is not
// quasi-split in the relevant case, eps_psi in {+i, -i} stored as +-1.
struct CaseSpec {
  int e_H = -1;
  int m = 1, n = 1;
  int p = 1, q = 0;
  int eps_psi = 1;  // +1 <-> +i, -1 <-> -i

  CaseSpec() = default;
  CaseSpec(int eH, int mm, int nn, int pp, int qq, int eps);

  int rank_of(Side s) const { return s == Side::V ? m : n; }
  static Family family_of(Side s) { return s == Side::V ? Family::C : Family::D; }
};

// Delta_c^+ (side V) or Delta_c^- (side W) per the four case formulas.  The
// same-block predicate is (2p+1-2k)(2p+1-2l) > 0.
std::set<Root> compact_roots(const CaseSpec& spec, Side side);

struct HCParameter {
  Weight mu;
  PositiveSystem psi;
  CaseSpec spec;
  Side side = Side::V;

  HCParameter() = default;
  HCParameter(Weight m, PositiveSystem p, CaseSpec s, Side sd);
};

// Membership in the sets X (side V) and Y (side W): <mu,a> >= 0 on Psi and
// <mu,a> > 0 on the side-appropriate compact roots.
bool in_X(const HCParameter& param);
bool in_Y(const HCParameter& param);

// All positive systems of (f, rank) containing must_contain; rank <= 6.
std::vector<PositiveSystem> enumerate_positive_systems(Family f, int rank,
                                                       const std::set<Root>& must_contain);

}  // namespace theta::rootcomb
