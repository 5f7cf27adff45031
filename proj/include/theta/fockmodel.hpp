#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "theta/rational.hpp"
#include "theta/rootcomb.hpp"

// Symbolic Fock model of the oscillator representation for the quaternionic
// (e_H = -1) dual pair: sparse polynomials over Gaussian rationals in the
// variables z_ab, w_ab (1 <= a <= m, 1 <= b <= n), the generator actions,
// joint-harmonics and maximal-vector tests, and weight extraction.
namespace theta::fockmodel {

using rootcomb::Root;
using rootcomb::RootKind;
using rootcomb::Side;
using rootcomb::Weight;

struct IllegalIndices : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MinorTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotWeightVector : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotInSpan : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Variable layout: indices 0..mn-1 are z_ab, indices mn..2mn-1 are w_ab,
// both in row-major (a,b) order.
struct FockSpace {
  int m = 1, n = 1;
  int eps_psi = 1;  // +1 <-> +i, -1 <-> -i

  FockSpace() = default;
  FockSpace(int mm, int nn, int eps) : m(mm), n(nn), eps_psi(eps) {
    if (mm < 1 || nn < 1) throw IllegalIndices("m, n must be positive");
    if (eps != 1 && eps != -1) throw IllegalIndices("eps_psi must be +-1");
  }

  int vars() const { return 2 * m * n; }
  int z(int a, int b) const { return idx(a, b); }
  int w(int a, int b) const { return m * n + idx(a, b); }
  GaussianRational eps() const {
    return {Rational(0), Rational(eps_psi)};
  }

 private:
  int idx(int a, int b) const {
    if (a < 1 || a > m || b < 1 || b > n) throw IllegalIndices("variable index out of range");
    return (a - 1) * n + (b - 1);
  }
};

using Monomial = std::vector<int>;  // exponent per variable

struct SparsePoly {
  std::map<Monomial, GaussianRational> terms;  // no zero coefficients stored

  static SparsePoly zero() { return {}; }
  static SparsePoly constant(int nvars, const GaussianRational& c);
  static SparsePoly variable(int nvars, int var);

  bool is_zero() const { return terms.empty(); }
  int degree() const;

  void add_term(const Monomial& mono, const GaussianRational& c);

  SparsePoly operator+(const SparsePoly& o) const;
  SparsePoly operator-(const SparsePoly& o) const;
  SparsePoly operator*(const SparsePoly& o) const;
  SparsePoly operator*(const GaussianRational& c) const;
  bool operator==(const SparsePoly& o) const { return terms == o.terms; }
};

// A finite sum of (coefficient) * (multiply by monomial) * (differentiate by
// multi-index) operators; differentiation is applied first.
struct OpTerm {
  GaussianRational coeff;
  Monomial mult;
  Monomial diff;
};

struct FockOperator {
  int nvars = 0;
  std::vector<OpTerm> terms;

  FockOperator() = default;
  explicit FockOperator(int nv) : nvars(nv) {}

  void add(const GaussianRational& c, const Monomial& mult, const Monomial& diff);
  FockOperator operator+(const FockOperator& o) const;
  FockOperator operator*(const GaussianRational& c) const;
  FockOperator conj_coefficients() const;
};

SparsePoly apply(const FockOperator& op, const SparsePoly& f);

// Lie algebra generators acting on the Fock space. V side: H/X/Y with row
// indices; W side: K/P/Pbar with column indices.
enum class GenKind { H, X, Y, K, P, Pbar };

struct LieGen {
  GenKind kind;
  int a, b;  // 1-based
};

Side gen_side(GenKind k);

// The image of a generator as a polynomial-coefficient differential operator.
FockOperator generator_image(const FockSpace& fs, const LieGen& g);

// Product of leading-minor determinants of (w_ab), k-th minor to the power
// r[k-1]; requires len(r) <= min(m, n).
SparsePoly det_vector(const FockSpace& fs, const std::vector<long>& r);

// Annihilation by the explicit lowering spans: the W-side Pbar images and the
// V-side same-column contractions D^{zz}_{ab} = sum_c d2/dz_ac dz_bc and
// D^{zw}_{ab} = sum_c d2/dz_ac dw_bc.
bool is_joint_harmonic(const FockSpace& fs, const SparsePoly& f);

// Pair of eigen-weight vectors under the Cartan operators H(a,a), K(b,b),
// normalized by 1/eps_psi; the K side includes the constant m from the
// generator image.  Absent if f is not a simultaneous eigenvector.
std::optional<std::pair<Weight, Weight>> weight_of(const FockSpace& fs, const SparsePoly& f);

// The raising operator attached to a root on one side (module-level table).
FockOperator raising_operator(const FockSpace& fs, Side side, const Root& r);

bool is_maximal_vector(const FockSpace& fs, const SparsePoly& f, Side side,
                       const std::set<Root>& side_system);

// --- exact matrix model used as the bracket oracle -------------------------

// Quaternion over Gaussian rationals with i^2 = -1, j^2 = -1 (Hamilton).
struct QuatC {
  GaussianRational c1, ci, cj, cij;

  QuatC() = default;
  QuatC(GaussianRational a, GaussianRational b, GaussianRational c, GaussianRational d)
      : c1(std::move(a)), ci(std::move(b)), cj(std::move(c)), cij(std::move(d)) {}
  static QuatC one() { return {GaussianRational(Rational(1)), {}, {}, {}}; }

  bool is_zero() const { return c1.is_zero() && ci.is_zero() && cj.is_zero() && cij.is_zero(); }
  QuatC operator+(const QuatC& o) const;
  QuatC operator-(const QuatC& o) const;
  QuatC operator*(const QuatC& o) const;
  QuatC operator*(const GaussianRational& s) const;
  bool operator==(const QuatC& o) const {
    return c1 == o.c1 && ci == o.ci && cj == o.cj && cij == o.cij;
  }
  QuatC main_involution() const { return {c1, -ci, -cj, -cij}; }
};

using QuatMatrix = std::vector<std::vector<QuatC>>;  // square, over QuatC

QuatMatrix gen_matrix(const FockSpace& fs, const LieGen& g);  // m x m or n x n

// Endomorphism of W (x) C as a 4mn x 4mn matrix over GaussianRational in the
// basis e_ab(1), e_ab(i), e_ab(j), e_ab(ij): left multiplication by the V-side
// matrix minus right multiplication by the W-side matrix.
std::vector<std::vector<GaussianRational>> endo_matrix(const FockSpace& fs, const LieGen& g);

// All generators whose images span the implemented Lie algebras.
std::vector<LieGen> generator_family(const FockSpace& fs, Side side);

// True iff [F(g1), F(g2)] acts like F([g1, g2]) on every monomial up to
// degree_cap, with [g1, g2] expanded in the generator span by the exact
// matrix computation.  Throws NotInSpan if the bracket leaves the span.
bool bracket_check(const FockSpace& fs, const LieGen& g1, const LieGen& g2, int degree_cap);

std::vector<Monomial> monomials_up_to_degree(int nvars, int degree_cap);

}  // namespace theta::fockmodel
