#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "theta/rational.hpp"
#include "theta/report.hpp"

// Exact Clifford algebra of the split quadratic space with isotropic basis
// x_1..x_r, y_1..y_r and x_k y_k + y_k x_k = 2; Spin torus elements, the
// outer automorphism swapping x_r and y_r, and the center computations.
namespace theta::cliffspin {

struct NormNotScalar : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotInKernel : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Monomial = bitmask over 2r letters, bit 2k = x_{k+1}, bit 2k+1 = y_{k+1};
// letters appear in canonical interleaved order x_1 y_1 x_2 y_2 ...
struct CliffordElement {
  int rank = 0;
  std::map<std::uint32_t, GaussianRational> coef;

  CliffordElement() = default;
  explicit CliffordElement(int r) : rank(r) {
    if (r < 1 || r > 15) throw std::invalid_argument("rank out of range");
  }

  static CliffordElement scalar(int r, const GaussianRational& c);
  static CliffordElement generator_x(int r, int k);  // 1-based k
  static CliffordElement generator_y(int r, int k);

  bool is_zero() const { return coef.empty(); }
  bool is_scalar() const;
  GaussianRational scalar_part() const;

  void add_term(std::uint32_t mono, const GaussianRational& c);

  CliffordElement operator+(const CliffordElement& o) const;
  CliffordElement operator-(const CliffordElement& o) const;
  CliffordElement operator*(const CliffordElement& o) const;
  CliffordElement operator*(const GaussianRational& c) const;
  bool operator==(const CliffordElement& o) const {
    return rank == o.rank && coef == o.coef;
  }
};

// Reverses the letter order of each monomial (anti-automorphism).
CliffordElement reversal(const CliffordElement& u);

// Grade involution x_i -> -x_i, y_i -> -y_i.
CliffordElement grade_involution(const CliffordElement& u);

// u * reversal(u); throws NormNotScalar if the result is not scalar.
GaussianRational norm(const CliffordElement& u);

// (a_1..a_r; b_1..b_r) with prod a_k b_k = 1.
struct TorusCoords {
  std::vector<GaussianRational> a, b;

  TorusCoords(std::vector<GaussianRational> aa, std::vector<GaussianRational> bb);
  int rank() const { return static_cast<int>(a.size()); }
  TorusCoords inverse() const;
  TorusCoords operator*(const TorusCoords& o) const;
};

// prod_k (1/2)(a_k x_k y_k + b_k y_k x_k).
CliffordElement torus_elem(const TorusCoords& t);

// The algebra automorphism extending x_r <-> y_r (others fixed).
CliffordElement theta_conj(const CliffordElement& u);

// Matrix of v -> grade_involution(g) v g^{-1} on the generator basis
// (x_1..x_r, y_1..y_r); absent when the image leaves degree one.
std::optional<std::vector<std::vector<GaussianRational>>> conjugation_action(
    const CliffordElement& g, const CliffordElement& g_inv);

// The invariant of ker(Spin -> SO) elements: the a-coordinate product of any
// torus representative.  Throws NotInKernel when g is not a kernel element.
int u_invariant(const CliffordElement& k);

// Checks of the Spin-center proposition at rank r (2 <= r <= 6; r = 1 is
// reported with a caveat instead of asserted).
Report verify_prop_spin(int r);

}  // namespace theta::cliffspin
