#pragma once

#include <utility>
#include <vector>

#include "theta/rational.hpp"

// p-adic sign ledger: square classes of Q_p (p odd), tame Hilbert symbols with
// a brute-force solvability oracle, the quadratic character of E/F, the
// transfer-factor sign, and the finite model of the rank-one coefficient chain.
namespace theta::padicsym {

struct NotDivision : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TrivialEta : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EtaOrderTwo : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One of the four square classes {1, u, p, up} of Q_p^x (p odd; u a fixed
// non-residue).
struct SquareClass {
  long p = 3;
  int val_parity = 0;      // 0 or 1
  int unit_nonresidue = 0; // 0: unit part 1, 1: unit part u

  SquareClass(long pp, int v, int u);
  long representative() const;  // 1, u, p, or u*p as an integer

  SquareClass operator*(const SquareClass& o) const;
  bool operator==(const SquareClass& o) const {
    return p == o.p && val_parity == o.val_parity && unit_nonresidue == o.unit_nonresidue;
  }
};

long least_nonresidue(long p);
int legendre(long a, long p);

// Tame closed form of (x, y)_p.
int hilbert_symbol(const SquareClass& x, const SquareClass& y);

// Brute-force oracle: solvability of z^2 = x s^2 + y t^2 over Z/p^3 with
// (s, t) not both divisible by p.
int hilbert_symbol_oracle(const SquareClass& x, const SquareClass& y);

// omega_{E/F}(x) for E = F(sqrt(a)): the Hilbert symbol (x, a)_p.
int quadratic_character(const SquareClass& x, const SquareClass& a);

// The sign of Delta'(gamma^{-1}, delta)/Delta'(gamma, delta): requires the
// division condition (a,b)_p = -1 and evaluates omega(-1) omega(-b) = omega(b);
// always -1 on the division locus.
int transfer_ratio(const SquareClass& a, const SquareClass& b);

// Finite stand-in for E^1: the cyclic group C_N, a character index eta, and an
// antisymmetric sign function s(k) (s(-k) = -s(k) away from fixed points).
struct FiniteCharacterModel {
  long N = 5;
  long eta_index = 1;
  std::vector<int> s;  // size N; entries at fixed points (k = -k mod N) ignored

  FiniteCharacterModel(long n, long eta, std::vector<int> sign_fn);
  bool is_fixed(long k) const { return (2 * k) % N == 0; }
};

// Evaluates the orbital-sum rearrangement of the rank-one proof with the
// Kottwitz sign e(G) = -1 and returns the coefficients attached to the two
// members; the contract is (coeff_plus, coeff_minus) = (-pairing_sign,
// +pairing_sign).  Throws TrivialEta / EtaOrderTwo on degenerate eta.
std::pair<Rational, Rational> coefficient_chain(const FiniteCharacterModel& model,
                                                int pairing_sign);

}  // namespace theta::padicsym
