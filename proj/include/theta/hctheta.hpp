#pragma once

#include <optional>
#include <utility>

#include "theta/rootcomb.hpp"

// The theta correspondence on Harish-Chandra parameters: the xi maps with
// positive-system transport, nonvanishing, coherent continuation, the
// nonvanishing counts, the Kashiwara-Vergne minimal K-type combinatorics,
// and packet-character bookkeeping.
namespace theta::hctheta {

using rootcomb::CaseSpec;
using rootcomb::Family;
using rootcomb::HCParameter;
using rootcomb::PositiveSystem;
using rootcomb::Root;
using rootcomb::Side;
using rootcomb::SignedPermutation;
using rootcomb::Weight;

struct IllegalVariant : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SingularImage : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotPositiveDirection : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonIntegralKType : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MalformedHighestWeight : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct LengthMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class XiTag { Plain, Up, Down };  // xi, xi_up (triangle), xi_down

struct XiVariant {
  XiTag tag = XiTag::Plain;
  int u = 1;  // +1 <-> +i, -1 <-> -i

  XiVariant() = default;
  XiVariant(XiTag t, int uu) : tag(t), u(uu) {}
};

// Checks legality: Up/Down only when e_H = 1 and n = m+1; Plain otherwise.
void check_variant(const CaseSpec& spec, const XiVariant& v);

// Position data of the xi coordinate maps Z^m -> Z^n: target position l
// carries src[l] (0-based source index, or -1 for an inserted zero) and a
// sign.  All six case families.
struct SignedInjection {
  int m = 0, n = 0;
  std::vector<int> src;  // size n
  std::vector<int> sg;   // size n, +-1 (ignored where src = -1)

  // position of source index k (0-based) in the image
  int position_of(int k) const;
  int zero_position() const;  // -1 if none
};

SignedInjection xi_injection(const CaseSpec& spec, const XiVariant& v);
Weight xi_weight(const CaseSpec& spec, const XiVariant& v, const Weight& mu);

// Weight with a formal infinitesimal part; pairings compare lexicographically.
struct InfWeight {
  Weight base, inf;
};
std::pair<Rational, Rational> pairing(const InfWeight& w, const Root& alpha);

// Transports a positive system through xi: Psi' = Psi_{xi(mu + nu)} with nu an
// infinitesimal strictly-Psi-dominant direction.  Independent of the choice.
PositiveSystem xi_system(const CaseSpec& spec, const XiVariant& v, const HCParameter& param);

struct LiftResult {
  bool present = false;
  HCParameter param;        // valid when present
  XiVariant variant;        // the variant that landed in Y
  bool ambiguous = false;   // e_H=1, n=m+1 and both Up and Down landed in Y
  std::optional<HCParameter> secondary;
};

// Theta lift on parameters; pre: in_X(param).
LiftResult theta_lift(const CaseSpec& spec, const HCParameter& param);

// (mu + nu, Psi); nu must pair >= 0 with every root of Psi.
HCParameter coherent_shift(const HCParameter& param, const Weight& nu);

// Nonvanishing counts over the four isometry classes (rows of the counting
// table, keyed by whether std o phi contains the trivial / sign character).
struct NonvanishingCounts {
  int R_plus, R_minus, R_plus_prime, R_minus_prime;
  bool operator==(const NonvanishingCounts& o) const {
    return R_plus == o.R_plus && R_minus == o.R_minus &&
           R_plus_prime == o.R_plus_prime && R_minus_prime == o.R_minus_prime;
  }
};
NonvanishingCounts table1(bool c1, bool c2);

// mu + rho(Psi) - 2 rho(Delta_c) for the side-appropriate compact roots.
Weight lowest_K_type(const HCParameter& param);

// The shifted coordinate map: xi(a - (p-q) 1_m) if e_H = 1, xi(a) + (p-q) 1_n
// if e_H = -1.  `perturb` shifts the constant (negative-control hook).
Weight xi0_shift(const CaseSpec& spec, const XiVariant& v, const Weight& a, long perturb = 0);

// Lowest-K-type identity for lifted parameters.
bool k_type_transfer_check(const CaseSpec& spec, const HCParameter& param, long perturb = 0);

// Kashiwara-Vergne minimal-degree K-type: nu = (nu_1 >= ... >= nu_k > 0,
// 0...0) of length n, signature +-1.  Returns the rank-m highest weight, or
// nothing outside the nonvanishing domain.
std::optional<Weight> kv_lift(const std::vector<long>& nu, int signature, int m, int n);
std::optional<Weight> kv_dual(const std::vector<long>& nu, int signature, int m, int n);

// Element of the finite 2-group standing in for the S-group.
struct SGroupElement {
  std::vector<int> signs;  // +-1

  explicit SGroupElement(std::vector<int> s);
  int size() const { return static_cast<int>(signs.size()); }
  int a() const;  // #{+1}
  int b() const;  // #{-1}
};

// Whittaker-normalized packet character: the normalization chain of the
// transfer-factor computation (which collapses to 1) times the flip-set
// pairing of the relative twist target * base^{-1}.  `corrected_sign` selects
// the corrected (-sqrt(-1))^{#Delta_B - #Delta_{B_H}} in the chain; passing
// false reproduces the uncorrected variant (negative control).
FourthRoot packet_character(const CaseSpec& spec, Side side, const SignedPermutation& base_w,
                            const SignedPermutation& target_w, const SGroupElement& s,
                            bool corrected_sign = true);

// Just the normalization chain (= 1 when corrected).
FourthRoot normalization_chain(const CaseSpec& spec, Side side, const SGroupElement& s,
                               bool corrected_sign = true);

// The canonical (Delta_c-dominant, standard-system) base member of the packet
// of `param`, and the twist carrying the base to `param`.
HCParameter packet_base(const HCParameter& param);
SignedPermutation twist_from_base(const HCParameter& param);

// Transport of a V-side twist / S-group element through the xi coordinate map.
SignedPermutation transport_twist(const SignedInjection& inj, const SignedPermutation& wV);
SGroupElement transport_sgroup(const SignedInjection& inj, const SGroupElement& s);

// (iota on the V side at s, iota on the W side at the matched s'); the
// contract is first = conj(second).
std::pair<FourthRoot, FourthRoot> theta_character_relation(const CaseSpec& spec,
                                                           const HCParameter& param,
                                                           const SGroupElement& s);

}  // namespace theta::hctheta
