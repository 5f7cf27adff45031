#include "theta/hctheta.hpp"

#include <algorithm>

namespace theta::hctheta {

using rootcomb::act;
using rootcomb::all_roots;
using rootcomb::all_signed_permutations;
using rootcomb::compact_roots;
using rootcomb::in_X;
using rootcomb::in_Y;
using rootcomb::pairing;
using rootcomb::rho;
using rootcomb::standard_positive_system;

void check_variant(const CaseSpec& spec, const XiVariant& v) {
  if (v.u != 1 && v.u != -1) throw IllegalVariant("variant u must be +-i");
  bool almost_equal = (spec.e_H == 1 && spec.n == spec.m + 1);
  if (v.tag == XiTag::Plain && almost_equal)
    throw IllegalVariant("e_H=1, n=m+1 requires the Up or Down variant");
  if (v.tag != XiTag::Plain && !almost_equal)
    throw IllegalVariant("Up/Down variants are legal only for e_H=1, n=m+1");
}

int SignedInjection::position_of(int k) const {
  for (int l = 0; l < n; ++l)
    if (src[l] == k) return l;
  throw std::out_of_range("source index not in image");
}

int SignedInjection::zero_position() const {
  for (int l = 0; l < n; ++l)
    if (src[l] == -1) return l;
  return -1;
}

SignedInjection xi_injection(const CaseSpec& spec, const XiVariant& v) {
  check_variant(spec, v);
  const int m = spec.m, n = spec.n, p = spec.p, q = spec.q;
  SignedInjection inj;
  inj.m = m;
  inj.n = n;
  auto push = [&](int s, int sg) {
    inj.src.push_back(s);
    inj.sg.push_back(sg);
  };
  auto push_zero = [&] { push(-1, 1); };
  // 0-based source indices; a_m has index m-1.
  if (spec.e_H == 1 && n == m) {
    if (v.u == 1) {
      for (int k = m - 1; k >= q; --k) push(k, -1);  // -a_m .. -a_{q+1}
      for (int k = 0; k < q; ++k) push(k, 1);        // a_1 .. a_q
    } else {
      for (int k = 0; k < p; ++k) push(k, 1);        // a_1 .. a_p
      for (int k = m - 1; k >= p; --k) push(k, -1);  // -a_m .. -a_{p+1}
    }
  } else if (spec.e_H == 1 && n == m + 1) {
    switch (v.tag) {
      case XiTag::Up:
        if (v.u == 1) {
          for (int k = m - 1; k >= q - 1; --k) push(k, -1);  // -a_m .. -a_q
          for (int k = 0; k < q - 1; ++k) push(k, 1);        // a_1 .. a_{q-1}
          push_zero();
        } else {
          for (int k = 0; k < p - 1; ++k) push(k, 1);        // a_1 .. a_{p-1}
          push_zero();
          for (int k = m - 1; k >= p - 1; --k) push(k, -1);  // -a_m .. -a_p
        }
        break;
      case XiTag::Down:
        if (v.u == 1) {
          for (int k = m - 1; k >= q; --k) push(k, -1);  // -a_m .. -a_{q+1}
          push_zero();
          for (int k = 0; k < q; ++k) push(k, 1);        // a_1 .. a_q
        } else {
          for (int k = 0; k < p; ++k) push(k, 1);        // a_1 .. a_p
          for (int k = m - 1; k >= p; --k) push(k, -1);  // -a_m .. -a_{p+1}
          push_zero();
        }
        break;
      default:
        throw IllegalVariant("unreachable");
    }
  } else if (spec.e_H == -1 && n == m) {
    if (v.u == 1) {
      for (int k = 0; k < p; ++k) push(k, 1);        // a_1 .. a_p
      for (int k = m - 1; k >= p; --k) push(k, -1);  // -a_m .. -a_{p+1}
    } else {
      for (int k = p; k < m; ++k) push(k, 1);        // a_{p+1} .. a_m
      for (int k = p - 1; k >= 0; --k) push(k, -1);  // -a_p .. -a_1
    }
  } else {  // e_H = -1, n = m+1
    if (v.u == 1) {
      for (int k = 0; k < p; ++k) push(k, 1);
      push_zero();
      for (int k = m - 1; k >= p; --k) push(k, -1);
    } else {
      for (int k = p; k < m; ++k) push(k, 1);
      push_zero();
      for (int k = p - 1; k >= 0; --k) push(k, -1);
    }
  }
  // Degenerate signatures (p = 0 or q = 0) make one of the almost-equal-rank
  // variants index outside 1..m; such a variant is unavailable.
  if (static_cast<int>(inj.src.size()) != n)
    throw IllegalVariant("variant is degenerate for this signature");
  for (int l = 0; l < n; ++l)
    if (inj.src[l] < -1 || inj.src[l] >= m)
      throw IllegalVariant("variant is degenerate for this signature");
  int zeros = 0;
  for (int l = 0; l < n; ++l) zeros += (inj.src[l] == -1);
  if (zeros != n - m) throw IllegalVariant("variant is degenerate for this signature");
  return inj;
}

Weight xi_weight(const CaseSpec& spec, const XiVariant& v, const Weight& mu) {
  if (mu.rank() != spec.m) throw std::invalid_argument("xi_weight: rank(mu) must be m");
  SignedInjection inj = xi_injection(spec, v);
  std::vector<Rational> out(inj.n, Rational(0));
  for (int l = 0; l < inj.n; ++l)
    if (inj.src[l] >= 0) out[l] = Rational(inj.sg[l]) * mu.entries[inj.src[l]];
  return Weight(std::move(out));
}

std::pair<Rational, Rational> pairing(const InfWeight& w, const Root& alpha) {
  return {pairing(w.base, alpha), pairing(w.inf, alpha)};
}

PositiveSystem xi_system(const CaseSpec& spec, const XiVariant& v, const HCParameter& param) {
  if (param.side != Side::V) throw std::invalid_argument("xi_system expects a V-side parameter");
  // rho(Psi) pairs strictly positively with every root of Psi.
  InfWeight nu{param.mu, rho(param.psi.roots, param.psi.rank)};
  InfWeight image{xi_weight(spec, v, nu.base), xi_weight(spec, v, nu.inf)};
  std::set<Root> pos;
  for (const Root& r : all_roots(Family::D, spec.n)) {
    auto [b, i] = pairing(image, r);
    if (b > 0 || (b == 0 && i > 0)) {
      pos.insert(r);
    } else if (b == 0 && i == 0) {
      throw SingularImage("xi image is singular");
    }
  }
  return PositiveSystem(Family::D, spec.n, std::move(pos));
}

namespace {

std::optional<HCParameter> try_lift(const CaseSpec& spec, const HCParameter& param,
                                    const XiVariant& v) {
  try {
    Weight mu2 = xi_weight(spec, v, param.mu);
    PositiveSystem psi2 = xi_system(spec, v, param);
    if (!psi2.contains_all(compact_roots(spec, Side::W))) return std::nullopt;
    if (spec.e_H == 1) {
      // The transported chamber must make every non-appended long coordinate
      // positive (the K-type identity's form of the image system); a negative
      // long coordinate puts the parameter in a non-corresponding chamber.
      SignedInjection inj = xi_injection(spec, v);
      InfWeight nu{param.mu, rho(param.psi.roots, param.psi.rank)};
      Weight base = xi_weight(spec, v, nu.base), inf = xi_weight(spec, v, nu.inf);
      for (int l = 0; l < inj.n; ++l) {
        if (inj.src[l] < 0) continue;
        if (base.entries[l] < 0 || (base.entries[l] == 0 && inf.entries[l] <= 0))
          return std::nullopt;
      }
    }
    HCParameter lifted(mu2, psi2, spec, Side::W);
    if (!in_Y(lifted)) return std::nullopt;
    return lifted;
  } catch (const IllegalVariant&) {
    return std::nullopt;  // degenerate variant for this signature
  }
}

}  // namespace

LiftResult theta_lift(const CaseSpec& spec, const HCParameter& param) {
  if (!in_X(param)) throw std::invalid_argument("theta_lift requires a parameter in X");
  LiftResult res;
  if (spec.e_H == 1 && spec.n == spec.m + 1) {
    XiVariant up(XiTag::Up, spec.eps_psi), down(XiTag::Down, spec.eps_psi);
    auto lu = try_lift(spec, param, up);
    auto ld = try_lift(spec, param, down);
    if (lu) {
      res.present = true;
      res.param = *lu;
      res.variant = up;
      if (ld) {
        res.ambiguous = true;
        res.secondary = *ld;
      }
    } else if (ld) {
      res.present = true;
      res.param = *ld;
      res.variant = down;
    }
  } else {
    XiVariant plain(XiTag::Plain, spec.eps_psi);
    auto l = try_lift(spec, param, plain);
    if (l) {
      res.present = true;
      res.param = *l;
      res.variant = plain;
    }
  }
  return res;
}

HCParameter coherent_shift(const HCParameter& param, const Weight& nu) {
  if (nu.rank() != param.mu.rank()) throw std::invalid_argument("shift rank mismatch");
  for (const Root& r : param.psi.roots)
    if (pairing(nu, r) < 0)
      throw NotPositiveDirection("shift direction must pair >= 0 with the positive system");
  return HCParameter(param.mu + nu, param.psi, param.spec, param.side);
}

NonvanishingCounts table1(bool c1, bool c2) {
  if (c1 && c2) return {1, 1, 1, 1};
  if (c1 && !c2) return {1, 0, 1, 2};
  if (!c1 && c2) return {0, 1, 2, 1};
  return {0, 0, 2, 2};
}

Weight lowest_K_type(const HCParameter& param) {
  int rank = param.mu.rank();
  Weight lkt = param.mu + rho(param.psi.roots, rank) -
               rho(compact_roots(param.spec, param.side), rank) * Rational(2);
  if (!lkt.is_integral())
    throw NonIntegralKType("lowest K-type has non-integral entries");
  return lkt;
}

Weight xi0_shift(const CaseSpec& spec, const XiVariant& v, const Weight& a, long perturb) {
  if (spec.e_H == 1) {
    // shift by q - p: the appendix states p - q but in the opposite signature
    // convention for the skew-Hermitian space (its (2p, 2q) is our (2q, 2p))
    Rational c(spec.q - spec.p + perturb);
    Weight shifted = a;
    for (auto& e : shifted.entries) e -= c;
    return xi_weight(spec, v, shifted);
  }
  Rational c(spec.p - spec.q + perturb);
  Weight out = xi_weight(spec, v, a);
  for (auto& e : out.entries) e += c;
  return out;
}

bool k_type_transfer_check(const CaseSpec& spec, const HCParameter& param, long perturb) {
  LiftResult lift = theta_lift(spec, param);
  if (!lift.present) throw std::invalid_argument("k_type_transfer_check requires a nonvanishing lift");
  Weight lhs = xi0_shift(spec, lift.variant, lowest_K_type(param), perturb);
  Weight rhs = lowest_K_type(lift.param);
  bool ok = lhs == rhs;
  if (ok && lift.ambiguous) {
    Weight lhs2 = xi0_shift(spec, XiVariant(XiTag::Down, spec.eps_psi),
                            lowest_K_type(param), perturb);
    ok = lhs2 == lowest_K_type(*lift.secondary);
  }
  return ok;
}

namespace {

void validate_kv_weight(const std::vector<long>& nu, int n) {
  if (static_cast<int>(nu.size()) != n)
    throw MalformedHighestWeight("highest weight must have length n");
  for (size_t i = 0; i < nu.size(); ++i) {
    if (nu[i] < 0) throw MalformedHighestWeight("highest weight entries must be >= 0");
    if (i > 0 && nu[i] > nu[i - 1])
      throw MalformedHighestWeight("highest weight entries must be weakly decreasing");
  }
}

int nonzero_count(const std::vector<long>& nu) {
  int k = 0;
  while (k < static_cast<int>(nu.size()) && nu[k] > 0) ++k;
  return k;
}

// Nonvanishing domain of the minimal-degree correspondence: with k the number
// of nonzero rows, signature + needs k <= m; signature - needs n < m and
// k >= 2n - m (so the padded shape still fits in m rows).
bool kv_present(int k, int signature, int m, int n) {
  if (signature == 1) return k <= m;
  return n < m && k >= 2 * n - m;
}

}  // namespace

std::optional<Weight> kv_lift(const std::vector<long>& nu, int signature, int m, int n) {
  validate_kv_weight(nu, n);
  if (signature != 1 && signature != -1) throw std::invalid_argument("signature must be +-1");
  int k = nonzero_count(nu);
  if (k == n) signature = 1;  // self-associate type: the sign label is vacuous
  if (!kv_present(k, signature, m, n)) return std::nullopt;
  int zeros = (m - k) - (signature == 1 ? 0 : 2) * (n - k);
  int ones = m - k - zeros;
  std::vector<Rational> w;
  w.reserve(m);
  for (int t = 0; t < zeros; ++t) w.emplace_back(0);
  for (int t = 0; t < ones; ++t) w.emplace_back(-1);
  for (int t = k - 1; t >= 0; --t) w.emplace_back(-nu[t]);
  for (auto& e : w) e -= n;
  return Weight(std::move(w));
}

std::optional<Weight> kv_dual(const std::vector<long>& nu, int signature, int m, int n) {
  auto lifted = kv_lift(nu, signature, m, n);
  if (!lifted) return std::nullopt;
  // negated reverse of the kv_lift weight
  std::vector<Rational> w(m);
  for (int t = 0; t < m; ++t) w[t] = -lifted->entries[m - 1 - t];
  return Weight(std::move(w));
}

SGroupElement::SGroupElement(std::vector<int> s) : signs(std::move(s)) {
  for (int v : signs)
    if (v != 1 && v != -1) throw std::invalid_argument("S-group entries must be +-1");
}

int SGroupElement::a() const {
  return static_cast<int>(std::count(signs.begin(), signs.end(), 1));
}

int SGroupElement::b() const {
  return static_cast<int>(std::count(signs.begin(), signs.end(), -1));
}

FourthRoot normalization_chain(const CaseSpec& spec, Side side, const SGroupElement& s,
                               bool corrected_sign) {
  const FourthRoot minus_i = FourthRoot::minus_i();
  const FourthRoot plus_i = FourthRoot::i();
  const FourthRoot eps = spec.eps_psi == 1 ? plus_i : minus_i;
  long a = s.a(), b = s.b();
  if (side == Side::V) {
    // G = Sp_{2m}: H = Sp_{2a} x SO(2b), #Delta_B - #Delta_{B_H} = (2a+1)b,
    // q_G - q_H = m(m+1)/2 - a(a+1)/2 mod 2, epsilon factor -eps_psi^{b odd}.
    long mm = s.size();
    long q_exp = (mm * (mm + 1)) / 2 - (a * (a + 1)) / 2;
    FourthRoot n1 = (q_exp % 2 == 0) ? FourthRoot::one() : FourthRoot::minus_one();
    FourthRoot n2 = (corrected_sign ? minus_i : plus_i).pow((2 * a + 1) * b);
    FourthRoot n3 = (b % 2 == 0) ? FourthRoot::one() : eps * FourthRoot::minus_one();
    FourthRoot delta_I = (minus_i * eps).pow(b);
    return n1 * n2 * n3 * delta_I;
  }
  // G = SO_{2n}: #Delta_B - #Delta_{B_H} = 2ab, the parity factors are even
  // and the epsilon factor is (-1)^{ab}; Delta_I at the generic member is 1.
  FourthRoot n2 = (corrected_sign ? minus_i : plus_i).pow(2 * a * b);
  FourthRoot n3 = (a * b) % 2 == 0 ? FourthRoot::one() : FourthRoot::minus_one();
  return n2 * n3;
}

FourthRoot packet_character(const CaseSpec& spec, Side side, const SignedPermutation& base_w,
                            const SignedPermutation& target_w, const SGroupElement& s,
                            bool corrected_sign) {
  int rank = spec.rank_of(side);
  if (base_w.rank() != rank || target_w.rank() != rank || s.size() != rank)
    throw LengthMismatch("packet_character: rank mismatch");
  SignedPermutation w = target_w * base_w.inverse();
  FourthRoot value = normalization_chain(spec, side, s, corrected_sign);
  for (int k = 0; k < rank; ++k)
    if (w.signs[k] == -1) value = value * FourthRoot::from_sign(s.signs[k]);
  return value;
}

HCParameter packet_base(const HCParameter& param) {
  std::vector<Rational> abs_entries;
  abs_entries.reserve(param.mu.rank());
  for (const Rational& e : param.mu.entries) abs_entries.push_back(abs(e));
  std::sort(abs_entries.begin(), abs_entries.end(), std::greater<Rational>());
  Family fam = CaseSpec::family_of(param.side);
  return HCParameter(Weight(std::move(abs_entries)),
                     standard_positive_system(fam, param.mu.rank()), param.spec, param.side);
}

SignedPermutation twist_from_base(const HCParameter& param) {
  HCParameter base = packet_base(param);
  for (const SignedPermutation& w : all_signed_permutations(param.mu.rank())) {
    if (act(w, base.mu) == param.mu && act(w, base.psi.roots) == param.psi.roots) return w;
  }
  throw std::logic_error("no signed permutation carries the base to the parameter");
}

SignedPermutation transport_twist(const SignedInjection& inj, const SignedPermutation& wV) {
  if (wV.rank() != inj.m) throw LengthMismatch("transport_twist: rank mismatch");
  std::vector<int> perm(inj.n), signs(inj.n, 1);
  int z = inj.zero_position();
  if (z >= 0) perm[z] = z;
  for (int k = 0; k < inj.m; ++k) {
    perm[inj.position_of(k)] = inj.position_of(wV.perm[k]);
    signs[inj.position_of(k)] = wV.signs[k];
  }
  return SignedPermutation(std::move(perm), std::move(signs));
}

SGroupElement transport_sgroup(const SignedInjection& inj, const SGroupElement& s) {
  if (s.size() != inj.m) throw LengthMismatch("transport_sgroup: rank mismatch");
  std::vector<int> out(inj.n, 1);
  for (int k = 0; k < inj.m; ++k) out[inj.position_of(k)] = s.signs[k];
  return SGroupElement(std::move(out));
}

std::pair<FourthRoot, FourthRoot> theta_character_relation(const CaseSpec& spec,
                                                           const HCParameter& param,
                                                           const SGroupElement& s) {
  LiftResult lift = theta_lift(spec, param);
  if (!lift.present)
    throw std::invalid_argument("theta_character_relation requires a nonvanishing lift");
  SignedInjection inj = xi_injection(spec, lift.variant);
  SignedPermutation wV = twist_from_base(param);
  SignedPermutation wW = transport_twist(inj, wV);
  SGroupElement s2 = transport_sgroup(inj, s);
  FourthRoot vV = packet_character(spec, Side::V, SignedPermutation::identity(inj.m), wV, s);
  FourthRoot vW = packet_character(spec, Side::W, SignedPermutation::identity(inj.n), wW, s2);
  return {vV, vW};
}

}  // namespace theta::hctheta
