#include "theta/rootcomb.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace theta::rootcomb {

std::vector<int> root_vector(const Root& r, int rank) {
  std::vector<int> v(rank, 0);
  if (r.j > rank) throw std::out_of_range("root index exceeds rank");
  switch (r.kind) {
    case RootKind::Diff:
      v[r.i - 1] = r.sign;
      v[r.j - 1] = -r.sign;
      break;
    case RootKind::Sum:
      v[r.i - 1] = r.sign;
      v[r.j - 1] = r.sign;
      break;
    case RootKind::Long:
      v[r.i - 1] = 2 * r.sign;
      break;
  }
  return v;
}

std::vector<Root> all_roots(Family f, int rank) {
  std::vector<Root> out;
  for (int i = 1; i <= rank; ++i) {
    for (int j = i + 1; j <= rank; ++j) {
      for (int s : {1, -1}) {
        out.push_back(Root::diff(i, j, s));
        out.push_back(Root::sum(i, j, s));
      }
    }
    if (f == Family::C) {
      out.push_back(Root::lng(i, 1));
      out.push_back(Root::lng(i, -1));
    }
  }
  return out;
}

std::set<Root> standard_positive_roots(Family f, int rank) {
  std::set<Root> out;
  for (const Root& r : all_roots(f, rank))
    if (r.sign == 1) out.insert(r);
  return out;
}

Weight Weight::operator+(const Weight& o) const {
  if (rank() != o.rank()) throw std::invalid_argument("weight rank mismatch");
  Weight out = *this;
  for (int k = 0; k < rank(); ++k) out.entries[k] += o.entries[k];
  return out;
}

Weight Weight::operator-(const Weight& o) const {
  if (rank() != o.rank()) throw std::invalid_argument("weight rank mismatch");
  Weight out = *this;
  for (int k = 0; k < rank(); ++k) out.entries[k] -= o.entries[k];
  return out;
}

Weight Weight::operator*(const Rational& c) const {
  Weight out = *this;
  for (auto& e : out.entries) e *= c;
  return out;
}

bool Weight::is_integral() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const Rational& q) { return is_integer(q); });
}

std::ostream& operator<<(std::ostream& os, const Weight& w) {
  os << "(";
  for (int k = 0; k < w.rank(); ++k) {
    if (k) os << ",";
    os << rat_str(w.entries[k]);
  }
  return os << ")";
}

Rational pairing(const Weight& mu, const Root& alpha) {
  if (alpha.j > mu.rank()) throw std::out_of_range("root index exceeds weight rank");
  Rational v;
  switch (alpha.kind) {
    case RootKind::Diff: v = mu.entries[alpha.i - 1] - mu.entries[alpha.j - 1]; break;
    case RootKind::Sum: v = mu.entries[alpha.i - 1] + mu.entries[alpha.j - 1]; break;
    case RootKind::Long: v = 2 * mu.entries[alpha.i - 1]; break;
  }
  return alpha.sign == 1 ? v : Rational(-v);
}

SignedPermutation::SignedPermutation(std::vector<int> p, std::vector<int> s)
    : perm(std::move(p)), signs(std::move(s)) {
  if (perm.size() != signs.size()) throw std::invalid_argument("perm/sign size mismatch");
  std::vector<bool> seen(perm.size(), false);
  for (int v : perm) {
    if (v < 0 || v >= static_cast<int>(perm.size()) || seen[v])
      throw std::invalid_argument("not a permutation");
    seen[v] = true;
  }
  for (int s1 : signs)
    if (s1 != 1 && s1 != -1) throw std::invalid_argument("signs must be +-1");
}

SignedPermutation SignedPermutation::identity(int k) {
  std::vector<int> p(k);
  std::iota(p.begin(), p.end(), 0);
  return SignedPermutation(std::move(p), std::vector<int>(k, 1));
}

SignedPermutation SignedPermutation::operator*(const SignedPermutation& o) const {
  if (rank() != o.rank()) throw std::invalid_argument("rank mismatch");
  int k = rank();
  std::vector<int> p(k), s(k);
  std::vector<int> pinv(k);
  for (int a = 0; a < k; ++a) pinv[perm[a]] = a;
  for (int a = 0; a < k; ++a) p[a] = perm[o.perm[a]];
  // act(this*o, x)_k = s1_k * s2_{perm^{-1}(k)} * x_{(perm o operm)^{-1}(k)}
  for (int a = 0; a < k; ++a) s[a] = signs[a] * o.signs[pinv[a]];
  return SignedPermutation(std::move(p), std::move(s));
}

SignedPermutation SignedPermutation::inverse() const {
  int k = rank();
  std::vector<int> p(k), s(k);
  for (int a = 0; a < k; ++a) p[perm[a]] = a;
  for (int a = 0; a < k; ++a) s[a] = signs[perm[a]];
  return SignedPermutation(std::move(p), std::move(s));
}

bool SignedPermutation::is_identity() const {
  for (int a = 0; a < rank(); ++a)
    if (perm[a] != a || signs[a] != 1) return false;
  return true;
}

Weight act(const SignedPermutation& w, const Weight& mu) {
  if (w.rank() != mu.rank()) throw std::invalid_argument("rank mismatch");
  int k = w.rank();
  std::vector<int> pinv(k);
  for (int a = 0; a < k; ++a) pinv[w.perm[a]] = a;
  std::vector<Rational> out(k);
  for (int a = 0; a < k; ++a) out[a] = Rational(w.signs[a]) * mu.entries[pinv[a]];
  return Weight(std::move(out));
}

Root act(const SignedPermutation& w, const Root& r) {
  // Transport through coordinates: w sends e_i to signs[perm[i]] e_{perm[i]}.
  auto image = [&](int idx1) {  // 1-based index -> (1-based index, sign)
    int to = w.perm[idx1 - 1];
    return std::pair<int, int>(to + 1, w.signs[to]);
  };
  if (r.kind == RootKind::Long) {
    auto [i2, s2] = image(r.i);
    return Root::lng(i2, r.sign * s2);
  }
  auto [i2, si] = image(r.i);
  auto [j2, sj] = image(r.j);
  // r = sign * (e_i +- e_j) -> sign * (si e_{i2} +- sj e_{j2})
  int ci = r.sign * si;
  int cj = (r.kind == RootKind::Diff ? -r.sign : r.sign) * sj;
  if (i2 > j2) {
    std::swap(i2, j2);
    std::swap(ci, cj);
  }
  if (ci == cj) return Root::sum(i2, j2, ci);
  return Root::diff(i2, j2, ci);
}

std::set<Root> act(const SignedPermutation& w, const std::set<Root>& roots) {
  std::set<Root> out;
  for (const Root& r : roots) out.insert(act(w, r));
  return out;
}

std::vector<SignedPermutation> all_signed_permutations(int k) {
  std::vector<SignedPermutation> out;
  std::vector<int> p(k);
  std::iota(p.begin(), p.end(), 0);
  do {
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
      std::vector<int> s(k);
      for (int a = 0; a < k; ++a) s[a] = (mask >> a) & 1 ? -1 : 1;
      out.emplace_back(p, s);
    }
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

namespace {

// Recognize an integer vector as a root of (f, rank), if it is one.
bool vector_to_root(const std::vector<int>& v, Family f, Root* out) {
  int nz = 0, i = -1, j = -1;
  for (int k = 0; k < static_cast<int>(v.size()); ++k) {
    if (v[k] != 0) {
      ++nz;
      if (i < 0) i = k;
      else j = k;
    }
  }
  if (nz == 1) {
    if (f != Family::C) return false;
    if (v[i] == 2) { *out = Root::lng(i + 1, 1); return true; }
    if (v[i] == -2) { *out = Root::lng(i + 1, -1); return true; }
    return false;
  }
  if (nz == 2 && (v[i] == 1 || v[i] == -1) && (v[j] == 1 || v[j] == -1)) {
    if (v[i] == v[j]) { *out = Root::sum(i + 1, j + 1, v[i]); return true; }
    *out = Root::diff(i + 1, j + 1, v[i]);
    return true;
  }
  return false;
}

void validate_positive_system(const PositiveSystem& ps) {
  // one of {alpha, -alpha} for every root of the ambient system
  for (const Root& r : all_roots(ps.family, ps.rank)) {
    bool has = ps.roots.count(r) > 0;
    bool hasNeg = ps.roots.count(r.negated()) > 0;
    if (has == hasNeg)
      throw InvalidPositiveSystem("positive system must contain exactly one of each +-pair");
  }
  for (const Root& r : ps.roots)
    if (r.j > ps.rank) throw InvalidPositiveSystem("root index exceeds rank");
  // additive closure
  for (const Root& a : ps.roots) {
    std::vector<int> va = root_vector(a, ps.rank);
    for (const Root& b : ps.roots) {
      std::vector<int> vb = root_vector(b, ps.rank);
      std::vector<int> vs(va.size());
      for (size_t k = 0; k < va.size(); ++k) vs[k] = va[k] + vb[k];
      Root sum = Root::lng(1);
      if (vector_to_root(vs, ps.family, &sum) && ps.roots.count(sum) == 0)
        throw InvalidPositiveSystem("positive system not closed under addition");
    }
  }
}

}  // namespace

PositiveSystem::PositiveSystem(Family f, int rk, std::set<Root> rs)
    : family(f), rank(rk), roots(std::move(rs)) {
  validate_positive_system(*this);
}

bool PositiveSystem::contains_all(const std::set<Root>& rs) const {
  return std::all_of(rs.begin(), rs.end(), [&](const Root& r) { return contains(r); });
}

PositiveSystem standard_positive_system(Family f, int rank) {
  return PositiveSystem(f, rank, standard_positive_roots(f, rank));
}

PositiveSystem act(const SignedPermutation& w, const PositiveSystem& psi) {
  return PositiveSystem(psi.family, psi.rank, act(w, psi.roots));
}

Weight rho(const std::set<Root>& roots, int rank) {
  Weight out = Weight::zero(rank);
  for (const Root& r : roots) {
    std::vector<int> v = root_vector(r, rank);
    for (int k = 0; k < rank; ++k) out.entries[k] += v[k];
  }
  return out * Rational(1, 2);
}

PositiveSystem dominant_system(const Weight& mu, Family f, int rank) {
  if (mu.rank() != rank) throw std::invalid_argument("weight rank mismatch");
  std::set<Root> pos;
  for (const Root& r : all_roots(f, rank)) {
    Rational v = pairing(mu, r);
    if (v == 0) throw SingularWeight("weight is singular for " + std::to_string(rank));
    if (v > 0) pos.insert(r);
  }
  return PositiveSystem(f, rank, std::move(pos));
}

CaseSpec::CaseSpec(int eH, int mm, int nn, int pp, int qq, int eps)
    : e_H(eH), m(mm), n(nn), p(pp), q(qq), eps_psi(eps) {
  if (eH != 1 && eH != -1) throw std::invalid_argument("e_H must be +-1");
  if (eps != 1 && eps != -1) throw std::invalid_argument("eps_psi must be +-1 (for +-i)");
  if (mm < 1 || nn < 1) throw std::invalid_argument("m, n must be positive");
  if (nn != mm && nn != mm + 1) throw std::invalid_argument("n must be m or m+1");
  if (pp < 0 || qq < 0) throw std::invalid_argument("p, q must be nonnegative");
  int sig_rank = (eH == 1) ? nn : mm;  // (p,q) is a signature of W if e_H=1, of V if e_H=-1
  if (pp + qq != sig_rank) throw std::invalid_argument("p+q must equal the signature rank");
}

std::set<Root> compact_roots(const CaseSpec& spec, Side side) {
  auto same_block = [&](int k, int l) {
    long a = 2L * spec.p + 1 - 2 * k;
    long b = 2L * spec.p + 1 - 2 * l;
    return a * b > 0;
  };
  std::set<Root> out;
  if (spec.e_H == 1) {
    if (side == Side::V) {
      for (int k = 1; k <= spec.m; ++k)
        for (int l = k + 1; l <= spec.m; ++l) out.insert(Root::diff(k, l));
    } else {
      for (int k = 1; k <= spec.n; ++k)
        for (int l = k + 1; l <= spec.n; ++l)
          if (same_block(k, l)) {
            out.insert(Root::diff(k, l));
            out.insert(Root::sum(k, l));
          }
    }
  } else {
    if (side == Side::V) {
      for (int k = 1; k <= spec.m; ++k) {
        out.insert(Root::lng(k));
        for (int l = k + 1; l <= spec.m; ++l)
          if (same_block(k, l)) {
            out.insert(Root::diff(k, l));
            out.insert(Root::sum(k, l));
          }
      }
    } else {
      for (int k = 1; k <= spec.n; ++k)
        for (int l = k + 1; l <= spec.n; ++l) out.insert(Root::diff(k, l));
    }
  }
  return out;
}

HCParameter::HCParameter(Weight m, PositiveSystem p, CaseSpec s, Side sd)
    : mu(std::move(m)), psi(std::move(p)), spec(s), side(sd) {
  if (mu.rank() != spec.rank_of(side)) throw std::invalid_argument("mu rank mismatch");
  if (psi.rank != spec.rank_of(side) || psi.family != CaseSpec::family_of(side))
    throw std::invalid_argument("positive system does not match the side");
  if (!psi.contains_all(compact_roots(spec, side)))
    throw std::invalid_argument("positive system must contain the compact roots");
}

namespace {
bool in_param_set(const HCParameter& param) {
  const std::set<Root> dc = compact_roots(param.spec, param.side);
  for (const Root& r : param.psi.roots)
    if (pairing(param.mu, r) < 0) return false;
  for (const Root& r : dc)
    if (pairing(param.mu, r) <= 0) return false;
  return true;
}
}  // namespace

bool in_X(const HCParameter& param) {
  return param.side == Side::V && in_param_set(param);
}

bool in_Y(const HCParameter& param) {
  return param.side == Side::W && in_param_set(param);
}

std::vector<PositiveSystem> enumerate_positive_systems(Family f, int rank,
                                                       const std::set<Root>& must_contain) {
  if (rank > 6) throw RankTooLarge("enumerate_positive_systems supports rank <= 6");
  std::set<std::set<Root>> seen;
  const std::set<Root> std_pos = standard_positive_roots(f, rank);
  for (const SignedPermutation& w : all_signed_permutations(rank)) {
    std::set<Root> image = act(w, std_pos);
    if (!std::all_of(must_contain.begin(), must_contain.end(),
                     [&](const Root& r) { return image.count(r) > 0; }))
      continue;
    seen.insert(std::move(image));
  }
  std::vector<PositiveSystem> out;
  out.reserve(seen.size());
  for (const auto& rs : seen) out.emplace_back(f, rank, rs);
  return out;
}

}  // namespace theta::rootcomb
