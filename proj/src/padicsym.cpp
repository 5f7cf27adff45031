#include "theta/padicsym.hpp"

#include <array>
#include <set>

namespace theta::padicsym {

SquareClass::SquareClass(long pp, int v, int u)
    : p(pp), val_parity(v), unit_nonresidue(u) {
  if (pp < 3 || pp % 2 == 0) throw std::invalid_argument("p must be an odd prime");
  if (v != 0 && v != 1) throw std::invalid_argument("valuation parity must be 0 or 1");
  if (u != 0 && u != 1) throw std::invalid_argument("unit class must be 0 or 1");
}

long SquareClass::representative() const {
  long r = 1;
  if (unit_nonresidue) r *= least_nonresidue(p);
  if (val_parity) r *= p;
  return r;
}

SquareClass SquareClass::operator*(const SquareClass& o) const {
  if (p != o.p) throw std::invalid_argument("square classes over different primes");
  return SquareClass(p, (val_parity + o.val_parity) % 2,
                     (unit_nonresidue + o.unit_nonresidue) % 2);
}

int legendre(long a, long p) {
  a %= p;
  if (a < 0) a += p;
  if (a == 0) return 0;
  // Euler's criterion by fast exponentiation
  long e = (p - 1) / 2, base = a, r = 1;
  while (e) {
    if (e & 1) r = r * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return r == 1 ? 1 : -1;
}

long least_nonresidue(long p) {
  for (long u = 2; u < p; ++u)
    if (legendre(u, p) == -1) return u;
  throw std::logic_error("no quadratic non-residue found");
}

int hilbert_symbol(const SquareClass& x, const SquareClass& y) {
  if (x.p != y.p) throw std::invalid_argument("mixed primes");
  long p = x.p;
  // (p^a m, p^b n)_p = (-1)^{ab (p-1)/2} (m|p)^b (n|p)^a for units m, n
  int a = x.val_parity, b = y.val_parity;
  int lm = x.unit_nonresidue ? -1 : 1;
  int ln = y.unit_nonresidue ? -1 : 1;
  int sign = 1;
  if (a && b && ((p - 1) / 2) % 2 == 1) sign = -sign;
  if (b) sign *= lm;
  if (a) sign *= ln;
  return sign;
}

int hilbert_symbol_oracle(const SquareClass& x, const SquareClass& y) {
  if (x.p != y.p) throw std::invalid_argument("mixed primes");
  const long p = x.p;
  const long mod = p * p * p;
  const long xv = ((x.representative() % mod) + mod) % mod;
  const long yv = ((y.representative() % mod) + mod) % mod;
  std::set<long> squares;
  for (long z = 0; z < mod; ++z) squares.insert(z * z % mod);
  for (long s = 0; s < mod; ++s) {
    for (long t = 0; t < mod; ++t) {
      if (s % p == 0 && t % p == 0) continue;
      long v = (xv * (s * s % mod) + yv * (t * t % mod)) % mod;
      if (squares.count(v)) return 1;
    }
  }
  return -1;
}

int quadratic_character(const SquareClass& x, const SquareClass& a) {
  return hilbert_symbol(x, a);
}

int transfer_ratio(const SquareClass& a, const SquareClass& b) {
  if (hilbert_symbol(a, b) != -1)
    throw NotDivision("the pair (a, b) does not define a division quaternion algebra");
  // omega(-1) omega(-b) = omega(b), evaluated both ways
  SquareClass minus_one(a.p, 0, legendre(a.p - 1, a.p) == -1 ? 1 : 0);
  int route1 = quadratic_character(minus_one, a) * quadratic_character(minus_one * b, a);
  int route2 = quadratic_character(b, a);
  if (route1 != route2) throw std::logic_error("quadratic character is not multiplicative");
  return route2;
}

FiniteCharacterModel::FiniteCharacterModel(long n, long eta, std::vector<int> sign_fn)
    : N(n), eta_index(((eta % n) + n) % n), s(std::move(sign_fn)) {
  if (n < 3) throw std::invalid_argument("the cyclic model needs N >= 3");
  if (static_cast<long>(s.size()) != n) throw std::invalid_argument("sign function size mismatch");
  for (long k = 0; k < n; ++k) {
    if (is_fixed(k)) continue;
    if (s[k] != 1 && s[k] != -1) throw std::invalid_argument("sign function must be +-1");
    if (s[(n - k) % n] != -s[k])
      throw std::invalid_argument("sign function must be antisymmetric");
  }
}

namespace {

// group algebra Q[x]/(x^N - 1)
using Poly = std::vector<Rational>;

Poly unit(long N, long e) {
  Poly p(N, Rational(0));
  p[((e % N) + N) % N] = 1;
  return p;
}

Poly add(const Poly& a, const Poly& b, const Rational& cb) {
  Poly out = a;
  for (size_t k = 0; k < out.size(); ++k) out[k] += cb * b[k];
  return out;
}

}  // namespace

std::pair<Rational, Rational> coefficient_chain(const FiniteCharacterModel& model,
                                                int pairing_sign) {
  if (pairing_sign != 1 && pairing_sign != -1)
    throw std::invalid_argument("pairing sign must be +-1");
  const long N = model.N, h = model.eta_index;
  if (h == 0) throw TrivialEta("the packet is empty for trivial eta");
  if ((2 * h) % N == 0)
    throw EtaOrderTwo("order-two eta has a singleton packet; no coefficient pair");

  // On each non-fixed point k: eta(k) = x^{hk}, eta(-k) = x^{-hk};
  //   T_plus  = (1/2)[(eta(k) + eta(-k)) + s_k (eta(k) - eta(-k))]
  //   T_minus = (1/2)[(eta(k) + eta(-k)) - s_k (eta(k) - eta(-k))]
  //   F       = e(G) pairing_sign s_k (eta(k) - eta(-k)),  e(G) = -1.
  // Solve F = c_plus T_plus + c_minus T_minus exactly.
  std::vector<std::array<Rational, 3>> rows;  // (T+ coeff, T- coeff, F) per basis entry
  const Rational half(1, 2);
  for (long k = 0; k < N; ++k) {
    if (model.is_fixed(k)) continue;
    Poly e_plus = unit(N, h * k), e_minus = unit(N, -h * k);
    Poly sym = add(e_plus, e_minus, Rational(1));
    Poly asym = add(e_plus, e_minus, Rational(-1));
    Rational sk(model.s[k]);
    Poly tp = add(sym, asym, sk);  // 2 T_plus
    Poly tm = add(sym, asym, -sk); // 2 T_minus
    Poly f = asym;                 // scaled below
    for (long j = 0; j < N; ++j) {
      Rational fv = Rational(-pairing_sign) * sk * f[j];
      rows.push_back({tp[j] * half, tm[j] * half, fv});
    }
  }
  // solve the 2-unknown system
  Rational cp, cm;
  bool solved = false;
  for (size_t i = 0; i < rows.size() && !solved; ++i) {
    for (size_t j = i + 1; j < rows.size() && !solved; ++j) {
      Rational det = rows[i][0] * rows[j][1] - rows[i][1] * rows[j][0];
      if (det == 0) continue;
      cp = (rows[i][2] * rows[j][1] - rows[i][1] * rows[j][2]) / det;
      cm = (rows[i][0] * rows[j][2] - rows[i][2] * rows[j][0]) / det;
      solved = true;
    }
  }
  if (!solved) throw std::logic_error("coefficient system is degenerate");
  for (const auto& r : rows)
    if (r[0] * cp + r[1] * cm != r[2])
      throw std::logic_error("coefficient system is inconsistent");
  return {cp, cm};
}

}  // namespace theta::padicsym
