#include "theta/fockmodel.hpp"

#include <algorithm>
#include <functional>

namespace theta::fockmodel {

SparsePoly SparsePoly::constant(int nvars, const GaussianRational& c) {
  SparsePoly p;
  if (!c.is_zero()) p.terms[Monomial(nvars, 0)] = c;
  return p;
}

SparsePoly SparsePoly::variable(int nvars, int var) {
  SparsePoly p;
  Monomial m(nvars, 0);
  m[var] = 1;
  p.terms[m] = GaussianRational(Rational(1));
  return p;
}

int SparsePoly::degree() const {
  int d = 0;
  for (const auto& [mono, c] : terms) {
    int t = 0;
    for (int e : mono) t += e;
    d = std::max(d, t);
  }
  return d;
}

void SparsePoly::add_term(const Monomial& mono, const GaussianRational& c) {
  if (c.is_zero()) return;
  auto it = terms.find(mono);
  if (it == terms.end()) {
    terms.emplace(mono, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
  }
}

SparsePoly SparsePoly::operator+(const SparsePoly& o) const {
  SparsePoly out = *this;
  for (const auto& [mono, c] : o.terms) out.add_term(mono, c);
  return out;
}

SparsePoly SparsePoly::operator-(const SparsePoly& o) const {
  SparsePoly out = *this;
  for (const auto& [mono, c] : o.terms) out.add_term(mono, -c);
  return out;
}

SparsePoly SparsePoly::operator*(const SparsePoly& o) const {
  SparsePoly out;
  for (const auto& [m1, c1] : terms)
    for (const auto& [m2, c2] : o.terms) {
      Monomial m = m1;
      for (size_t k = 0; k < m.size(); ++k) m[k] += m2[k];
      out.add_term(m, c1 * c2);
    }
  return out;
}

SparsePoly SparsePoly::operator*(const GaussianRational& c) const {
  SparsePoly out;
  if (c.is_zero()) return out;
  for (const auto& [mono, cc] : terms) out.terms[mono] = cc * c;
  return out;
}

void FockOperator::add(const GaussianRational& c, const Monomial& mult, const Monomial& diff) {
  if (c.is_zero()) return;
  terms.push_back({c, mult, diff});
}

FockOperator FockOperator::operator+(const FockOperator& o) const {
  FockOperator out = *this;
  out.terms.insert(out.terms.end(), o.terms.begin(), o.terms.end());
  return out;
}

FockOperator FockOperator::operator*(const GaussianRational& c) const {
  FockOperator out(nvars);
  if (c.is_zero()) return out;
  for (const OpTerm& t : terms) out.terms.push_back({t.coeff * c, t.mult, t.diff});
  return out;
}

FockOperator FockOperator::conj_coefficients() const {
  FockOperator out(nvars);
  for (const OpTerm& t : terms) out.terms.push_back({t.coeff.conj(), t.mult, t.diff});
  return out;
}

SparsePoly apply(const FockOperator& op, const SparsePoly& f) {
  SparsePoly out;
  for (const auto& [mono, c] : f.terms) {
    for (const OpTerm& t : op.terms) {
      GaussianRational coeff = c * t.coeff;
      Monomial m = mono;
      bool dead = false;
      for (size_t k = 0; k < m.size() && !dead; ++k) {
        for (int d = 0; d < t.diff[k]; ++d) {
          if (m[k] == 0) {
            dead = true;
            break;
          }
          coeff *= GaussianRational(Rational(m[k]));
          --m[k];
        }
      }
      if (dead) continue;
      for (size_t k = 0; k < m.size(); ++k) m[k] += t.mult[k];
      out.add_term(m, coeff);
    }
  }
  return out;
}

Side gen_side(GenKind k) {
  switch (k) {
    case GenKind::H:
    case GenKind::X:
    case GenKind::Y:
      return Side::V;
    default:
      return Side::W;
  }
}

FockOperator generator_image(const FockSpace& fs, const LieGen& g) {
  const int nv = fs.vars();
  const GaussianRational eps = fs.eps();
  FockOperator op(nv);
  Monomial none(nv, 0);
  auto mono1 = [&](int v) {
    Monomial m(nv, 0);
    m[v] = 1;
    return m;
  };
  auto mono2 = [&](int v1, int v2) {
    Monomial m(nv, 0);
    ++m[v1];
    ++m[v2];
    return m;
  };
  const int a = g.a, b = g.b;
  switch (g.kind) {
    case GenKind::H:
      if (a > fs.m || b > fs.m || a < 1 || b < 1) throw IllegalIndices("H index");
      for (int c = 1; c <= fs.n; ++c) {
        op.add(eps, mono1(fs.w(a, c)), mono1(fs.w(b, c)));
        op.add(-eps, mono1(fs.z(b, c)), mono1(fs.z(a, c)));
      }
      break;
    case GenKind::X:
      if (a > fs.m || b > fs.m || a < 1 || b < 1) throw IllegalIndices("X index");
      for (int c = 1; c <= fs.n; ++c) {
        op.add(eps, mono1(fs.w(b, c)), mono1(fs.z(a, c)));
        op.add(eps, mono1(fs.w(a, c)), mono1(fs.z(b, c)));
      }
      break;
    case GenKind::Y:
      if (a > fs.m || b > fs.m || a < 1 || b < 1) throw IllegalIndices("Y index");
      for (int c = 1; c <= fs.n; ++c) {
        op.add(-eps, mono1(fs.z(a, c)), mono1(fs.w(b, c)));
        op.add(-eps, mono1(fs.z(b, c)), mono1(fs.w(a, c)));
      }
      break;
    case GenKind::K:
      if (a > fs.n || b > fs.n || a < 1 || b < 1) throw IllegalIndices("K index");
      for (int c = 1; c <= fs.m; ++c) {
        op.add(eps, mono1(fs.z(c, a)), mono1(fs.z(c, b)));
        op.add(eps, mono1(fs.w(c, a)), mono1(fs.w(c, b)));
      }
      if (a == b) op.add(eps * GaussianRational(Rational(fs.m)), none, none);
      break;
    case GenKind::P:
      if (a > fs.n || b > fs.n || a < 1 || b < 1) throw IllegalIndices("P index");
      for (int c = 1; c <= fs.m; ++c) {
        op.add(GaussianRational(Rational(1)), mono2(fs.z(c, a), fs.w(c, b)), none);
        op.add(GaussianRational(Rational(-1)), mono2(fs.w(c, a), fs.z(c, b)), none);
      }
      break;
    case GenKind::Pbar:
      if (a > fs.n || b > fs.n || a < 1 || b < 1) throw IllegalIndices("Pbar index");
      for (int c = 1; c <= fs.m; ++c) {
        op.add(GaussianRational(Rational(1)), none, mono2(fs.z(c, b), fs.w(c, a)));
        op.add(GaussianRational(Rational(-1)), none, mono2(fs.z(c, a), fs.w(c, b)));
      }
      break;
  }
  return op;
}

SparsePoly det_vector(const FockSpace& fs, const std::vector<long>& r) {
  const int p = static_cast<int>(r.size());
  if (p > fs.m || p > fs.n) throw MinorTooLarge("minor exceeds the variable block");
  for (long e : r)
    if (e < 0) throw std::invalid_argument("det_vector exponents must be >= 0");
  const int nv = fs.vars();
  SparsePoly out = SparsePoly::constant(nv, GaussianRational(Rational(1)));
  for (int k = 1; k <= p; ++k) {
    if (r[k - 1] == 0) continue;
    // Leibniz expansion of the leading k x k minor of (w_ab)
    SparsePoly minor;
    std::vector<int> perm(k);
    for (int t = 0; t < k; ++t) perm[t] = t;
    do {
      int inv = 0;
      for (int s = 0; s < k; ++s)
        for (int t = s + 1; t < k; ++t)
          if (perm[s] > perm[t]) ++inv;
      Monomial m(nv, 0);
      for (int row = 1; row <= k; ++row) ++m[fs.w(row, perm[row - 1] + 1)];
      minor.add_term(m, GaussianRational(Rational(inv % 2 == 0 ? 1 : -1)));
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (long e = 0; e < r[k - 1]; ++e) out = out * minor;
  }
  return out;
}

bool is_joint_harmonic(const FockSpace& fs, const SparsePoly& f) {
  const int nv = fs.vars();
  Monomial none(nv, 0);
  auto mono2 = [&](int v1, int v2) {
    Monomial m(nv, 0);
    ++m[v1];
    ++m[v2];
    return m;
  };
  const GaussianRational one(Rational(1));
  // V side: row-pair contractions hitting the z block.  The w-w contraction
  // does not annihilate products of leading minors, so it is not part of the
  // lowering span certified by the maximal vectors.
  for (int a = 1; a <= fs.m; ++a) {
    for (int b = a; b <= fs.m; ++b) {
      FockOperator dzz(nv);
      for (int c = 1; c <= fs.n; ++c) dzz.add(one, none, mono2(fs.z(a, c), fs.z(b, c)));
      if (!apply(dzz, f).is_zero()) return false;
    }
  }
  for (int a = 1; a <= fs.m; ++a) {
    for (int b = 1; b <= fs.m; ++b) {
      FockOperator dzw(nv);
      for (int c = 1; c <= fs.n; ++c) dzw.add(one, none, mono2(fs.z(a, c), fs.w(b, c)));
      if (!apply(dzw, f).is_zero()) return false;
    }
  }
  // W side: Pbar images
  for (int a = 1; a <= fs.n; ++a)
    for (int b = a + 1; b <= fs.n; ++b)
      if (!apply(generator_image(fs, {GenKind::Pbar, a, b}), f).is_zero()) return false;
  return true;
}

namespace {

// (alpha-weight, beta-weight) of a monomial under the normalized Cartans.
std::pair<std::vector<long>, std::vector<long>> monomial_weight(const FockSpace& fs,
                                                                const Monomial& mono) {
  std::vector<long> alpha(fs.m, 0), beta(fs.n, 0);
  for (int a = 1; a <= fs.m; ++a)
    for (int b = 1; b <= fs.n; ++b) {
      alpha[a - 1] += mono[fs.w(a, b)] - mono[fs.z(a, b)];
      beta[b - 1] += mono[fs.z(a, b)] + mono[fs.w(a, b)];
    }
  for (int b = 0; b < fs.n; ++b) beta[b] += fs.m;
  return {alpha, beta};
}

}  // namespace

std::optional<std::pair<Weight, Weight>> weight_of(const FockSpace& fs, const SparsePoly& f) {
  if (f.is_zero()) return std::nullopt;
  bool first = true;
  std::vector<long> alpha, beta;
  for (const auto& [mono, c] : f.terms) {
    auto [a, b] = monomial_weight(fs, mono);
    if (first) {
      alpha = a;
      beta = b;
      first = false;
    } else if (a != alpha || b != beta) {
      return std::nullopt;
    }
  }
  return std::make_pair(Weight::from_ints(alpha), Weight::from_ints(beta));
}

FockOperator raising_operator(const FockSpace& fs, Side side, const Root& r) {
  if (side == Side::V) {
    if (r.kind == RootKind::Long)
      return generator_image(fs, {r.sign == 1 ? GenKind::X : GenKind::Y, r.i, r.i});
    if (r.kind == RootKind::Diff)
      return generator_image(fs, {GenKind::H, r.sign == 1 ? r.i : r.j, r.sign == 1 ? r.j : r.i});
    return generator_image(fs, {r.sign == 1 ? GenKind::X : GenKind::Y, r.i, r.j});
  }
  if (r.kind == RootKind::Long) throw IllegalIndices("type D has no long roots");
  if (r.kind == RootKind::Diff)
    return generator_image(fs, {GenKind::K, r.sign == 1 ? r.i : r.j, r.sign == 1 ? r.j : r.i});
  return generator_image(fs, {r.sign == 1 ? GenKind::P : GenKind::Pbar, r.i, r.j});
}

bool is_maximal_vector(const FockSpace& fs, const SparsePoly& f, Side side,
                       const std::set<Root>& side_system) {
  if (!weight_of(fs, f)) throw NotWeightVector("is_maximal_vector requires a weight vector");
  for (const Root& r : side_system)
    if (!apply(raising_operator(fs, side, r), f).is_zero()) return false;
  return true;
}

// --- quaternion matrix oracle ----------------------------------------------

QuatC QuatC::operator+(const QuatC& o) const {
  return {c1 + o.c1, ci + o.ci, cj + o.cj, cij + o.cij};
}

QuatC QuatC::operator-(const QuatC& o) const {
  return {c1 - o.c1, ci - o.ci, cj - o.cj, cij - o.cij};
}

QuatC QuatC::operator*(const QuatC& o) const {
  // Hamilton relations: i^2 = j^2 = k^2 = -1, ij = k, jk = i, ki = j.
  const GaussianRational &a = c1, &b = ci, &c = cj, &d = cij;
  const GaussianRational &A = o.c1, &B = o.ci, &C = o.cj, &D = o.cij;
  return {a * A - b * B - c * C - d * D, a * B + b * A + c * D - d * C,
          a * C - b * D + c * A + d * B, a * D + b * C - c * B + d * A};
}

QuatC QuatC::operator*(const GaussianRational& s) const {
  return {c1 * s, ci * s, cj * s, cij * s};
}

namespace {

QuatC conj_by_i(const QuatC& q) {  // i q i^{-1}
  return {q.c1, q.ci, -q.cj, -q.cij};
}

QuatMatrix zero_matrix(int k) {
  return QuatMatrix(k, std::vector<QuatC>(k));
}

void add_at(QuatMatrix& mat, int a, int b, const QuatC& q) {
  mat[a - 1][b - 1] = mat[a - 1][b - 1] + q;
}

QuatC quat_unit(int comp) {
  QuatC q;
  GaussianRational one{Rational(1)};
  switch (comp) {
    case 0: q.c1 = one; break;
    case 1: q.ci = one; break;
    case 2: q.cj = one; break;
    default: q.cij = one; break;
  }
  return q;
}

// sigma_ab(x) = (1/2)(e_ab(x) - e_ba(x*)) on the V side;
// s_ab(x) = (1/2)(e_ab(x) - e_ba(i x* i^{-1})) on the W side.
QuatMatrix sigma_ab(int size, int a, int b, const QuatC& x, bool w_side) {
  QuatMatrix mat = zero_matrix(size);
  GaussianRational half{Rational(1, 2)};
  QuatC star = x.main_involution();
  if (w_side) star = conj_by_i(star);
  add_at(mat, a, b, x * half);
  add_at(mat, b, a, star * (-half));
  return mat;
}

QuatMatrix mat_add(const QuatMatrix& x, const QuatMatrix& y) {
  QuatMatrix out = x;
  for (size_t r = 0; r < x.size(); ++r)
    for (size_t c = 0; c < x.size(); ++c) out[r][c] = out[r][c] + y[r][c];
  return out;
}

QuatMatrix mat_scale(const QuatMatrix& x, const GaussianRational& s) {
  QuatMatrix out = x;
  for (auto& row : out)
    for (auto& e : row) e = e * s;
  return out;
}

}  // namespace

QuatMatrix gen_matrix(const FockSpace& fs, const LieGen& g) {
  const GaussianRational eps = fs.eps();
  const GaussianRational one{Rational(1)};
  const bool w_side = gen_side(g.kind) == Side::W;
  const int size = w_side ? fs.n : fs.m;
  auto sig = [&](int comp) { return sigma_ab(size, g.a, g.b, quat_unit(comp), w_side); };
  switch (g.kind) {
    case GenKind::H: return mat_add(mat_scale(sig(0), eps), sig(1));
    case GenKind::X: return mat_add(mat_scale(sig(2), eps), sig(3));
    case GenKind::Y: return mat_add(mat_scale(sig(2), eps), mat_scale(sig(3), -one));
    case GenKind::K: return mat_add(sig(1), mat_scale(sig(0), eps));
    case GenKind::P: return mat_add(sig(2), mat_scale(sig(3), -eps));
    default: return mat_add(sig(2), mat_scale(sig(3), eps));
  }
}

std::vector<std::vector<GaussianRational>> endo_matrix(const FockSpace& fs, const LieGen& g) {
  const bool w_side = gen_side(g.kind) == Side::W;
  const int dim = 4 * fs.m * fs.n;
  QuatMatrix mat = gen_matrix(fs, g);
  std::vector<std::vector<GaussianRational>> endo(dim, std::vector<GaussianRational>(dim));
  auto flat = [&](int a, int b, int comp) { return ((a - 1) * fs.n + (b - 1)) * 4 + comp; };
  for (int a = 1; a <= fs.m; ++a)
    for (int b = 1; b <= fs.n; ++b)
      for (int comp = 0; comp < 4; ++comp) {
        // image of the basis element e_ab(u)
        QuatC u = quat_unit(comp);
        int col = flat(a, b, comp);
        if (!w_side) {
          // X * e_ab(u): entries X[r][a-1] * u at (r, b)
          for (int r = 1; r <= fs.m; ++r) {
            QuatC v = mat[r - 1][a - 1] * u;
            GaussianRational comps[4] = {v.c1, v.ci, v.cj, v.cij};
            for (int cc = 0; cc < 4; ++cc) endo[flat(r, b, cc)][col] += comps[cc];
          }
        } else {
          // -e_ab(u) * Y: entries -u * Y[b-1][s] at (a, s)
          for (int s = 1; s <= fs.n; ++s) {
            QuatC v = u * mat[b - 1][s - 1];
            GaussianRational comps[4] = {v.c1, v.ci, v.cj, v.cij};
            for (int cc = 0; cc < 4; ++cc) endo[flat(a, s, cc)][col] -= comps[cc];
          }
        }
      }
  return endo;
}

std::vector<LieGen> generator_family(const FockSpace& fs, Side side) {
  std::vector<LieGen> out;
  if (side == Side::V) {
    for (int a = 1; a <= fs.m; ++a)
      for (int b = 1; b <= fs.m; ++b) out.push_back({GenKind::H, a, b});
    for (int a = 1; a <= fs.m; ++a)
      for (int b = a; b <= fs.m; ++b) {
        out.push_back({GenKind::X, a, b});
        out.push_back({GenKind::Y, a, b});
      }
  } else {
    for (int a = 1; a <= fs.n; ++a)
      for (int b = 1; b <= fs.n; ++b) out.push_back({GenKind::K, a, b});
    for (int a = 1; a <= fs.n; ++a)
      for (int b = a + 1; b <= fs.n; ++b) {
        out.push_back({GenKind::P, a, b});
        out.push_back({GenKind::Pbar, a, b});
      }
  }
  return out;
}

std::vector<Monomial> monomials_up_to_degree(int nvars, int degree_cap) {
  std::vector<Monomial> out;
  Monomial cur(nvars, 0);
  std::function<void(int, int)> rec = [&](int var, int remaining) {
    if (var == nvars) {
      out.push_back(cur);
      return;
    }
    for (int e = 0; e <= remaining; ++e) {
      cur[var] = e;
      rec(var + 1, remaining - e);
    }
    cur[var] = 0;
  };
  rec(0, degree_cap);
  return out;
}

namespace {

using GRMatrix = std::vector<std::vector<GaussianRational>>;

GRMatrix commutator(const GRMatrix& x, const GRMatrix& y) {
  const size_t d = x.size();
  GRMatrix out(d, std::vector<GaussianRational>(d));
  for (size_t r = 0; r < d; ++r)
    for (size_t k = 0; k < d; ++k) {
      if (x[r][k].is_zero() && y[r][k].is_zero()) continue;
      for (size_t c = 0; c < d; ++c) {
        out[r][c] += x[r][k] * y[k][c] - y[r][k] * x[k][c];
      }
    }
  return out;
}

bool matrix_is_zero(const GRMatrix& x) {
  for (const auto& row : x)
    for (const auto& e : row)
      if (!e.is_zero()) return false;
  return true;
}

// Solves sum_g c_g * col_g = target by Gaussian elimination; returns false if
// inconsistent.
bool solve_span(const std::vector<std::vector<GaussianRational>>& cols,
                std::vector<GaussianRational> target, std::vector<GaussianRational>* coeffs) {
  const size_t rows = target.size(), ncol = cols.size();
  std::vector<std::vector<GaussianRational>> a(rows,
                                               std::vector<GaussianRational>(ncol + 1));
  for (size_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < ncol; ++c) a[r][c] = cols[c][r];
    a[r][ncol] = target[r];
  }
  std::vector<int> pivot_col_of_row;
  size_t row = 0;
  for (size_t col = 0; col < ncol && row < rows; ++col) {
    size_t pr = row;
    while (pr < rows && a[pr][col].is_zero()) ++pr;
    if (pr == rows) continue;
    std::swap(a[pr], a[row]);
    GaussianRational inv = a[row][col].inverse();
    for (size_t c = col; c <= ncol; ++c) a[row][c] *= inv;
    for (size_t r = 0; r < rows; ++r) {
      if (r == row || a[r][col].is_zero()) continue;
      GaussianRational f = a[r][col];
      for (size_t c = col; c <= ncol; ++c) a[r][c] -= f * a[row][c];
    }
    pivot_col_of_row.push_back(static_cast<int>(col));
    ++row;
  }
  for (size_t r = row; r < rows; ++r)
    if (!a[r][ncol].is_zero()) return false;
  coeffs->assign(ncol, GaussianRational());
  for (size_t r = 0; r < row; ++r) (*coeffs)[pivot_col_of_row[r]] = a[r][ncol];
  return true;
}

}  // namespace

bool bracket_check(const FockSpace& fs, const LieGen& g1, const LieGen& g2, int degree_cap) {
  if (degree_cap > 8) throw std::invalid_argument("bracket_check degree cap is 8");
  GRMatrix bracket = commutator(endo_matrix(fs, g1), endo_matrix(fs, g2));

  FockOperator f12(fs.vars());
  if (gen_side(g1.kind) != gen_side(g2.kind)) {
    // the two sides commute inside sp(W); anything else is a bug
    if (!matrix_is_zero(bracket)) throw NotInSpan("mixed-side bracket is nonzero");
  } else {
    std::vector<LieGen> family = generator_family(fs, gen_side(g1.kind));
    std::vector<std::vector<GaussianRational>> cols;
    const int dim = 4 * fs.m * fs.n;
    for (const LieGen& g : family) {
      GRMatrix e = endo_matrix(fs, g);
      std::vector<GaussianRational> col;
      col.reserve(dim * dim);
      for (const auto& r : e) col.insert(col.end(), r.begin(), r.end());
      cols.push_back(std::move(col));
    }
    std::vector<GaussianRational> target;
    target.reserve(dim * dim);
    for (const auto& r : bracket) target.insert(target.end(), r.begin(), r.end());
    std::vector<GaussianRational> coeffs;
    if (!solve_span(cols, std::move(target), &coeffs))
      throw NotInSpan("bracket leaves the implemented generator span");
    for (size_t k = 0; k < family.size(); ++k)
      if (!coeffs[k].is_zero())
        f12 = f12 + generator_image(fs, family[k]) * coeffs[k];
  }

  FockOperator f1 = generator_image(fs, g1), f2 = generator_image(fs, g2);
  for (const Monomial& mono : monomials_up_to_degree(fs.vars(), degree_cap)) {
    SparsePoly f;
    f.terms[mono] = GaussianRational(Rational(1));
    SparsePoly lhs = apply(f1, apply(f2, f)) - apply(f2, apply(f1, f));
    SparsePoly rhs = apply(f12, f);
    if (!(lhs == rhs)) return false;
  }
  return true;
}

}  // namespace theta::fockmodel
