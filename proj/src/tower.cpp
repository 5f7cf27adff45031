#include "theta/tower.hpp"

#include <sstream>

namespace theta::tower {

std::set<long> square_class_signature(const Rational& v) {
  if (v == 0) throw std::invalid_argument("square class of zero");
  std::set<long> sig;
  mpz_class n = v.get_num() * v.get_den();
  if (n < 0) {
    sig.insert(-1);
    n = -n;
  }
  // trial division; scenario constants are small
  for (mpz_class p = 2; p * p <= n; ++p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e % 2) sig.insert(p.get_si());
  }
  if (n > 1) sig.insert(n.get_si());
  return sig;
}

namespace {
std::set<long> sig_xor(const std::set<long>& x, const std::set<long>& y) {
  std::set<long> out;
  for (long p : x)
    if (!y.count(p)) out.insert(p);
  for (long p : y)
    if (!x.count(p)) out.insert(p);
  return out;
}
}  // namespace

std::shared_ptr<const Tower> Tower::make(
    std::vector<std::pair<std::string, Rational>> radicals) {
  if (radicals.size() > 8) throw std::invalid_argument("tower supports at most 8 radicals");
  auto t = std::make_shared<Tower>(Tower());
  Tower& tw = const_cast<Tower&>(*t);
  for (auto& [name, val] : radicals) {
    if (val == 0) throw std::invalid_argument("radical value must be nonzero");
    tw.names_.push_back(name);
    tw.vals_.push_back(val);
    tw.sigs_.push_back(square_class_signature(val));
  }
  // square-class independence: no nonempty subset multiplies to a square
  const int k = t->size();
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    std::set<long> acc;
    for (int j = 0; j < k; ++j)
      if (mask & (1u << j)) acc = sig_xor(acc, tw.sigs_[j]);
    if (acc.empty())
      throw DependentRadicals("radical values are square-class dependent");
  }
  return t;
}

int Tower::index_of(const std::string& name) const {
  for (int j = 0; j < size(); ++j)
    if (names_[j] == name) return j;
  throw std::out_of_range("no radical named " + name);
}

TowerElem::TowerElem(TowerPtr t, const Rational& c) : tw(std::move(t)) {
  if (c != 0) coef[0] = c;
}

TowerElem TowerElem::radical(const TowerPtr& t, int j) {
  TowerElem e(t);
  e.coef[1u << j] = 1;
  return e;
}

bool TowerElem::is_rational() const {
  return coef.empty() || (coef.size() == 1 && coef.begin()->first == 0);
}

Rational TowerElem::rational_part() const {
  auto it = coef.find(0);
  return it == coef.end() ? Rational(0) : it->second;
}

void TowerElem::add_term(std::uint32_t mask, const Rational& c) {
  if (c == 0) return;
  auto it = coef.find(mask);
  if (it == coef.end()) {
    coef.emplace(mask, c);
  } else {
    it->second += c;
    if (it->second == 0) coef.erase(it);
  }
}

TowerElem TowerElem::operator+(const TowerElem& o) const {
  TowerElem out = *this;
  if (!out.tw) out.tw = o.tw;
  for (const auto& [m, c] : o.coef) out.add_term(m, c);
  return out;
}

TowerElem TowerElem::operator-(const TowerElem& o) const {
  TowerElem out = *this;
  if (!out.tw) out.tw = o.tw;
  for (const auto& [m, c] : o.coef) out.add_term(m, -c);
  return out;
}

TowerElem TowerElem::operator-() const {
  TowerElem out = *this;
  for (auto& [m, c] : out.coef) c = -c;
  return out;
}

TowerElem TowerElem::operator*(const TowerElem& o) const {
  TowerElem out(tw ? tw : o.tw);
  for (const auto& [m1, c1] : coef)
    for (const auto& [m2, c2] : o.coef) {
      Rational c = c1 * c2;
      std::uint32_t common = m1 & m2;
      for (int j = 0; common >> j; ++j)
        if (common & (1u << j)) c *= out.tw->value(j);
      out.add_term(m1 ^ m2, c);
    }
  return out;
}

TowerElem TowerElem::operator*(const Rational& c) const {
  TowerElem out(tw);
  if (c == 0) return out;
  for (const auto& [m, cc] : coef) out.coef[m] = cc * c;
  return out;
}

TowerElem TowerElem::inverse() const {
  if (is_zero()) throw NotInvertible("zero tower element");
  if (is_rational()) {
    TowerElem out(tw);
    out.coef[0] = 1 / rational_part();
    return out;
  }
  const int k = tw->size();
  // product of all nontrivial conjugates
  TowerElem prod(tw, Rational(1));
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    std::vector<int> signs(k, 1);
    for (int j = 0; j < k; ++j)
      if (mask & (1u << j)) signs[j] = -1;
    prod = prod * GaloisAction(signs)(*this);
  }
  TowerElem n = *this * prod;
  if (!n.is_rational() || n.rational_part() == 0)
    throw NotInvertible("tower element has zero norm: " + str());
  return prod * (1 / n.rational_part());
}

bool TowerElem::operator==(const TowerElem& o) const { return coef == o.coef; }

std::string TowerElem::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : coef) {
    if (!first) os << " + ";
    first = false;
    os << rat_str(c);
    for (int j = 0; tw && m >> j; ++j)
      if (m & (1u << j)) os << "*" << tw->name(j);
  }
  return os.str();
}

TowerElem sqrt_in(const TowerPtr& t, const Rational& v) {
  if (v == 0) return TowerElem(t, Rational(0));
  std::set<long> sig = square_class_signature(v);
  const int k = t->size();
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    std::set<long> acc;
    Rational prod(1);
    for (int j = 0; j < k; ++j)
      if (mask & (1u << j)) {
        acc = sig_xor(acc, t->signature(j));
        prod *= t->value(j);
      }
    if (acc != sig) continue;
    Rational ratio = v / prod;  // a square of a rational
    mpz_class num = ratio.get_num(), den = ratio.get_den();
    if (num < 0 || !mpz_perfect_square_p(num.get_mpz_t()) ||
        !mpz_perfect_square_p(den.get_mpz_t()))
      continue;
    mpz_class sn, sd;
    mpz_sqrt(sn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(sd.get_mpz_t(), den.get_mpz_t());
    TowerElem out(t);
    Rational c(sn, sd);
    c.canonicalize();
    out.coef[mask] = c;
    return out;
  }
  throw DependentRadicals("sqrt(" + rat_str(v) + ") is not in the tower");
}

GaloisAction::GaloisAction(std::vector<int> s) : signs(std::move(s)) {
  for (int v : signs)
    if (v != 1 && v != -1) throw std::invalid_argument("Galois signs must be +-1");
}

GaloisAction GaloisAction::flip_only(const TowerPtr& t, const std::vector<std::string>& names) {
  std::vector<int> s(t->size(), 1);
  for (const std::string& n : names) s[t->index_of(n)] = -1;
  return GaloisAction(std::move(s));
}

TowerElem GaloisAction::operator()(const TowerElem& e) const {
  TowerElem out(e.tw);
  for (const auto& [m, c] : e.coef) {
    int sgn = 1;
    for (size_t j = 0; j < signs.size(); ++j)
      if (m & (1u << j)) sgn *= signs[j];
    out.coef[m] = sgn == 1 ? c : Rational(-c);
  }
  return out;
}

TowerMatrix::TowerMatrix(TowerPtr t, int r, int c)
    : tw(std::move(t)), rows(r), cols(c),
      a(r, std::vector<TowerElem>(c, TowerElem(nullptr))) {
  for (auto& row : a)
    for (auto& e : row) e = TowerElem(tw, Rational(0));
}

TowerMatrix TowerMatrix::identity(const TowerPtr& t, int n) {
  TowerMatrix m(t, n, n);
  for (int k = 0; k < n; ++k) m.a[k][k] = TowerElem(t, Rational(1));
  return m;
}

TowerMatrix TowerMatrix::from_rationals(const TowerPtr& t,
                                        const std::vector<std::vector<Rational>>& entries) {
  TowerMatrix m(t, static_cast<int>(entries.size()),
                static_cast<int>(entries.empty() ? 0 : entries[0].size()));
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c) m.a[r][c] = TowerElem(t, entries[r][c]);
  return m;
}

TowerMatrix TowerMatrix::operator+(const TowerMatrix& o) const {
  TowerMatrix out = *this;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) out.a[r][c] = out.a[r][c] + o.a[r][c];
  return out;
}

TowerMatrix TowerMatrix::operator-(const TowerMatrix& o) const {
  TowerMatrix out = *this;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) out.a[r][c] = out.a[r][c] - o.a[r][c];
  return out;
}

TowerMatrix TowerMatrix::operator*(const TowerMatrix& o) const {
  if (cols != o.rows) throw std::invalid_argument("matrix shape mismatch");
  TowerMatrix out(tw, rows, o.cols);
  for (int r = 0; r < rows; ++r)
    for (int k = 0; k < cols; ++k) {
      if (a[r][k].is_zero()) continue;
      for (int c = 0; c < o.cols; ++c)
        out.a[r][c] = out.a[r][c] + a[r][k] * o.a[k][c];
    }
  return out;
}

TowerMatrix TowerMatrix::operator*(const TowerElem& c) const {
  TowerMatrix out = *this;
  for (auto& row : out.a)
    for (auto& e : row) e = e * c;
  return out;
}

TowerMatrix TowerMatrix::transpose() const {
  TowerMatrix out(tw, cols, rows);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) out.a[c][r] = a[r][c];
  return out;
}

TowerMatrix TowerMatrix::inverse() const {
  if (rows != cols) throw std::invalid_argument("inverse of non-square matrix");
  TowerMatrix aug = *this;
  TowerMatrix inv = identity(tw, rows);
  for (int col = 0; col < cols; ++col) {
    int pr = col;
    while (pr < rows && aug.a[pr][col].is_zero()) ++pr;
    if (pr == rows) throw NotInvertible("singular tower matrix");
    std::swap(aug.a[pr], aug.a[col]);
    std::swap(inv.a[pr], inv.a[col]);
    TowerElem piv = aug.a[col][col].inverse();
    for (int c = 0; c < cols; ++c) {
      aug.a[col][c] = aug.a[col][c] * piv;
      inv.a[col][c] = inv.a[col][c] * piv;
    }
    for (int r = 0; r < rows; ++r) {
      if (r == col || aug.a[r][col].is_zero()) continue;
      TowerElem f = aug.a[r][col];
      for (int c = 0; c < cols; ++c) {
        aug.a[r][c] = aug.a[r][c] - f * aug.a[col][c];
        inv.a[r][c] = inv.a[r][c] - f * inv.a[col][c];
      }
    }
  }
  return inv;
}

bool TowerMatrix::operator==(const TowerMatrix& o) const {
  if (rows != o.rows || cols != o.cols) return false;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      if (!(a[r][c] == o.a[r][c])) return false;
  return true;
}

bool TowerMatrix::is_zero() const {
  for (const auto& row : a)
    for (const auto& e : row)
      if (!e.is_zero()) return false;
  return true;
}

bool TowerMatrix::is_identity() const {
  if (rows != cols) return false;
  return *this == identity(tw, rows);
}

TowerMatrix TowerMatrix::galois(const GaloisAction& g) const {
  TowerMatrix out = *this;
  for (auto& row : out.a)
    for (auto& e : row) e = g(e);
  return out;
}

std::string TowerMatrix::str() const {
  std::ostringstream os;
  for (int r = 0; r < rows; ++r) {
    os << "[";
    for (int c = 0; c < cols; ++c) {
      if (c) os << ", ";
      os << a[r][c].str();
    }
    os << "]\n";
  }
  return os.str();
}

}  // namespace theta::tower
