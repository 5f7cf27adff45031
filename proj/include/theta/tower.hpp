#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "theta/rational.hpp"

// Exact arithmetic in Q[s_1..s_k]/(s_j^2 - v_j) for square-class independent
// radical values v_j, with configurable sign Galois actions, plus dense
// matrices over the tower.
namespace theta::tower {

struct NotInvertible : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DependentRadicals : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TowerElem;

// The square class of a nonzero rational: sign and primes of odd exponent.
std::set<long> square_class_signature(const Rational& v);

class Tower {
 public:
  // Radical values must be nonzero and square-class independent.
  static std::shared_ptr<const Tower> make(std::vector<std::pair<std::string, Rational>> radicals);

  int size() const { return static_cast<int>(vals_.size()); }
  const Rational& value(int j) const { return vals_[j]; }
  const std::string& name(int j) const { return names_[j]; }
  int index_of(const std::string& name) const;
  const std::set<long>& signature(int j) const { return sigs_[j]; }

 private:
  std::vector<Rational> vals_;
  std::vector<std::string> names_;
  std::vector<std::set<long>> sigs_;
};

using TowerPtr = std::shared_ptr<const Tower>;

struct TowerElem {
  TowerPtr tw;
  std::map<std::uint32_t, Rational> coef;  // radical subset mask -> coefficient

  TowerElem() = default;
  explicit TowerElem(TowerPtr t) : tw(std::move(t)) {}
  TowerElem(TowerPtr t, const Rational& c);

  static TowerElem radical(const TowerPtr& t, int j);

  bool is_zero() const { return coef.empty(); }
  bool is_rational() const;
  Rational rational_part() const;

  void add_term(std::uint32_t mask, const Rational& c);

  TowerElem operator+(const TowerElem& o) const;
  TowerElem operator-(const TowerElem& o) const;
  TowerElem operator-() const;
  TowerElem operator*(const TowerElem& o) const;
  TowerElem operator*(const Rational& c) const;
  TowerElem inverse() const;  // via the full conjugate product
  TowerElem operator/(const TowerElem& o) const { return *this * o.inverse(); }
  bool operator==(const TowerElem& o) const;
  bool operator!=(const TowerElem& o) const { return !(*this == o); }

  std::string str() const;
};

// sqrt(v) expressed in the tower (rational multiple of a radical subset);
// throws DependentRadicals if v's square class is not generated.
TowerElem sqrt_in(const TowerPtr& t, const Rational& v);

// Ring automorphism s_j -> signs[j] * s_j.
struct GaloisAction {
  std::vector<int> signs;  // +-1 per radical

  explicit GaloisAction(std::vector<int> s);
  static GaloisAction flip_only(const TowerPtr& t, const std::vector<std::string>& names);

  TowerElem operator()(const TowerElem& e) const;
};

struct TowerMatrix {
  TowerPtr tw;
  int rows = 0, cols = 0;
  std::vector<std::vector<TowerElem>> a;

  TowerMatrix() = default;
  TowerMatrix(TowerPtr t, int r, int c);

  static TowerMatrix identity(const TowerPtr& t, int n);
  static TowerMatrix from_rationals(const TowerPtr& t,
                                    const std::vector<std::vector<Rational>>& entries);

  TowerElem& at(int r, int c) { return a[r][c]; }
  const TowerElem& at(int r, int c) const { return a[r][c]; }

  TowerMatrix operator+(const TowerMatrix& o) const;
  TowerMatrix operator-(const TowerMatrix& o) const;
  TowerMatrix operator*(const TowerMatrix& o) const;
  TowerMatrix operator*(const TowerElem& c) const;
  TowerMatrix transpose() const;
  TowerMatrix inverse() const;  // throws NotInvertible
  bool operator==(const TowerMatrix& o) const;
  bool is_zero() const;
  bool is_identity() const;

  TowerMatrix galois(const GaloisAction& g) const;
  std::string str() const;
};

}  // namespace theta::tower
