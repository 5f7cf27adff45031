#pragma once

#include <gmpxx.h>

#include <ostream>
#include <stdexcept>
#include <string>

namespace theta {

// All arithmetic in this project is exact. Rationals are GMP rationals,
// always kept in canonical form by mpq_class.
using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// Parses "n" or "n/d".
inline Rational rat_parse(const std::string& s) {
  Rational q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
  q.canonicalize();
  return q;
}

inline std::string rat_str(const Rational& q) { return q.get_str(); }

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

// Element of Q(i), i^2 = -1.
struct GaussianRational {
  Rational re, im;

  GaussianRational() : re(0), im(0) {}
  GaussianRational(Rational r) : re(std::move(r)), im(0) {}
  GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  static GaussianRational unit_i() { return {Rational(0), Rational(1)}; }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }

  GaussianRational conj() const { return {re, -im}; }

  Rational norm() const { return re * re + im * im; }

  GaussianRational operator-() const { return {-re, -im}; }
  GaussianRational operator+(const GaussianRational& o) const { return {re + o.re, im + o.im}; }
  GaussianRational operator-(const GaussianRational& o) const { return {re - o.re, im - o.im}; }
  GaussianRational operator*(const GaussianRational& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  GaussianRational inverse() const {
    Rational n = norm();
    if (n == 0) throw std::domain_error("division by zero GaussianRational");
    return {re / n, -im / n};
  }
  GaussianRational operator/(const GaussianRational& o) const { return *this * o.inverse(); }

  GaussianRational& operator+=(const GaussianRational& o) { re += o.re; im += o.im; return *this; }
  GaussianRational& operator-=(const GaussianRational& o) { re -= o.re; im -= o.im; return *this; }
  GaussianRational& operator*=(const GaussianRational& o) { *this = *this * o; return *this; }

  bool operator==(const GaussianRational& o) const { return re == o.re && im == o.im; }
  bool operator!=(const GaussianRational& o) const { return !(*this == o); }
  bool operator<(const GaussianRational& o) const {
    if (re != o.re) return re < o.re;
    return im < o.im;
  }
};

inline std::ostream& operator<<(std::ostream& os, const GaussianRational& g) {
  os << rat_str(g.re);
  if (g.im != 0) os << (g.im > 0 ? "+" : "") << rat_str(g.im) << "i";
  return os;
}

// Exact fourth root of unity i^k. Packet-character values live here.
struct FourthRoot {
  int k = 0;  // value is i^k, k in 0..3

  FourthRoot() = default;
  explicit FourthRoot(int kk) : k(((kk % 4) + 4) % 4) {}

  static FourthRoot one() { return FourthRoot(0); }
  static FourthRoot i() { return FourthRoot(1); }
  static FourthRoot minus_one() { return FourthRoot(2); }
  static FourthRoot minus_i() { return FourthRoot(3); }
  static FourthRoot from_sign(int s) {
    if (s == 1) return one();
    if (s == -1) return minus_one();
    throw std::invalid_argument("sign must be +-1");
  }

  FourthRoot operator*(const FourthRoot& o) const { return FourthRoot(k + o.k); }
  FourthRoot pow(long e) const { return FourthRoot(static_cast<int>(((k * (e % 4)) % 4 + 4) % 4)); }
  FourthRoot conj() const { return FourthRoot(4 - k); }
  FourthRoot inverse() const { return conj(); }

  bool is_real() const { return k % 2 == 0; }
  int real_sign() const {
    if (!is_real()) throw std::domain_error("fourth root is not real");
    return k == 0 ? 1 : -1;
  }

  GaussianRational value() const {
    switch (k) {
      case 0: return GaussianRational(Rational(1));
      case 1: return GaussianRational(Rational(0), Rational(1));
      case 2: return GaussianRational(Rational(-1));
      default: return GaussianRational(Rational(0), Rational(-1));
    }
  }

  bool operator==(const FourthRoot& o) const { return k == o.k; }
  bool operator!=(const FourthRoot& o) const { return k != o.k; }
};

inline std::ostream& operator<<(std::ostream& os, const FourthRoot& r) {
  static const char* names[4] = {"1", "i", "-1", "-i"};
  return os << names[r.k];
}

}  // namespace theta
