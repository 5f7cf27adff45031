#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "theta/padicsym.hpp"

using namespace theta;
using namespace theta::padicsym;

namespace {

std::vector<SquareClass> all_classes(long p) {
  std::vector<SquareClass> out;
  for (int v : {0, 1})
    for (int u : {0, 1}) out.emplace_back(p, v, u);
  return out;
}

std::vector<int> random_antisymmetric(long N, std::mt19937& rng) {
  std::vector<int> s(N, 0);
  for (long k = 1; 2 * k < N; ++k) {
    int v = (rng() & 1) ? 1 : -1;
    s[k] = v;
    s[N - k] = -v;
  }
  return s;
}

}  // namespace

TEST_CASE("legendre and nonresidues") {
  CHECK(least_nonresidue(5) == 2);
  CHECK(least_nonresidue(7) == 3);
  CHECK(legendre(2, 5) == -1);
  CHECK(legendre(4, 5) == 1);
  CHECK(legendre(2, 7) == 1);
}

TEST_CASE("hilbert symbol basics") {
  SquareClass one(5, 0, 0), u(5, 0, 1), p(5, 1, 0);
  CHECK(hilbert_symbol(one, u) == 1);
  CHECK(hilbert_symbol(one, p) == 1);
  // (p, u)_5 = legendre(u) = -1
  CHECK(hilbert_symbol(p, u) == -1);
}

TEST_CASE("hilbert symbol is symmetric and matches the oracle") {
  for (long p : {3L, 5L, 7L}) {
    auto cls = all_classes(p);
    for (const auto& x : cls)
      for (const auto& y : cls) {
        int fast = hilbert_symbol(x, y);
        CHECK(fast == hilbert_symbol(y, x));
        CHECK(fast == hilbert_symbol_oracle(x, y));
      }
  }
}

TEST_CASE("hilbert symbol is bilinear and satisfies (x, -x) = 1") {
  for (long p : {3L, 5L, 7L}) {
    auto cls = all_classes(p);
    for (const auto& x : cls)
      for (const auto& y : cls)
        for (const auto& z : cls)
          CHECK(hilbert_symbol(x * y, z) == hilbert_symbol(x, z) * hilbert_symbol(y, z));
    // -x as a square class
    SquareClass minus(p, 0, legendre(p - 1, p) == -1 ? 1 : 0);
    for (const auto& x : cls) CHECK(hilbert_symbol(x, minus * x) == 1);
  }
}

TEST_CASE("transfer ratio is -1 on every division pair") {
  int division_pairs = 0;
  for (long p : {3L, 5L, 7L}) {
    auto cls = all_classes(p);
    for (const auto& a : cls)
      for (const auto& b : cls) {
        if (hilbert_symbol(a, b) == -1) {
          CHECK(transfer_ratio(a, b) == -1);
          ++division_pairs;
        } else {
          CHECK_THROWS_AS(transfer_ratio(a, b), NotDivision);
        }
      }
  }
  CHECK(division_pairs > 10);
}

TEST_CASE("coefficient chain") {
  std::mt19937 rng(43);
  {
    FiniteCharacterModel model(5, 1, random_antisymmetric(5, rng));
    auto [cp, cm] = coefficient_chain(model, 1);
    CHECK(cp == Rational(-1));
    CHECK(cm == Rational(1));
  }
  {
    FiniteCharacterModel model(8, 1, random_antisymmetric(8, rng));
    auto [cp, cm] = coefficient_chain(model, -1);
    CHECK(cp == Rational(1));
    CHECK(cm == Rational(-1));
  }
  CHECK_THROWS_AS(coefficient_chain(FiniteCharacterModel(5, 0, random_antisymmetric(5, rng)), 1),
                  TrivialEta);
  CHECK_THROWS_AS(coefficient_chain(FiniteCharacterModel(8, 4, random_antisymmetric(8, rng)), 1),
                  EtaOrderTwo);
}

TEST_CASE("coefficient chain is independent of N and the sign function") {
  std::mt19937 rng(47);
  for (long N : {5L, 8L, 12L}) {
    for (int trial = 0; trial < 20; ++trial) {
      long eta = 1 + (rng() % (N - 1));
      if ((2 * eta) % N == 0) continue;
      for (int ps : {1, -1}) {
        FiniteCharacterModel model(N, eta, random_antisymmetric(N, rng));
        auto [cp, cm] = coefficient_chain(model, ps);
        CHECK(cp == Rational(-ps));
        CHECK(cm == Rational(ps));
      }
    }
  }
}

TEST_CASE("sign function validation") {
  std::vector<int> bad(5, 1);  // not antisymmetric
  CHECK_THROWS_AS(FiniteCharacterModel(5, 1, bad), std::invalid_argument);
}
