#pragma once

#include <optional>
#include <vector>

#include "theta/fockmodel.hpp"
#include "theta/rootcomb.hpp"

// Brute-force minimal-degree search in the truncated classical Fock space for
// the compact-orthogonal dual pair: polynomials in u_aj, v_aj (rows a <= m,
// Witt columns j <= n) carrying commuting so(2n) and gl(m) actions and the
// row-pair Laplacians.  Used as the independent oracle for the minimal-degree
// K-type combinatorics.
namespace kv_oracle {

struct Occurrence {
  int degree = 0;
  std::vector<long> gl_weight;  // highest weight of the paired gl(m) type
};

// Searches degrees 0..degree_cap for the orthogonal type with highest weight
// `nu` (length n, decreasing, >= 0) and sign `signature` (+1/-1; ignored when
// nu_n > 0).  Returns the first occurrence inside the harmonics together with
// the gl(m) highest weight of its partner, or nothing if it does not occur.
std::optional<Occurrence> minimal_occurrence(int m, int n, const std::vector<long>& nu,
                                             int signature, int degree_cap);

}  // namespace kv_oracle
