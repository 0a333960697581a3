#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tsv/lattice.hpp"
#include "tsv/superlie.hpp"

namespace tsv::exterior {

using Mask = std::uint64_t;
using lattice::IntVec;
using linalg::RatVec;

// Element of an exterior algebra on generators xi_1..xi_q, q <= 62. Bit i of
// a mask selects xi_{i+1}; monomials are ordered with ascending indices and
// multiplication follows the usual alternating sign.
struct ExteriorElement {
  std::map<Mask, Rat> terms;  // never stores zero coefficients

  static ExteriorElement zero() { return {}; }
  static ExteriorElement one() { return monomial(0, Rat(1)); }
  static ExteriorElement monomial(Mask mask, Rat coeff = Rat(1));
  static ExteriorElement generator(std::size_t i);  // xi_{i+1}, i zero-based

  bool is_zero() const { return terms.empty(); }
  void add_term(Mask mask, const Rat& coeff);

  bool operator==(const ExteriorElement& other) const { return terms == other.terms; }
  bool operator!=(const ExteriorElement& other) const { return !(*this == other); }
};

ExteriorElement add(const ExteriorElement& a, const ExteriorElement& b);
ExteriorElement scale(const Rat& c, const ExteriorElement& e);
ExteriorElement wedge(const ExteriorElement& a, const ExteriorElement& b);
// Left partial derivative with respect to xi_{i+1} (i zero-based).
ExteriorElement partial(std::size_t i, const ExteriorElement& e);
std::string to_string(const ExteriorElement& e);

// Exterior part of the right-regular action of theta on t^m e, divided by
// t^m: sum_j theta_j (sum_k xi_k <m, x_kj> ^ e + d/dxi_j e).
ExteriorElement right_derivation(const superlie::SupertorusData& t, const RatVec& theta,
                                 const IntVec& m, const ExteriorElement& e);

// Left-regular counterpart sum_j theta_j (sum_k xi_k <m, x_jk> ^ e - d/dxi_j e);
// exposed for cross-checks only (left and right actions anticommute).
ExteriorElement left_derivation(const superlie::SupertorusData& t, const RatVec& theta,
                                const IntVec& m, const ExteriorElement& e);

// A single even-torus weight component with an exact basis, kept in reduced
// row echelon form over the touched monomials (ascending mask order).
struct WeightSpace {
  IntVec weight;  // character of the even torus, length p
  std::size_t q = 0;
  std::vector<ExteriorElement> basis;

  std::size_t dim() const { return basis.size(); }
  bool operator==(const WeightSpace& other) const {
    return weight == other.weight && q == other.q && basis == other.basis;
  }
};

WeightSpace make_weight_space(IntVec weight, std::size_t q,
                              const std::vector<ExteriorElement>& generators);

// Joint kernel of right_derivation(theta, m, .) over a basis of W; the
// computation restricts to the generators actually touched by W and the
// pairing, then extends freely over the rest.
WeightSpace induced_weight_space(const superlie::SupertorusData& t, const superlie::Subspace& w,
                                 const IntVec& m);

// Exact meet of the spans; all weights must agree.
WeightSpace intersect_weight_spaces(const std::vector<WeightSpace>& spaces);

// True iff ws lies in the combined span of the generator spaces.
bool is_decomposably_generated(const WeightSpace& ws, const std::vector<WeightSpace>& generators);

}  // namespace tsv::exterior
