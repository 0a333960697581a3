#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "tsv/exterior.hpp"
#include "tsv/lattice.hpp"
#include "tsv/superlie.hpp"

namespace tsv::decofan {

using lattice::Fan;
using lattice::IntMat;
using lattice::IntVec;
using linalg::RatMat;
using superlie::DecorationChain;
using superlie::Subspace;
using superlie::SupertorusData;

// Square-root decoration on a ray of a Q(1)^n fan: the line spanned by
// sum_i eps_i sqrt(u_i) theta_i over the support of the primitive ray
// vector u, with eps the stored sign vector. Level 0 carries the line and
// all deeper levels equal h = 0.
struct SignDecoration {
  std::vector<int> signs;  // length q, entries in {-1, 0, +1}

  bool is_zero() const {
    for (int s : signs)
      if (s != 0) return false;
    return true;
  }
  bool operator==(const SignDecoration& other) const { return signs == other.signs; }
};

struct RayDecoration {
  bool sign_mode = false;
  DecorationChain chain;  // rational case
  SignDecoration signs;   // square-root case

  static RayDecoration of_chain(DecorationChain c) { return {false, std::move(c), {}}; }
  static RayDecoration of_signs(SignDecoration s) { return {true, {}, std::move(s)}; }
  bool operator==(const RayDecoration& other) const {
    return sign_mode == other.sign_mode && chain == other.chain && signs == other.signs;
  }
};

struct DecoratedFan {
  SupertorusData torus;
  Subspace h;  // odd subalgebra the chains stabilize at; ambient dimension q
  Fan fan;
  std::vector<RayDecoration> decorations;  // aligned with fan.rays

  bool has_sign_decorations() const {
    for (const RayDecoration& d : decorations)
      if (d.sign_mode && !d.signs.is_zero()) return true;
    return false;
  }
};

struct ValidityFailure {
  std::string condition;             // "a", "b" or "c"
  std::vector<std::size_t> ray_ids;  // the cone or ray involved
  IntVec m;                          // character witness when applicable
  std::string detail;
};

struct ValidityReport {
  bool valid = false;
  std::string mode;  // "general" or "large_orbit"
  long long degree_bound = 2;
  std::vector<std::string> structural_errors;
  std::vector<ValidityFailure> failures;
};

// Checks the decorated-fan compatibility conditions. In general mode
// condition (b) searches for a subspace witness of the dimension-jumping
// property per cone and character; in large_orbit mode it is replaced by the
// pairwise bracket condition and codim(h, V_{rho,0}) <= 1. The character
// quantifier runs over the dual-cone semigroup generators and their sums of
// at most degree_bound terms, so a passing report is "verified up to bound".
ValidityReport validate(const DecoratedFan& df, const std::string& mode,
                        long long degree_bound = 2);

// V_{sigma,m} = h + sum over the cone's rays of V_{rho, <m, u_rho>}.
Subspace cone_decoration(const DecoratedFan& df, const std::vector<std::size_t>& cone_rays,
                         const IntVec& m);

// The dimension-jumping property DJ(sigma, m) for W inside V_{sigma,0}:
// (a) <m,[W,W]> = 0, (b) V_{rho,m} contained in W for every ray, and
// (c) sum_{i<n}(dim V_{rho,i} - dim V_{rho,i} ^ W) <= n with n = <m,u_rho>.
bool dj_check(const DecoratedFan& df, const std::vector<std::size_t>& cone_rays, const IntVec& m,
              const Subspace& w);

struct SuperPresentation {
  std::size_t p = 0;
  std::size_t q = 0;
  std::vector<std::pair<IntVec, bool>> even_gens;  // (character, invertible)
  std::vector<std::pair<IntVec, exterior::ExteriorElement>> odd_gens;  // t^char * element
  // Chart gauge: row j is the flag basis vector theta_j in ambient odd
  // coordinates; free coordinates first, then ascending twist, h last.
  RatMat flag_basis;
  std::vector<long long> ell;  // twist exponent per non-h chart coordinate
};

// The chart presentation of a single ray in the normal form
// C[t^m1, lineality^{+-1}, xi_free, t1^{ell_j} xi_j].
SuperPresentation ray_chart(const DecoratedFan& df, std::size_t ray_index);

// Weight-m component of a single ray chart, expressed in the ambient odd
// coordinates: the span of xi_S with sum of twists at most <m, u_rho>.
exterior::WeightSpace ray_weight_space(const DecoratedFan& df, std::size_t ray_index,
                                       const IntVec& m);

// Weight-m component over a cone: intersection of the ray components, or the
// h-invariants of the open orbit when the cone is {0}.
exterior::WeightSpace sigma_weight_space(const DecoratedFan& df,
                                         const std::vector<std::size_t>& cone_rays,
                                         const IntVec& m);

struct StabilizerResult {
  Subspace even;  // span of the cone's rays in QQ^p
  Subspace odd;   // V_{sigma,0}
};
StabilizerResult orbit_stabilizer(const DecoratedFan& df,
                                  const std::vector<std::size_t>& cone_rays);

struct SmoothConeEntry {
  std::vector<std::size_t> ray_ids;
  // "smooth", "singular_cone", "no_adapted_basis", "bracket_failure" or "unknown"
  std::string status;
  std::vector<Subspace> witness;  // violating triple for the adapted-basis test
  std::string detail;
};

struct SmoothReport {
  std::string overall;  // "smooth", "not_smooth" or "unknown"
  std::vector<SmoothConeEntry> cones;

  bool smooth() const { return overall == "smooth"; }
};
SmoothReport smooth_check(const DecoratedFan& df);

struct MorphismData {
  IntMat lattice_map;   // p' x p integer matrix
  linalg::RatMat odd_map;  // q' x q rational matrix
};

struct Resolution {
  DecoratedFan refined;
  MorphismData morphism;  // identity pair from the refined fan to the input
};

// Smooth resolution: refines the fan, keeps original decorations and gives
// every new ray the constant chain h. Returns the input unchanged when it is
// already smooth.
Resolution resolve(const DecoratedFan& df);

/// Morphism verdict for large-orbit decorated fans: lattice map is a fan map,
// odd map restricts the bracket homomorphism condition, and
// dphi(V_{sigma, m' o phi}) lies in V_{sigma', m'} for the minimal covering
// cone and all m' up to the degree bound. Non-large-orbit inputs are
// rejected.
bool morphism_check(const DecoratedFan& src, const DecoratedFan& dst, const MorphismData& map,
                    long long degree_bound = 2);

struct KlyachkoFiltration {
  std::size_t q = 0;
  Subspace ambient;             // (t1/h)* = annihilator of h inside t1*
  std::vector<Subspace> steps;  // steps[i] = E(-i) = annihilator of V_{rho,i}

  Subspace at(long long i) const;  // E(i) for i <= 0, the zero space for i > 0
};

KlyachkoFiltration klyachko_export(const DecoratedFan& df, std::size_t ray_index);
DecorationChain klyachko_import(const KlyachkoFiltration& f);

// All valid square-root decorated fans over a Q(1)^n torus: each ray carries
// either zero or a sign vector on the support of its primitive generator
// (normalized so the first nonzero sign is +), filtered by
// validate(large_orbit).
std::vector<DecoratedFan> enumerate_decorations(const SupertorusData& torus, const Fan& fan);

}  // namespace tsv::decofan
