// Exact polyhedral geometry over integer lattices: cones (with lineality),
// dual cones, face lattices, Hilbert bases, Smith normal form, lattice
// quotients, semigroup generators, fans, and stellar refinement.
//
// Conventions: lattice elements are row vectors of arbitrary-precision
// integers.  A cone is stored in canonical V-form (primitive extremal rays,
// reduced modulo the lineality space and sorted lexicographically) together
// with its cached dual, so structural equality coincides with set equality.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tsv/linalg.hpp"
#include "tsv/rational.hpp"

namespace tsv::lattice {

using IntVec = std::vector<Int>;
using IntMat = std::vector<IntVec>;

Int dot(const IntVec& a, const IntVec& b);

// Divides out the gcd of the entries; orientation is preserved and the zero
// vector maps to itself.
IntVec primitive(IntVec v);

linalg::RatVec to_rat(const IntVec& v);
linalg::RatMat to_rat(const IntMat& m);

// Scales a rational vector by the unique positive factor making it a
// primitive integer vector (zero stays zero).
IntVec scale_primitive(const linalg::RatVec& x);

// Applies a k x n matrix (rows of length n) to a length-n vector.
IntVec map_vec(const IntMat& m, const IntVec& u);

// Row vector times matrix: v (length k) times m (k rows of length n).
IntVec row_times(const IntVec& v, const IntMat& m);

struct Cone {
  std::size_t rank = 0;   // ambient lattice rank
  IntMat rays;            // extremal rays: primitive, reduced mod lineality, lex sorted
  IntMat lineality;       // canonical (Hermite) basis of the lineality lattice
  IntMat dual_rays;       // extremal rays of the dual cone (facet normals)
  IntMat dual_lineality;  // basis of span(cone)^perp

  static Cone from_rays(std::size_t rank, IntMat generators, IntMat lineality = {});
  static Cone from_halfspaces(std::size_t rank, IntMat normals, IntMat equations = {});

  std::size_t dim() const;
  bool is_pointed() const { return lineality.empty(); }
  bool contains(const IntVec& v) const;
  bool contains(const Cone& other) const;
  bool operator==(const Cone& o) const {
    return rank == o.rank && rays == o.rays && lineality == o.lineality;
  }
};

Cone dual_cone(const Cone& c);

// The face {x in c : <m, x> = 0}; m must pair non-negatively with c.
Cone face_of(const Cone& c, const IntVec& m);

Cone intersect(const Cone& a, const Cone& b);

bool is_face_of(const Cone& f, const Cone& c);

// The whole face lattice of c, c itself included, deterministically ordered
// by (dimension, rays).
std::vector<Cone> faces(const Cone& c);

// Minimal generating set of the semigroup of lattice points of a pointed
// cone, via bounded zonotope enumeration.
IntMat hilbert_basis(const Cone& c);

// True iff the ray generators extend to a basis of the ambient lattice.
bool is_smooth_cone(const Cone& c);

struct SmithResult {
  IntMat d;             // diagonalized matrix, same shape as the input
  IntMat v, vinv;       // accumulated unimodular column transform and inverse
  std::size_t rank = 0; // number of nonzero diagonal entries
};
SmithResult smith(IntMat a, std::size_t cols);

// Canonical basis of the saturation (rational row span intersected with the
// integer lattice) of the given rows.
IntMat saturate(const IntMat& rows, std::size_t cols);

// Hermite-style canonical basis of the lattice generated by the rows; rows
// must be ZZ-independent.
IntMat hermite_basis(IntMat rows, std::size_t cols);

struct LatticeQuotient {
  IntMat proj;     // n x (n-k) column block: v maps to the row vector v*proj
  IntMat section;  // (n-k) x n lifts of the quotient basis, proj(section) = id
};
// Quotient of ZZ^n by the saturation of the span of the given rows.
LatticeQuotient quotient_by(const IntMat& sublattice_rows, std::size_t cols);

// Generators of the semigroup of lattice points of c.  For pointed cones this
// is the Hilbert basis; a lineality space contributes a lattice basis with
// both signs, and the pointed image modulo the lineality is lifted back.
IntMat semigroup_generators(const Cone& c);

// All sums of at most `bound` generators, zero included, deduplicated.
IntMat degree_test_set(const IntMat& gens, unsigned bound);

struct Fan {
  std::size_t rank = 0;
  IntMat rays;                                  // primitive, deduplicated
  std::vector<std::vector<std::size_t>> cones;  // sorted ray-index sets
};

// Throws PreconditionError when the data does not describe a fan: rays must
// be primitive, distinct and used; listed cones must be strongly convex with
// exactly the listed rays extremal; pairwise intersections must be common
// faces.
void validate_fan(const Fan& f);

struct FanCone {
  Cone cone;
  std::vector<std::size_t> ray_ids;
};

// Every face of every listed cone (zero cone included), deduplicated and
// deterministically ordered by (dimension, ray ids).
std::vector<FanCone> all_cones(const Fan& f);

bool support_contains(const Fan& f, const IntVec& v);

// Stellar subdivision at the ray through v (v must be primitive up to scale
// and lie in the support; cones not containing v are untouched).
Fan star_subdivide(const Fan& f, IntVec v);

// Refinement with the same support in which every maximal cone is smooth and
// contains at most one ray of the input fan; input rays are preserved.
Fan refine_fan(const Fan& f);

}  // namespace tsv::lattice
