// Orbit closures in the queer Grassmannian QGr(r, n) as decorated fans, and
// the polytope-side picture of such fans: hypersimplices and their face
// decorations, support patterns of big-cell points, stabilizer subalgebras
// and the translation between decorated polytopes and decorated fans.
#pragma once

#include <cstddef>
#include <vector>

#include "tsv/decofan.hpp"
#include "tsv/linalg.hpp"
#include "tsv/superlie.hpp"

namespace tsv::qgr {

using linalg::RatMat;
using superlie::Subspace;

// Zero/nonzero shape of the n x r coefficient matrix of a big-cell point of
// QGr(r, n), normalized so that the top r x r block is the identity pattern.
struct SupportPattern {
  std::size_t n = 0;
  std::size_t r = 0;
  std::vector<std::vector<int>> rows;  // n rows of length r, entries 0 or 1

  // Throws PreconditionError on shape mismatches, entries outside {0, 1} or
  // a top block different from the identity.
  void validate() const;

  // Identity block on top, every entry below it nonzero.
  static SupportPattern generic(std::size_t r, std::size_t n);
};

// Stabilizer of a point with the given support pattern inside Q(1)^n: the
// coordinates split into the connected components of the pattern's support
// graph, and the stabilizer is spanned by one x-sum and one theta-sum per
// component.
struct PatternStabilizer {
  std::vector<std::vector<std::size_t>> blocks;  // partition of 0..n-1
  Subspace even;  // span of the block indicator vectors in QQ^n
  Subspace odd;   // the matching theta-sums, same coordinates
};

PatternStabilizer stabilizer_from_pattern(const SupportPattern& sp);

// A face of a decorated polytope: the vertices it contains together with the
// subspace of odd characters attached to its relative interior.
struct PolytopeFace {
  std::vector<std::size_t> vertex_ids;  // ascending indices into vertices
  Subspace w;                           // subspace of the ambient dual space

  bool operator==(const PolytopeFace& other) const {
    return vertex_ids == other.vertex_ids && w == other.w;
  }
};

// A polytope in QQ^n with one decoration subspace per face; the polytope-side
// picture of a large-orbit decorated fan.
struct DecoratedPolytope {
  std::size_t ambient = 0;
  RatMat vertices;
  std::vector<PolytopeFace> faces;  // each face once, ordered by (size, ids)
};

// The hypersimplex {x in [0,1]^n : sum x = r}, every face F decorated by
// W_F = {w : sum w = 0 and w_i = 0 whenever coordinate i is constant on F}.
DecoratedPolytope hypersimplex_polytope(std::size_t r, std::size_t n);

// Decorated fan of the closure of the Q(1)^n orbit through a big-cell point
// with the given support pattern.  The fan is the inner normal fan of the
// orbit polytope conv{e_B : B a column basis of the pattern} inside the
// quotient lattice modulo the stabilizer blocks; each ray is decorated at
// level 0 by the odd line through its own primitive generator, and the torus
// is the quotient Q(1)^d carried by the coordinates complementary to the
// blocks.
decofan::DecoratedFan orbit_closure_fan(const SupportPattern& sp);

// Rebuilds the decorated fan whose polytope-side picture is dp: the inner
// normal fan of conv(vertices) in the quotient lattice of the direction
// space, with each ray decorated by the annihilator of the W subspace of its
// facet.  Throws PreconditionError when the face decorations are not the
// ones this fan induces back on dp, so a successful return certifies the
// roundtrip identity.
decofan::DecoratedFan polytope_fan_roundtrip(const DecoratedPolytope& dp);

}  // namespace tsv::qgr
