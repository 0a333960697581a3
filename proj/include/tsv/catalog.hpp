// Ready-made decorated fans and charts used across tests, documentation and
// the example data files: small fixtures that exercise every verdict the
// library computes.
#pragma once

#include <cstddef>

#include "tsv/decofan.hpp"

namespace tsv::catalog {

// Solid orthant in rank 3 over the abelian (3|4) supertorus. The three rays
// carry full-length interleaved chains, so the cone's weight space at
// m = (5, 5, 5) is 6-dimensional and contains the indecomposable element
// xi_1 xi_2 + xi_3 xi_4: the space is not spanned by induced invariants.
decofan::DecoratedFan interleaved_chains();

// Single ray (1) over the abelian (1|4) supertorus with odd twists
// t, t, t, t^2: the chain is full > span(theta_4) > 0 and the chart algebra
// is C[t, t xi_1, t xi_2, t xi_3, t^2 xi_4].
decofan::DecoratedFan quartet_ray_fan();

// The twisted sibling of quartet_ray_fan's chart: identical shape, but the
// weight-2 odd generator is xi_4 + xi_1 xi_2 xi_3. Cohomology at theta_1
// stops looking free at weight 2, which tells the two algebras apart.
decofan::SuperPresentation quartet_twisted_chart();

// Solid orthant in rank 3 over the abelian (3|2) supertorus whose rays carry
// the lines theta_1 - theta_2, theta_1 and theta_2. No basis of the odd part
// is adapted to all three lines, so the supervariety is singular although
// the underlying toric variety is affine 3-space.
decofan::DecoratedFan entangled_lines();

// Subdivision of entangled_lines at the new ray (1, 1, 1), decorated by the
// zero chain: every maximal cone now sees at most two of the lines, and the
// result is a smooth resolution.
decofan::DecoratedFan entangled_lines_subdivided();

// Complete fan of projective n-space: rays x_1..x_n and -(x_1 + ... + x_n),
// one maximal cone per omitted ray.
lattice::Fan projective_fan(std::size_t n);

// Projective superspace P^{n|n} over Q(1)^n: ray x_i carries the sign line
// C theta_i and the last ray is undecorated.
decofan::DecoratedFan projective_superspace(std::size_t n);

// The same geometry over the abelian (n|n) supertorus, with rational chains
// C theta_i > 0 instead of sign lines: a smooth decorated fan.
decofan::DecoratedFan projective_superspace_abelian(std::size_t n);

// The same fan with every ray undecorated, the base point for enumerating
// all square-root decorations.
decofan::DecoratedFan projective_blank(std::size_t n);

// Cone spanned by (1,1,0) and (1,0,1) over Q(1)^3, undecorated. The column
// matroid of the two rays contains a 3-circuit, so enumeration never
// decorates both rays at once.
decofan::DecoratedFan obstructed_pair();

}  // namespace tsv::catalog
