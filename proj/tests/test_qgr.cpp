#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstddef>
#include <vector>

#include "tsv/qgr.hpp"

using namespace tsv;
using namespace tsv::qgr;
using decofan::DecoratedFan;
using decofan::RayDecoration;
using lattice::IntVec;
using superlie::DecorationChain;
using superlie::Subspace;

namespace {

linalg::RatVec rv(std::vector<long long> entries) {
  linalg::RatVec v;
  for (long long e : entries) v.emplace_back(e);
  return v;
}

IntVec iv(std::vector<long long> entries) {
  IntVec v;
  for (long long e : entries) v.emplace_back(e);
  return v;
}

// The two-step chain "odd line, then zero" every orbit fan ray carries.
RayDecoration line_chain(std::size_t d, std::vector<long long> coeffs) {
  return RayDecoration::of_chain(
      DecorationChain{{Subspace(d, {rv(std::move(coeffs))}), Subspace::zero(d)}});
}

SupportPattern pattern_of(std::size_t r, std::vector<std::vector<int>> rows) {
  SupportPattern sp;
  sp.n = rows.size();
  sp.r = r;
  sp.rows = std::move(rows);
  return sp;
}

const PolytopeFace* face_with(const DecoratedPolytope& dp, std::vector<std::size_t> ids) {
  for (const PolytopeFace& f : dp.faces)
    if (f.vertex_ids == ids) return &f;
  return nullptr;
}

bool refines(const std::vector<std::vector<std::size_t>>& finer,
             const std::vector<std::vector<std::size_t>>& coarser) {
  for (const std::vector<std::size_t>& nb : finer) {
    bool inside = false;
    for (const std::vector<std::size_t>& ob : coarser)
      inside |= std::includes(ob.begin(), ob.end(), nb.begin(), nb.end());
    if (!inside) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("support pattern validation") {
  const SupportPattern sp = SupportPattern::generic(2, 4);
  CHECK(sp.rows == std::vector<std::vector<int>>{{1, 0}, {0, 1}, {1, 1}, {1, 1}});
  CHECK_NOTHROW(sp.validate());

  CHECK_THROWS_AS(SupportPattern::generic(2, 1).validate(), PreconditionError);
  SupportPattern bad = pattern_of(1, {{1}, {1}});
  bad.n = 3;
  CHECK_THROWS_AS(bad.validate(), PreconditionError);
  CHECK_THROWS_AS(pattern_of(1, {{1}, {1, 0}}).validate(), PreconditionError);
  CHECK_THROWS_AS(pattern_of(1, {{1}, {2}}).validate(), PreconditionError);
  CHECK_THROWS_AS(pattern_of(2, {{1, 1}, {0, 1}, {1, 0}}).validate(), PreconditionError);
  CHECK_THROWS_AS(pattern_of(2, {{0, 1}, {1, 0}, {1, 1}}).validate(), PreconditionError);
}

TEST_CASE("pattern stabilizers group coordinates by connected support") {
  const PatternStabilizer diag = stabilizer_from_pattern(SupportPattern::generic(1, 3));
  CHECK(diag.blocks == std::vector<std::vector<std::size_t>>{{0, 1, 2}});
  CHECK(diag.even == Subspace(3, {rv({1, 1, 1})}));
  CHECK(diag.odd == diag.even);

  const PatternStabilizer full = stabilizer_from_pattern(SupportPattern::generic(2, 2));
  CHECK(full.blocks == std::vector<std::vector<std::size_t>>{{0}, {1}});
  CHECK(full.even == Subspace::full(2));

  const PatternStabilizer mixed = stabilizer_from_pattern(pattern_of(1, {{1}, {1}, {0}}));
  CHECK(mixed.blocks == std::vector<std::vector<std::size_t>>{{0, 1}, {2}});
  CHECK(mixed.even.dim() == 2);
  CHECK(mixed.even.contains(rv({1, 1, 0})));
  CHECK(mixed.even.contains(rv({0, 0, 1})));
  CHECK_FALSE(mixed.even.contains(rv({1, 0, 0})));
  CHECK(mixed.odd.contains(rv({1, 1, 0})));

  CHECK(stabilizer_from_pattern(SupportPattern::generic(2, 4)).blocks ==
        std::vector<std::vector<std::size_t>>{{0, 1, 2, 3}});
}

TEST_CASE("zeroing pattern entries only refines the stabilizer blocks") {
  const SupportPattern base = SupportPattern::generic(2, 5);
  const PatternStabilizer coarse = stabilizer_from_pattern(base);
  for (std::size_t i = base.r; i < base.n; ++i)
    for (std::size_t j = 0; j < base.r; ++j) {
      SupportPattern sparser = base;
      sparser.rows[i][j] = 0;
      CHECK(refines(stabilizer_from_pattern(sparser).blocks, coarse.blocks));
    }

  SupportPattern twice = base;
  twice.rows[4][0] = twice.rows[4][1] = 0;
  const PatternStabilizer fine = stabilizer_from_pattern(twice);
  CHECK(fine.blocks == std::vector<std::vector<std::size_t>>{{0, 1, 2, 3}, {4}});
  CHECK(refines(fine.blocks, coarse.blocks));
}

TEST_CASE("hypersimplex polytopes carry face decorations") {
  const DecoratedPolytope segment = hypersimplex_polytope(1, 2);
  CHECK(segment.ambient == 2);
  CHECK(segment.vertices == linalg::RatMat{rv({0, 1}), rv({1, 0})});
  REQUIRE(segment.faces.size() == 3);
  CHECK(segment.faces[0].vertex_ids == std::vector<std::size_t>{0});
  CHECK(segment.faces[0].w == Subspace::zero(2));
  CHECK(segment.faces[1].vertex_ids == std::vector<std::size_t>{1});
  CHECK(segment.faces[1].w == Subspace::zero(2));
  CHECK(segment.faces[2].vertex_ids == std::vector<std::size_t>{0, 1});
  CHECK(segment.faces[2].w == Subspace(2, {rv({1, -1})}));

  const DecoratedPolytope point = hypersimplex_polytope(0, 4);
  CHECK(point.vertices == linalg::RatMat{rv({0, 0, 0, 0})});
  REQUIRE(point.faces.size() == 1);
  CHECK(point.faces[0].w == Subspace::zero(4));

  const DecoratedPolytope octa = hypersimplex_polytope(2, 4);
  CHECK(octa.vertices.size() == 6);
  CHECK(octa.vertices[1] == rv({0, 1, 0, 1}));
  CHECK(octa.faces.size() == 27);
  std::size_t counts[4] = {0, 0, 0, 0};
  const std::size_t w_dim_by_size[7] = {0, 0, 1, 2, 0, 0, 3};
  for (const PolytopeFace& f : octa.faces) {
    if (f.vertex_ids.size() == 1) ++counts[0];
    if (f.vertex_ids.size() == 2) ++counts[1];
    if (f.vertex_ids.size() == 3) ++counts[2];
    if (f.vertex_ids.size() == 6) ++counts[3];
    CHECK(f.w.dim() == w_dim_by_size[f.vertex_ids.size()]);
  }
  CHECK(counts[0] == 6);
  CHECK(counts[1] == 12);
  CHECK(counts[2] == 8);
  CHECK(counts[3] == 1);

  const PolytopeFace* edge = face_with(octa, {1, 3});
  REQUIRE(edge != nullptr);
  CHECK(edge->w == Subspace(4, {rv({1, -1, 0, 0})}));
  const PolytopeFace* facet = face_with(octa, {0, 1, 2});
  REQUIRE(facet != nullptr);
  CHECK(facet->w.dim() == 2);
  CHECK(facet->w.contains(rv({0, 1, -1, 0})));
  CHECK(facet->w.contains(rv({0, 0, 1, -1})));
  CHECK_FALSE(facet->w.contains(rv({1, 0, 0, -1})));

  CHECK_THROWS_AS(hypersimplex_polytope(3, 2), PreconditionError);
  CHECK_THROWS_AS(hypersimplex_polytope(1, 9), BoundExceededError);
}

TEST_CASE("the orbit fan of the smallest generic pattern is a projective line") {
  const DecoratedFan df = orbit_closure_fan(SupportPattern::generic(1, 2));
  CHECK(df.torus.p == 1);
  CHECK(df.torus.q == 1);
  CHECK(df.torus.x[0][0] == rv({1}));
  CHECK(df.h == Subspace::zero(1));
  CHECK(df.fan.rank == 1);
  CHECK(df.fan.rays == lattice::IntMat{iv({-1}), iv({1})});
  CHECK(df.fan.cones == std::vector<std::vector<std::size_t>>{{0}, {1}});
  REQUIRE(df.decorations.size() == 2);
  CHECK(df.decorations[0] == line_chain(1, {1}));
  CHECK(df.decorations[1] == line_chain(1, {1}));
}

TEST_CASE("generic patterns give projective space fans") {
  const DecoratedFan df = orbit_closure_fan(SupportPattern::generic(1, 3));
  CHECK(df.torus.p == 2);
  CHECK(df.torus.q == 2);
  CHECK(df.fan.rank == 2);
  CHECK(df.fan.rays == lattice::IntMat{iv({-1, -1}), iv({0, 1}), iv({1, 0})});
  CHECK(df.fan.cones == std::vector<std::vector<std::size_t>>{{0, 1}, {0, 2}, {1, 2}});
  REQUIRE(df.decorations.size() == 3);
  CHECK(df.decorations[0] == line_chain(2, {1, 1}));
  CHECK(df.decorations[1] == line_chain(2, {0, 1}));
  CHECK(df.decorations[2] == line_chain(2, {1, 0}));
  CHECK(decofan::validate(df, "large_orbit").valid);
  CHECK(decofan::smooth_check(df).smooth());
}

TEST_CASE("sparser patterns shrink the orbit fan") {
  const DecoratedFan line = orbit_closure_fan(pattern_of(1, {{1}, {1}, {0}}));
  CHECK(line.torus.p == 1);
  CHECK(line.fan.rays == lattice::IntMat{iv({-1}), iv({1})});
  CHECK(line.fan.cones == std::vector<std::vector<std::size_t>>{{0}, {1}});

  const DecoratedFan plane =
      orbit_closure_fan(pattern_of(2, {{1, 0}, {0, 1}, {1, 1}, {0, 0}}));
  CHECK(plane.torus.p == 2);
  CHECK(plane.fan.rays == lattice::IntMat{iv({-1, 0}), iv({0, -1}), iv({1, 1})});
  CHECK(plane.fan.cones == std::vector<std::vector<std::size_t>>{{0, 1}, {0, 2}, {1, 2}});
  CHECK(plane.decorations[0] == line_chain(2, {1, 0}));
  CHECK(plane.decorations[1] == line_chain(2, {0, 1}));
  CHECK(plane.decorations[2] == line_chain(2, {1, 1}));
  CHECK(decofan::smooth_check(plane).smooth());
}

TEST_CASE("fully stabilized patterns give the trivial fan") {
  for (const SupportPattern& sp :
       {SupportPattern::generic(2, 2), SupportPattern::generic(0, 3)}) {
    const DecoratedFan df = orbit_closure_fan(sp);
    CHECK(df.torus.p == 0);
    CHECK(df.torus.q == 0);
    CHECK(df.fan.rank == 0);
    CHECK(df.fan.rays.empty());
    CHECK(df.fan.cones.empty());
    CHECK(df.decorations.empty());
    CHECK(df.h == Subspace::zero(0));
  }
  const PatternStabilizer st = stabilizer_from_pattern(SupportPattern::generic(0, 3));
  CHECK(st.blocks.size() == 3);
  CHECK(st.even == Subspace::full(3));
}

TEST_CASE("the generic two-of-four pattern gives the octahedron fan") {
  const DecoratedFan df = orbit_closure_fan(SupportPattern::generic(2, 4));
  CHECK(df.torus.p == 3);
  CHECK(df.fan.rank == 3);
  CHECK(df.fan.rays.size() == 8);
  CHECK(df.fan.cones.size() == 6);
  for (const std::vector<std::size_t>& cone : df.fan.cones) CHECK(cone.size() == 4);
  for (std::size_t i = 0; i < df.fan.rays.size(); ++i) {
    const Subspace expected = Subspace::span_of(3, lattice::to_rat(df.fan.rays[i]));
    CHECK(df.decorations[i].chain.spaces.front() == expected);
    CHECK(df.decorations[i].chain.spaces.back() == Subspace::zero(3));
  }
  CHECK(decofan::validate(df, "large_orbit").valid);

  // The even toric variety is the singular cross-polytope fan: every maximal
  // cone has four rays in rank three.
  const decofan::SmoothReport report = decofan::smooth_check(df);
  CHECK(report.overall == "not_smooth");
  for (const decofan::SmoothConeEntry& entry : report.cones)
    CHECK(entry.status == "singular_cone");
}

TEST_CASE("hypersimplex roundtrips match the orbit fans") {
  const std::pair<std::size_t, std::size_t> cases[] = {{1, 2}, {1, 3}, {2, 4}};
  for (const auto& [r, n] : cases) {
    CAPTURE(r);
    CAPTURE(n);
    const DecoratedFan from_polytope = polytope_fan_roundtrip(hypersimplex_polytope(r, n));
    const DecoratedFan from_orbit = orbit_closure_fan(SupportPattern::generic(r, n));
    CHECK(from_polytope.fan.rank == from_orbit.fan.rank);
    CHECK(from_polytope.fan.rays == from_orbit.fan.rays);
    CHECK(from_polytope.fan.cones == from_orbit.fan.cones);
    CHECK(from_polytope.decorations == from_orbit.decorations);
    CHECK(from_polytope.h == from_orbit.h);
    CHECK(from_polytope.torus.p == from_orbit.torus.p);
    CHECK(from_polytope.torus.q == from_orbit.torus.q);
    CHECK(from_polytope.torus.x == from_orbit.torus.x);
  }
}

TEST_CASE("alternative segment decorations roundtrip to a half-decorated fan") {
  // On a segment each vertex lies on a single facet, so promoting one vertex
  // decoration to the full direction space is still consistent: it describes
  // the projective line with one undecorated ray.
  DecoratedPolytope dp = hypersimplex_polytope(1, 2);
  dp.faces[0].w = Subspace(2, {rv({1, -1})});
  const DecoratedFan df = polytope_fan_roundtrip(dp);
  CHECK(df.fan.rays == lattice::IntMat{iv({-1}), iv({1})});
  CHECK(df.decorations[0] == line_chain(1, {1}));
  CHECK(df.decorations[1] ==
        RayDecoration::of_chain(DecorationChain{{Subspace::zero(1), Subspace::zero(1)}}));
}

TEST_CASE("roundtrip of a point polytope is the trivial fan") {
  const DecoratedFan df = polytope_fan_roundtrip(hypersimplex_polytope(0, 3));
  CHECK(df.fan.rank == 0);
  CHECK(df.fan.rays.empty());
  CHECK(df.torus.p == 0);
  CHECK(df.decorations.empty());
}

TEST_CASE("mismatched polytope decorations are rejected") {
  DecoratedPolytope tampered_top = hypersimplex_polytope(1, 2);
  tampered_top.faces[2].w = Subspace::zero(2);
  CHECK_THROWS_AS(polytope_fan_roundtrip(tampered_top), PreconditionError);

  // A vertex of the triangle lies on two facets, so its induced decoration is
  // pinned by their annihilators and any other stored value must be refused.
  DecoratedPolytope tampered_vertex = hypersimplex_polytope(1, 3);
  REQUIRE(tampered_vertex.faces[0].vertex_ids == std::vector<std::size_t>{0});
  tampered_vertex.faces[0].w = Subspace(3, {rv({1, -1, 0})});
  CHECK_THROWS_AS(polytope_fan_roundtrip(tampered_vertex), PreconditionError);

  DecoratedPolytope outside = hypersimplex_polytope(1, 2);
  outside.faces[2].w = Subspace(2, {rv({1, 0})});
  CHECK_THROWS_AS(polytope_fan_roundtrip(outside), PreconditionError);

  DecoratedPolytope missing = hypersimplex_polytope(1, 2);
  missing.faces.erase(missing.faces.begin());
  CHECK_THROWS_AS(polytope_fan_roundtrip(missing), PreconditionError);

  DecoratedPolytope duplicate = hypersimplex_polytope(1, 2);
  duplicate.faces.push_back(duplicate.faces[0]);
  CHECK_THROWS_AS(polytope_fan_roundtrip(duplicate), PreconditionError);

  DecoratedPolytope hollow = hypersimplex_polytope(1, 2);
  hollow.faces.push_back(PolytopeFace{{}, Subspace::zero(2)});
  CHECK_THROWS_AS(polytope_fan_roundtrip(hollow), PreconditionError);

  DecoratedPolytope dangling = hypersimplex_polytope(1, 2);
  dangling.faces.push_back(PolytopeFace{{5}, Subspace::zero(2)});
  CHECK_THROWS_AS(polytope_fan_roundtrip(dangling), PreconditionError);

  const DecoratedPolytope interior{1, {rv({0}), rv({2}), rv({1})}, {}};
  CHECK_THROWS_AS(polytope_fan_roundtrip(interior), PreconditionError);

  const DecoratedPolytope repeated{1, {rv({0}), rv({0})}, {}};
  CHECK_THROWS_AS(polytope_fan_roundtrip(repeated), PreconditionError);

  const DecoratedPolytope empty{};
  CHECK_THROWS_AS(polytope_fan_roundtrip(empty), PreconditionError);

  // Direction lattice ZZ*(2,1) has no unimodular coordinate section.
  const DecoratedPolytope skew{2, {rv({0, 0}), rv({2, 1})}, {}};
  CHECK_THROWS_AS(polytope_fan_roundtrip(skew), UnsupportedError);
}

TEST_CASE("pattern sizes beyond the desk bound are refused") {
  CHECK_THROWS_AS(orbit_closure_fan(SupportPattern::generic(1, 7)), BoundExceededError);
  CHECK_NOTHROW(orbit_closure_fan(SupportPattern::generic(1, 4)));
}
