#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "tsv/decofan.hpp"

using namespace tsv;
using namespace tsv::decofan;
using exterior::ExteriorElement;
using superlie::Subspace;
using superlie::SupertorusData;

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

Subspace line(std::size_t q, std::vector<long long> coeffs) {
  return Subspace(q, {rv(std::move(coeffs))});
}

DecorationChain chain_of(std::vector<Subspace> spaces) { return DecorationChain{std::move(spaces)}; }

// Orthant fan in rank 2 with lines C*theta_1 and C*theta_2 on the two rays.
DecoratedFan orthant_lines(const SupertorusData& torus) {
  DecoratedFan df;
  df.torus = torus;
  df.h = Subspace::zero(2);
  df.fan = Fan{2, {iv({1, 0}), iv({0, 1})}, {{0, 1}}};
  df.decorations = {
      RayDecoration::of_chain(chain_of({line(2, {1, 0}), Subspace::zero(2)})),
      RayDecoration::of_chain(chain_of({line(2, {0, 1}), Subspace::zero(2)})),
  };
  return df;
}

// Full orthant in rank 3 whose rays carry three pairwise-distinct lines; the
// underlying toric variety is smooth but the lines admit no adapted basis.
DecoratedFan entangled_orthant() {
  DecoratedFan df;
  df.torus = SupertorusData::abelian(3, 2);
  df.h = Subspace::zero(2);
  df.fan = Fan{3, {iv({1, 0, 0}), iv({0, 1, 0}), iv({0, 0, 1})}, {{0, 1, 2}}};
  df.decorations = {
      RayDecoration::of_chain(chain_of({line(2, {1, -1}), Subspace::zero(2)})),
      RayDecoration::of_chain(chain_of({line(2, {1, 0}), Subspace::zero(2)})),
      RayDecoration::of_chain(chain_of({line(2, {0, 1}), Subspace::zero(2)})),
  };
  return df;
}

ExteriorElement xi(std::vector<std::size_t> bits, Rat coeff = Rat(1)) {
  exterior::Mask m = 0;
  for (std::size_t b : bits) m |= exterior::Mask(1) << b;
  return ExteriorElement::monomial(m, coeff);
}

}  // namespace

TEST_CASE("validity of abelian line decorations in both modes") {
  const DecoratedFan df = orthant_lines(SupertorusData::abelian(2, 2));
  for (const char* mode : {"general", "large_orbit"}) {
    const ValidityReport rep = validate(df, mode);
    CHECK(rep.valid);
    CHECK(rep.structural_errors.empty());
    CHECK(rep.failures.empty());
    CHECK(rep.mode == mode);
  }
  CHECK_THROWS_AS(validate(df, "other"), PreconditionError);
}

TEST_CASE("validity failures are classified by condition") {
  // (a): a chain whose tail is not h.
  DecoratedFan bad_tail = orthant_lines(SupertorusData::abelian(2, 2));
  bad_tail.decorations[0] = RayDecoration::of_chain(chain_of({line(2, {1, 0})}));
  const ValidityReport rep_a = validate(bad_tail, "general");
  CHECK(!rep_a.valid);
  REQUIRE(!rep_a.failures.empty());
  CHECK(rep_a.failures[0].condition == "a");
  CHECK(rep_a.failures[0].ray_ids == std::vector<std::size_t>{0});

  // (c) in general mode: a non-abelian V_0 of codimension 2 over h.
  DecoratedFan fat(orthant_lines(SupertorusData::diagonal_pairing(2)));
  fat.decorations[0] =
      RayDecoration::of_chain(chain_of({Subspace::full(2), Subspace::zero(2)}));
  const ValidityReport rep_c = validate(fat, "general");
  CHECK(!rep_c.valid);
  REQUIRE(!rep_c.failures.empty());
  CHECK(rep_c.failures[0].condition == "c");

  // The same chain is abelian over an abelian torus, hence fine in general
  // mode but still too deep for the large-orbit codimension bound.
  DecoratedFan deep = orthant_lines(SupertorusData::abelian(2, 2));
  deep.decorations[0] =
      RayDecoration::of_chain(chain_of({Subspace::full(2), Subspace::zero(2)}));
  CHECK(validate(deep, "general").valid);
  const ValidityReport rep_lo = validate(deep, "large_orbit");
  CHECK(!rep_lo.valid);
  REQUIRE(!rep_lo.failures.empty());
  CHECK(rep_lo.failures[0].condition == "c");
}

TEST_CASE("validity is structural before semantic") {
  DecoratedFan df = orthant_lines(SupertorusData::abelian(2, 2));
  df.decorations.pop_back();
  const ValidityReport rep = validate(df, "general");
  CHECK(!rep.valid);
  REQUIRE(!rep.structural_errors.empty());
  CHECK(rep.failures.empty());

  DecoratedFan bad_h = orthant_lines(SupertorusData::diagonal_pairing(2));
  bad_h.h = line(2, {1, 0});  // [h,h] = C*x_1 != 0
  const ValidityReport rep_h = validate(bad_h, "general");
  CHECK(!rep_h.valid);
  CHECK(!rep_h.structural_errors.empty());
}

TEST_CASE("large-orbit bracket condition sees escaping brackets") {
  // theta_2 on the ray e_1: [V_0,V_0] = C*x_2, which leaves the span of e_1.
  DecoratedFan df;
  df.torus = SupertorusData::diagonal_pairing(2);
  df.h = Subspace::zero(2);
  df.fan = Fan{2, {iv({1, 0})}, {{0}}};
  df.decorations = {RayDecoration::of_chain(chain_of({line(2, {0, 1}), Subspace::zero(2)}))};
  const ValidityReport bad = validate(df, "large_orbit");
  CHECK(!bad.valid);
  REQUIRE(!bad.failures.empty());
  CHECK(bad.failures[0].condition == "b");
  CHECK(bad.failures[0].ray_ids == std::vector<std::size_t>{0});

  // theta_1 on the same ray brackets into C*x_1 = the ray span, which is fine.
  df.decorations = {RayDecoration::of_chain(chain_of({line(2, {1, 0}), Subspace::zero(2)}))};
  CHECK(validate(df, "large_orbit").valid);
  CHECK(validate(df, "general").valid);
}

TEST_CASE("cone decorations sum the clamped chain spaces") {
  const DecoratedFan df = orthant_lines(SupertorusData::abelian(2, 2));
  CHECK(cone_decoration(df, {0, 1}, iv({0, 0})) == Subspace::full(2));
  CHECK(cone_decoration(df, {0, 1}, iv({1, 0})) == line(2, {0, 1}));
  CHECK(cone_decoration(df, {0, 1}, iv({7, 5})) == Subspace::zero(2));
  CHECK(cone_decoration(df, {}, iv({1, 0})) == df.h);
}

TEST_CASE("dimension-jumping check on a long chain") {
  // Chain of dimensions 4 > 3 > 2 > 1 > 0 on a single ray.
  DecoratedFan df;
  df.torus = SupertorusData::abelian(2, 4);
  df.h = Subspace::zero(4);
  df.fan = Fan{2, {iv({1, 0})}, {{0}}};
  const Subspace v1(4, {rv({0, 1, 0, 0}), rv({0, 0, 1, 0}), rv({0, 0, 0, 1})});
  const Subspace v2(4, {rv({0, 1, 0, 0}), rv({0, 0, 1, 0})});
  const Subspace v3 = line(4, {0, 1, 0, 0});
  df.decorations = {RayDecoration::of_chain(
      chain_of({Subspace::full(4), v1, v2, v3, Subspace::zero(4)}))};

  // W = 0 at <m,u> = 5 accumulates 4+3+2+1 = 10 > 5.
  CHECK(!dj_check(df, {0}, iv({5, 0}), Subspace::zero(4)));
  // W = V_1 at <m,u> = 5 accumulates 1+0+0+0 = 1 <= 5.
  CHECK(dj_check(df, {0}, iv({5, 0}), v1));
  // W = V_0 always works for m = 0.
  CHECK(dj_check(df, {0}, iv({0, 0}), Subspace::full(4)));
  // The zero cone accepts W = h for every character.
  CHECK(dj_check(df, {}, iv({-3, 2}), df.h));

  CHECK_THROWS_AS(dj_check(df, {0}, iv({-1, 0}), v1), PreconditionError);
  CHECK_THROWS_AS(dj_check(df, {0, 1}, iv({1, 0}), v1), PreconditionError);
  const DecoratedFan planes = orthant_lines(SupertorusData::abelian(2, 2));
  CHECK_THROWS_AS(dj_check(planes, {0}, iv({1, 0}), Subspace::full(2)), PreconditionError);
}

TEST_CASE("ray charts expose the twist exponents of the flag") {
  DecoratedFan df;
  df.torus = SupertorusData::abelian(2, 4);
  df.h = Subspace::zero(4);
  df.fan = Fan{2, {iv({1, 0})}, {{0}}};
  const Subspace v1(4, {rv({0, 1, 0, 0}), rv({0, 0, 1, 0}), rv({0, 0, 0, 1})});
  const Subspace v2(4, {rv({0, 1, 0, 0}), rv({0, 0, 1, 0})});
  const Subspace v3 = line(4, {0, 1, 0, 0});
  df.decorations = {RayDecoration::of_chain(
      chain_of({Subspace::full(4), v1, v2, v3, Subspace::zero(4)}))};

  const SuperPresentation chart = ray_chart(df, 0);
  CHECK(chart.p == 2);
  CHECK(chart.q == 4);
  CHECK(chart.ell == std::vector<long long>{1, 2, 3, 4});
  REQUIRE(chart.even_gens.size() == 2);
  CHECK(chart.even_gens[0] == std::pair<IntVec, bool>{iv({1, 0}), false});
  CHECK(chart.even_gens[1] == std::pair<IntVec, bool>{iv({0, 1}), true});
  REQUIRE(chart.odd_gens.size() == 4);
  CHECK(chart.odd_gens[0].first == iv({1, 0}));
  CHECK(chart.odd_gens[3].first == iv({4, 0}));
  // theta_1 enters at the last chain step, so it twists once and comes first.
  CHECK(chart.flag_basis[0] == rv({1, 0, 0, 0}));
  CHECK(chart.flag_basis[3] == rv({0, 1, 0, 0}));

  // Subsets of {1,2,3,4} with sum at most 5: 9 of them.
  CHECK(ray_weight_space(df, 0, iv({5, 0})).dim() == 9);
  CHECK(ray_weight_space(df, 0, iv({0, 0})).dim() == 1);
  CHECK(ray_weight_space(df, 0, iv({10, 0})).dim() == 16);
  CHECK_THROWS_AS(ray_weight_space(df, 0, iv({-1, 0})), PreconditionError);
}

TEST_CASE("weight spaces over a cone intersect the ray charts") {
  const DecoratedFan df = orthant_lines(SupertorusData::abelian(2, 2));

  const exterior::WeightSpace w10 = sigma_weight_space(df, {0, 1}, iv({1, 0}));
  CHECK(w10.dim() == 2);
  const exterior::WeightSpace expected =
      exterior::make_weight_space(iv({1, 0}), 2, {xi({}), xi({0})});
  CHECK(w10 == expected);

  CHECK(sigma_weight_space(df, {0, 1}, iv({0, 0})).dim() == 1);
  CHECK(sigma_weight_space(df, {0, 1}, iv({1, 1})).dim() == 4);
  CHECK(sigma_weight_space(df, {0}, iv({1, 0})).dim() == 4);

  // The open orbit carries the h-invariants; h = 0 leaves everything.
  CHECK(sigma_weight_space(df, {}, iv({-2, 9})).dim() == 4);

  CHECK_THROWS_AS(sigma_weight_space(df, {0, 1}, iv({-1, 0})), PreconditionError);
}

TEST_CASE("chart route matches the derivation-kernel route on lines") {
  for (const SupertorusData& torus :
       {SupertorusData::abelian(2, 2), SupertorusData::diagonal_pairing(2)}) {
    const DecoratedFan df = orthant_lines(torus);
    for (std::size_t ray : {std::size_t(0), std::size_t(1)}) {
      for (const IntVec& m : {iv({0, 0}), iv({1, 0}), iv({0, 1}), iv({2, 1}), iv({1, 2})}) {
        if (lattice::dot(m, df.fan.rays[ray]) < 0) continue;
        const exterior::WeightSpace via_chart = sigma_weight_space(df, {ray}, m);
        const exterior::WeightSpace via_kernel =
            exterior::induced_weight_space(df.torus, cone_decoration(df, {ray}, m), m);
        CHECK(via_chart == via_kernel);
      }
    }
  }
}

TEST_CASE("orbit stabilizers pair the ray span with the zero-weight decoration") {
  const DecoratedFan df = orthant_lines(SupertorusData::abelian(2, 2));
  const StabilizerResult open_orbit = orbit_stabilizer(df, {});
  CHECK(open_orbit.even.dim() == 0);
  CHECK(open_orbit.odd == df.h);
  const StabilizerResult fixed_point = orbit_stabilizer(df, {0, 1});
  CHECK(fixed_point.even == Subspace::full(2));
  CHECK(fixed_point.odd == Subspace::full(2));
  const StabilizerResult edge = orbit_stabilizer(df, {1});
  CHECK(edge.even == line(2, {0, 1}));
  CHECK(edge.odd == line(2, {0, 1}));
  CHECK_THROWS_AS(orbit_stabilizer(df, {0, 7}), PreconditionError);
}

TEST_CASE("smoothness detects the entangled triple of lines") {
  const DecoratedFan df = entangled_orthant();
  REQUIRE(validate(df, "general").valid);

  const SmoothReport rep = smooth_check(df);
  CHECK(rep.overall == "not_smooth");
  CHECK(!rep.smooth());
  REQUIRE(rep.cones.size() == 1);
  CHECK(rep.cones[0].status == "no_adapted_basis");
  REQUIRE(rep.cones[0].witness.size() == 3);
  const std::set<Subspace> witness(rep.cones[0].witness.begin(), rep.cones[0].witness.end());
  const std::set<Subspace> lines{line(2, {1, -1}), line(2, {1, 0}), line(2, {0, 1})};
  CHECK(witness == lines);

  // Separating the rays leaves at most one line per cone, which is smooth.
  DecoratedFan separated = df;
  separated.fan = lattice::star_subdivide(df.fan, iv({1, 1, 1}));
  separated.decorations.push_back(
      RayDecoration::of_chain(chain_of({Subspace::zero(2)})));
  REQUIRE(separated.fan.rays.size() == 4);
  const SmoothReport rep2 = smooth_check(separated);
  CHECK(rep2.overall == "smooth");
  CHECK(rep2.smooth());
}

TEST_CASE("smoothness distinguishes singular cones from decoration failures") {
  DecoratedFan df;
  df.torus = SupertorusData::abelian(2, 1);
  df.h = Subspace::zero(1);
  df.fan = Fan{2, {iv({1, 0}), iv({1, 2})}, {{0, 1}}};
  df.decorations = {RayDecoration::of_chain(chain_of({Subspace::zero(1)})),
                    RayDecoration::of_chain(chain_of({Subspace::zero(1)}))};
  const SmoothReport rep = smooth_check(df);
  CHECK(rep.overall == "not_smooth");
  REQUIRE(rep.cones.size() == 1);
  CHECK(rep.cones[0].status == "singular_cone");
}

TEST_CASE("resolution separates rays and decorates new ones with h") {
  const DecoratedFan df = entangled_orthant();
  const Resolution res = resolve(df);

  CHECK(smooth_check(res.refined).smooth());
  CHECK(res.morphism.lattice_map == lattice::IntMat{iv({1, 0, 0}), iv({0, 1, 0}), iv({0, 0, 1})});
  REQUIRE(res.refined.fan.rays.size() >= df.fan.rays.size());
  for (std::size_t i = 0; i < df.fan.rays.size(); ++i) {
    CHECK(res.refined.fan.rays[i] == df.fan.rays[i]);
    CHECK(res.refined.decorations[i] == df.decorations[i]);
  }
  for (std::size_t i = df.fan.rays.size(); i < res.refined.fan.rays.size(); ++i) {
    REQUIRE(!res.refined.decorations[i].sign_mode);
    CHECK(res.refined.decorations[i].chain.spaces == std::vector<Subspace>{df.h});
  }
  // Support is unchanged: spot-check interior points of the orthant.
  CHECK(lattice::support_contains(res.refined.fan, iv({3, 1, 2})));
  CHECK(!lattice::support_contains(res.refined.fan, iv({-1, 1, 1})));
  // The resolved fan validates and maps back via the identity morphism.
  CHECK(validate(res.refined, "large_orbit").valid);
  CHECK(morphism_check(res.refined, res.refined, res.morphism));

  // An already-smooth input comes back untouched.
  DecoratedFan smooth_df = orthant_lines(SupertorusData::abelian(2, 2));
  const Resolution res2 = resolve(smooth_df);
  CHECK(res2.refined.fan.rays == smooth_df.fan.rays);
  CHECK(res2.refined.fan.cones == smooth_df.fan.cones);
}

TEST_CASE("morphism verdicts cover fan maps, brackets and decorations") {
  // Project the decorated orthant onto its first coordinate.
  const DecoratedFan src = orthant_lines(SupertorusData::abelian(2, 2));
  DecoratedFan dst;
  dst.torus = SupertorusData::abelian(1, 1);
  dst.h = Subspace::zero(1);
  dst.fan = Fan{1, {iv({1})}, {{0}}};
  dst.decorations = {RayDecoration::of_chain(chain_of({line(1, {1}), Subspace::zero(1)}))};

  const MorphismData project{{iv({1, 0})}, {rv({1, 0})}};
  CHECK(morphism_check(src, dst, project));

  // Swapping the odd map sends theta_2 where the target decoration vanishes.
  const MorphismData swapped{{iv({1, 0})}, {rv({0, 1})}};
  CHECK(!morphism_check(src, dst, swapped));

  // Reflecting the lattice breaks the fan map: -e_1 lies outside the target.
  const MorphismData reflect{{iv({-1, 0})}, {rv({1, 0})}};
  CHECK(!morphism_check(src, dst, reflect));

  // Collapsing the odd part of a pairing torus breaks the bracket identity.
  DecoratedFan qsrc;
  qsrc.torus = SupertorusData::diagonal_pairing(2);
  qsrc.h = Subspace::zero(2);
  qsrc.fan = Fan{2, {iv({1, 0})}, {{0}}};
  qsrc.decorations = {RayDecoration::of_chain(chain_of({line(2, {1, 0}), Subspace::zero(2)}))};
  DecoratedFan qdst;
  qdst.torus = SupertorusData::diagonal_pairing(1);
  qdst.h = Subspace::zero(1);
  qdst.fan = Fan{1, {iv({1})}, {{0}}};
  qdst.decorations = {RayDecoration::of_chain(chain_of({line(1, {1}), Subspace::zero(1)}))};
  CHECK(morphism_check(qsrc, qdst, MorphismData{{iv({1, 0})}, {rv({1, 0})}}));
  CHECK(!morphism_check(qsrc, qdst, MorphismData{{iv({1, 0})}, {rv({0, 1})}}));

  // Inputs outside the large-orbit class are rejected, not judged.
  DecoratedFan deep = orthant_lines(SupertorusData::abelian(2, 2));
  deep.decorations[0] =
      RayDecoration::of_chain(chain_of({Subspace::full(2), Subspace::zero(2)}));
  const MorphismData identity{{iv({1, 0}), iv({0, 1})}, {rv({1, 0}), rv({0, 1})}};
  CHECK_THROWS_AS(morphism_check(deep, deep, identity), UnsupportedError);

  CHECK_THROWS_AS(morphism_check(src, dst, MorphismData{{iv({1})}, {rv({1, 0})}}),
                  PreconditionError);
}

TEST_CASE("filtration export annihilates the chain and imports back") {
  DecoratedFan df;
  df.torus = SupertorusData::abelian(1, 4);
  df.h = Subspace::zero(4);
  df.fan = Fan{1, {iv({1})}, {{0}}};
  const DecorationChain chain =
      chain_of({Subspace::full(4), line(4, {0, 0, 0, 1}), Subspace::zero(4)});
  df.decorations = {RayDecoration::of_chain(chain)};

  const KlyachkoFiltration f = klyachko_export(df, 0);
  CHECK(f.q == 4);
  CHECK(f.ambient == Subspace::full(4));
  REQUIRE(f.steps.size() == 3);
  CHECK(f.steps[0].dim() == 0);
  CHECK(f.steps[1].dim() == 3);
  CHECK(f.steps[2].dim() == 4);
  CHECK(f.at(1).dim() == 0);
  CHECK(f.at(0) == f.steps[0]);
  CHECK(f.at(-2) == f.steps[2]);
  CHECK(f.at(-9) == f.steps[2]);
  // E(-1) = Ann(C*theta_4) contains the first three coordinate functions.
  CHECK(f.steps[1].contains(rv({1, 0, 0, 0})));
  CHECK(!f.steps[1].contains(rv({0, 0, 0, 1})));

  CHECK(klyachko_import(f) == chain);
}

TEST_CASE("square-root decorations enumerate up to sign normalization") {
  // One ray through (1,1,0) and one through (1,0,1): each can be undecorated
  // or carry one of two sign patterns, but decorating both is obstructed.
  const SupertorusData torus = SupertorusData::diagonal_pairing(3);
  const Fan fan{3, {iv({1, 1, 0}), iv({1, 0, 1})}, {{0, 1}}};
  const std::vector<DecoratedFan> found = enumerate_decorations(torus, fan);
  CHECK(found.size() == 5);
  std::size_t doubly_decorated = 0;
  for (const DecoratedFan& df : found) {
    CHECK(validate(df, "large_orbit").valid);
    if (!df.decorations[0].signs.is_zero() && !df.decorations[1].signs.is_zero())
      ++doubly_decorated;
  }
  CHECK(doubly_decorated == 0);

  // The projective line over the rank-1 pairing torus admits four decorations.
  const Fan p1{1, {iv({1}), iv({-1})}, {{0}, {1}}};
  CHECK(enumerate_decorations(SupertorusData::diagonal_pairing(1), p1).size() == 4);

  // The projective plane admits twelve.
  const Fan p2{2, {iv({1, 0}), iv({0, 1}), iv({-1, -1})}, {{0, 1}, {1, 2}, {0, 2}}};
  CHECK(enumerate_decorations(SupertorusData::diagonal_pairing(2), p2).size() == 12);

  CHECK_THROWS_AS(enumerate_decorations(SupertorusData::abelian(3, 3), fan), UnsupportedError);
}

TEST_CASE("sign decorations validate against the diagonal pairing") {
  const SupertorusData torus = SupertorusData::diagonal_pairing(3);
  const Fan fan{3, {iv({1, 1, 0}), iv({1, 0, 1})}, {{0, 1}}};
  DecoratedFan df;
  df.torus = torus;
  df.h = Subspace::zero(3);
  df.fan = fan;
  df.decorations = {RayDecoration::of_signs(SignDecoration{{1, 1, 0}}),
                    RayDecoration::of_signs(SignDecoration{{1, 0, 1}})};
  const ValidityReport rep = validate(df, "large_orbit");
  CHECK(!rep.valid);
  REQUIRE(!rep.failures.empty());
  CHECK(rep.failures[0].condition == "b");

  df.decorations[1] = RayDecoration::of_signs(SignDecoration{{0, 0, 0}});
  CHECK(validate(df, "large_orbit").valid);

  // Sign support must match the ray support.
  df.decorations[0] = RayDecoration::of_signs(SignDecoration{{1, 0, 0}});
  CHECK(!validate(df, "large_orbit").structural_errors.empty());

  // Rational-only operations refuse sign decorations.
  df.decorations[0] = RayDecoration::of_signs(SignDecoration{{1, 1, 0}});
  CHECK_THROWS_AS(validate(df, "general"), UnsupportedError);
  CHECK_THROWS_AS(ray_chart(df, 0), UnsupportedError);
  CHECK_THROWS_AS(smooth_check(df), UnsupportedError);
}
