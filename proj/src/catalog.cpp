#include "tsv/catalog.hpp"

#include <utility>
#include <vector>

namespace tsv::catalog {

namespace {

using decofan::DecoratedFan;
using decofan::RayDecoration;
using decofan::SignDecoration;
using lattice::Fan;
using lattice::IntVec;
using superlie::DecorationChain;
using superlie::Subspace;
using superlie::SupertorusData;

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

Subspace span4(std::vector<std::vector<long long>> rows) {
  linalg::RatMat m;
  for (std::vector<long long>& r : rows) m.push_back(rv(std::move(r)));
  return Subspace(4, std::move(m));
}

RayDecoration chain(std::vector<Subspace> spaces) {
  return RayDecoration::of_chain(DecorationChain{std::move(spaces)});
}

}  // namespace

decofan::DecoratedFan interleaved_chains() {
  DecoratedFan df;
  df.torus = SupertorusData::abelian(3, 4);
  df.h = Subspace::zero(4);
  df.fan = Fan{3, {iv({1, 0, 0}), iv({0, 1, 0}), iv({0, 0, 1})}, {{0, 1, 2}}};
  df.decorations = {
      chain({Subspace::full(4),
             span4({{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}),
             span4({{0, 1, 0, 0}, {0, 0, 1, 0}}),
             span4({{0, 1, 0, 0}}),
             Subspace::zero(4)}),
      chain({Subspace::full(4),
             span4({{2, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}}),
             span4({{2, 0, 1, 0}, {0, 1, 0, -2}}),
             span4({{0, 1, 0, -2}}),
             Subspace::zero(4)}),
      chain({Subspace::full(4),
             span4({{1, 0, 0, 0}, {0, 1, 0, -1}, {0, 0, 1, 0}}),
             span4({{1, 0, 1, 0}, {0, 1, 0, -1}}),
             span4({{1, 0, 1, 0}}),
             Subspace::zero(4)}),
  };
  return df;
}

decofan::DecoratedFan quartet_ray_fan() {
  DecoratedFan df;
  df.torus = SupertorusData::abelian(1, 4);
  df.h = Subspace::zero(4);
  df.fan = Fan{1, {iv({1})}, {{0}}};
  df.decorations = {chain({Subspace::full(4),
                           Subspace::span_of(4, rv({0, 0, 0, 1})),
                           Subspace::zero(4)})};
  return df;
}

decofan::SuperPresentation quartet_twisted_chart() {
  decofan::SuperPresentation chart = decofan::ray_chart(quartet_ray_fan(), 0);
  chart.odd_gens[3].second = exterior::add(exterior::ExteriorElement::monomial(0b1000),
                                           exterior::ExteriorElement::monomial(0b0111));
  return chart;
}

decofan::DecoratedFan entangled_lines() {
  DecoratedFan df;
  df.torus = SupertorusData::abelian(3, 2);
  df.h = Subspace::zero(2);
  df.fan = Fan{3, {iv({1, 0, 0}), iv({0, 1, 0}), iv({0, 0, 1})}, {{0, 1, 2}}};
  df.decorations = {
      chain({Subspace::span_of(2, rv({1, -1})), Subspace::zero(2)}),
      chain({Subspace::span_of(2, rv({1, 0})), Subspace::zero(2)}),
      chain({Subspace::span_of(2, rv({0, 1})), Subspace::zero(2)}),
  };
  return df;
}

decofan::DecoratedFan entangled_lines_subdivided() {
  DecoratedFan df = entangled_lines();
  df.fan = Fan{3,
               {iv({1, 0, 0}), iv({0, 1, 0}), iv({0, 0, 1}), iv({1, 1, 1})},
               {{0, 1, 3}, {0, 2, 3}, {1, 2, 3}}};
  df.decorations.push_back(chain({Subspace::zero(2)}));
  return df;
}

lattice::Fan projective_fan(std::size_t n) {
  if (n == 0) throw PreconditionError("projective fan needs n >= 1");
  Fan f;
  f.rank = n;
  for (std::size_t i = 0; i < n; ++i) {
    IntVec ray(n, Int(0));
    ray[i] = 1;
    f.rays.push_back(std::move(ray));
  }
  f.rays.push_back(IntVec(n, Int(-1)));
  for (std::size_t omit = 0; omit <= n; ++omit) {
    std::vector<std::size_t> cone;
    for (std::size_t i = 0; i <= n; ++i)
      if (i != omit) cone.push_back(i);
    f.cones.push_back(std::move(cone));
  }
  return f;
}

decofan::DecoratedFan projective_blank(std::size_t n) {
  DecoratedFan df;
  df.torus = SupertorusData::diagonal_pairing(n);
  df.h = Subspace::zero(n);
  df.fan = projective_fan(n);
  df.decorations.assign(n + 1, RayDecoration::of_signs(SignDecoration{std::vector<int>(n, 0)}));
  return df;
}

decofan::DecoratedFan projective_superspace(std::size_t n) {
  DecoratedFan df = projective_blank(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<int> signs(n, 0);
    signs[i] = 1;
    df.decorations[i] = RayDecoration::of_signs(SignDecoration{std::move(signs)});
  }
  return df;
}

decofan::DecoratedFan projective_superspace_abelian(std::size_t n) {
  DecoratedFan df;
  df.torus = SupertorusData::abelian(n, n);
  df.h = Subspace::zero(n);
  df.fan = projective_fan(n);
  for (std::size_t i = 0; i < n; ++i) {
    linalg::RatVec row(n, Rat(0));
    row[i] = 1;
    df.decorations.push_back(chain({Subspace(n, {row}), Subspace::zero(n)}));
  }
  df.decorations.push_back(chain({Subspace::zero(n)}));
  return df;
}

decofan::DecoratedFan obstructed_pair() {
  DecoratedFan df;
  df.torus = SupertorusData::diagonal_pairing(3);
  df.h = Subspace::zero(3);
  df.fan = Fan{3, {iv({1, 1, 0}), iv({1, 0, 1})}, {{0, 1}}};
  df.decorations.assign(2, RayDecoration::of_signs(SignDecoration{{0, 0, 0}}));
  return df;
}

}  // namespace tsv::catalog
