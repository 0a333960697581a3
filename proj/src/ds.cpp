#include "tsv/ds.hpp"

#include <algorithm>
#include <set>

namespace tsv::ds {

namespace {

using exterior::Mask;
using linalg::RatMat;

int term_parity(Mask m) { return static_cast<int>(__builtin_popcountll(m) & 1); }

// Parity of a homogeneous element, -1 for zero; mixed parity is rejected.
int element_parity(const ExteriorElement& e) {
  int parity = -1;
  for (const auto& [mask, coeff] : e.terms) {
    const int p = term_parity(mask);
    if (parity == -1) parity = p;
    if (parity != p)
      throw PreconditionError("graded model elements must have homogeneous parity");
  }
  return parity;
}

std::vector<Mask> mask_list(const std::vector<ExteriorElement>& elems) {
  std::set<Mask> masks;
  for (const ExteriorElement& e : elems)
    for (const auto& [mask, coeff] : e.terms) masks.insert(mask);
  return {masks.begin(), masks.end()};
}

RatVec to_row(const ExteriorElement& e, const std::vector<Mask>& masks) {
  RatVec row(masks.size(), Rat(0));
  for (const auto& [mask, coeff] : e.terms)
    row[std::lower_bound(masks.begin(), masks.end(), mask) - masks.begin()] = coeff;
  return row;
}

ExteriorElement from_row(const RatVec& row, const std::vector<Mask>& masks) {
  ExteriorElement e;
  for (std::size_t i = 0; i < masks.size(); ++i)
    if (row[i] != 0) e.terms[masks[i]] = row[i];
  return e;
}

// Canonical basis (reduced echelon over the monomial coordinates) of a span.
std::vector<ExteriorElement> canonical_span(const std::vector<ExteriorElement>& elems) {
  const std::vector<Mask> masks = mask_list(elems);
  RatMat rows;
  for (const ExteriorElement& e : elems)
    if (!e.is_zero()) rows.push_back(to_row(e, masks));
  rows = linalg::rowspace(rows);
  std::vector<ExteriorElement> out;
  for (const RatVec& row : rows) out.push_back(from_row(row, masks));
  return out;
}

ExteriorElement reduce_mod(const ExteriorElement& e, const std::vector<ExteriorElement>& span) {
  if (span.empty() || e.is_zero()) return e;
  std::vector<ExteriorElement> all = span;
  all.push_back(e);
  const std::vector<Mask> masks = mask_list(all);
  RatMat rows;
  for (const ExteriorElement& s : span) rows.push_back(to_row(s, masks));
  rows = linalg::rowspace(rows);
  const RatVec reduced = linalg::reduce_against(rows, linalg::pivot_cols(rows), to_row(e, masks));
  return from_row(reduced, masks);
}

bool span_contains(const std::vector<ExteriorElement>& span, const ExteriorElement& e) {
  return reduce_mod(e, span).is_zero();
}

std::size_t span_dim(const std::vector<ExteriorElement>& elems) {
  return canonical_span(elems).size();
}

// Splits a parity-invariant span into its even and odd parts.
std::pair<std::vector<ExteriorElement>, std::vector<ExteriorElement>> parity_split(
    const std::vector<ExteriorElement>& elems) {
  std::vector<ExteriorElement> even, odd;
  for (const ExteriorElement& e : elems) {
    ExteriorElement pe, po;
    for (const auto& [mask, coeff] : e.terms)
      (term_parity(mask) == 0 ? pe : po).terms[mask] = coeff;
    if (!pe.is_zero()) even.push_back(std::move(pe));
    if (!po.is_zero()) odd.push_back(std::move(po));
  }
  even = canonical_span(even);
  odd = canonical_span(odd);
  if (even.size() + odd.size() != span_dim(elems))
    throw TsvError("internal error: weight component is not parity invariant");
  return {std::move(even), std::move(odd)};
}

// Weight-by-weight spans generated by the given elements inside a model:
// products are reduced modulo the model's factored-out rows.
std::vector<std::vector<ExteriorElement>> generated_spans(
    const GradedAlgebraModel& alg, const std::vector<GradedGenerator>& gens, long long bound) {
  std::vector<std::vector<ExteriorElement>> spans(static_cast<std::size_t>(bound) + 1);
  const auto close_in_weight = [&](std::vector<ExteriorElement>& span, long long n) {
    for (;;) {
      std::vector<ExteriorElement> next = span;
      for (const GradedGenerator& g : gens) {
        if (g.weight != 0) continue;
        for (const ExteriorElement& e : span)
          next.push_back(reduce_mod(exterior::wedge(e, g.element), alg.at(n).modded));
      }
      next = canonical_span(next);
      if (next.size() == span.size()) return;
      span = std::move(next);
    }
  };
  spans[0] = canonical_span({reduce_mod(ExteriorElement::one(), alg.at(0).modded)});
  close_in_weight(spans[0], 0);
  for (long long n = 1; n <= bound; ++n) {
    std::vector<ExteriorElement> acc;
    for (const GradedGenerator& g : gens) {
      if (g.weight <= 0 || g.weight > n) continue;
      for (const ExteriorElement& e : spans[static_cast<std::size_t>(n - g.weight)])
        acc.push_back(reduce_mod(exterior::wedge(e, g.element), alg.at(n).modded));
    }
    spans[static_cast<std::size_t>(n)] = canonical_span(acc);
    close_in_weight(spans[static_cast<std::size_t>(n)], n);
  }
  return spans;
}

std::string render_witness(long long weight, const ExteriorElement& product) {
  return "t1^" + std::to_string(weight) + " * (" + exterior::to_string(product) + ")";
}

}  // namespace

const WeightComponent& GradedAlgebraModel::at(long long n) const {
  if (n < 0 || n > bound) throw PreconditionError("weight outside the cached range");
  return components[static_cast<std::size_t>(n)];
}

std::size_t GradedAlgebraModel::parity_dim(long long n, int parity) const {
  const auto [even, odd] = parity_split(at(n).basis);
  return parity == 0 ? even.size() : odd.size();
}

GradedAlgebraModel make_graded_model(const superlie::SupertorusData& torus, const IntVec& m1,
                                     const std::vector<GradedGenerator>& generators,
                                     long long bound) {
  torus.validate();
  if (m1.size() != torus.p) throw PreconditionError("m1 must have length p");
  if (bound < 0) throw PreconditionError("degree bound must be nonnegative");
  GradedAlgebraModel alg;
  alg.torus = torus;
  alg.m1 = m1;
  alg.q = torus.q;
  alg.bound = bound;
  alg.generators = generators;
  for (const GradedGenerator& g : generators) {
    if (g.weight < 0) throw PreconditionError("generator weights must be nonnegative");
    element_parity(g.element);
    alg.max_generator_weight = std::max(alg.max_generator_weight, g.weight);
  }
  alg.components.resize(static_cast<std::size_t>(bound) + 1);
  const std::vector<std::vector<ExteriorElement>> spans =
      generated_spans(alg, generators, bound);
  for (long long n = 0; n <= bound; ++n)
    alg.components[static_cast<std::size_t>(n)].basis = spans[static_cast<std::size_t>(n)];
  return alg;
}

GradedAlgebraModel chart_quotient_model(const decofan::SuperPresentation& chart,
                                        long long bound) {
  if (chart.even_gens.empty() || chart.even_gens.front().second)
    throw PreconditionError("chart has no distinguished non-invertible even generator");
  if (chart.odd_gens.size() != chart.ell.size())
    throw PreconditionError("chart odd generators do not match the twist exponents");
  Mask free_mask = 0;
  for (std::size_t j = 0; j < chart.ell.size(); ++j)
    if (chart.ell[j] == 0) free_mask |= Mask(1) << j;

  std::vector<GradedGenerator> gens;
  gens.push_back({1, ExteriorElement::one()});
  for (std::size_t j = 0; j < chart.ell.size(); ++j) {
    if (chart.ell[j] == 0) continue;
    ExteriorElement elem;
    for (const auto& [mask, coeff] : chart.odd_gens[j].second.terms)
      if ((mask & free_mask) == 0) elem.terms[mask] = coeff;
    gens.push_back({chart.ell[j], std::move(elem)});
  }
  return make_graded_model(superlie::SupertorusData::abelian(chart.p, chart.q),
                           chart.even_gens.front().first, gens, bound);
}

GradedAlgebraModel ds_compute(const GradedAlgebraModel& alg, const RatVec& theta,
                              long long bound) {
  if (theta.size() != alg.q) throw PreconditionError("theta must have length q");
  if (bound < 0 || bound > alg.bound)
    throw PreconditionError("degree bound exceeds the cached components");
  const bool zero_theta = linalg::is_zero_vec(theta);
  GradedAlgebraModel out = alg;
  out.bound = bound;
  out.components.resize(static_cast<std::size_t>(bound) + 1);
  if (zero_theta) return out;  // kernel is everything, image is zero

  if (bound < alg.max_generator_weight + 2)
    throw PreconditionError(
        "degree bound must exceed the maximal generator weight by at least 2");
  for (long long n = 0; n <= bound; ++n)
    if (!alg.at(n).modded.empty())
      throw PreconditionError("cohomology of a quotient model requires theta = 0");

  const RatVec theta2 = superlie::bracket_eval(alg.torus, theta, theta);
  for (long long n = 0; n <= bound; ++n) {
    WeightComponent& comp = out.components[static_cast<std::size_t>(n)];
    comp.basis.clear();
    comp.modded.clear();
    IntVec m(alg.m1.size(), Int(0));
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = Int(n) * alg.m1[i];
    Rat scalar(0);
    for (std::size_t i = 0; i < m.size(); ++i) scalar += Rat(m[i]) * theta2[i];
    if (scalar != 0) continue;  // no theta^2-invariants in this weight

    const std::vector<ExteriorElement>& basis = alg.at(n).basis;
    std::vector<ExteriorElement> images;
    for (const ExteriorElement& b : basis) {
      ExteriorElement img = exterior::right_derivation(alg.torus, theta, m, b);
      if (!exterior::right_derivation(alg.torus, theta, m, img).is_zero())
        throw TsvError("internal error: derivation does not square to zero on invariants");
      if (!span_contains(basis, img))
        throw PreconditionError("model is not stable under the derivation");
      images.push_back(std::move(img));
    }
    // Kernel coefficients: rows of the transposed image matrix are equations.
    const std::vector<Mask> masks = mask_list(images);
    RatMat img_rows;
    for (const ExteriorElement& img : images) img_rows.push_back(to_row(img, masks));
    const RatMat coeffs =
        linalg::kernel_basis(linalg::transpose(img_rows, masks.size()), basis.size());
    comp.modded = canonical_span(images);
    std::vector<ExteriorElement> kernel;
    for (const RatVec& c : coeffs) {
      ExteriorElement e;
      for (std::size_t i = 0; i < basis.size(); ++i)
        if (c[i] != 0) e = exterior::add(e, exterior::scale(c[i], basis[i]));
      // The kernel is parity invariant, so both parity parts lie in it.
      ExteriorElement pe, po;
      for (const auto& [mask, coeff] : e.terms)
        (term_parity(mask) == 0 ? pe : po).terms[mask] = coeff;
      for (ExteriorElement* part : {&pe, &po}) {
        const ExteriorElement reduced = reduce_mod(*part, comp.modded);
        if (!reduced.is_zero()) kernel.push_back(reduced);
      }
    }
    comp.basis = canonical_span(kernel);
  }
  return out;
}

FrResult fr_check(const GradedAlgebraModel& alg, long long bound) {
  if (bound < 0 || bound > alg.bound)
    throw PreconditionError("degree bound exceeds the cached components");
  FrResult result;
  result.bound = bound;

  std::vector<GradedGenerator> gens;       // all chosen generators
  std::vector<GradedGenerator> even_gens;  // the subring generators
  std::vector<GradedGenerator> odd_gens;   // the exterior module generators

  for (long long n = 0; n <= bound; ++n) {
    const std::vector<std::vector<ExteriorElement>> sub = generated_spans(alg, gens, n);
    const std::vector<std::vector<ExteriorElement>> ring =
        generated_spans(alg, even_gens, n);
    const auto ring_dim = [&](long long k) {
      return k < 0 ? std::size_t(0) : ring[static_cast<std::size_t>(k)].size();
    };
    if (odd_gens.size() > 20)
      throw BoundExceededError("free prediction over more than 20 odd generators");

    const auto [sub_even, sub_odd] = parity_split(sub[static_cast<std::size_t>(n)]);
    for (int parity = 0; parity < 2; ++parity) {
      std::size_t predicted = 0;
      for (std::size_t mask = 0; mask < (std::size_t(1) << odd_gens.size()); ++mask) {
        long long w = 0;
        int count = 0;
        for (std::size_t b = 0; b < odd_gens.size(); ++b)
          if ((mask >> b) & 1) {
            w += odd_gens[b].weight;
            ++count;
          }
        if (count % 2 == parity && w <= n) predicted += ring_dim(n - w);
      }
      const std::size_t actual = parity == 0 ? sub_even.size() : sub_odd.size();
      if (actual > predicted)
        throw TsvError("internal error: generated span exceeds the free prediction");
      if (actual < predicted) {
        result.fr = false;
        result.witness_weight = n;
        // First generator product that the free prediction counts but the
        // algebra cannot deliver.
        for (std::size_t mask = 1; mask < (std::size_t(1) << odd_gens.size()); ++mask) {
          long long w = 0;
          int count = 0;
          ExteriorElement product = ExteriorElement::one();
          for (std::size_t b = 0; b < odd_gens.size(); ++b)
            if ((mask >> b) & 1) {
              w += odd_gens[b].weight;
              ++count;
              product = exterior::wedge(product, odd_gens[b].element);
            }
          if (count % 2 != parity || w > n || ring_dim(n - w) == 0 || product.is_zero())
            continue;
          result.witness = render_witness(n, product);
          return result;
        }
        result.witness = "weight " + std::to_string(n) + " falls short of the free count";
        return result;
      }
    }

    // Adopt minimal new generators so the span matches the model from here on.
    const auto [alg_even, alg_odd] = parity_split(alg.at(n).basis);
    std::vector<ExteriorElement> seen_even = sub_even;
    for (const ExteriorElement& e : alg_even) {
      const ExteriorElement reduced = reduce_mod(e, seen_even);
      if (reduced.is_zero()) continue;
      even_gens.push_back({n, reduced});
      gens.push_back({n, reduced});
      seen_even.push_back(reduced);
    }
    std::vector<ExteriorElement> seen_odd = sub_odd;
    for (const ExteriorElement& e : alg_odd) {
      const ExteriorElement reduced = reduce_mod(e, seen_odd);
      if (reduced.is_zero()) continue;
      odd_gens.push_back({n, reduced});
      gens.push_back({n, reduced});
      seen_odd.push_back(reduced);
    }
  }
  return result;
}

std::vector<ThetaVerdict> hr1_condition_e(
    const decofan::DecoratedFan& df, std::size_t ray_index,
    const std::optional<decofan::SuperPresentation>& chart_override, long long bound) {
  if (ray_index >= df.fan.rays.size() || ray_index >= df.decorations.size())
    throw PreconditionError("ray index out of range");
  if (df.decorations[ray_index].sign_mode)
    throw UnsupportedError("cohomological freeness check requires rational decorations");
  const decofan::SuperPresentation chart =
      chart_override ? *chart_override : decofan::ray_chart(df, ray_index);
  if (chart.q != df.torus.q)
    throw PreconditionError("override chart lives in a different odd coordinate space");
  const GradedAlgebraModel model = chart_quotient_model(chart, bound);

  const superlie::DecorationChain& chain = df.decorations[ray_index].chain;
  const RatMat h_rows = linalg::rowspace(df.h.basis());
  const std::vector<std::size_t> h_pivots = linalg::pivot_cols(h_rows);
  const RatMat dual_rows = linalg::inverse(linalg::transpose(chart.flag_basis, chart.q));

  std::vector<ThetaVerdict> verdicts;
  for (const RatVec& row : chain.spaces.front().basis()) {
    const RatVec rep = linalg::reduce_against(h_rows, h_pivots, row);
    if (linalg::is_zero_vec(rep)) continue;
    const RatVec theta_flag = linalg::matvec(dual_rows, rep);
    const GradedAlgebraModel ds = ds_compute(model, theta_flag, bound);
    const FrResult fr = fr_check(ds, bound);
    verdicts.push_back({rep, fr.fr, bound, fr.witness});
  }
  return verdicts;
}

}  // namespace tsv::ds
