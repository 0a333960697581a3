#include "tsv/exterior.hpp"

#include <algorithm>
#include <bit>
#include <set>

namespace tsv::exterior {

namespace {

constexpr std::size_t kTouchedBlockCap = 12;
constexpr std::size_t kFreeBlockCap = 20;

// Parity of the number of pairs (i in a, j in b) with i > j; the sign picked
// up when moving xi_a past xi_b into ascending order.
int wedge_sign(Mask a, Mask b) {
  int swaps = 0;
  while (a != 0) {
    const Mask low = a & (~a + 1);
    swaps += std::popcount(b & (low - 1));
    a ^= low;
  }
  return (swaps % 2 == 0) ? 1 : -1;
}

Rat pair_character(const IntVec& m, const RatVec& x) {
  if (m.size() != x.size()) throw PreconditionError("character pairing length mismatch");
  Rat out(0);
  for (std::size_t i = 0; i < m.size(); ++i) out += Rat(m[i]) * x[i];
  return out;
}

std::vector<Mask> touched_masks(const std::vector<ExteriorElement>& elems) {
  std::set<Mask> masks;
  for (const ExteriorElement& e : elems)
    for (const auto& [mask, coeff] : e.terms) masks.insert(mask);
  return {masks.begin(), masks.end()};
}

linalg::RatMat to_rows(const std::vector<ExteriorElement>& elems, const std::vector<Mask>& cols) {
  linalg::RatMat rows;
  for (const ExteriorElement& e : elems) {
    RatVec row(cols.size(), Rat(0));
    for (const auto& [mask, coeff] : e.terms) {
      const auto it = std::lower_bound(cols.begin(), cols.end(), mask);
      if (it == cols.end() || *it != mask) throw TsvError("internal error: mask not in column set");
      row[static_cast<std::size_t>(it - cols.begin())] = coeff;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ExteriorElement> from_rows(const linalg::RatMat& rows, const std::vector<Mask>& cols) {
  std::vector<ExteriorElement> out;
  for (const RatVec& row : rows) {
    ExteriorElement e;
    for (std::size_t i = 0; i < cols.size(); ++i)
      if (row[i] != 0) e.terms[cols[i]] = row[i];
    if (!e.is_zero()) out.push_back(std::move(e));
  }
  return out;
}

std::vector<ExteriorElement> canonical_span(const std::vector<ExteriorElement>& gens) {
  const std::vector<Mask> cols = touched_masks(gens);
  linalg::RatMat rows = to_rows(gens, cols);
  linalg::rref(rows);
  return from_rows(rows, cols);
}

ExteriorElement derivation(const superlie::SupertorusData& t, const RatVec& theta, const IntVec& m,
                           const ExteriorElement& e, bool right) {
  t.validate();
  if (theta.size() != t.q) throw PreconditionError("derivation argument must lie in the odd part");
  if (m.size() != t.p) throw PreconditionError("character must have length p");
  ExteriorElement out;
  for (std::size_t j = 0; j < t.q; ++j) {
    if (theta[j] == 0) continue;
    ExteriorElement term = partial(j, e);
    if (!right) term = scale(Rat(-1), term);
    for (std::size_t k = 0; k < t.q; ++k) {
      const Rat c = pair_character(m, right ? t.x[k][j] : t.x[j][k]);
      if (c != 0) term = add(term, scale(c, wedge(ExteriorElement::generator(k), e)));
    }
    out = add(out, scale(theta[j], term));
  }
  return out;
}

}  // namespace

ExteriorElement ExteriorElement::monomial(Mask mask, Rat coeff) {
  ExteriorElement e;
  if (coeff != 0) e.terms[mask] = std::move(coeff);
  return e;
}

ExteriorElement ExteriorElement::generator(std::size_t i) {
  if (i >= 62) throw PreconditionError("exterior generators are capped at 62");
  return monomial(Mask(1) << i);
}

void ExteriorElement::add_term(Mask mask, const Rat& coeff) {
  if (coeff == 0) return;
  const auto [it, fresh] = terms.emplace(mask, coeff);
  if (!fresh) {
    it->second += coeff;
    if (it->second == 0) terms.erase(it);
  }
}

ExteriorElement add(const ExteriorElement& a, const ExteriorElement& b) {
  ExteriorElement out = a;
  for (const auto& [mask, coeff] : b.terms) out.add_term(mask, coeff);
  return out;
}

ExteriorElement scale(const Rat& c, const ExteriorElement& e) {
  ExteriorElement out;
  if (c == 0) return out;
  for (const auto& [mask, coeff] : e.terms) out.terms[mask] = c * coeff;
  return out;
}

ExteriorElement wedge(const ExteriorElement& a, const ExteriorElement& b) {
  ExteriorElement out;
  for (const auto& [ma, ca] : a.terms)
    for (const auto& [mb, cb] : b.terms) {
      if ((ma & mb) != 0) continue;
      out.add_term(ma | mb, ca * cb * wedge_sign(ma, mb));
    }
  return out;
}

ExteriorElement partial(std::size_t i, const ExteriorElement& e) {
  const Mask bit = Mask(1) << i;
  ExteriorElement out;
  for (const auto& [mask, coeff] : e.terms) {
    if ((mask & bit) == 0) continue;
    const int sign = (std::popcount(mask & (bit - 1)) % 2 == 0) ? 1 : -1;
    out.add_term(mask ^ bit, coeff * sign);
  }
  return out;
}

std::string to_string(const ExteriorElement& e) {
  if (e.is_zero()) return "0";
  std::string out;
  for (const auto& [mask, coeff] : e.terms) {
    if (!out.empty()) out += " + ";
    out += rat_str(coeff);
    if (mask != 0) {
      out += "*xi{";
      bool first = true;
      for (std::size_t i = 0; i < 62; ++i)
        if (mask & (Mask(1) << i)) {
          if (!first) out += ",";
          out += std::to_string(i + 1);
          first = false;
        }
      out += "}";
    }
  }
  return out;
}

ExteriorElement right_derivation(const superlie::SupertorusData& t, const RatVec& theta,
                                 const IntVec& m, const ExteriorElement& e) {
  return derivation(t, theta, m, e, true);
}

ExteriorElement left_derivation(const superlie::SupertorusData& t, const RatVec& theta,
                                const IntVec& m, const ExteriorElement& e) {
  return derivation(t, theta, m, e, false);
}

WeightSpace make_weight_space(IntVec weight, std::size_t q,
                              const std::vector<ExteriorElement>& generators) {
  if (q > 62) throw PreconditionError("exterior generators are capped at 62");
  for (const ExteriorElement& e : generators)
    for (const auto& [mask, coeff] : e.terms)
      if (q < 64 && (mask >> q) != 0)
        throw PreconditionError("weight space element touches generators beyond q");
  WeightSpace ws;
  ws.weight = std::move(weight);
  ws.q = q;
  ws.basis = canonical_span(generators);
  return ws;
}

WeightSpace induced_weight_space(const superlie::SupertorusData& t, const superlie::Subspace& w,
                                 const IntVec& m) {
  t.validate();
  if (w.ambient() != t.q) throw PreconditionError("subspace must lie in the rank-q odd part");
  if (m.size() != t.p) throw PreconditionError("character must have length p");

  // Indices whose generators the derivations can produce or consume; the
  // kernel splits as (kernel inside this block) wedge (free exterior part).
  Mask touched = 0;
  for (const RatVec& theta : w.basis()) {
    for (std::size_t j = 0; j < t.q; ++j)
      if (theta[j] != 0) touched |= Mask(1) << j;
    for (std::size_t k = 0; k < t.q; ++k) {
      Rat c(0);
      for (std::size_t j = 0; j < t.q; ++j)
        if (theta[j] != 0) c += theta[j] * pair_character(m, t.x[k][j]);
      if (c != 0) touched |= Mask(1) << k;
    }
  }

  std::vector<std::size_t> block, free_bits;
  for (std::size_t i = 0; i < t.q; ++i)
    ((touched >> i) & 1 ? block : free_bits).push_back(i);
  if (block.size() > kTouchedBlockCap)
    throw BoundExceededError("induced weight space: touched exterior block exceeds " +
                             std::to_string(kTouchedBlockCap) + " generators");
  if (free_bits.size() > kFreeBlockCap)
    throw BoundExceededError("induced weight space: free exterior part exceeds " +
                             std::to_string(kFreeBlockCap) + " generators");

  std::vector<Mask> submasks;
  submasks.reserve(std::size_t(1) << block.size());
  for (std::size_t idx = 0; idx < (std::size_t(1) << block.size()); ++idx) {
    Mask mask = 0;
    for (std::size_t b = 0; b < block.size(); ++b)
      if ((idx >> b) & 1) mask |= Mask(1) << block[b];
    submasks.push_back(mask);
  }

  linalg::RatMat equations;
  for (const RatVec& theta : w.basis()) {
    // One equation row per output monomial of the block.
    std::vector<RatVec> rows(submasks.size(), RatVec(submasks.size(), Rat(0)));
    for (std::size_t ci = 0; ci < submasks.size(); ++ci) {
      const ExteriorElement img =
          right_derivation(t, theta, m, ExteriorElement::monomial(submasks[ci]));
      for (const auto& [mask, coeff] : img.terms) {
        const auto it = std::lower_bound(submasks.begin(), submasks.end(), mask);
        if (it == submasks.end() || *it != mask)
          throw TsvError("internal error: derivation left the touched block");
        rows[static_cast<std::size_t>(it - submasks.begin())][ci] += coeff;
      }
    }
    for (RatVec& r : rows)
      if (!linalg::is_zero_vec(r)) equations.push_back(std::move(r));
  }
  const linalg::RatMat kernel = linalg::kernel_basis(equations, submasks.size());

  std::vector<ExteriorElement> elements;
  for (const RatVec& coeffs : kernel) {
    ExteriorElement core;
    for (std::size_t i = 0; i < submasks.size(); ++i)
      if (coeffs[i] != 0) core.terms[submasks[i]] = coeffs[i];
    for (std::size_t f = 0; f < (std::size_t(1) << free_bits.size()); ++f) {
      Mask fmask = 0;
      for (std::size_t b = 0; b < free_bits.size(); ++b)
        if ((f >> b) & 1) fmask |= Mask(1) << free_bits[b];
      elements.push_back(wedge(core, ExteriorElement::monomial(fmask)));
    }
  }
  return make_weight_space(m, t.q, elements);
}

WeightSpace intersect_weight_spaces(const std::vector<WeightSpace>& spaces) {
  if (spaces.empty()) throw PreconditionError("weight space intersection needs at least one input");
  for (const WeightSpace& s : spaces)
    if (s.weight != spaces.front().weight || s.q != spaces.front().q)
      throw PreconditionError("weight mismatch in weight space intersection");

  std::vector<ExteriorElement> current = spaces.front().basis;
  for (std::size_t i = 1; i < spaces.size(); ++i) {
    std::vector<ExteriorElement> both = current;
    both.insert(both.end(), spaces[i].basis.begin(), spaces[i].basis.end());
    const std::vector<Mask> cols = touched_masks(both);
    const linalg::RatMat meet = linalg::rowspace_intersection(
        to_rows(current, cols), to_rows(spaces[i].basis, cols), cols.size());
    current = from_rows(meet, cols);
  }
  return make_weight_space(spaces.front().weight, spaces.front().q, current);
}

bool is_decomposably_generated(const WeightSpace& ws, const std::vector<WeightSpace>& generators) {
  std::vector<ExteriorElement> pool;
  for (const WeightSpace& g : generators) {
    if (g.weight != ws.weight || g.q != ws.q)
      throw PreconditionError("weight mismatch in decomposable generation test");
    pool.insert(pool.end(), g.basis.begin(), g.basis.end());
  }
  if (ws.dim() == 0) return true;
  std::vector<ExteriorElement> all = pool;
  all.insert(all.end(), ws.basis.begin(), ws.basis.end());
  const std::vector<Mask> cols = touched_masks(all);
  return linalg::rowspace_contains_all(linalg::rowspace(to_rows(pool, cols)),
                                       to_rows(ws.basis, cols));
}

}  // namespace tsv::exterior
