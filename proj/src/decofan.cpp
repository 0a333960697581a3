#include "tsv/decofan.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

namespace tsv::decofan {

namespace {

using exterior::ExteriorElement;
using exterior::WeightSpace;
using lattice::Cone;
using lattice::FanCone;
using linalg::RatVec;

void require_rational(const DecoratedFan& df, const char* what) {
  if (df.has_sign_decorations())
    throw UnsupportedError(std::string(what) + " requires rational decorations");
}

RatMat identity_rat(std::size_t n) {
  RatMat m(n, RatVec(n, Rat(0)));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

IntMat identity_int(std::size_t n) {
  IntMat m(n, IntVec(n, Int(0)));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

// Chain level <m, u_rho> clamped into the stored chain (the tail repeats).
std::size_t chain_level(const DecorationChain& chain, const Int& pairing) {
  if (pairing < 0) throw PreconditionError("negative pairing has no chain level");
  if (pairing >= Int(chain.spaces.size())) return chain.spaces.size() - 1;
  return static_cast<std::size_t>(pairing.convert_to<long long>());
}

const Subspace& rational_space(const DecoratedFan& df, std::size_t ray, const Int& pairing) {
  const RayDecoration& d = df.decorations[ray];
  if (d.sign_mode) throw UnsupportedError("operation requires rational decorations");
  return d.chain.at(chain_level(d.chain, pairing));
}

bool is_diagonal_pairing_torus(const SupertorusData& t) {
  if (t.p != t.q) return false;
  for (std::size_t i = 0; i < t.q; ++i)
    for (std::size_t j = 0; j < t.q; ++j) {
      RatVec expect(t.p, Rat(0));
      if (i == j) expect[i] = 2;
      RatVec ei(t.q, Rat(0)), ej(t.q, Rat(0));
      ei[i] = 1;
      ej[j] = 1;
      if (bracket_eval(t, ei, ej) != expect) return false;
    }
  return true;
}

std::vector<std::string> structural_check(const DecoratedFan& df) {
  std::vector<std::string> errors;
  try {
    df.torus.validate();
  } catch (const TsvError& e) {
    errors.emplace_back(e.what());
    return errors;
  }
  if (df.h.ambient() != df.torus.q)
    errors.push_back("h must live in the rank-q odd part");
  else if (bracket_subspaces(df.torus, df.h, df.h).dim() != 0)
    errors.push_back("h must be an abelian subalgebra: [h,h] != 0");
  try {
    lattice::validate_fan(df.fan);
  } catch (const TsvError& e) {
    errors.emplace_back(std::string("fan: ") + e.what());
    return errors;
  }
  if (df.decorations.size() != df.fan.rays.size()) {
    errors.push_back("decorations must be given for every ray");
    return errors;
  }
  const bool any_sign = df.has_sign_decorations();
  if (any_sign && df.h.dim() != 0)
    errors.push_back("square-root decorations require h = 0");
  if (any_sign && !is_diagonal_pairing_torus(df.torus))
    errors.push_back("square-root decorations require a Q(1)^n torus");
  for (std::size_t r = 0; r < df.decorations.size(); ++r) {
    const RayDecoration& d = df.decorations[r];
    const std::string where = "ray " + std::to_string(r) + ": ";
    if (d.sign_mode) {
      if (d.signs.signs.size() != df.torus.q) {
        errors.push_back(where + "sign vector must have length q");
        continue;
      }
      if (d.signs.is_zero()) continue;
      for (std::size_t i = 0; i < df.torus.q; ++i) {
        const bool on_ray = i < df.fan.rays[r].size() && df.fan.rays[r][i] != 0;
        if ((d.signs.signs[i] != 0) != on_ray) {
          errors.push_back(where + "sign support must match the ray support");
          break;
        }
      }
      continue;
    }
    try {
      d.chain.validate();
    } catch (const TsvError& e) {
      errors.push_back(where + e.what());
      continue;
    }
    if (d.chain.spaces.front().ambient() != df.torus.q)
      errors.push_back(where + "decoration chain must live in the rank-q odd part");
  }
  return errors;
}

// Characters of the dual cone used for quantified-over-m checks: semigroup
// generators and all sums of at most degree_bound of them (0 included).
std::vector<IntVec> character_test_set(const Cone& cone, long long degree_bound) {
  const lattice::IntMat gens = lattice::semigroup_generators(lattice::dual_cone(cone));
  const lattice::IntMat sums =
      lattice::degree_test_set(gens, static_cast<unsigned>(std::max<long long>(degree_bound, 1)));
  return {sums.begin(), sums.end()};
}

Subspace ray_span(const DecoratedFan& df, const std::vector<std::size_t>& ids) {
  RatMat rows;
  for (std::size_t r : ids) rows.push_back(lattice::to_rat(df.fan.rays[r]));
  return Subspace(df.torus.p, std::move(rows));
}

const FanCone& find_cone(const std::vector<FanCone>& cones, std::vector<std::size_t> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  for (const FanCone& fc : cones)
    if (fc.ray_ids == ids) return fc;
  throw PreconditionError("cone is not in the fan");
}

// |x| = d * s^2 with d squarefree; trial division (ray coordinates are small).
void squarefree_split(Int x, Int& d, Int& s) {
  if (x < 0) x = -x;
  d = 1;
  s = 1;
  for (Int f = 2; f * f <= x; ++f) {
    int e = 0;
    while (x % f == 0) {
      x /= f;
      ++e;
    }
    for (int k = 0; k < e / 2; ++k) s *= f;
    if (e % 2 == 1) d *= f;
  }
  d *= x;
}

// Bracket span between two ray decorations at given chain levels, split into
// rational classes keyed by (squarefree radicand, imaginary flag): the value
// c * sqrt(d) * i^flag contributes c to class (d, flag). Purely rational
// brackets live in class (1, 0).
using ClassKey = std::pair<Int, int>;

std::map<ClassKey, RatMat> bracket_class_rows(const DecoratedFan& df, std::size_t ray_a,
                                              const Int& pair_a, std::size_t ray_b,
                                              const Int& pair_b) {
  const RayDecoration& da = df.decorations[ray_a];
  const RayDecoration& db = df.decorations[ray_b];
  std::map<ClassKey, RatMat> out;
  const auto sign_active = [&](const RayDecoration& d, const Int& pairing) {
    return d.sign_mode && !d.signs.is_zero() && pairing == 0;
  };
  const auto add_row = [&](const ClassKey& key, RatVec row) {
    if (!linalg::is_zero_vec(row)) out[key].push_back(std::move(row));
  };

  if (!da.sign_mode && !db.sign_mode) {
    const Subspace& va = rational_space(df, ray_a, pair_a);
    const Subspace& vb = rational_space(df, ray_b, pair_b);
    const Subspace bracket = bracket_subspaces(df.torus, va, vb);
    for (const RatVec& row : bracket.basis()) add_row({Int(1), 0}, row);
    return out;
  }

  // Sign decorations only pair diagonally: [theta_i, theta_j] = 2 delta_ij x_i.
  const auto sqrt_coeff = [&](std::size_t ray, std::size_t i) {
    // Returns (rational magnitude contribution under sqrt, negativity flag):
    // the i-th coefficient of the decorated line is sign * sqrt(u_i).
    return df.fan.rays[ray][i];
  };
  const auto sign_line = [&](const RayDecoration& d) { return d.signs.signs; };

  if (sign_active(da, pair_a) && sign_active(db, pair_b)) {
    std::map<ClassKey, RatVec> acc;
    for (std::size_t i = 0; i < df.torus.q; ++i) {
      const int ea = sign_line(da)[i], eb = sign_line(db)[i];
      if (ea == 0 || eb == 0) continue;
      const Int ua = sqrt_coeff(ray_a, i), ub = sqrt_coeff(ray_b, i);
      Int d, s;
      squarefree_split(ua * ub, d, s);
      const int negs = (ua < 0 ? 1 : 0) + (ub < 0 ? 1 : 0);
      Rat coeff = Rat(2 * ea * eb) * Rat(s);
      if (negs == 2) coeff = -coeff;  // i * i = -1
      const ClassKey key{d, negs % 2};
      auto [it, fresh] = acc.emplace(key, RatVec(df.torus.p, Rat(0)));
      it->second[i] += coeff;
    }
    for (auto& [key, row] : acc) add_row(key, std::move(row));
    return out;
  }

  const bool a_is_sign = da.sign_mode;
  const RayDecoration& ds = a_is_sign ? da : db;
  const std::size_t ray_s = a_is_sign ? ray_a : ray_b;
  const Int& pair_s = a_is_sign ? pair_a : pair_b;
  const RayDecoration& dr = a_is_sign ? db : da;
  const Int& pair_r = a_is_sign ? pair_b : pair_a;
  if (!sign_active(ds, pair_s)) return out;  // the sign side is h = 0
  const Subspace& vr =
      dr.sign_mode ? Subspace::zero(df.torus.q)
                   : dr.chain.at(chain_level(dr.chain, pair_r));
  for (const RatVec& w : vr.basis()) {
    std::map<ClassKey, RatVec> acc;
    for (std::size_t i = 0; i < df.torus.q; ++i) {
      const int e = ds.signs.signs[i];
      if (e == 0 || w[i] == 0) continue;
      const Int u = sqrt_coeff(ray_s, i);
      Int d, s;
      squarefree_split(u, d, s);
      const ClassKey key{d, u < 0 ? 1 : 0};
      auto [it, fresh] = acc.emplace(key, RatVec(df.torus.p, Rat(0)));
      it->second[i] += Rat(2 * e) * Rat(s) * w[i];
    }
    for (auto& [key, row] : acc) add_row(key, std::move(row));
  }
  return out;
}

// DJ evaluation without precondition checks (search-internal).
bool dj_eval(const DecoratedFan& df, const std::vector<std::size_t>& ids, const IntVec& m,
             const Subspace& w) {
  const Subspace self_bracket = bracket_subspaces(df.torus, w, w);
  for (const RatVec& row : self_bracket.basis()) {
    Rat pairing(0);
    for (std::size_t i = 0; i < m.size(); ++i) pairing += Rat(m[i]) * row[i];
    if (pairing != 0) return false;
  }
  for (std::size_t r : ids) {
    const DecorationChain& chain = df.decorations[r].chain;
    const Int n = lattice::dot(m, df.fan.rays[r]);
    if (!w.contains(chain.at(chain_level(chain, n)))) return false;
    // sum_{i=0}^{n-1} (dim V_i - dim V_i ^ W) <= n, with the tail handled in
    // closed form so large pairings cost nothing.
    const std::size_t stable = chain.spaces.size() - 1;
    Int lhs(0);
    for (std::size_t i = 0; i < stable && Int(i) < n; ++i)
      lhs += Int(chain.spaces[i].dim() - intersection(chain.spaces[i], w).dim());
    if (n > Int(stable)) {
      const Subspace& tail = chain.tail();
      lhs += (n - Int(stable)) * Int(tail.dim() - intersection(tail, w).dim());
    }
    if (lhs > n) return false;
  }
  return true;
}

constexpr std::size_t kDjAtomCap = 12;

// Candidate witnesses for DJ(sigma, m): the forced base sum_rho V_{rho,m}
// enlarged by sums of subsets of the chain spaces (h included).
std::vector<Subspace> dj_candidates(const DecoratedFan& df, const std::vector<std::size_t>& ids,
                                    const IntVec& m) {
  std::set<Subspace> atoms;
  atoms.insert(df.h);
  Subspace base = Subspace::zero(df.torus.q);
  for (std::size_t r : ids) {
    const DecorationChain& chain = df.decorations[r].chain;
    for (const Subspace& s : chain.spaces) atoms.insert(s);
    base = sum(base, chain.at(chain_level(chain, lattice::dot(m, df.fan.rays[r]))));
  }
  if (atoms.size() > kDjAtomCap)
    throw BoundExceededError("DJ witness search: chain space family exceeds " +
                             std::to_string(kDjAtomCap) + " subspaces");
  const std::vector<Subspace> atom_list(atoms.begin(), atoms.end());
  std::set<Subspace> candidates;
  for (std::size_t mask = 0; mask < (std::size_t(1) << atom_list.size()); ++mask) {
    Subspace cand = base;
    for (std::size_t b = 0; b < atom_list.size(); ++b)
      if ((mask >> b) & 1) cand = sum(cand, atom_list[b]);
    candidates.insert(std::move(cand));
  }
  return {candidates.begin(), candidates.end()};
}

Subspace annihilator(const Subspace& v, std::size_t ambient) {
  return Subspace(ambient, linalg::kernel_basis(v.basis(), ambient));
}

ExteriorElement one_form(const RatVec& row) {
  ExteriorElement e;
  for (std::size_t i = 0; i < row.size(); ++i)
    if (row[i] != 0) e.terms[exterior::Mask(1) << i] = row[i];
  return e;
}

}  // namespace

ValidityReport validate(const DecoratedFan& df, const std::string& mode, long long degree_bound) {
  if (mode != "general" && mode != "large_orbit")
    throw PreconditionError("validation mode must be 'general' or 'large_orbit'");
  ValidityReport report;
  report.mode = mode;
  report.degree_bound = degree_bound;
  report.structural_errors = structural_check(df);
  if (!report.structural_errors.empty()) return report;
  if (mode == "general") require_rational(df, "general-mode validation");

  const auto fail = [&](std::string cond, std::vector<std::size_t> ids, IntVec m,
                        std::string detail) {
    if (report.failures.size() < 64)
      report.failures.push_back({std::move(cond), std::move(ids), std::move(m), std::move(detail)});
  };

  // (a) every chain stabilizes at h.
  for (std::size_t r = 0; r < df.decorations.size(); ++r) {
    const RayDecoration& d = df.decorations[r];
    if (!d.sign_mode && d.chain.tail() != df.h)
      fail("a", {r}, {}, "chain does not stabilize at h");
  }

  // (c) per-ray codimension condition.
  for (std::size_t r = 0; r < df.decorations.size(); ++r) {
    const RayDecoration& d = df.decorations[r];
    const std::size_t codim =
        d.sign_mode ? (d.signs.is_zero() ? 0 : 1) : d.chain.spaces.front().dim() - df.h.dim();
    if (mode == "large_orbit") {
      if (codim > 1) fail("c", {r}, {}, "codim(h, V_0) exceeds 1");
    } else {
      const bool square_zero =
          bracket_subspaces(df.torus, d.chain.spaces.front(), d.chain.spaces.front()).dim() == 0;
      if (!square_zero && codim != 1)
        fail("c", {r}, {}, "[V_0, V_0] != 0 and codim(h, V_0) != 1");
    }
  }
  if (!report.failures.empty()) return report;  // (b) assumes well-shaped chains

  const std::vector<FanCone> cones = lattice::all_cones(df.fan);
  for (const FanCone& fc : cones) {
    const std::vector<IntVec> characters = character_test_set(fc.cone, degree_bound);
    for (const IntVec& m : characters) {
      if (mode == "large_orbit") {
        RatMat span_rows;
        for (std::size_t r : fc.ray_ids)
          if (lattice::dot(m, df.fan.rays[r]) == 0)
            span_rows.push_back(lattice::to_rat(df.fan.rays[r]));
        const Subspace face_span(df.torus.p, std::move(span_rows));
        for (std::size_t a = 0; a < fc.ray_ids.size(); ++a)
          for (std::size_t b = a; b < fc.ray_ids.size(); ++b) {
            const std::size_t ra = fc.ray_ids[a], rb = fc.ray_ids[b];
            const auto classes = bracket_class_rows(df, ra, lattice::dot(m, df.fan.rays[ra]), rb,
                                                    lattice::dot(m, df.fan.rays[rb]));
            for (const auto& [key, rows] : classes)
              for (const RatVec& row : rows)
                if (!face_span.contains(row)) {
                  fail("b", fc.ray_ids, m,
                       "[V_{rho,m}, V_{rho',m}] escapes the span of the face where m vanishes "
                       "(rays " +
                           std::to_string(ra) + "," + std::to_string(rb) + ")");
                  goto next_character;
                }
          }
      } else {
        bool found = false;
        for (const Subspace& w : dj_candidates(df, fc.ray_ids, m))
          if (dj_eval(df, fc.ray_ids, m, w)) {
            found = true;
            break;
          }
        if (!found)
          fail("b", fc.ray_ids, m, "no subspace witness for the dimension-jumping property "
                                   "found in the chain-sum family");
      }
    next_character:;
    }
  }
  report.valid = report.failures.empty();
  return report;
}

Subspace cone_decoration(const DecoratedFan& df, const std::vector<std::size_t>& cone_rays,
                         const IntVec& m) {
  require_rational(df, "cone decoration");
  Subspace acc = df.h;
  for (std::size_t r : cone_rays) {
    if (r >= df.fan.rays.size()) throw PreconditionError("ray index out of range");
    acc = sum(acc, rational_space(df, r, lattice::dot(m, df.fan.rays[r])));
  }
  return acc;
}

bool dj_check(const DecoratedFan& df, const std::vector<std::size_t>& cone_rays, const IntVec& m,
              const Subspace& w) {
  require_rational(df, "the dimension-jumping check");
  const std::vector<FanCone> cones = lattice::all_cones(df.fan);
  const FanCone& fc = find_cone(cones, cone_rays);
  for (std::size_t r : fc.ray_ids)
    if (lattice::dot(m, df.fan.rays[r]) < 0)
      throw PreconditionError("character is not in the dual cone");
  if (!cone_decoration(df, fc.ray_ids, IntVec(df.torus.p, Int(0))).contains(w))
    throw PreconditionError("witness subspace must lie in V_{sigma,0}");
  return dj_eval(df, fc.ray_ids, m, w);
}

SuperPresentation ray_chart(const DecoratedFan& df, std::size_t ray_index) {
  require_rational(df, "ray charts");
  if (ray_index >= df.fan.rays.size()) throw PreconditionError("ray index out of range");
  const DecorationChain& chain = df.decorations[ray_index].chain;
  chain.validate();
  if (chain.tail() != df.h) throw PreconditionError("chain does not stabilize at h");
  const std::size_t q = df.torus.q;

  // Build a flag basis by extending upward through the chain; a vector first
  // seen inside V_i (but not V_{i+1}) twists with exponent i+1, vectors
  // outside V_0 are free (exponent 0) and vectors inside h get no generator.
  struct Coord {
    RatVec theta;
    long long ell;  // -1 marks h
  };
  std::vector<std::pair<const Subspace*, long long>> levels;
  levels.emplace_back(&chain.spaces.back(), -1);
  for (std::size_t i = chain.spaces.size() - 1; i-- > 0;)
    levels.emplace_back(&chain.spaces[i], static_cast<long long>(i) + 1);
  const Subspace full = Subspace::full(q);
  levels.emplace_back(&full, 0);

  std::vector<Coord> coords;
  RatMat reducer;
  for (const auto& [space, ell] : levels) {
    for (const RatVec& row : space->basis()) {
      RatVec r = linalg::reduce_against(reducer, linalg::pivot_cols(reducer), row);
      if (linalg::is_zero_vec(r)) continue;
      std::size_t lead = 0;
      while (r[lead] == 0) ++lead;
      const Rat scale = r[lead];
      for (Rat& c : r) c /= scale;
      reducer = linalg::rowspace_sum(reducer, {r});
      coords.push_back({std::move(r), ell});
    }
  }
  std::stable_sort(coords.begin(), coords.end(), [](const Coord& a, const Coord& b) {
    const auto key = [](long long e) { return e < 0 ? std::numeric_limits<long long>::max() : e; };
    return key(a.ell) < key(b.ell);
  });

  SuperPresentation pres;
  pres.p = df.torus.p;
  pres.q = q;
  for (const Coord& c : coords) pres.flag_basis.push_back(c.theta);

  const Cone ray_cone = Cone::from_rays(df.torus.p, {df.fan.rays[ray_index]});
  const lattice::IntMat gens = lattice::semigroup_generators(lattice::dual_cone(ray_cone));
  IntVec m1;
  std::vector<IntVec> units;
  for (const IntVec& g : gens) {
    const Int pairing = lattice::dot(g, df.fan.rays[ray_index]);
    if (pairing > 0) {
      if (!m1.empty() || pairing != 1)
        throw TsvError("internal error: unexpected dual semigroup of a ray");
      m1 = g;
    } else {
      std::size_t lead = 0;
      while (lead < g.size() && g[lead] == 0) ++lead;
      if (lead < g.size() && g[lead] > 0) units.push_back(g);
    }
  }
  if (m1.empty()) throw TsvError("internal error: ray dual cone has no positive generator");
  std::sort(units.begin(), units.end());
  pres.even_gens.emplace_back(m1, false);
  for (const IntVec& g : units) pres.even_gens.emplace_back(g, true);

  for (std::size_t j = 0; j < coords.size(); ++j) {
    if (coords[j].ell < 0) continue;
    pres.ell.push_back(coords[j].ell);
    IntVec character(df.torus.p, Int(0));
    for (std::size_t i = 0; i < character.size(); ++i) character[i] = Int(coords[j].ell) * m1[i];
    pres.odd_gens.emplace_back(std::move(character), ExteriorElement::generator(j));
  }
  return pres;
}

exterior::WeightSpace ray_weight_space(const DecoratedFan& df, std::size_t ray_index,
                                       const IntVec& m) {
  const SuperPresentation chart = ray_chart(df, ray_index);
  const Int n = lattice::dot(m, df.fan.rays[ray_index]);
  if (n < 0) throw PreconditionError("character is not in the ray's dual cone");
  const std::size_t k = chart.ell.size();
  if (k > 16)
    throw BoundExceededError("ray weight space: more than 16 non-invariant odd coordinates");
  const RatMat dual_rows = linalg::inverse(linalg::transpose(chart.flag_basis, chart.q));

  std::vector<ExteriorElement> elements;
  for (std::size_t mask = 0; mask < (std::size_t(1) << k); ++mask) {
    Int budget(0);
    for (std::size_t j = 0; j < k; ++j)
      if ((mask >> j) & 1) budget += chart.ell[j];
    if (budget > n) continue;
    ExteriorElement e = ExteriorElement::one();
    for (std::size_t j = 0; j < k; ++j)
      if ((mask >> j) & 1) e = exterior::wedge(e, one_form(dual_rows[j]));
    elements.push_back(std::move(e));
  }
  return exterior::make_weight_space(m, df.torus.q, elements);
}

exterior::WeightSpace sigma_weight_space(const DecoratedFan& df,
                                         const std::vector<std::size_t>& cone_rays,
                                         const IntVec& m) {
  require_rational(df, "weight space computation");
  const std::vector<FanCone> cones = lattice::all_cones(df.fan);
  const FanCone& fc = find_cone(cones, cone_rays);
  for (std::size_t r : fc.ray_ids)
    if (lattice::dot(m, df.fan.rays[r]) < 0)
      throw PreconditionError("character is not in the dual cone");
  if (fc.ray_ids.empty()) return exterior::induced_weight_space(df.torus, df.h, m);
  std::vector<exterior::WeightSpace> parts;
  for (std::size_t r : fc.ray_ids) parts.push_back(ray_weight_space(df, r, m));
  return exterior::intersect_weight_spaces(parts);
}

StabilizerResult orbit_stabilizer(const DecoratedFan& df,
                                  const std::vector<std::size_t>& cone_rays) {
  require_rational(df, "orbit stabilizers");
  const std::vector<FanCone> cones = lattice::all_cones(df.fan);
  const FanCone& fc = find_cone(cones, cone_rays);
  return {ray_span(df, fc.ray_ids),
          cone_decoration(df, fc.ray_ids, IntVec(df.torus.p, Int(0)))};
}

SmoothReport smooth_check(const DecoratedFan& df) {
  require_rational(df, "the smoothness check");
  SmoothReport report;
  bool failed = false, unknown = false;
  for (const std::vector<std::size_t>& ids : df.fan.cones) {
    SmoothConeEntry entry;
    entry.ray_ids = ids;
    lattice::IntMat gens;
    for (std::size_t r : ids) gens.push_back(df.fan.rays[r]);
    const Cone cone = Cone::from_rays(df.fan.rank, gens);
    if (!lattice::is_smooth_cone(cone)) {
      entry.status = "singular_cone";
      failed = true;
      report.cones.push_back(std::move(entry));
      continue;
    }
    std::vector<Subspace> family;
    for (std::size_t r : ids)
      for (const Subspace& s : df.decorations[r].chain.spaces) family.push_back(s);
    if (!family.empty()) {
      try {
        const superlie::AdaptedBasisResult adapted = superlie::adapted_basis_exists(family);
        if (!adapted.exists) {
          entry.status = "no_adapted_basis";
          entry.witness = adapted.violating_triple;
          failed = true;
          report.cones.push_back(std::move(entry));
          continue;
        }
      } catch (const BoundExceededError& e) {
        entry.status = "unknown";
        entry.detail = e.what();
        unknown = true;
        report.cones.push_back(std::move(entry));
        continue;
      }
    }
    bool bracket_ok = true;
    for (std::size_t a : ids) {
      const Subspace& va = df.decorations[a].chain.spaces.front();
      if (va.dim() < df.h.dim() + 2) continue;
      for (std::size_t b : ids) {
        const Subspace& vb = df.decorations[b].chain.spaces.front();
        const Subspace target = Subspace::span_of(df.torus.p, lattice::to_rat(df.fan.rays[b]));
        const Subspace bracket = bracket_subspaces(df.torus, va, vb);
        for (const RatVec& row : bracket.basis())
          if (!target.contains(row)) {
            bracket_ok = false;
            entry.detail = "[V_{rho,0}, V_{rho',0}] escapes the ray span for rays " +
                           std::to_string(a) + "," + std::to_string(b);
            break;
          }
        if (!bracket_ok) break;
      }
      if (!bracket_ok) break;
    }
    if (!bracket_ok) {
      entry.status = "bracket_failure";
      failed = true;
    } else {
      entry.status = "smooth";
    }
    report.cones.push_back(std::move(entry));
  }
  report.overall = failed ? "not_smooth" : (unknown ? "unknown" : "smooth");
  return report;
}

Resolution resolve(const DecoratedFan& df) {
  require_rational(df, "resolution");
  MorphismData identity{identity_int(df.torus.p), identity_rat(df.torus.q)};
  if (smooth_check(df).smooth()) return {df, identity};

  const Fan refined = lattice::refine_fan(df.fan);
  for (std::size_t i = 0; i < df.fan.rays.size(); ++i)
    if (refined.rays[i] != df.fan.rays[i])
      throw TsvError("internal error: refinement permuted the original rays");
  DecoratedFan out;
  out.torus = df.torus;
  out.h = df.h;
  out.fan = refined;
  out.decorations = df.decorations;
  for (std::size_t i = df.fan.rays.size(); i < refined.rays.size(); ++i)
    out.decorations.push_back(RayDecoration::of_chain(DecorationChain{{df.h}}));
  if (!smooth_check(out).smooth())
    throw TsvError("refinement did not produce a smooth decorated fan");
  return {std::move(out), std::move(identity)};
}

bool morphism_check(const DecoratedFan& src, const DecoratedFan& dst, const MorphismData& map,
                    long long degree_bound) {
  require_rational(src, "morphism checks");
  require_rational(dst, "morphism checks");
  if (map.lattice_map.size() != dst.torus.p)
    throw PreconditionError("lattice map must have p' rows");
  for (const IntVec& row : map.lattice_map)
    if (row.size() != src.torus.p) throw PreconditionError("lattice map must have p columns");
  if (map.odd_map.size() != dst.torus.q) throw PreconditionError("odd map must have q' rows");
  for (const RatVec& row : map.odd_map)
    if (row.size() != src.torus.q) throw PreconditionError("odd map must have q columns");
  for (const DecoratedFan* df : {&src, &dst})
    if (!validate(*df, "large_orbit", degree_bound).valid)
      throw UnsupportedError("HR1 morphisms out of scope: input is not a valid large-orbit fan");

  // dphi must intertwine the odd brackets with the even map.
  const auto odd_image = [&](const RatVec& v) {
    RatVec out(dst.torus.q, Rat(0));
    for (std::size_t i = 0; i < dst.torus.q; ++i)
      for (std::size_t j = 0; j < src.torus.q; ++j) out[i] += map.odd_map[i][j] * v[j];
    return out;
  };
  for (std::size_t i = 0; i < src.torus.q; ++i)
    for (std::size_t j = 0; j < src.torus.q; ++j) {
      RatVec ei(src.torus.q, Rat(0)), ej(src.torus.q, Rat(0));
      ei[i] = 1;
      ej[j] = 1;
      const RatVec lhs = bracket_eval(dst.torus, odd_image(ei), odd_image(ej));
      const RatVec bracket = bracket_eval(src.torus, ei, ej);
      RatVec rhs(dst.torus.p, Rat(0));
      for (std::size_t a = 0; a < dst.torus.p; ++a)
        for (std::size_t b = 0; b < src.torus.p; ++b)
          rhs[a] += Rat(map.lattice_map[a][b]) * bracket[b];
      if (lhs != rhs) return false;
    }

  const std::vector<FanCone> src_cones = lattice::all_cones(src.fan);
  const std::vector<FanCone> dst_cones = lattice::all_cones(dst.fan);
  for (const FanCone& fc : src_cones) {
    std::vector<const FanCone*> covering;
    for (const FanCone& tc : dst_cones) {
      bool covers = true;
      for (std::size_t r : fc.ray_ids)
        if (!tc.cone.contains(lattice::map_vec(map.lattice_map, src.fan.rays[r]))) {
          covers = false;
          break;
        }
      if (covers) covering.push_back(&tc);
    }
    if (covering.empty()) return false;  // not a map of fans
    const FanCone* minimal = covering.front();
    for (const FanCone* c : covering)
      if (minimal->cone.contains(c->cone)) minimal = c;
    for (const FanCone* c : covering)
      if (!c->cone.contains(minimal->cone))
        throw TsvError("internal error: covering cones admit no minimum");

    for (const IntVec& m_target : character_test_set(minimal->cone, degree_bound)) {
      const IntVec m_source = lattice::row_times(m_target, map.lattice_map);
      const Subspace v_src = cone_decoration(src, fc.ray_ids, m_source);
      const Subspace v_dst = cone_decoration(dst, minimal->ray_ids, m_target);
      for (const RatVec& row : v_src.basis())
        if (!v_dst.contains(odd_image(row))) return false;
    }
  }
  return true;
}

Subspace KlyachkoFiltration::at(long long i) const {
  if (i > 0) return Subspace::zero(q);
  const std::size_t idx = static_cast<std::size_t>(-i);
  return idx < steps.size() ? steps[idx] : steps.back();
}

KlyachkoFiltration klyachko_export(const DecoratedFan& df, std::size_t ray_index) {
  require_rational(df, "filtration export");
  if (ray_index >= df.fan.rays.size()) throw PreconditionError("ray index out of range");
  const DecorationChain& chain = df.decorations[ray_index].chain;
  KlyachkoFiltration f;
  f.q = df.torus.q;
  f.ambient = annihilator(df.h, df.torus.q);
  for (const Subspace& v : chain.spaces) f.steps.push_back(annihilator(v, df.torus.q));
  return f;
}

DecorationChain klyachko_import(const KlyachkoFiltration& f) {
  DecorationChain chain;
  for (const Subspace& e : f.steps) chain.spaces.push_back(annihilator(e, f.q));
  chain.validate();
  return chain;
}

std::vector<DecoratedFan> enumerate_decorations(const SupertorusData& torus, const Fan& fan) {
  if (torus.p != fan.rank || torus.q != fan.rank || !is_diagonal_pairing_torus(torus))
    throw UnsupportedError("decoration enumeration requires a Q(1)^n torus matching the fan rank");
  lattice::validate_fan(fan);
  const std::size_t n = fan.rank;

  std::vector<std::vector<SignDecoration>> options(fan.rays.size());
  for (std::size_t r = 0; r < fan.rays.size(); ++r) {
    options[r].push_back(SignDecoration{std::vector<int>(n, 0)});
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < n; ++i)
      if (fan.rays[r][i] != 0) support.push_back(i);
    // First support coordinate is normalized to +, the rest vary.
    for (std::size_t mask = 0; mask < (std::size_t(1) << (support.size() - 1)); ++mask) {
      SignDecoration d{std::vector<int>(n, 0)};
      d.signs[support[0]] = 1;
      for (std::size_t b = 0; b + 1 < support.size(); ++b)
        d.signs[support[b + 1]] = ((mask >> b) & 1) ? -1 : 1;
      options[r].push_back(std::move(d));
    }
  }

  std::size_t total = 1;
  for (const auto& opts : options) {
    total *= opts.size();
    if (total > 100000)
      throw BoundExceededError("decoration enumeration exceeds 100000 combinations");
  }

  std::vector<DecoratedFan> out;
  std::vector<std::size_t> pick(fan.rays.size(), 0);
  for (std::size_t combo = 0; combo < total; ++combo) {
    DecoratedFan df;
    df.torus = torus;
    df.h = Subspace::zero(n);
    df.fan = fan;
    for (std::size_t r = 0; r < fan.rays.size(); ++r)
      df.decorations.push_back(RayDecoration::of_signs(options[r][pick[r]]));
    if (validate(df, "large_orbit", 2).valid) out.push_back(std::move(df));
    for (std::size_t r = fan.rays.size(); r-- > 0;) {
      if (++pick[r] < options[r].size()) break;
      pick[r] = 0;
    }
  }
  return out;
}

}  // namespace tsv::decofan
