#include "tsv/lattice.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <utility>

namespace tsv::lattice {

namespace {

using linalg::RatMat;
using linalg::RatVec;

IntMat identity_rows(std::size_t n) {
  IntMat m(n, IntVec(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

bool is_zero(const IntVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
}

Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;  // truncates toward zero
  if ((a % b) != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}

// w = da * r - dr * l, entrywise, made primitive.
IntVec combine(const Int& da, const IntVec& r, const Int& dr, const IntVec& l) {
  IntVec w(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) w[i] = da * r[i] - dr * l[i];
  return primitive(std::move(w));
}

// Representative of r modulo the span of `lin`, scaled to a primitive integer
// vector by a positive factor (so the ray's direction is preserved).
IntVec reduce_mod(const IntMat& lin, const IntVec& r) {
  if (lin.empty()) return primitive(r);
  RatMat l = to_rat(lin);
  const std::vector<std::size_t> pivots = linalg::rref(l);
  RatVec x = linalg::reduce_against(l, pivots, to_rat(r));
  return scale_primitive(x);
}

std::size_t rat_rank(const IntMat& rows) { return linalg::rank(to_rat(rows)); }

// Intermediate V-form during double-description: cone = span(lin) + cone(rays).
struct VForm {
  IntMat lin;
  IntMat rays;
};

// Keeps only rays that are extremal: the active halfspace normals at an
// extremal ray span a space of codimension dim(lineality) + 1.
void prune_nonextremal(VForm& s, const IntMat& normals, std::size_t rank) {
  const std::size_t dim_lin = s.lin.size();
  if (rank < dim_lin + 1) {
    s.rays.clear();
    return;
  }
  const std::size_t target = rank - dim_lin - 1;
  IntMat kept;
  for (const IntVec& r : s.rays) {
    IntMat active;
    for (const IntVec& a : normals)
      if (dot(a, r) == 0) active.push_back(a);
    if (rat_rank(active) == target) kept.push_back(r);
  }
  s.rays = std::move(kept);
}

void normalize_rays(VForm& s) {
  std::set<IntVec> seen;
  IntMat out;
  for (const IntVec& r : s.rays) {
    IntVec w = reduce_mod(s.lin, r);
    if (is_zero(w)) continue;
    if (seen.insert(w).second) out.push_back(std::move(w));
  }
  std::sort(out.begin(), out.end());
  s.rays = std::move(out);
}

// Intersects the current V-form with the halfspace <a, x> >= 0.  `normals`
// are all halfspace normals processed so far, `a` included.
void cut(VForm& s, const IntVec& a, const IntMat& normals, std::size_t rank) {
  std::size_t cut_idx = s.lin.size();
  for (std::size_t i = 0; i < s.lin.size(); ++i)
    if (dot(a, s.lin[i]) != 0) {
      cut_idx = i;
      break;
    }
  if (cut_idx < s.lin.size()) {
    // The halfspace cuts the lineality space: one lineality direction turns
    // into a ray, the rest is projected into the bounding hyperplane.
    IntVec l0 = s.lin[cut_idx];
    s.lin.erase(s.lin.begin() + static_cast<std::ptrdiff_t>(cut_idx));
    Int d0 = dot(a, l0);
    if (d0 < 0) {
      for (Int& x : l0) x = -x;
      d0 = -d0;
    }
    for (IntVec& l : s.lin) {
      const Int dl = dot(a, l);
      if (dl != 0) l = combine(d0, l, dl, l0);
    }
    for (IntVec& r : s.rays) {
      const Int dr = dot(a, r);
      if (dr != 0) r = combine(d0, r, dr, l0);
    }
    s.rays.push_back(std::move(l0));
  } else {
    IntMat next;
    std::vector<std::pair<Int, IntVec>> pos, neg;
    for (const IntVec& r : s.rays) {
      const Int d = dot(a, r);
      if (d >= 0) next.push_back(r);
      if (d > 0) pos.emplace_back(d, r);
      if (d < 0) neg.emplace_back(d, r);
    }
    for (const auto& [dp, rp] : pos)
      for (const auto& [dn, rn] : neg) next.push_back(combine(dp, rn, dn, rp));
    s.rays = std::move(next);
  }
  normalize_rays(s);
  prune_nonextremal(s, normals, rank);
}

// Double description: V-form of {x : <n, x> >= 0 for n in ineqs,
//                                    <e, x> =  0 for e in eqs}.
VForm dd(std::size_t rank, const IntMat& ineqs, const IntMat& eqs) {
  IntMat normals;
  for (const IntVec& e : eqs) {
    if (is_zero(e)) continue;
    normals.push_back(e);
    IntVec neg(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) neg[i] = -e[i];
    normals.push_back(std::move(neg));
  }
  for (const IntVec& n : ineqs)
    if (!is_zero(n)) normals.push_back(n);

  VForm s{identity_rows(rank), {}};
  IntMat processed;
  for (const IntVec& a : normals) {
    processed.push_back(a);
    cut(s, a, processed, rank);
  }
  if (!s.lin.empty()) s.lin = hermite_basis(saturate(s.lin, rank), rank);
  normalize_rays(s);
  prune_nonextremal(s, normals, rank);
  return s;
}

void check_rank(const IntMat& m, std::size_t rank, const char* what) {
  for (const IntVec& v : m)
    if (v.size() != rank) throw PreconditionError(std::string(what) + ": vector length mismatch");
}

std::vector<std::size_t> ray_ids_of(const Fan& f, const Cone& c) {
  std::vector<std::size_t> ids;
  for (const IntVec& r : c.rays) {
    const auto it = std::find(f.rays.begin(), f.rays.end(), r);
    if (it == f.rays.end())
      throw PreconditionError("cone ray is not a ray of the fan");
    ids.push_back(static_cast<std::size_t>(it - f.rays.begin()));
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

Cone fan_cone(const Fan& f, const std::vector<std::size_t>& ids) {
  IntMat gens;
  for (std::size_t i : ids) {
    if (i >= f.rays.size()) throw PreconditionError("cone refers to a missing ray");
    gens.push_back(f.rays[i]);
  }
  return Cone::from_rays(f.rank, std::move(gens));
}

Int cone_multiplicity(const Cone& c) {
  if (c.rays.empty()) return 1;
  SmithResult s = smith(c.rays, c.rank);
  if (s.rank != c.rays.size()) throw PreconditionError("multiplicity of a non-simplicial cone");
  Int m = 1;
  for (std::size_t i = 0; i < s.rank; ++i) m *= s.d[i][i];
  return m < 0 ? Int(-m) : m;
}

constexpr std::size_t kEnumerationCap = 8'000'000;

// Invokes fn(point) for every lattice point of the box given by inclusive
// per-coordinate bounds.
template <typename Fn>
void enumerate_box(const IntVec& lo, const IntVec& hi, Fn&& fn) {
  Int count = 1;
  for (std::size_t i = 0; i < lo.size(); ++i) count *= hi[i] - lo[i] + 1;
  if (count > Int(kEnumerationCap))
    throw BoundExceededError("lattice enumeration box exceeds the configured cap");
  IntVec point = lo;
  if (lo.empty()) {
    fn(point);
    return;
  }
  while (true) {
    fn(point);
    std::size_t i = 0;
    while (i < point.size()) {
      if (point[i] < hi[i]) {
        ++point[i];
        break;
      }
      point[i] = lo[i];
      ++i;
    }
    if (i == point.size()) break;
  }
}

// Per-coordinate bounds of the zonotope sum of [0,1]-segments of `gens`.
std::pair<IntVec, IntVec> zonotope_box(const IntMat& gens, std::size_t rank) {
  IntVec lo(rank, 0), hi(rank, 0);
  for (const IntVec& g : gens)
    for (std::size_t j = 0; j < rank; ++j) {
      if (g[j] < 0) lo[j] += g[j];
      if (g[j] > 0) hi[j] += g[j];
    }
  return {lo, hi};
}

}  // namespace

Int dot(const IntVec& a, const IntVec& b) {
  if (a.size() != b.size()) throw PreconditionError("pairing of vectors of different length");
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

IntVec primitive(IntVec v) {
  Int g = 0;
  for (const Int& x : v) g = boost::multiprecision::gcd(g, x);
  if (g > 1)
    for (Int& x : v) x /= g;
  return v;
}

linalg::RatVec to_rat(const IntVec& v) {
  RatVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = Rat(v[i]);
  return out;
}

linalg::RatMat to_rat(const IntMat& m) {
  RatMat out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = to_rat(m[i]);
  return out;
}

IntVec scale_primitive(const linalg::RatVec& x) {
  Int l = 1;
  for (const Rat& c : x) {
    const Int d = boost::multiprecision::denominator(c);
    l = l / boost::multiprecision::gcd(l, d) * d;
  }
  IntVec v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    v[i] = boost::multiprecision::numerator(x[i]) * (l / boost::multiprecision::denominator(x[i]));
  return primitive(std::move(v));
}

IntVec map_vec(const IntMat& m, const IntVec& u) {
  IntVec out(m.size(), 0);
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = dot(m[i], u);
  return out;
}

IntVec row_times(const IntVec& v, const IntMat& m) {
  if (m.size() != v.size()) throw PreconditionError("row-vector product: size mismatch");
  if (m.empty()) return {};
  IntVec out(m[0].size(), 0);
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += v[i] * m[i][j];
  return out;
}

Cone Cone::from_rays(std::size_t rank, IntMat generators, IntMat lineality) {
  check_rank(generators, rank, "cone generators");
  check_rank(lineality, rank, "cone lineality");
  const VForm dual = dd(rank, generators, lineality);
  const VForm primal = dd(rank, dual.rays, dual.lin);
  return Cone{rank, primal.rays, primal.lin, dual.rays, dual.lin};
}

Cone Cone::from_halfspaces(std::size_t rank, IntMat normals, IntMat equations) {
  check_rank(normals, rank, "halfspace normals");
  check_rank(equations, rank, "equations");
  const VForm primal = dd(rank, normals, equations);
  const VForm dual = dd(rank, primal.rays, primal.lin);
  return Cone{rank, primal.rays, primal.lin, dual.rays, dual.lin};
}

std::size_t Cone::dim() const {
  IntMat all = rays;
  all.insert(all.end(), lineality.begin(), lineality.end());
  return rat_rank(all);
}

bool Cone::contains(const IntVec& v) const {
  if (v.size() != rank) throw PreconditionError("membership test: vector length mismatch");
  for (const IntVec& a : dual_rays)
    if (dot(a, v) < 0) return false;
  for (const IntVec& b : dual_lineality)
    if (dot(b, v) != 0) return false;
  return true;
}

bool Cone::contains(const Cone& other) const {
  for (const IntVec& r : other.rays)
    if (!contains(r)) return false;
  for (const IntVec& l : other.lineality) {
    IntVec neg(l.size());
    for (std::size_t i = 0; i < l.size(); ++i) neg[i] = -l[i];
    if (!contains(l) || !contains(neg)) return false;
  }
  return true;
}

Cone dual_cone(const Cone& c) {
  return Cone{c.rank, c.dual_rays, c.dual_lineality, c.rays, c.lineality};
}

Cone face_of(const Cone& c, const IntVec& m) {
  if (m.size() != c.rank) throw PreconditionError("face functional: vector length mismatch");
  for (const IntVec& l : c.lineality)
    if (dot(m, l) != 0) throw PreconditionError("face functional does not vanish on the lineality");
  IntMat zero_rays;
  for (const IntVec& r : c.rays) {
    const Int d = dot(m, r);
    if (d < 0) throw PreconditionError("face functional is negative on a ray");
    if (d == 0) zero_rays.push_back(r);
  }
  return Cone::from_rays(c.rank, std::move(zero_rays), c.lineality);
}

Cone intersect(const Cone& a, const Cone& b) {
  if (a.rank != b.rank) throw PreconditionError("cone intersection: rank mismatch");
  IntMat normals = a.dual_rays;
  normals.insert(normals.end(), b.dual_rays.begin(), b.dual_rays.end());
  IntMat eqs = a.dual_lineality;
  eqs.insert(eqs.end(), b.dual_lineality.begin(), b.dual_lineality.end());
  return Cone::from_halfspaces(a.rank, std::move(normals), std::move(eqs));
}

bool is_face_of(const Cone& f, const Cone& c) {
  if (f.rank != c.rank || f.lineality != c.lineality) return false;
  for (const IntVec& r : f.rays)
    if (std::find(c.rays.begin(), c.rays.end(), r) == c.rays.end()) return false;
  // A face is the intersection of the facets containing it: sum the facet
  // normals active on all of f and cut c with the result.
  IntVec m(c.rank, 0);
  for (const IntVec& a : c.dual_rays) {
    bool active = true;
    for (const IntVec& r : f.rays)
      if (dot(a, r) != 0) {
        active = false;
        break;
      }
    if (active)
      for (std::size_t i = 0; i < c.rank; ++i) m[i] += a[i];
  }
  return face_of(c, m) == f;
}

std::vector<Cone> faces(const Cone& c) {
  std::map<std::pair<IntMat, IntMat>, Cone> seen;
  std::vector<Cone> queue{c};
  seen.emplace(std::make_pair(c.rays, c.lineality), c);
  while (!queue.empty()) {
    const Cone x = std::move(queue.back());
    queue.pop_back();
    for (const IntVec& a : x.dual_rays) {
      Cone f = face_of(x, a);
      auto key = std::make_pair(f.rays, f.lineality);
      if (seen.emplace(key, f).second) queue.push_back(std::move(f));
    }
  }
  std::vector<Cone> out;
  out.reserve(seen.size());
  for (auto& [key, cone] : seen) out.push_back(std::move(cone));
  std::sort(out.begin(), out.end(), [](const Cone& a, const Cone& b) {
    const auto da = a.dim(), db = b.dim();
    if (da != db) return da < db;
    if (a.rays != b.rays) return a.rays < b.rays;
    return a.lineality < b.lineality;
  });
  return out;
}

IntMat hilbert_basis(const Cone& c) {
  if (!c.is_pointed())
    throw UnsupportedError("Hilbert basis of a cone with lineality is not supported");
  if (c.rays.empty()) return {};
  // Gordan: every irreducible semigroup element lies in the half-open
  // zonotope spanned by the generators, so a box enumeration is complete.
  const auto [lo, hi] = zonotope_box(c.rays, c.rank);
  // Any positive functional grades the semigroup; the sum of the facet
  // normals is strictly positive away from the origin of a pointed cone.
  auto weight = [&c](const IntVec& v) {
    Int w = 0;
    for (const IntVec& a : c.dual_rays) w += dot(a, v);
    return w;
  };
  std::vector<std::pair<Int, IntVec>> candidates;
  enumerate_box(lo, hi, [&](const IntVec& p) {
    if (!is_zero(p) && c.contains(p)) candidates.emplace_back(weight(p), p);
  });
  std::sort(candidates.begin(), candidates.end());
  IntMat basis;
  for (const auto& [w, v] : candidates) {
    bool reducible = false;
    for (const IntVec& h : basis) {
      IntVec diff(v.size());
      for (std::size_t i = 0; i < v.size(); ++i) diff[i] = v[i] - h[i];
      if (!is_zero(diff) && c.contains(diff)) {
        reducible = true;
        break;
      }
    }
    if (!reducible) basis.push_back(v);
  }
  std::sort(basis.begin(), basis.end());
  return basis;
}

bool is_smooth_cone(const Cone& c) {
  if (!c.is_pointed()) return false;
  if (c.rays.empty()) return true;
  SmithResult s = smith(c.rays, c.rank);
  if (s.rank != c.rays.size()) return false;  // not simplicial
  for (std::size_t i = 0; i < s.rank; ++i) {
    Int d = s.d[i][i];
    if (d != 1 && d != -1) return false;
  }
  return true;
}

SmithResult smith(IntMat a, std::size_t cols) {
  check_rank(a, cols, "smith input");
  const std::size_t k = a.size();
  SmithResult res;
  res.v = identity_rows(cols);
  res.vinv = identity_rows(cols);

  auto swap_cols = [&](std::size_t i, std::size_t j) {
    for (std::size_t r = 0; r < k; ++r) std::swap(a[r][i], a[r][j]);
    for (std::size_t r = 0; r < cols; ++r) std::swap(res.v[r][i], res.v[r][j]);
    std::swap(res.vinv[i], res.vinv[j]);
  };
  // col_j -= q * col_t, with the inverse operation mirrored on vinv
  auto add_col = [&](std::size_t t, std::size_t j, const Int& q) {
    for (std::size_t r = 0; r < k; ++r) a[r][j] -= q * a[r][t];
    for (std::size_t r = 0; r < cols; ++r) res.v[r][j] -= q * res.v[r][t];
    for (std::size_t i = 0; i < cols; ++i) res.vinv[t][i] += q * res.vinv[j][i];
  };

  std::size_t t = 0;
  while (t < k && t < cols) {
    // locate a nonzero entry of minimal magnitude in the remaining block
    std::size_t pr = k, pc = cols;
    for (std::size_t i = t; i < k; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (a[i][j] != 0 &&
            (pr == k || boost::multiprecision::abs(a[i][j]) < boost::multiprecision::abs(a[pr][pc])))
          pr = i, pc = j;
    if (pr == k) break;
    std::swap(a[t], a[pr]);
    if (pc != t) swap_cols(t, pc);

    bool dirty = true;
    while (dirty) {
      dirty = false;
      for (std::size_t i = t + 1; i < k; ++i) {
        while (a[i][t] != 0) {
          const Int q = a[i][t] / a[t][t];
          for (std::size_t j = 0; j < cols; ++j) a[i][j] -= q * a[t][j];
          if (a[i][t] != 0) std::swap(a[t], a[i]);
        }
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        while (a[t][j] != 0) {
          const Int q = a[t][j] / a[t][t];
          add_col(t, j, q);
          if (a[t][j] != 0) {
            swap_cols(t, j);
            dirty = true;  // the column below the pivot may be dirty again
          }
        }
      }
      for (std::size_t i = t + 1; i < k; ++i)
        if (a[i][t] != 0) dirty = true;
    }
    if (a[t][t] < 0)
      for (std::size_t j = 0; j < cols; ++j) a[t][j] = -a[t][j];
    ++t;
  }
  res.rank = t;
  res.d = std::move(a);
  return res;
}

IntMat saturate(const IntMat& rows, std::size_t cols) {
  if (rows.empty()) return {};
  SmithResult s = smith(rows, cols);
  IntMat out(s.vinv.begin(), s.vinv.begin() + static_cast<std::ptrdiff_t>(s.rank));
  return out;
}

IntMat hermite_basis(IntMat rows, std::size_t cols) {
  check_rank(rows, cols, "hermite input");
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < rows.size(); ++col) {
    // Euclid on the entries of this column at or below `row`.
    while (true) {
      std::size_t best = rows.size();
      for (std::size_t i = row; i < rows.size(); ++i)
        if (rows[i][col] != 0 &&
            (best == rows.size() ||
             boost::multiprecision::abs(rows[i][col]) < boost::multiprecision::abs(rows[best][col])))
          best = i;
      if (best == rows.size()) break;
      std::swap(rows[row], rows[best]);
      bool clear = true;
      for (std::size_t i = row + 1; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        const Int q = floor_div(rows[i][col], rows[row][col]);
        for (std::size_t j = 0; j < cols; ++j) rows[i][j] -= q * rows[row][j];
        if (rows[i][col] != 0) clear = false;
      }
      if (clear) break;
    }
    if (rows[row][col] == 0) continue;
    if (rows[row][col] < 0)
      for (std::size_t j = 0; j < cols; ++j) rows[row][j] = -rows[row][j];
    for (std::size_t i = 0; i < row; ++i) {
      const Int q = floor_div(rows[i][col], rows[row][col]);
      if (q != 0)
        for (std::size_t j = 0; j < cols; ++j) rows[i][j] -= q * rows[row][j];
    }
    ++row;
  }
  while (!rows.empty() && is_zero(rows.back())) rows.pop_back();
  for (const IntVec& r : rows)
    if (is_zero(r)) throw PreconditionError("hermite basis of dependent rows");
  return rows;
}

LatticeQuotient quotient_by(const IntMat& sublattice_rows, std::size_t cols) {
  const IntMat sat = saturate(sublattice_rows, cols);
  const std::size_t k = sat.size();
  LatticeQuotient q;
  if (k == 0) {
    q.proj = identity_rows(cols);
    q.section = identity_rows(cols);
    return q;
  }
  SmithResult s = smith(sat, cols);
  for (std::size_t i = 0; i < k; ++i)
    if (s.d[i][i] != 1 && s.d[i][i] != -1)
      throw PreconditionError("saturated sublattice must be a direct summand");
  q.proj.assign(cols, IntVec(cols - k, 0));
  for (std::size_t r = 0; r < cols; ++r)
    for (std::size_t j = k; j < cols; ++j) q.proj[r][j - k] = s.v[r][j];
  q.section.assign(s.vinv.begin() + static_cast<std::ptrdiff_t>(k), s.vinv.end());
  return q;
}

IntMat semigroup_generators(const Cone& c) {
  if (c.is_pointed()) return hilbert_basis(c);
  // Split off the lineality lattice: the semigroup is generated by a lattice
  // basis of the lineality (both signs) together with any lifts of the
  // Hilbert basis of the pointed image cone.  Lifts pair correctly with the
  // cone because the lineality is the annihilator of its span's dual.
  const IntMat basis = saturate(c.lineality, c.rank);
  const LatticeQuotient q = quotient_by(basis, c.rank);
  const std::size_t qrank = c.rank - basis.size();
  IntMat image_rays;
  for (const IntVec& r : c.rays) image_rays.push_back(row_times(r, q.proj));
  const Cone image = Cone::from_rays(qrank, std::move(image_rays));
  IntMat gens;
  for (const IntVec& h : hilbert_basis(image)) gens.push_back(row_times(h, q.section));
  for (const IntVec& b : basis) {
    gens.push_back(b);
    IntVec neg(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) neg[i] = -b[i];
    gens.push_back(std::move(neg));
  }
  std::sort(gens.begin(), gens.end());
  return gens;
}

IntMat degree_test_set(const IntMat& gens, unsigned bound) {
  if (gens.empty()) return {};
  const std::size_t n = gens[0].size();
  std::set<IntVec> out{IntVec(n, 0)};
  std::set<IntVec> frontier{IntVec(n, 0)};
  for (unsigned step = 0; step < bound; ++step) {
    std::set<IntVec> next;
    for (const IntVec& f : frontier)
      for (const IntVec& g : gens) {
        IntVec s(n);
        for (std::size_t i = 0; i < n; ++i) s[i] = f[i] + g[i];
        if (out.insert(s).second) next.insert(std::move(s));
      }
    frontier = std::move(next);
  }
  return IntMat(out.begin(), out.end());
}

void validate_fan(const Fan& f) {
  for (const IntVec& r : f.rays) {
    if (r.size() != f.rank) throw PreconditionError("fan ray has the wrong length");
    if (is_zero(r)) throw PreconditionError("fan ray is zero");
    if (primitive(r) != r) throw PreconditionError("fan ray is not primitive");
  }
  for (std::size_t i = 0; i < f.rays.size(); ++i)
    for (std::size_t j = i + 1; j < f.rays.size(); ++j)
      if (f.rays[i] == f.rays[j]) throw PreconditionError("duplicate fan ray");

  std::vector<bool> used(f.rays.size(), false);
  std::vector<Cone> listed;
  for (const auto& ids : f.cones) {
    if (!std::is_sorted(ids.begin(), ids.end()) ||
        std::adjacent_find(ids.begin(), ids.end()) != ids.end())
      throw PreconditionError("cone ray indices must be sorted and distinct");
    for (std::size_t i : ids) {
      if (i >= f.rays.size()) throw PreconditionError("cone refers to a missing ray");
      used[i] = true;
    }
    Cone c = fan_cone(f, ids);
    if (!c.is_pointed()) throw PreconditionError("fan cone contains a line");
    if (c.rays.size() != ids.size())
      throw PreconditionError("listed cone generator is not an extremal ray");
    listed.push_back(std::move(c));
  }
  for (std::size_t i = 0; i < used.size(); ++i)
    if (!used[i]) throw PreconditionError("fan ray does not appear in any cone");
  for (std::size_t i = 0; i < listed.size(); ++i)
    for (std::size_t j = i + 1; j < listed.size(); ++j) {
      const Cone common = intersect(listed[i], listed[j]);
      if (!is_face_of(common, listed[i]) || !is_face_of(common, listed[j]))
        throw PreconditionError("cone intersection is not a common face");
    }
}

std::vector<FanCone> all_cones(const Fan& f) {
  std::map<std::vector<std::size_t>, Cone> seen;
  seen.emplace(std::vector<std::size_t>{}, Cone::from_rays(f.rank, {}));
  for (const auto& ids : f.cones) {
    const Cone c = fan_cone(f, ids);
    for (Cone& face : faces(c)) {
      auto key = ray_ids_of(f, face);
      seen.emplace(std::move(key), std::move(face));
    }
  }
  std::vector<FanCone> out;
  for (auto& [ids, cone] : seen) out.push_back(FanCone{std::move(cone), ids});
  std::sort(out.begin(), out.end(), [](const FanCone& a, const FanCone& b) {
    if (a.ray_ids.size() != b.ray_ids.size()) return a.ray_ids.size() < b.ray_ids.size();
    return a.ray_ids < b.ray_ids;
  });
  return out;
}

bool support_contains(const Fan& f, const IntVec& v) {
  for (const auto& ids : f.cones)
    if (fan_cone(f, ids).contains(v)) return true;
  return f.cones.empty() && is_zero(v);
}

Fan star_subdivide(const Fan& f, IntVec v) {
  v = primitive(std::move(v));
  if (is_zero(v)) throw PreconditionError("cannot subdivide at the zero vector");
  Fan g;
  g.rank = f.rank;
  g.rays = f.rays;
  auto it = std::find(g.rays.begin(), g.rays.end(), v);
  const std::size_t iv = static_cast<std::size_t>(it - g.rays.begin());
  const bool is_new = it == g.rays.end();
  if (is_new) g.rays.push_back(v);

  std::set<std::vector<std::size_t>> cones;
  bool touched = false;
  for (const auto& ids : f.cones) {
    const Cone c = fan_cone(f, ids);
    if (!c.contains(v)) {
      cones.insert(ids);
      continue;
    }
    touched = true;
    for (const IntVec& a : c.dual_rays) {
      const Cone facet = face_of(c, a);
      if (facet.contains(v)) continue;
      std::vector<std::size_t> piece = ray_ids_of(g, facet);
      piece.push_back(iv);
      std::sort(piece.begin(), piece.end());
      cones.insert(std::move(piece));
    }
  }
  if (!touched) return f;
  g.cones.assign(cones.begin(), cones.end());
  return g;
}

Fan refine_fan(const Fan& f0) {
  validate_fan(f0);
  Fan f = f0;
  const std::size_t n0 = f0.rays.size();

  // Separate the input rays: once a cone contains two of them it also
  // contains their primitive sum, so subdividing there splits every such
  // cone, and refinement never re-joins a separated pair.
  for (std::size_t i = 0; i < n0; ++i)
    for (std::size_t j = i + 1; j < n0; ++j) {
      bool together = false;
      for (const auto& ids : f.cones)
        together = together || (std::binary_search(ids.begin(), ids.end(), i) &&
                                std::binary_search(ids.begin(), ids.end(), j));
      if (!together) continue;
      IntVec s(f.rank);
      for (std::size_t k = 0; k < f.rank; ++k) s[k] = f0.rays[i][k] + f0.rays[j][k];
      f = star_subdivide(f, std::move(s));
    }

  // Make every cone simplicial by pulling at the existing rays.
  auto all_simplicial = [](const Fan& g) {
    for (const auto& ids : g.cones)
      if (fan_cone(g, ids).dim() != ids.size()) return false;
    return true;
  };
  for (int pass = 0; pass < 8 && !all_simplicial(f); ++pass) {
    const IntMat snapshot = f.rays;
    for (const IntVec& r : snapshot) f = star_subdivide(f, r);
  }
  if (!all_simplicial(f)) throw TsvError("simplicial refinement did not converge");

  // Resolve: subdivide singular simplicial cones at a parallelepiped lattice
  // point of minimal coefficient sum; multiplicities strictly decrease.
  for (std::size_t guard = 0; guard < 10000; ++guard) {
    IntVec target;
    for (const auto& ids : f.cones) {
      const Cone c = fan_cone(f, ids);
      if (cone_multiplicity(c) == 1) continue;
      const auto [lo, hi] = zonotope_box(c.rays, c.rank);
      Rat best_sum;
      IntVec best;
      enumerate_box(lo, hi, [&](const IntVec& p) {
        if (is_zero(p)) return;
        RatVec lambda;
        if (!linalg::solve_row_combination(to_rat(c.rays), to_rat(p), lambda)) return;
        Rat sum = 0;
        for (const Rat& x : lambda) {
          if (x < 0 || x >= 1) return;
          sum += x;
        }
        if (best.empty() || sum < best_sum || (sum == best_sum && p < best)) {
          best_sum = sum;
          best = p;
        }
      });
      if (best.empty()) throw TsvError("singular cone without parallelepiped points");
      target = std::move(best);
      break;
    }
    if (target.empty()) return f;
    f = star_subdivide(f, std::move(target));
  }
  throw TsvError("resolution did not converge");
}

}  // namespace tsv::lattice
