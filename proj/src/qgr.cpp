#include "tsv/qgr.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tsv/decofan.hpp"
#include "tsv/lattice.hpp"
#include "tsv/linalg.hpp"
#include "tsv/rational.hpp"
#include "tsv/superlie.hpp"

namespace tsv::qgr {
namespace {

using decofan::DecoratedFan;
using decofan::RayDecoration;
using lattice::Cone;
using lattice::Fan;
using lattice::IntMat;
using lattice::IntVec;
using linalg::RatVec;
using superlie::DecorationChain;
using superlie::SupertorusData;

// Orbit polytopes are found by enumerating column bases of the pattern.
constexpr std::size_t kOrbitPatternCap = 6;
// Hypersimplex faces are enumerated over all zero/one/free coordinate splits.
constexpr std::size_t kHypersimplexCap = 8;

struct UnionFind {
  std::vector<std::size_t> parent;

  explicit UnionFind(std::size_t n) : parent(n) {
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  }
  std::size_t find(std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

Rat dot_rat(const RatVec& a, const RatVec& b) {
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

RatVec sub(const RatVec& a, const RatVec& b) {
  RatVec d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

// Tries to match every row of `picked` to a distinct nonzero column of the
// pattern (Kuhn's augmenting paths), i.e. decides whether `picked` is a
// column basis of a generic matrix with this support.
bool is_column_basis(const SupportPattern& sp, const std::vector<std::size_t>& picked) {
  std::vector<std::size_t> owner(sp.r, sp.n);  // column -> matched row slot
  std::vector<bool> seen;
  auto augment = [&](auto&& self, std::size_t slot) -> bool {
    for (std::size_t col = 0; col < sp.r; ++col) {
      if (sp.rows[picked[slot]][col] == 0 || seen[col]) continue;
      seen[col] = true;
      if (owner[col] == sp.n || self(self, owner[col])) {
        owner[col] = slot;
        return true;
      }
    }
    return false;
  };
  for (std::size_t slot = 0; slot < picked.size(); ++slot) {
    seen.assign(sp.r, false);
    if (!augment(augment, slot)) return false;
  }
  return true;
}

std::vector<std::vector<std::size_t>> column_bases(const SupportPattern& sp) {
  std::vector<std::vector<std::size_t>> bases;
  std::vector<std::size_t> picked(sp.r);
  for (std::size_t i = 0; i < sp.r; ++i) picked[i] = i;
  while (true) {
    if (is_column_basis(sp, picked)) bases.push_back(picked);
    // next r-subset of 0..n-1 in lexicographic order
    std::size_t i = sp.r;
    while (i > 0 && picked[i - 1] == sp.n - sp.r + i - 1) --i;
    if (i == 0) break;
    ++picked[i - 1];
    for (std::size_t j = i; j < sp.r; ++j) picked[j] = picked[j - 1] + 1;
  }
  return bases;
}

// The inner normal fan of conv(vertices) computed inside the quotient
// lattice of the direction space.  The direction lattice must project
// unimodularly onto its Hermite pivot coordinates; those coordinates carry
// the quotient torus, so vertices and rays live in QQ^d resp. ZZ^d.
struct NormalFanData {
  std::size_t ambient = 0;
  std::size_t d = 0;
  IntMat basis;                     // Hermite basis of the direction lattice
  std::vector<std::size_t> pivots;  // unimodular coordinate section
  std::vector<RatVec> proj;         // vertex images in pivot coordinates
  Fan fan;                          // rank d, maximal cones sorted
  std::vector<std::vector<std::size_t>> facet_vertices;  // per fan ray
};

NormalFanData inner_normal_fan(std::size_t ambient, const RatMat& vertices) {
  if (vertices.empty()) throw PreconditionError("degenerate polytope without vertices");
  for (const RatVec& v : vertices)
    if (v.size() != ambient) throw PreconditionError("polytope vertex of wrong length");
  for (std::size_t i = 0; i < vertices.size(); ++i)
    for (std::size_t j = i + 1; j < vertices.size(); ++j)
      if (vertices[i] == vertices[j]) throw PreconditionError("duplicate polytope vertices");

  NormalFanData nd;
  nd.ambient = ambient;
  IntMat diffs;
  for (std::size_t i = 1; i < vertices.size(); ++i)
    diffs.push_back(lattice::scale_primitive(sub(vertices[i], vertices[0])));
  nd.basis = lattice::hermite_basis(lattice::saturate(diffs, ambient), ambient);
  nd.d = nd.basis.size();
  for (const IntVec& row : nd.basis) {
    std::size_t c = 0;
    while (c < ambient && row[c] == 0) ++c;
    if (row[c] != 1)
      throw UnsupportedError("polytope direction lattice has no unimodular coordinate section");
    nd.pivots.push_back(c);
  }
  for (const RatVec& v : vertices) {
    RatVec p(nd.d);
    for (std::size_t k = 0; k < nd.d; ++k) p[k] = v[nd.pivots[k]] - vertices[0][nd.pivots[k]];
    nd.proj.push_back(std::move(p));
  }

  nd.fan.rank = nd.d;
  if (nd.d == 0) return nd;  // single point, trivial fan

  // Normal cone per vertex: the dual of the cone of inward directions.
  std::set<IntVec> ray_pool;
  std::vector<IntMat> vertex_rays;
  for (std::size_t k = 0; k < nd.proj.size(); ++k) {
    IntMat gens;
    for (std::size_t j = 0; j < nd.proj.size(); ++j)
      if (j != k) gens.push_back(lattice::scale_primitive(sub(nd.proj[j], nd.proj[k])));
    const Cone c = Cone::from_rays(nd.d, gens);
    if (!c.is_pointed())
      throw PreconditionError("listed point is not a vertex of the polytope");
    ray_pool.insert(c.dual_rays.begin(), c.dual_rays.end());
    vertex_rays.push_back(c.dual_rays);
  }
  nd.fan.rays.assign(ray_pool.begin(), ray_pool.end());
  std::map<IntVec, std::size_t> ray_id;
  for (std::size_t i = 0; i < nd.fan.rays.size(); ++i) ray_id[nd.fan.rays[i]] = i;
  for (const IntMat& rays : vertex_rays) {
    std::vector<std::size_t> ids;
    for (const IntVec& u : rays) ids.push_back(ray_id.at(u));
    std::sort(ids.begin(), ids.end());
    nd.fan.cones.push_back(std::move(ids));
  }
  std::sort(nd.fan.cones.begin(), nd.fan.cones.end(),
            [](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
              return a.size() != b.size() ? a.size() < b.size() : a < b;
            });

  for (const IntVec& u : nd.fan.rays) {
    const RatVec ur = lattice::to_rat(u);
    Rat best = dot_rat(ur, nd.proj[0]);
    for (const RatVec& p : nd.proj) best = std::min(best, dot_rat(ur, p));
    std::vector<std::size_t> ids;
    for (std::size_t j = 0; j < nd.proj.size(); ++j)
      if (dot_rat(ur, nd.proj[j]) == best) ids.push_back(j);
    nd.facet_vertices.push_back(std::move(ids));
  }
  return nd;
}

// Wraps ray decorations around the normal fan: quotient torus Q(1)^d, h = 0
// and the two-step chain V_0 >= 0 on every ray.
DecoratedFan assemble_fan(const NormalFanData& nd, const std::vector<Subspace>& level_zero) {
  DecoratedFan df;
  df.torus = SupertorusData::diagonal_pairing(nd.d);
  df.h = Subspace::zero(nd.d);
  df.fan = nd.fan;
  for (const Subspace& v : level_zero)
    df.decorations.push_back(
        RayDecoration::of_chain(DecorationChain{{v, Subspace::zero(nd.d)}}));
  return df;
}

// Expresses an ambient vector of the direction space in pivot coordinates;
// fails when the vector leaves the span of the basis.
RatVec direction_coordinates(const NormalFanData& nd, const RatVec& w) {
  RatVec c(nd.d);
  for (std::size_t k = 0; k < nd.d; ++k) c[k] = w[nd.pivots[k]];
  RatVec check(nd.ambient, Rat(0));
  for (std::size_t k = 0; k < nd.d; ++k)
    for (std::size_t j = 0; j < nd.ambient; ++j) check[j] += c[k] * Rat(nd.basis[k][j]);
  if (check != w)
    throw PreconditionError("face decoration leaves the polytope's direction space");
  return c;
}

// Lifts quotient-coordinate rows back to the ambient space along the basis.
Subspace lift_rows(const NormalFanData& nd, const linalg::RatMat& rows) {
  linalg::RatMat out;
  for (const RatVec& r : rows) {
    RatVec w(nd.ambient, Rat(0));
    for (std::size_t k = 0; k < nd.d; ++k)
      for (std::size_t j = 0; j < nd.ambient; ++j) w[j] += r[k] * Rat(nd.basis[k][j]);
    out.push_back(std::move(w));
  }
  return Subspace(nd.ambient, std::move(out));
}

}  // namespace

void SupportPattern::validate() const {
  if (r > n) throw PreconditionError("support pattern needs r <= n");
  if (rows.size() != n) throw PreconditionError("support pattern needs one row per coordinate");
  for (const std::vector<int>& row : rows) {
    if (row.size() != r) throw PreconditionError("support pattern row of wrong length");
    for (int e : row)
      if (e != 0 && e != 1) throw PreconditionError("support pattern entries must be 0 or 1");
  }
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j)
      if (rows[i][j] != (i == j ? 1 : 0))
        throw PreconditionError("support pattern must start with an identity block");
}

SupportPattern SupportPattern::generic(std::size_t r, std::size_t n) {
  SupportPattern sp;
  sp.n = n;
  sp.r = r;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<int> row(r, i < r ? 0 : 1);
    if (i < r) row[i] = 1;
    sp.rows.push_back(std::move(row));
  }
  sp.validate();
  return sp;
}

PatternStabilizer stabilizer_from_pattern(const SupportPattern& sp) {
  sp.validate();
  // Column j is owned by pivot row j, so a nonzero entry a_ij ties row i to
  // row j; the blocks are the transitive closure of these ties.
  UnionFind uf(sp.n);
  for (std::size_t i = 0; i < sp.n; ++i)
    for (std::size_t j = 0; j < sp.r; ++j)
      if (sp.rows[i][j] != 0) uf.unite(i, j);
  std::map<std::size_t, std::vector<std::size_t>> grouped;
  for (std::size_t i = 0; i < sp.n; ++i) grouped[uf.find(i)].push_back(i);

  PatternStabilizer st;
  for (auto& [root, members] : grouped) st.blocks.push_back(std::move(members));
  std::sort(st.blocks.begin(), st.blocks.end());
  linalg::RatMat indicators;
  for (const std::vector<std::size_t>& block : st.blocks) {
    RatVec row(sp.n, Rat(0));
    for (std::size_t i : block) row[i] = 1;
    indicators.push_back(std::move(row));
  }
  st.even = Subspace(sp.n, indicators);
  st.odd = Subspace(sp.n, indicators);
  return st;
}

DecoratedPolytope hypersimplex_polytope(std::size_t r, std::size_t n) {
  if (r > n) throw PreconditionError("hypersimplex needs 0 <= r <= n");
  if (n > kHypersimplexCap)
    throw BoundExceededError("hypersimplex face enumeration beyond n = 8");

  DecoratedPolytope dp;
  dp.ambient = n;
  std::vector<std::vector<int>> verts;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<int> v(n);
    std::size_t ones = 0;
    for (std::size_t i = 0; i < n; ++i) ones += v[i] = (mask >> i) & 1;
    if (ones == r) verts.push_back(std::move(v));
  }
  std::sort(verts.begin(), verts.end());
  for (const std::vector<int>& v : verts)
    dp.vertices.push_back(RatVec(v.begin(), v.end()));

  // Faces are the splits of the coordinates into zero / one / free parts:
  // vertices pin every coordinate, positive-dimensional faces keep a smaller
  // hypersimplex 0 < r' < n' on the free part.
  std::vector<int> kind(n, 0);  // 0 free, 1 zero, 2 one
  while (true) {
    std::size_t zeros = 0, ones = 0;
    for (int k : kind) {
      zeros += k == 1;
      ones += k == 2;
    }
    const std::size_t rp = r >= ones ? r - ones : n + 1;  // remaining ones needed
    const std::size_t np = n - zeros - ones;
    const bool vertex_face = ones == r && zeros == n - r;
    if (vertex_face || (rp != n + 1 && 0 < rp && rp < np)) {
      PolytopeFace f;
      for (std::size_t v = 0; v < verts.size(); ++v) {
        bool on = true;
        for (std::size_t i = 0; i < n && on; ++i)
          on = kind[i] == 0 || verts[v][i] == kind[i] - 1;
        if (on) f.vertex_ids.push_back(v);
      }
      linalg::RatMat rows;
      std::vector<std::size_t> free;
      for (std::size_t i = 0; i < n; ++i)
        if (kind[i] == 0) free.push_back(i);
      for (std::size_t t = 0; t + 1 < free.size(); ++t) {
        RatVec row(n, Rat(0));
        row[free[t]] = 1;
        row[free[t + 1]] = -1;
        rows.push_back(std::move(row));
      }
      f.w = Subspace(n, rows);
      dp.faces.push_back(std::move(f));
    }
    std::size_t i = 0;
    while (i < n && kind[i] == 2) kind[i++] = 0;
    if (i == n) break;
    ++kind[i];
  }
  std::sort(dp.faces.begin(), dp.faces.end(), [](const PolytopeFace& a, const PolytopeFace& b) {
    return a.vertex_ids.size() != b.vertex_ids.size()
               ? a.vertex_ids.size() < b.vertex_ids.size()
               : a.vertex_ids < b.vertex_ids;
  });
  return dp;
}

decofan::DecoratedFan orbit_closure_fan(const SupportPattern& sp) {
  sp.validate();
  if (sp.n > kOrbitPatternCap)
    throw BoundExceededError("orbit polytope enumeration beyond n = 6");
  const PatternStabilizer st = stabilizer_from_pattern(sp);

  RatMat vertices;
  for (const std::vector<std::size_t>& basis : column_bases(sp)) {
    RatVec v(sp.n, Rat(0));
    for (std::size_t i : basis) v[i] = 1;
    vertices.push_back(std::move(v));
  }
  const NormalFanData nd = inner_normal_fan(sp.n, vertices);
  if (nd.d != sp.n - st.blocks.size())
    throw TsvError("internal error: orbit polytope dimension does not match the stabilizer");

  std::vector<Subspace> lines;
  for (const IntVec& u : nd.fan.rays)
    lines.push_back(Subspace::span_of(nd.d, lattice::to_rat(u)));
  DecoratedFan df = assemble_fan(nd, lines);
  if (nd.d > 0) {
    const decofan::ValidityReport report = decofan::validate(df, "large_orbit");
    if (!report.valid)
      throw TsvError("internal error: orbit closure fan fails the large-orbit conditions");
  }
  return df;
}

decofan::DecoratedFan polytope_fan_roundtrip(const DecoratedPolytope& dp) {
  const NormalFanData nd = inner_normal_fan(dp.ambient, dp.vertices);
  std::map<std::vector<std::size_t>, const PolytopeFace*> by_ids;
  for (const PolytopeFace& f : dp.faces) {
    if (f.vertex_ids.empty()) throw PreconditionError("polytope face without vertices");
    std::vector<std::size_t> ids = f.vertex_ids;
    std::sort(ids.begin(), ids.end());
    if (ids.back() >= dp.vertices.size())
      throw PreconditionError("polytope face references a missing vertex");
    if (!by_ids.emplace(std::move(ids), &f).second)
      throw PreconditionError("duplicate polytope face");
  }

  // Each ray's decoration is the annihilator of the W attached to its facet.
  std::vector<Subspace> lines;
  for (const std::vector<std::size_t>& facet : nd.facet_vertices) {
    const auto it = by_ids.find(facet);
    if (it == by_ids.end()) throw PreconditionError("missing facet decoration");
    linalg::RatMat w_rows;
    for (const RatVec& row : it->second->w.basis())
      w_rows.push_back(direction_coordinates(nd, row));
    lines.push_back(Subspace(nd.d, linalg::kernel_basis(w_rows, nd.d)));
  }
  DecoratedFan df = assemble_fan(nd, lines);

  // The fan induces W back on every face through its normal cone; reject the
  // polytope unless this reproduces the stored decorations exactly.
  for (const auto& [ids, face] : by_ids) {
    linalg::RatMat v_rows;
    for (std::size_t ray = 0; ray < nd.facet_vertices.size(); ++ray) {
      const std::vector<std::size_t>& fv = nd.facet_vertices[ray];
      if (std::includes(fv.begin(), fv.end(), ids.begin(), ids.end()))
        for (const RatVec& row : lines[ray].basis()) v_rows.push_back(row);
    }
    const Subspace induced = lift_rows(nd, linalg::kernel_basis(v_rows, nd.d));
    if (induced != face->w)
      throw PreconditionError("face decorations are not induced by a decorated fan");
  }
  if (nd.d > 0) {
    const decofan::ValidityReport report = decofan::validate(df, "large_orbit");
    if (!report.valid)
      throw PreconditionError("polytope decorations do not form a valid decorated fan");
  }
  return df;
}

}  // namespace tsv::qgr
