#include "tsv/superlie.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

namespace tsv::superlie {

namespace {

RatVec unit_vec(std::size_t n, std::size_t i) {
  RatVec e(n, Rat(0));
  e[i] = 1;
  return e;
}

}  // namespace

void SupertorusData::validate() const {
  if (x.size() != q) throw PreconditionError("bracket table must have q rows");
  for (const auto& row : x) {
    if (row.size() != q) throw PreconditionError("bracket table must have q columns");
    for (const auto& entry : row)
      if (entry.size() != p) throw PreconditionError("bracket entries must lie in the rank-p even part");
  }
}

SupertorusData SupertorusData::abelian(std::size_t p, std::size_t q) {
  SupertorusData t;
  t.p = p;
  t.q = q;
  t.x.assign(q, std::vector<RatVec>(q, RatVec(p, Rat(0))));
  return t;
}

SupertorusData SupertorusData::diagonal_pairing(std::size_t n) {
  SupertorusData t = abelian(n, n);
  for (std::size_t i = 0; i < n; ++i) t.x[i][i] = unit_vec(n, i);
  return t;
}

RatVec bracket_eval(const SupertorusData& t, const RatVec& u, const RatVec& v) {
  if (u.size() != t.q || v.size() != t.q)
    throw PreconditionError("bracket arguments must lie in the rank-q odd part");
  RatVec out(t.p, Rat(0));
  for (std::size_t i = 0; i < t.q; ++i) {
    if (u[i] == 0) continue;
    for (std::size_t j = 0; j < t.q; ++j) {
      const Rat c = u[i] * v[j];
      if (c == 0) continue;
      for (std::size_t k = 0; k < t.p; ++k) out[k] += c * (t.x[i][j][k] + t.x[j][i][k]);
    }
  }
  return out;
}

SupertorusData symmetric_gauge(std::size_t p, std::size_t q,
                               const std::vector<std::vector<RatVec>>& brackets) {
  SupertorusData t;
  t.p = p;
  t.q = q;
  t.x = brackets;
  t.validate();
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = 0; j < q; ++j) {
      if (brackets[i][j] != brackets[j][i])
        throw PreconditionError("bracket table must be symmetric");
      for (Rat& c : t.x[i][j]) c /= 2;
    }
  return t;
}

Subspace::Subspace(std::size_t ambient, RatMat generators) : ambient_(ambient) {
  for (const RatVec& g : generators)
    if (g.size() != ambient) throw PreconditionError("subspace generator has wrong length");
  basis_ = linalg::rowspace(std::move(generators));
}

Subspace Subspace::zero(std::size_t ambient) { return Subspace(ambient, {}); }

Subspace Subspace::full(std::size_t ambient) {
  RatMat rows;
  for (std::size_t i = 0; i < ambient; ++i) rows.push_back(unit_vec(ambient, i));
  return Subspace(ambient, std::move(rows));
}

Subspace Subspace::span_of(std::size_t ambient, const RatVec& v) {
  return Subspace(ambient, {v});
}

bool Subspace::contains(const RatVec& v) const {
  if (v.size() != ambient_) throw PreconditionError("vector has wrong length for subspace");
  return linalg::rowspace_contains(basis_, v);
}

bool Subspace::contains(const Subspace& other) const {
  if (other.ambient_ != ambient_) throw PreconditionError("subspace ambient mismatch");
  return linalg::rowspace_contains_all(basis_, other.basis_);
}

bool Subspace::operator<(const Subspace& other) const {
  if (ambient_ != other.ambient_) return ambient_ < other.ambient_;
  if (basis_.size() != other.basis_.size()) return basis_.size() < other.basis_.size();
  return basis_ < other.basis_;
}

Subspace sum(const Subspace& a, const Subspace& b) {
  if (a.ambient_ != b.ambient_) throw PreconditionError("subspace ambient mismatch");
  Subspace s;
  s.ambient_ = a.ambient_;
  s.basis_ = linalg::rowspace_sum(a.basis_, b.basis_);
  return s;
}

Subspace intersection(const Subspace& a, const Subspace& b) {
  if (a.ambient_ != b.ambient_) throw PreconditionError("subspace ambient mismatch");
  Subspace s;
  s.ambient_ = a.ambient_;
  s.basis_ = linalg::rowspace_intersection(a.basis_, b.basis_, a.ambient_);
  return s;
}

Subspace bracket_subspaces(const SupertorusData& t, const Subspace& u, const Subspace& v) {
  if (u.ambient() != t.q || v.ambient() != t.q)
    throw PreconditionError("bracket arguments must lie in the rank-q odd part");
  RatMat rows;
  for (const RatVec& a : u.basis())
    for (const RatVec& b : v.basis()) rows.push_back(bracket_eval(t, a, b));
  return Subspace(t.p, std::move(rows));
}

void DecorationChain::validate() const {
  if (spaces.empty()) throw PreconditionError("decoration chain must be nonempty");
  for (std::size_t i = 0; i + 1 < spaces.size(); ++i) {
    if (spaces[i].ambient() != spaces[i + 1].ambient())
      throw PreconditionError("decoration chain ambient mismatch");
    if (!spaces[i].contains(spaces[i + 1]))
      throw PreconditionError("decoration chain must be weakly decreasing");
  }
}

namespace {

// Closes the family under sum and intersection; the zero subspace is seeded
// so every minimal element has a well-defined join of strictly smaller ones.
std::vector<Subspace> lattice_closure(const std::vector<Subspace>& spaces, std::size_t ambient,
                                      std::size_t bound) {
  std::set<Subspace> seen(spaces.begin(), spaces.end());
  seen.insert(Subspace::zero(ambient));
  bool grew = true;
  while (grew) {
    grew = false;
    const std::vector<Subspace> snapshot(seen.begin(), seen.end());
    for (std::size_t i = 0; i < snapshot.size(); ++i) {
      for (std::size_t j = i + 1; j < snapshot.size(); ++j) {
        for (const Subspace& made :
             {sum(snapshot[i], snapshot[j]), intersection(snapshot[i], snapshot[j])}) {
          if (seen.insert(made).second) {
            grew = true;
            if (seen.size() > bound)
              throw BoundExceededError("undecided at bound: subspace lattice closure exceeded " +
                                       std::to_string(bound) + " elements");
          }
        }
      }
    }
  }
  return {seen.begin(), seen.end()};
}

}  // namespace

AdaptedBasisResult adapted_basis_exists(const std::vector<Subspace>& spaces,
                                        std::size_t closure_bound) {
  if (spaces.empty()) throw PreconditionError("adapted basis search needs at least one subspace");
  const std::size_t n = spaces.front().ambient();
  for (const Subspace& s : spaces)
    if (s.ambient() != n) throw PreconditionError("subspace ambient mismatch");

  const std::vector<Subspace> lattice = lattice_closure(spaces, n, closure_bound);
  std::map<Subspace, std::size_t> index;
  for (std::size_t i = 0; i < lattice.size(); ++i) index[lattice[i]] = i;

  // Both lattice operations land inside the closure, so tabulate them once
  // and test distributivity on indices. Input-only triples are checked first
  // so a violation is reported in terms of the caller's own subspaces when
  // one exists there.
  const std::size_t s = lattice.size();
  std::vector<std::vector<std::size_t>> join(s, std::vector<std::size_t>(s));
  std::vector<std::vector<std::size_t>> meet(s, std::vector<std::size_t>(s));
  for (std::size_t i = 0; i < s; ++i) {
    join[i][i] = meet[i][i] = i;
    for (std::size_t j = i + 1; j < s; ++j) {
      join[i][j] = join[j][i] = index.at(sum(lattice[i], lattice[j]));
      meet[i][j] = meet[j][i] = index.at(intersection(lattice[i], lattice[j]));
    }
  }
  const auto distributive = [&](std::size_t a, std::size_t b, std::size_t c) {
    return meet[a][join[b][c]] == join[meet[a][b]][meet[a][c]];
  };

  std::vector<std::size_t> input_ids;
  for (const Subspace& w : spaces) input_ids.push_back(index.at(w));
  std::sort(input_ids.begin(), input_ids.end());
  input_ids.erase(std::unique(input_ids.begin(), input_ids.end()), input_ids.end());
  for (std::size_t a : input_ids)
    for (std::size_t bi = 0; bi < input_ids.size(); ++bi)
      for (std::size_t ci = bi + 1; ci < input_ids.size(); ++ci)
        if (!distributive(a, input_ids[bi], input_ids[ci]))
          return {false, {}, {lattice[a], lattice[input_ids[bi]], lattice[input_ids[ci]]}};
  for (std::size_t a = 0; a < s; ++a)
    for (std::size_t b = 0; b < s; ++b)
      for (std::size_t c = b + 1; c < s; ++c)
        if (!distributive(a, b, c)) return {false, {}, {lattice[a], lattice[b], lattice[c]}};

  // Distributive case: pick, for every join-irreducible J, vectors spanning J
  // modulo the join of all lattice elements strictly below it. The union is
  // independent and adapted to every lattice element.
  std::vector<std::pair<Subspace, Subspace>> irreducibles;  // (J, join of strictly smaller)
  for (const Subspace& j : lattice) {
    if (j.dim() == 0) continue;
    Subspace lower = Subspace::zero(n);
    for (const Subspace& x : lattice)
      if (x.dim() < j.dim() && j.contains(x)) lower = sum(lower, x);
    if (lower != j) irreducibles.emplace_back(j, lower);
  }
  std::sort(irreducibles.begin(), irreducibles.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  RatMat basis;
  for (const auto& [j, lower] : irreducibles) {
    RatMat reducer = lower.basis();
    for (const RatVec& row : j.basis()) {
      RatVec r = linalg::reduce_against(reducer, linalg::pivot_cols(reducer), row);
      if (linalg::is_zero_vec(r)) continue;
      basis.push_back(r);
      reducer = linalg::rowspace_sum(reducer, {std::move(r)});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const RatVec e = unit_vec(n, i);
    if (!linalg::rowspace_contains(linalg::rowspace(basis), e)) basis.push_back(e);
  }
  if (linalg::rank(basis) != n || basis.size() != n)
    throw TsvError("internal error: adapted basis construction produced a non-basis");
  for (const Subspace& w : spaces) {
    RatMat inside;
    for (const RatVec& b : basis)
      if (w.contains(b)) inside.push_back(b);
    if (Subspace(n, inside) != w)
      throw TsvError("internal error: constructed basis is not adapted to an input subspace");
  }
  return {true, basis, {}};
}

}  // namespace tsv::superlie
