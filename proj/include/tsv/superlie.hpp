#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tsv/linalg.hpp"
#include "tsv/rational.hpp"

namespace tsv::superlie {

using linalg::RatMat;
using linalg::RatVec;

// Structure constants of a split supertorus of dimension (p|q): the bracket
// on the odd part is determined by the vectors x[i][j] in QQ^p through
// [theta_i, theta_j] = x[i][j] + x[j][i], so only the symmetrized entries
// matter and bracket_eval symmetrizes explicitly.
struct SupertorusData {
  std::size_t p = 0;
  std::size_t q = 0;
  std::vector<std::vector<RatVec>> x;  // q x q entries, each of length p

  // Throws PreconditionError if the entry table does not match (p, q).
  void validate() const;

  // All brackets zero.
  static SupertorusData abelian(std::size_t p, std::size_t q);

  // p = q = n with [theta_i, theta_i] = 2 e_i and mixed brackets zero,
  // realized by x[i][i] = e_i.
  static SupertorusData diagonal_pairing(std::size_t n);
};

// [u, v] for u, v in the odd part, expressed in odd coordinates.
RatVec bracket_eval(const SupertorusData& t, const RatVec& u, const RatVec& v);

// Builds the structure table in the symmetric gauge x_ij = [theta_i,theta_j]/2
// from the raw bracket values, which must form a symmetric table.
SupertorusData symmetric_gauge(std::size_t p, std::size_t q,
                               const std::vector<std::vector<RatVec>>& brackets);

// A linear subspace of QQ^n in canonical form: the basis rows are the
// reduced row echelon form of any generating set, so equal subspaces
// compare equal componentwise.
class Subspace {
 public:
  Subspace() = default;
  Subspace(std::size_t ambient, RatMat generators);

  static Subspace zero(std::size_t ambient);
  static Subspace full(std::size_t ambient);
  static Subspace span_of(std::size_t ambient, const RatVec& v);

  std::size_t ambient() const { return ambient_; }
  std::size_t dim() const { return basis_.size(); }
  const RatMat& basis() const { return basis_; }

  bool contains(const RatVec& v) const;
  bool contains(const Subspace& other) const;

  friend Subspace sum(const Subspace& a, const Subspace& b);
  friend Subspace intersection(const Subspace& a, const Subspace& b);

  bool operator==(const Subspace& other) const {
    return ambient_ == other.ambient_ && basis_ == other.basis_;
  }
  bool operator!=(const Subspace& other) const { return !(*this == other); }
  bool operator<(const Subspace& other) const;

 private:
  std::size_t ambient_ = 0;
  RatMat basis_;
};

Subspace sum(const Subspace& a, const Subspace& b);
Subspace intersection(const Subspace& a, const Subspace& b);

// Span of all brackets [u, v] with u in U and v in V, as a subspace of the
// even part QQ^p.
Subspace bracket_subspaces(const SupertorusData& t, const Subspace& u, const Subspace& v);

// A weakly decreasing chain V_0 >= V_1 >= ... of odd subspaces; entries past
// the stored list repeat the last one, which callers treat as the stable
// tail.
struct DecorationChain {
  std::vector<Subspace> spaces;

  // Throws PreconditionError unless nonempty, equal ambients, descending.
  void validate() const;

  const Subspace& at(std::size_t i) const {
    return i < spaces.size() ? spaces[i] : spaces.back();
  }
  const Subspace& tail() const { return spaces.back(); }

  bool operator==(const DecorationChain& other) const { return spaces == other.spaces; }
};

struct AdaptedBasisResult {
  bool exists = false;
  // When exists: a basis of the ambient space such that every input space is
  // spanned by a subset of it.
  RatMat basis;
  // When not: three subspaces from the lattice closure of the inputs that
  // violate dim(a ^ (b + c)) == dim(a ^ b + a ^ c).
  std::vector<Subspace> violating_triple;
};

// Decides whether all given subspaces admit a common adapted basis, by
// closing the family under sum and intersection and testing distributivity
// of the resulting lattice. Throws BoundExceededError("undecided at bound")
// if the closure grows past closure_bound subspaces.
AdaptedBasisResult adapted_basis_exists(const std::vector<Subspace>& spaces,
                                        std::size_t closure_bound = 256);

}  // namespace tsv::superlie
