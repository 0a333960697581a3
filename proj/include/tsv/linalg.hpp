// Dense exact linear algebra over the rationals: reduced row echelon form and
// the row-space operations (sum, intersection, membership) everything else is
// built on.  Matrices are row-major; a subspace is identified with the RREF of
// a matrix whose rows span it, which makes equality a plain comparison.
#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "tsv/rational.hpp"

namespace tsv::linalg {

using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;

inline bool is_zero_vec(const RatVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Rat& x) { return x == 0; });
}

// In-place Gauss-Jordan.  Returns the pivot column of each surviving row;
// zero rows are removed, so the result has exactly rank(m) rows.
inline std::vector<std::size_t> rref(RatMat& m) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t cols = m[0].size();
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
    std::size_t sel = row;
    while (sel < m.size() && m[sel][col] == 0) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[row], m[sel]);
    const Rat inv = Rat(1) / m[row][col];
    for (std::size_t c = col; c < cols; ++c) m[row][c] *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col] == 0) continue;
      const Rat f = m[r][col];
      for (std::size_t c = col; c < cols; ++c) m[r][c] -= f * m[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  m.resize(row);
  return pivots;
}

inline std::size_t rank(RatMat m) { return rref(m).size(); }

// Reduces v against RREF rows; returns the residue (zero iff v lies in the
// row space).
inline RatVec reduce_against(const RatMat& rref_rows, const std::vector<std::size_t>& pivots,
                             RatVec v) {
  for (std::size_t r = 0; r < rref_rows.size(); ++r) {
    const Rat f = v[pivots[r]];
    if (f == 0) continue;
    for (std::size_t c = 0; c < v.size(); ++c) v[c] -= f * rref_rows[r][c];
  }
  return v;
}

// Basis of {x : m * x = 0} (x a column vector, returned as rows).
inline RatMat kernel_basis(RatMat m, std::size_t cols) {
  const std::vector<std::size_t> pivots = rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (std::size_t p : pivots) is_pivot[p] = true;
  RatMat out;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    RatVec v(cols, Rat(0));
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][free];
    out.push_back(std::move(v));
  }
  return out;
}

// Solves x * a = b for a row vector x (b in the row space of a); returns
// empty optional-style flag via bool.  Used for expressing vectors in a basis.
inline bool solve_row_combination(const RatMat& a, const RatVec& b, RatVec& x_out) {
  if (a.empty()) {
    x_out.clear();
    return is_zero_vec(b);
  }
  const std::size_t n = a.size(), cols = a[0].size();
  // Augment a^T with b as an extra column and eliminate.
  RatMat m(cols, RatVec(n + 1, Rat(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < cols; ++j) m[j][i] = a[i][j];
  for (std::size_t j = 0; j < cols; ++j) m[j][n] = b[j];
  std::vector<std::size_t> pivots = rref(m);
  RatVec x(n, Rat(0));
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    if (pivots[r] == n) return false;  // b independent of rows of a
    x[pivots[r]] = m[r][n];
  }
  x_out = std::move(x);
  return true;
}

inline RatVec matvec(const RatMat& m, const RatVec& v) {
  RatVec out(m.size(), Rat(0));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
  return out;
}

inline RatMat matmul(const RatMat& a, const RatMat& b) {
  if (a.empty() || b.empty()) return {};
  RatMat out(a.size(), RatVec(b[0].size(), Rat(0)));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < b[0].size(); ++j) out[i][j] += a[i][k] * b[k][j];
    }
  return out;
}

inline RatMat transpose(const RatMat& m, std::size_t cols) {
  RatMat out(cols, RatVec(m.size(), Rat(0)));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) out[j][i] = m[i][j];
  return out;
}

// Pivot columns of a matrix already in reduced row echelon form.
inline std::vector<std::size_t> pivot_cols(const RatMat& rref_rows) {
  std::vector<std::size_t> pivots;
  for (const RatVec& row : rref_rows) {
    std::size_t c = 0;
    while (c < row.size() && row[c] == 0) ++c;
    pivots.push_back(c);
  }
  return pivots;
}

// Canonical form of the row space: RREF with zero rows dropped.
inline RatMat rowspace(RatMat m) {
  rref(m);
  return m;
}

inline RatMat rowspace_sum(RatMat a, const RatMat& b) {
  a.insert(a.end(), b.begin(), b.end());
  rref(a);
  return a;
}

inline bool rowspace_contains(const RatMat& rref_rows, const RatVec& v) {
  return is_zero_vec(reduce_against(rref_rows, pivot_cols(rref_rows), v));
}

inline bool rowspace_contains_all(const RatMat& rref_rows, const RatMat& vs) {
  const std::vector<std::size_t> pivots = pivot_cols(rref_rows);
  for (const RatVec& v : vs)
    if (!is_zero_vec(reduce_against(rref_rows, pivots, v))) return false;
  return true;
}

// Zassenhaus: rows (a|a) and (b|0); after elimination the rows whose left
// half vanished carry a basis of the intersection in the right half.
inline RatMat rowspace_intersection(const RatMat& a, const RatMat& b, std::size_t cols) {
  RatMat z;
  for (const RatVec& r : a) {
    RatVec w(2 * cols, Rat(0));
    for (std::size_t i = 0; i < cols; ++i) w[i] = w[cols + i] = r[i];
    z.push_back(std::move(w));
  }
  for (const RatVec& r : b) {
    RatVec w(2 * cols, Rat(0));
    for (std::size_t i = 0; i < cols; ++i) w[i] = r[i];
    z.push_back(std::move(w));
  }
  rref(z);
  RatMat out;
  for (const RatVec& w : z) {
    bool left_zero = true;
    for (std::size_t i = 0; i < cols && left_zero; ++i) left_zero = w[i] == 0;
    if (!left_zero) continue;
    out.emplace_back(w.begin() + static_cast<std::ptrdiff_t>(cols), w.end());
  }
  rref(out);
  return out;
}

// Exact inverse of a square nonsingular matrix.
inline RatMat inverse(const RatMat& m) {
  const std::size_t n = m.size();
  RatMat aug(n, RatVec(2 * n, Rat(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = m[i][j];
    aug[i][n + i] = 1;
  }
  std::vector<std::size_t> pivots = rref(aug);
  if (pivots.size() != n || pivots.back() != n - 1)
    throw PreconditionError("matrix is singular");
  RatMat out(n, RatVec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i][j] = aug[i][n + j];
  return out;
}

}  // namespace tsv::linalg
