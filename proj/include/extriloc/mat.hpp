#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "extriloc/fp.hpp"

namespace extriloc {

using Vec = std::vector<int>;

// Dense row-major matrix over F_p.  Linear maps act on column vectors,
// y = A * x, so a map V -> W with dim V = n, dim W = m is an (m x n) matrix.
struct Mat {
  int rows = 0, cols = 0;
  Vec a;  // rows*cols entries, canonical representatives in [0, p)

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}

  int& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  int at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  static Mat zero(int r, int c) { return Mat(r, c); }

  static Mat from_rows(const std::vector<Vec>& rows_in, int ncols) {
    Mat m(static_cast<int>(rows_in.size()), ncols);
    for (size_t i = 0; i < rows_in.size(); ++i)
      for (int j = 0; j < ncols; ++j) m.at(static_cast<int>(i), j) = rows_in[i][j];
    return m;
  }

  bool is_zero() const {
    return std::all_of(a.begin(), a.end(), [](int x) { return x == 0; });
  }

  bool operator==(const Mat& o) const {
    return rows == o.rows && cols == o.cols && a == o.a;
  }

  Vec row(int i) const {
    Vec r(cols);
    for (int j = 0; j < cols; ++j) r[j] = at(i, j);
    return r;
  }

  Vec col(int j) const {
    Vec c(rows);
    for (int i = 0; i < rows; ++i) c[i] = at(i, j);
    return c;
  }
};

inline Mat mat_add(const Fp& F, const Mat& A, const Mat& B) {
  assert(A.rows == B.rows && A.cols == B.cols);
  Mat C(A.rows, A.cols);
  for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = F.add(A.a[i], B.a[i]);
  return C;
}

inline Mat mat_sub(const Fp& F, const Mat& A, const Mat& B) {
  assert(A.rows == B.rows && A.cols == B.cols);
  Mat C(A.rows, A.cols);
  for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = F.sub(A.a[i], B.a[i]);
  return C;
}

inline Mat mat_scale(const Fp& F, int c, const Mat& A) {
  Mat C(A.rows, A.cols);
  for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = F.mul(c, A.a[i]);
  return C;
}

inline Mat mat_neg(const Fp& F, const Mat& A) { return mat_scale(F, F.neg(1), A); }

inline Mat mat_mul(const Fp& F, const Mat& A, const Mat& B) {
  assert(A.cols == B.rows);
  Mat C(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int k = 0; k < A.cols; ++k) {
      int aik = A.at(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < B.cols; ++j)
        C.at(i, j) = F.add(C.at(i, j), F.mul(aik, B.at(k, j)));
    }
  return C;
}

inline Vec mat_apply(const Fp& F, const Mat& A, const Vec& x) {
  assert(static_cast<int>(x.size()) == A.cols);
  Vec y(A.rows, 0);
  for (int i = 0; i < A.rows; ++i) {
    long long acc = 0;
    for (int j = 0; j < A.cols; ++j) acc += static_cast<long long>(A.at(i, j)) * x[j];
    y[i] = F.norm(acc);
  }
  return y;
}

inline Mat mat_transpose(const Mat& A) {
  Mat T(A.cols, A.rows);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) T.at(j, i) = A.at(i, j);
  return T;
}

// Block-diagonal stacking: result = diag(A, B).
inline Mat mat_block_diag(const Mat& A, const Mat& B) {
  Mat C(A.rows + B.rows, A.cols + B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) C.at(i, j) = A.at(i, j);
  for (int i = 0; i < B.rows; ++i)
    for (int j = 0; j < B.cols; ++j) C.at(A.rows + i, A.cols + j) = B.at(i, j);
  return C;
}

// [A ; B] stacked vertically (same column count).
inline Mat mat_vstack(const Mat& A, const Mat& B) {
  assert(A.cols == B.cols || A.rows == 0 || B.rows == 0);
  int cols = A.rows ? A.cols : B.cols;
  Mat C(A.rows + B.rows, cols);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) C.at(i, j) = A.at(i, j);
  for (int i = 0; i < B.rows; ++i)
    for (int j = 0; j < B.cols; ++j) C.at(A.rows + i, j) = B.at(i, j);
  return C;
}

// [A | B] side by side (same row count).
inline Mat mat_hstack(const Mat& A, const Mat& B) {
  assert(A.rows == B.rows || A.cols == 0 || B.cols == 0);
  int rows = A.cols ? A.rows : B.rows;
  Mat C(rows, A.cols + B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) C.at(i, j) = A.at(i, j);
  for (int i = 0; i < B.rows; ++i)
    for (int j = 0; j < B.cols; ++j) C.at(i, A.cols + j) = B.at(i, j);
  return C;
}

// In-place row reduction to RREF.  Returns the pivot column indices.
inline std::vector<int> rref(const Fp& F, Mat& M) {
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < M.cols && r < M.rows; ++c) {
    int piv = -1;
    for (int i = r; i < M.rows; ++i)
      if (M.at(i, c) != 0) { piv = i; break; }
    if (piv < 0) continue;
    if (piv != r)
      for (int j = 0; j < M.cols; ++j) std::swap(M.at(piv, j), M.at(r, j));
    int s = F.inv(M.at(r, c));
    for (int j = 0; j < M.cols; ++j) M.at(r, j) = F.mul(s, M.at(r, j));
    for (int i = 0; i < M.rows; ++i) {
      if (i == r || M.at(i, c) == 0) continue;
      int f = M.at(i, c);
      for (int j = 0; j < M.cols; ++j)
        M.at(i, j) = F.sub(M.at(i, j), F.mul(f, M.at(r, j)));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline int mat_rank(const Fp& F, Mat M) { return static_cast<int>(rref(F, M).size()); }

// Basis of { x : A x = 0 }, one vector per non-pivot column.
inline std::vector<Vec> kernel_basis(const Fp& F, Mat A) {
  std::vector<int> pivots = rref(F, A);
  std::vector<bool> is_pivot(A.cols, false);
  for (int c : pivots) is_pivot[c] = true;
  std::vector<Vec> basis;
  for (int c = 0; c < A.cols; ++c) {
    if (is_pivot[c]) continue;
    Vec v(A.cols, 0);
    v[c] = 1;
    for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = F.neg(A.at(static_cast<int>(r), c));
    basis.push_back(std::move(v));
  }
  return basis;
}

// One solution of A x = b, if any.
inline std::optional<Vec> solve(const Fp& F, const Mat& A, const Vec& b) {
  assert(static_cast<int>(b.size()) == A.rows);
  Mat col(A.rows, 1);
  for (int i = 0; i < A.rows; ++i) col.at(i, 0) = b[i];
  Mat aug = mat_hstack(A, col);
  std::vector<int> pivots = rref(F, aug);
  // Inconsistent iff a pivot lands in the appended column.
  if (!pivots.empty() && pivots.back() == A.cols) return std::nullopt;
  Vec x(A.cols, 0);
  for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug.at(static_cast<int>(r), A.cols);
  return x;
}

// One solution X of A X = B (columnwise), if any.
inline std::optional<Mat> solve_matrix(const Fp& F, const Mat& A, const Mat& B) {
  assert(A.rows == B.rows);
  Mat X(A.cols, B.cols);
  // Reduce once with all right-hand sides appended.
  Mat aug = mat_hstack(A, B);
  std::vector<int> pivots = rref(F, aug);
  for (int c : pivots)
    if (c >= A.cols) return std::nullopt;
  for (size_t r = 0; r < pivots.size(); ++r)
    for (int j = 0; j < B.cols; ++j) X.at(pivots[r], j) = aug.at(static_cast<int>(r), A.cols + j);
  return X;
}

inline std::optional<Mat> mat_inverse(const Fp& F, const Mat& A) {
  if (A.rows != A.cols) return std::nullopt;
  auto X = solve_matrix(F, A, Mat::identity(A.rows));
  if (!X) return std::nullopt;
  if (!(mat_mul(F, *X, A) == Mat::identity(A.rows))) return std::nullopt;
  return X;
}

// Row-space of a matrix kept in RREF; supports incremental spanning,
// membership, and quotient bookkeeping.
struct Subspace {
  Fp F;
  int ambient;
  Mat basis;  // RREF, rows are basis vectors

  Subspace(const Fp& field, int ambient_dim)
      : F(field), ambient(ambient_dim), basis(0, ambient_dim) {}

  int dim() const { return basis.rows; }

  // Reduce v against the current basis; returns the residue.
  Vec reduce(Vec v) const {
    for (int r = 0; r < basis.rows; ++r) {
      int lead = -1;
      for (int j = 0; j < ambient; ++j)
        if (basis.at(r, j) != 0) { lead = j; break; }
      if (lead < 0 || v[lead] == 0) continue;
      int f = v[lead];
      for (int j = 0; j < ambient; ++j) v[j] = F.sub(v[j], F.mul(f, basis.at(r, j)));
    }
    return v;
  }

  bool contains(const Vec& v) const {
    Vec r = reduce(v);
    return std::all_of(r.begin(), r.end(), [](int x) { return x == 0; });
  }

  // Adds v to the span; returns true if the dimension grew.
  bool add(const Vec& v) {
    Vec r = reduce(v);
    bool zero = std::all_of(r.begin(), r.end(), [](int x) { return x == 0; });
    if (zero) return false;
    basis = mat_vstack(basis, Mat::from_rows({r}, ambient));
    rref(F, basis);
    return true;
  }

  void add_rows(const Mat& M) {
    for (int i = 0; i < M.rows; ++i) add(M.row(i));
  }

  // Coordinates of v in terms of the stored basis rows, if v lies in the span.
  std::optional<Vec> coordinates(const Vec& v) const {
    if (basis.rows == 0) {
      bool zero = std::all_of(v.begin(), v.end(), [](int x) { return x == 0; });
      return zero ? std::optional<Vec>(Vec{}) : std::nullopt;
    }
    return solve(F, mat_transpose(basis), v);
  }
};

inline Subspace row_space(const Fp& F, const Mat& M) {
  Subspace S(F, M.cols);
  S.add_rows(M);
  return S;
}

inline Subspace column_space(const Fp& F, const Mat& M) { return row_space(F, mat_transpose(M)); }

inline Subspace subspace_sum(const Subspace& A, const Subspace& B) {
  assert(A.ambient == B.ambient);
  Subspace S = A;
  S.add_rows(B.basis);
  return S;
}

// Intersection via kernel of [A^T | B^T] column-stacking.
inline Subspace subspace_intersect(const Subspace& A, const Subspace& B) {
  assert(A.ambient == B.ambient);
  Subspace S(A.F, A.ambient);
  if (A.dim() == 0 || B.dim() == 0) return S;
  Mat M = mat_hstack(mat_transpose(A.basis), mat_transpose(B.basis));
  for (const Vec& k : kernel_basis(A.F, M)) {
    Vec coeffA(k.begin(), k.begin() + A.dim());
    Vec v = mat_apply(A.F, mat_transpose(A.basis), coeffA);
    S.add(v);
  }
  return S;
}

// Extend the rows of `inside` to a basis of `whole`; returns complement vectors.
inline std::vector<Vec> complement_in(const Subspace& inside, const Subspace& whole) {
  Subspace S = inside;
  std::vector<Vec> comp;
  for (int i = 0; i < whole.basis.rows; ++i) {
    Vec v = whole.basis.row(i);
    if (S.add(v)) comp.push_back(v);
  }
  return comp;
}

}  // namespace extriloc
