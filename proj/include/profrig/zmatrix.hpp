#pragma once

#include "profrig/bigint.hpp"
#include "profrig/error.hpp"

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace profrig {

/// Dense row-major matrix of arbitrary-precision integers.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long long>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw Error(ErrorCode::InvalidArgument, "ragged matrix literal");
      for (auto v : row) data_.emplace_back(v);
    }
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static IntMatrix diagonal(const std::vector<BigInt>& d) {
    IntMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  static IntMatrix column(const std::vector<BigInt>& v) {
    IntMatrix m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  BigInt& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const BigInt& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<BigInt> col(std::size_t j) const {
    std::vector<BigInt> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  void set_col(std::size_t j, const std::vector<BigInt>& v) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

  bool is_zero() const {
    for (const auto& x : data_)
      if (x != 0) return false;
    return true;
  }

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  // Elementary operations, used by the normal-form routines.
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  /// row[dst] += k * row[src]
  void add_row(std::size_t dst, std::size_t src, const BigInt& k) {
    if (k == 0) return;
    for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += k * (*this)(src, j);
  }
  /// col[dst] += k * col[src]
  void add_col(std::size_t dst, std::size_t src, const BigInt& k) {
    if (k == 0) return;
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += k * (*this)(i, src);
  }
  void negate_row(std::size_t r) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(r, j) = -(*this)(r, j);
  }
  void negate_col(std::size_t c) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, c) = -(*this)(i, c);
  }

  IntMatrix operator*(const IntMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw Error(ErrorCode::InvalidArgument, "matrix dimension mismatch");
    IntMatrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const BigInt& a = (*this)(i, k);
        if (a == 0) continue;
        for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
      }
    return out;
  }

  std::vector<BigInt> operator*(const std::vector<BigInt>& v) const {
    if (cols_ != v.size()) throw Error(ErrorCode::InvalidArgument, "matrix-vector dimension mismatch");
    std::vector<BigInt> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) out[i] += (*this)(i, k) * v[k];
    return out;
  }

  IntMatrix operator+(const IntMatrix& rhs) const {
    check_same_shape(rhs);
    IntMatrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += rhs.data_[i];
    return out;
  }

  IntMatrix operator-(const IntMatrix& rhs) const {
    check_same_shape(rhs);
    IntMatrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= rhs.data_[i];
    return out;
  }

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  void check_same_shape(const IntMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
      throw Error(ErrorCode::InvalidArgument, "matrix shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BigInt> data_;
};

/// Exact determinant by fraction-free (Bareiss) elimination.
inline BigInt determinant(const IntMatrix& m) {
  if (!m.is_square()) throw Error(ErrorCode::InvalidArgument, "determinant of non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  BigInt sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t swap = k + 1;
      while (swap < n && a(swap, k) == 0) ++swap;
      if (swap == n) return 0;
      a.swap_rows(k, swap);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

inline bool is_unimodular(const IntMatrix& m) {
  if (!m.is_square()) return false;
  BigInt d = determinant(m);
  return d == 1 || d == -1;
}

/// U * M * V = D with U, V unimodular and D diagonal, non-negative,
/// d_11 | d_22 | ... . The inverses of U and V are tracked alongside.
struct SnfResult {
  IntMatrix U, D, V;
  IntMatrix U_inv, V_inv;

  std::vector<BigInt> diagonal() const {
    std::vector<BigInt> d;
    for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i) d.push_back(D(i, i));
    return d;
  }
};

/// Smith normal form. The pivot is the smallest nonzero |entry| of the
/// remaining block (row-major on ties); divisibility is enforced by folding an
/// offending row into the pivot row and continuing the reduction.
inline SnfResult smith_normal_form(const IntMatrix& m) {
  const std::size_t r = m.rows(), c = m.cols();
  SnfResult res{IntMatrix::identity(r), m, IntMatrix::identity(c), IntMatrix::identity(r),
                IntMatrix::identity(c)};
  IntMatrix& A = res.D;

  // Row op on A: row[dst] += k row[src]; U gets the same op, U_inv the inverse column op.
  auto row_add = [&](std::size_t dst, std::size_t src, const BigInt& k) {
    A.add_row(dst, src, k);
    res.U.add_row(dst, src, k);
    res.U_inv.add_col(src, dst, -k);
  };
  auto row_swap = [&](std::size_t a, std::size_t b) {
    A.swap_rows(a, b);
    res.U.swap_rows(a, b);
    res.U_inv.swap_cols(a, b);
  };
  auto col_add = [&](std::size_t dst, std::size_t src, const BigInt& k) {
    A.add_col(dst, src, k);
    res.V.add_col(dst, src, k);
    res.V_inv.add_row(src, dst, -k);
  };
  auto col_swap = [&](std::size_t a, std::size_t b) {
    A.swap_cols(a, b);
    res.V.swap_cols(a, b);
    res.V_inv.swap_rows(a, b);
  };

  for (std::size_t t = 0; t < std::min(r, c); ++t) {
    bool block_zero = false;
    while (true) {
      // Pivot: smallest nonzero |entry| in the block [t.., t..].
      std::optional<std::pair<std::size_t, std::size_t>> best;
      for (std::size_t i = t; i < r; ++i)
        for (std::size_t j = t; j < c; ++j)
          if (A(i, j) != 0 && (!best || abs(A(i, j)) < abs(A(best->first, best->second))))
            best = {i, j};
      if (!best) {
        block_zero = true;
        break;
      }
      row_swap(t, best->first);
      col_swap(t, best->second);

      bool clean = true;
      for (std::size_t i = t + 1; i < r; ++i) {
        if (A(i, t) == 0) continue;
        row_add(i, t, -(A(i, t) / A(t, t)));
        if (A(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < c; ++j) {
        if (A(t, j) == 0) continue;
        col_add(j, t, -(A(t, j) / A(t, t)));
        if (A(t, j) != 0) clean = false;
      }
      if (!clean) continue;  // a smaller remainder appeared; re-pivot

      std::optional<std::size_t> offender;
      for (std::size_t i = t + 1; i < r && !offender; ++i)
        for (std::size_t j = t + 1; j < c; ++j)
          if (A(i, j) % A(t, t) != 0) {
            offender = i;
            break;
          }
      if (!offender) break;
      row_add(t, *offender, 1);
    }
    if (block_zero) break;
    if (A(t, t) < 0) {
      A.negate_row(t);
      res.U.negate_row(t);
      res.U_inv.negate_col(t);
    }
  }
  return res;
}

/// Result of the left Hermite reduction: U * M = T with T upper triangular.
struct HermiteResult {
  IntMatrix U, T, U_inv;
};

/// Row-style Hermite reduction by Euclid's algorithm. Column j is cleared
/// below row j; the pivot T_jj is made non-negative and, when positive, the
/// entries above it are reduced into [0, T_jj). Idempotent on its output.
inline HermiteResult hermite_left_reduce(const IntMatrix& m) {
  const std::size_t n = m.rows(), k = m.cols();
  HermiteResult res{IntMatrix::identity(n), m, IntMatrix::identity(n)};
  IntMatrix& T = res.T;
  auto row_add = [&](std::size_t dst, std::size_t src, const BigInt& f) {
    if (f == 0) return;
    T.add_row(dst, src, f);
    res.U.add_row(dst, src, f);
    res.U_inv.add_col(src, dst, -f);
  };
  auto row_swap = [&](std::size_t a, std::size_t b) {
    T.swap_rows(a, b);
    res.U.swap_rows(a, b);
    res.U_inv.swap_cols(a, b);
  };

  for (std::size_t j = 0; j < std::min(n, k); ++j) {
    while (true) {
      std::optional<std::size_t> best;
      for (std::size_t i = j; i < n; ++i)
        if (T(i, j) != 0 && (!best || abs(T(i, j)) < abs(T(*best, j)))) best = i;
      if (!best) break;
      row_swap(j, *best);
      bool done = true;
      for (std::size_t i = j + 1; i < n; ++i) {
        if (T(i, j) == 0) continue;
        row_add(i, j, -(T(i, j) / T(j, j)));
        if (T(i, j) != 0) done = false;
      }
      if (done) break;
    }
    if (T(j, j) < 0) {
      T.negate_row(j);
      res.U.negate_row(j);
      res.U_inv.negate_col(j);
    }
    if (T(j, j) > 0)
      for (std::size_t i = 0; i < j; ++i) row_add(i, j, -floor_div(T(i, j), T(j, j)));
  }
  return res;
}

/// Inverse of a unimodular matrix (its Hermite form is the identity).
inline IntMatrix inverse_unimodular(const IntMatrix& m) {
  if (!is_unimodular(m)) throw Error(ErrorCode::NotUnimodular, "matrix is not in GL_n(Z)");
  return hermite_left_reduce(m).U;
}

}  // namespace profrig
