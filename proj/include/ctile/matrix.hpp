#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <type_traits>
#include <string>
#include <utility>
#include <vector>

#include "ctile/error.hpp"
#include "ctile/scalar.hpp"

namespace ctile {

template <class T>
using Vec = std::vector<T>;

using Vector = Vec<Quad>;
using IntVector = Vec<Integer>;

// Dense row-major matrix. Columns are the basis vectors everywhere in ctile.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix I(n, n);
    for (std::size_t i = 0; i < n; ++i) I(i, i) = T(1);
    return I;
  }

  static Matrix from_columns(std::size_t rows, const std::vector<Vec<T>>& cols) {
    Matrix A(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != rows) throw DomainError("column length mismatch");
      for (std::size_t i = 0; i < rows; ++i) A(i, j) = cols[j][i];
    }
    return A;
  }

  static Matrix from_rows(const std::vector<Vec<T>>& rows) {
    std::size_t c = rows.empty() ? 0 : rows[0].size();
    Matrix A(rows.size(), c);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != c) throw DomainError("ragged matrix rows");
      for (std::size_t j = 0; j < c; ++j) A(i, j) = rows[i][j];
    }
    return A;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vec<T> column(std::size_t j) const {
    Vec<T> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }
  Vec<T> row(std::size_t i) const {
    return Vec<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }
  std::vector<Vec<T>> columns() const {
    std::vector<Vec<T>> out;
    for (std::size_t j = 0; j < cols_; ++j) out.push_back(column(j));
    return out;
  }

  void set_column(std::size_t j, const Vec<T>& v) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  // Columns [begin, end).
  Matrix column_range(std::size_t begin, std::size_t end) const {
    Matrix s(rows_, end - begin);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = begin; j < end; ++j) s(i, j - begin) = (*this)(i, j);
    return s;
  }
  Matrix row_range(std::size_t begin, std::size_t end) const {
    Matrix s(end - begin, cols_);
    for (std::size_t i = begin; i < end; ++i)
      for (std::size_t j = 0; j < cols_; ++j) s(i - begin, j) = (*this)(i, j);
    return s;
  }

  friend Matrix operator*(const Matrix& A, const Matrix& B) {
    if (A.cols_ != B.rows_) throw DomainError("matrix product shape mismatch");
    Matrix C(A.rows_, B.cols_);
    for (std::size_t i = 0; i < A.rows_; ++i)
      for (std::size_t k = 0; k < A.cols_; ++k) {
        const T& a = A(i, k);
        if (a == T(0)) continue;
        for (std::size_t j = 0; j < B.cols_; ++j) C(i, j) += a * B(k, j);
      }
    return C;
  }

  friend Vec<T> operator*(const Matrix& A, const Vec<T>& x) {
    if (A.cols_ != x.size()) throw DomainError("matrix-vector shape mismatch");
    Vec<T> y(A.rows_, T(0));
    for (std::size_t i = 0; i < A.rows_; ++i)
      for (std::size_t k = 0; k < A.cols_; ++k) y[i] += A(i, k) * x[k];
    return y;
  }

  friend bool operator==(const Matrix& A, const Matrix& B) {
    return A.rows_ == B.rows_ && A.cols_ == B.cols_ && A.data_ == B.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using QuadMatrix = Matrix<Quad>;
using IntMatrix = Matrix<Integer>;
using RatMatrix = Matrix<Rational>;

template <class T>
Vec<T> operator+(Vec<T> x, const Vec<T>& y) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
  return x;
}
template <class T>
Vec<T> operator-(Vec<T> x, const Vec<T>& y) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] -= y[i];
  return x;
}
template <class T>
Vec<T> operator-(Vec<T> x) {
  for (auto& v : x) v = -v;
  return x;
}
template <class T>
Vec<T> scale(const T& s, Vec<T> x) {
  for (auto& v : x) v *= s;
  return x;
}
template <class T>
T dot(const Vec<T>& x, const Vec<T>& y) {
  T s(0);
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}
template <class T>
bool is_zero_vector(const Vec<T>& x) {
  return std::all_of(x.begin(), x.end(), [](const T& v) { return v == T(0); });
}

inline Vector to_quad(const IntVector& v) { return Vector(v.begin(), v.end()); }

inline QuadMatrix to_quad(const IntMatrix& A) {
  QuadMatrix Q(A.rows(), A.cols());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) Q(i, j) = Quad(A(i, j));
  return Q;
}

inline bool is_integral(const QuadMatrix& A) {
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j)
      if (!A(i, j).is_integer()) return false;
  return true;
}

inline IntMatrix to_integer(const QuadMatrix& A) {
  IntMatrix Z(A.rows(), A.cols());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) Z(i, j) = A(i, j).to_integer();
  return Z;
}

inline IntVector to_integer(const Vector& v) {
  IntVector z;
  for (const auto& x : v) z.push_back(x.to_integer());
  return z;
}

// Row echelon over a field. Returns the pivot columns; A is reduced in place
// to reduced row echelon form.
template <class T>
std::vector<std::size_t> row_reduce(Matrix<T>& A) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < A.cols() && r < A.rows(); ++c) {
    std::size_t p = r;
    while (p < A.rows() && A(p, c) == T(0)) ++p;
    if (p == A.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < A.cols(); ++j) std::swap(A(p, j), A(r, j));
    T inv = T(1) / A(r, c);
    for (std::size_t j = c; j < A.cols(); ++j) A(r, j) *= inv;
    for (std::size_t i = 0; i < A.rows(); ++i) {
      if (i == r || A(i, c) == T(0)) continue;
      T f = A(i, c);
      for (std::size_t j = c; j < A.cols(); ++j) A(i, j) -= f * A(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <class T>
std::size_t rank(Matrix<T> A) {
  return row_reduce(A).size();
}

template <class T>
T determinant(Matrix<T> A) {
  if (A.rows() != A.cols()) throw DomainError("determinant of non-square matrix");
  std::size_t n = A.rows();
  T det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && A(p, c) == T(0)) ++p;
    if (p == n) return T(0);
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(A(p, j), A(c, j));
      det = -det;
    }
    det *= A(c, c);
    T inv = T(1) / A(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (A(i, c) == T(0)) continue;
      T f = A(i, c) * inv;
      for (std::size_t j = c; j < n; ++j) A(i, j) -= f * A(c, j);
    }
  }
  return det;
}

template <class T>
Matrix<T> inverse(const Matrix<T>& A) {
  std::size_t n = A.rows();
  if (n != A.cols()) throw DomainError("inverse of non-square matrix");
  Matrix<T> aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = A(i, j);
    aug(i, n + i) = T(1);
  }
  auto piv = row_reduce(aug);
  if (piv.size() < n || piv[n - 1] != n - 1) throw DomainError("singular matrix");
  return aug.column_range(n, 2 * n);
}

// Solves A x = b for any consistent system; returns one solution (free
// variables zero) or nothing.
template <class T>
std::optional<Vec<T>> solve(const Matrix<T>& A, const Vec<T>& b) {
  Matrix<T> aug(A.rows(), A.cols() + 1);
  for (std::size_t i = 0; i < A.rows(); ++i) {
    for (std::size_t j = 0; j < A.cols(); ++j) aug(i, j) = A(i, j);
    aug(i, A.cols()) = b[i];
  }
  auto piv = row_reduce(aug);
  if (!piv.empty() && piv.back() == A.cols()) return std::nullopt;
  Vec<T> x(A.cols(), T(0));
  for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug(r, A.cols());
  return x;
}

template <class T>
std::string to_string(const Vec<T>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    if constexpr (std::is_same_v<T, Quad>)
      s += v[i].str();
    else
      s += v[i].get_str();
  }
  return s + ")";
}

}  // namespace ctile
