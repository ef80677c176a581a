#pragma once

#include <numeric>
#include <optional>
#include <vector>

#include "ctile/matrix.hpp"

namespace ctile {

struct HermiteForm {
  IntMatrix H;                        // A * U, column style, lower echelon
  IntMatrix U;                        // unimodular
  std::vector<std::size_t> pivot_rows;  // pivot_rows[k]: row of the pivot of column k
  std::size_t rank() const { return pivot_rows.size(); }
};

namespace detail {

inline void column_combine(IntMatrix& A, std::size_t c1, std::size_t c2, const Integer& s,
                           const Integer& t, const Integer& u, const Integer& v) {
  // (c1, c2) <- (s*c1 + t*c2, u*c1 + v*c2)
  for (std::size_t i = 0; i < A.rows(); ++i) {
    Integer x = A(i, c1), y = A(i, c2);
    A(i, c1) = s * x + t * y;
    A(i, c2) = u * x + v * y;
  }
}

inline void column_axpy(IntMatrix& A, std::size_t dst, std::size_t src, const Integer& q) {
  for (std::size_t i = 0; i < A.rows(); ++i) A(i, dst) -= q * A(i, src);
}

inline void row_axpy(IntMatrix& A, std::size_t dst, std::size_t src, const Integer& q) {
  for (std::size_t j = 0; j < A.cols(); ++j) A(dst, j) -= q * A(src, j);
}

inline void swap_columns(IntMatrix& A, std::size_t a, std::size_t b) {
  for (std::size_t i = 0; i < A.rows(); ++i) std::swap(A(i, a), A(i, b));
}

inline void swap_rows(IntMatrix& A, std::size_t a, std::size_t b) {
  for (std::size_t j = 0; j < A.cols(); ++j) std::swap(A(a, j), A(b, j));
}

inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace detail

// Column Hermite normal form: pivots positive, entries left of a pivot in
// [0, pivot), zero columns last.
inline HermiteForm hnf(const IntMatrix& A) {
  using namespace detail;
  HermiteForm out{A, IntMatrix::identity(A.cols()), {}};
  IntMatrix& H = out.H;
  IntMatrix& U = out.U;
  std::size_t r = 0;
  for (std::size_t i = 0; i < H.rows() && r < H.cols(); ++i) {
    for (std::size_t j = r + 1; j < H.cols(); ++j) {
      if (H(i, j) == 0) continue;
      Integer g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), H(i, r).get_mpz_t(),
                 H(i, j).get_mpz_t());
      Integer a = H(i, r) / g, b = H(i, j) / g;
      column_combine(H, r, j, s, t, -b, a);
      column_combine(U, r, j, s, t, -b, a);
    }
    if (H(i, r) == 0) continue;
    if (H(i, r) < 0) {
      for (std::size_t k = 0; k < H.rows(); ++k) H(k, r) = -H(k, r);
      for (std::size_t k = 0; k < U.rows(); ++k) U(k, r) = -U(k, r);
    }
    for (std::size_t j = 0; j < r; ++j) {
      Integer q = floor_div(H(i, j), H(i, r));
      if (q == 0) continue;
      column_axpy(H, j, r, q);
      column_axpy(U, j, r, q);
    }
    out.pivot_rows.push_back(i);
    ++r;
  }
  return out;
}

struct SmithForm {
  IntMatrix S, U, V;  // U * A * V = S
  std::vector<Integer> diagonal;
};

inline SmithForm snf(const IntMatrix& A) {
  using namespace detail;
  std::size_t m = A.rows(), n = A.cols();
  SmithForm out{A, IntMatrix::identity(m), IntMatrix::identity(n), {}};
  IntMatrix& S = out.S;
  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    while (true) {
      // smallest nonzero pivot in the trailing block
      std::size_t pi = m, pj = n;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j)
          if (S(i, j) != 0 && (pi == m || abs(S(i, j)) < abs(S(pi, pj)))) pi = i, pj = j;
      if (pi == m) {
        for (std::size_t k = 0; k < std::min(m, n); ++k) out.diagonal.push_back(S(k, k));
        return out;
      }
      swap_rows(S, t, pi);
      swap_rows(out.U, t, pi);
      swap_columns(S, t, pj);
      swap_columns(out.V, t, pj);
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (S(i, t) == 0) continue;
        Integer q = S(i, t) / S(t, t);
        row_axpy(S, i, t, q);
        row_axpy(out.U, i, t, q);
        if (S(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (S(t, j) == 0) continue;
        Integer q = S(t, j) / S(t, t);
        column_axpy(S, j, t, q);
        column_axpy(out.V, j, t, q);
        if (S(t, j) != 0) clean = false;
      }
      if (!clean) continue;
      bool divides = true;
      for (std::size_t i = t + 1; i < m && divides; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (S(i, j) % S(t, t) != 0) {
            row_axpy(S, t, i, -1);
            row_axpy(out.U, t, i, -1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (S(t, t) < 0) {
      for (std::size_t j = 0; j < n; ++j) S(t, j) = -S(t, j);
      for (std::size_t j = 0; j < m; ++j) out.U(t, j) = -out.U(t, j);
    }
  }
  for (std::size_t k = 0; k < std::min(m, n); ++k) out.diagonal.push_back(S(k, k));
  return out;
}

// Basis (columns) of {z in Z^n : A z = 0}.
inline IntMatrix integer_kernel(const IntMatrix& A) {
  HermiteForm h = hnf(A);
  return h.U.column_range(h.rank(), A.cols());
}

// Nonzero columns of the HNF: a basis of the group generated by A's columns.
inline IntMatrix column_basis(const IntMatrix& A) {
  HermiteForm h = hnf(A);
  return h.H.column_range(0, h.rank());
}

// One integer solution of A z = b, if any.
inline std::optional<IntVector> solve_integer(const IntMatrix& A, const IntVector& b) {
  HermiteForm h = hnf(A);
  std::size_t r = h.rank();
  IntVector y(A.cols(), Integer(0));
  for (std::size_t k = 0; k < r; ++k) {
    std::size_t row = h.pivot_rows[k];
    Integer rhs = b[row];
    for (std::size_t j = 0; j < k; ++j) rhs -= h.H(row, j) * y[j];
    if (rhs % h.H(row, k) != 0) return std::nullopt;
    y[k] = rhs / h.H(row, k);
  }
  for (std::size_t i = 0; i < A.rows(); ++i) {
    Integer s = 0;
    for (std::size_t k = 0; k < r; ++k) s += h.H(i, k) * y[k];
    if (s != b[i]) return std::nullopt;
  }
  return h.U * y;
}

inline RatMatrix to_rational(const IntMatrix& A) {
  RatMatrix R(A.rows(), A.cols());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) R(i, j) = Rational(A(i, j));
  return R;
}

inline Integer integer_determinant(const IntMatrix& A) {
  Rational d = determinant(to_rational(A));
  return d.get_num();
}

// Basis of {t in Z^r : R t in Z^q}; always full rank r.
inline IntMatrix congruence_lattice(const RatMatrix& R) {
  std::size_t q = R.rows(), r = R.cols();
  Integer den = 1;
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = 0; j < r; ++j) den = lcm(den, R(i, j).get_den());
  IntMatrix P(q, r + q);
  for (std::size_t i = 0; i < q; ++i) {
    for (std::size_t j = 0; j < r; ++j) P(i, j) = Rational(R(i, j) * den).get_num();
    P(i, r + i) = den;
  }
  IntMatrix K = integer_kernel(P);
  return column_basis(K.row_range(0, r));
}

// LLL-reduced basis of the lattice spanned by independent integer columns.
inline IntMatrix lll(const IntMatrix& B0, const Rational& delta = Rational(3, 4)) {
  IntMatrix B = B0;
  std::size_t n = B.cols();
  if (n < 2) return B;
  auto col = [&](std::size_t j) {
    Vec<Rational> v;
    for (std::size_t i = 0; i < B.rows(); ++i) v.push_back(Rational(B(i, j)));
    return v;
  };
  auto gram_schmidt = [&](std::vector<Vec<Rational>>& bs, std::vector<Rational>& norms,
                          Matrix<Rational>& mu) {
    bs.clear();
    norms.clear();
    mu = Matrix<Rational>(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      Vec<Rational> v = col(i);
      for (std::size_t j = 0; j < i; ++j) {
        mu(i, j) = dot(col(i), bs[j]) / norms[j];
        for (std::size_t k = 0; k < v.size(); ++k) v[k] -= mu(i, j) * bs[j][k];
      }
      norms.push_back(dot(v, v));
      bs.push_back(v);
    }
  };
  std::vector<Vec<Rational>> bs;
  std::vector<Rational> norms;
  Matrix<Rational> mu;
  gram_schmidt(bs, norms, mu);
  std::size_t k = 1;
  while (k < n) {
    for (std::size_t j = k; j-- > 0;) {
      Rational m = mu(k, j);
      Integer q = floor(m + Rational(1, 2));
      if (q != 0) {
        detail::column_axpy(B, k, j, q);
        gram_schmidt(bs, norms, mu);
      }
    }
    if (norms[k] >= (delta - mu(k, k - 1) * mu(k, k - 1)) * norms[k - 1]) {
      ++k;
    } else {
      detail::swap_columns(B, k, k - 1);
      gram_schmidt(bs, norms, mu);
      k = std::max<std::size_t>(k - 1, 1);
    }
  }
  return B;
}

}  // namespace ctile
