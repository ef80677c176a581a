#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "ctile/lattice.hpp"

namespace ctile {

namespace detail {

inline IntMatrix reverse_rows(const IntMatrix& A) {
  IntMatrix R(A.rows(), A.cols());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) R(A.rows() - 1 - i, j) = A(i, j);
  return R;
}

inline bool lex_less_int(const IntVector& x, const IntVector& y) {
  return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
}

}  // namespace detail

// Upper echelon basis of a full-rank G (pivots on the diagonal, filled from
// the last row); reduction against it gives canonical representatives with
// 0 <= v_i < H_ii.
class CosetReducer {
 public:
  explicit CosetReducer(const IntMatrix& G) {
    HermiteForm h = hnf(detail::reverse_rows(G));
    if (h.rank() != G.rows()) throw DomainError("sublattice of infinite index");
    H_ = detail::reverse_rows(h.H.column_range(0, h.rank()));
  }

  IntVector reduce(IntVector v) const {
    std::size_t k = H_.rows();
    for (std::size_t j = 0; j < k; ++j) {
      std::size_t row = k - 1 - j;
      Integer q = detail::floor_div(v[row], H_(row, j));
      if (q != 0)
        for (std::size_t i = 0; i < k; ++i) v[i] -= q * H_(i, j);
    }
    return v;
  }

  Integer index() const {
    Integer p = 1;
    for (std::size_t j = 0; j < H_.cols(); ++j) p *= H_(H_.rows() - 1 - j, j);
    return p;
  }

  const IntMatrix& basis() const { return H_; }

 private:
  IntMatrix H_;
};

inline bool member(const IntMatrix& G, const IntVector& v) { return solve_integer(G, v).has_value(); }

// Representatives of super / sub, enumerated over the SNF box in lexicographic
// order and reduced canonically mod sub.
inline std::vector<IntVector> coset_reps(const IntMatrix& sub, const IntMatrix& super) {
  std::size_t k = super.rows();
  if (super.cols() != k || integer_determinant(super) == 0)
    throw DomainError("coset_reps: super lattice must be full rank");
  RatMatrix X = inverse(to_rational(super)) * to_rational(sub);
  IntMatrix Xi(k, sub.cols());
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < sub.cols(); ++j) {
      if (X(i, j).get_den() != 1) throw DomainError("coset_reps: sub is not contained in super");
      Xi(i, j) = X(i, j).get_num();
    }
  SmithForm s = snf(Xi);
  std::vector<Integer> diag(k, Integer(0));
  for (std::size_t i = 0; i < s.diagonal.size(); ++i) diag[i] = abs(s.diagonal[i]);
  for (const auto& x : diag)
    if (x == 0) throw DomainError("coset_reps: infinite index");
  RatMatrix Ui = inverse(to_rational(s.U));
  IntMatrix Uinv(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) Uinv(i, j) = Ui(i, j).get_num();
  CosetReducer red(sub);

  std::vector<IntVector> out;
  IntVector r(k, Integer(0));
  while (true) {
    out.push_back(red.reduce(super * (Uinv * r)));
    std::size_t i = k;
    while (i-- > 0) {
      if (r[i] + 1 < diag[i]) {
        ++r[i];
        break;
      }
      r[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

struct Certificate {
  std::size_t i = 0, j = 0;
  std::vector<Rational> xi1, xi2;  // dual witnesses for f_i - f_j not in G1, G2
};

struct TransversalResult {
  std::vector<IntVector> reps;
  Integer size;
  std::vector<Certificate> certificates;
};

namespace detail {

// Row xi of G^-1: xi . g in Z on G, xi . v not in Z. Empty if v in G.
inline std::vector<Rational> dual_witness(const RatMatrix& Ginv, const IntVector& v) {
  std::size_t k = v.size();
  for (std::size_t i = 0; i < k; ++i) {
    Rational c = 0;
    for (std::size_t j = 0; j < k; ++j) c += Ginv(i, j) * v[j];
    if (c.get_den() != 1) return Ginv.row(i);
  }
  return {};
}

}  // namespace detail

// Certified check that reps is a complete transversal of G in Z^k.
inline bool is_transversal(const IntMatrix& G, const std::vector<IntVector>& reps) {
  CosetReducer red(G);
  if (Integer(static_cast<unsigned long>(reps.size())) != red.index()) return false;
  std::vector<IntVector> seen;
  for (const auto& f : reps) seen.push_back(red.reduce(f));
  std::sort(seen.begin(), seen.end(), detail::lex_less_int);
  return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
}

// F with G1 + F = G2 + F = Z^k both direct.
inline TransversalResult common_transversal(const IntMatrix& G1, const IntMatrix& G2) {
  std::size_t k = G1.rows();
  Integer i1 = abs(integer_determinant(G1)), i2 = abs(integer_determinant(G2));
  if (i1 == 0 || i2 == 0) throw DomainError("common_transversal: infinite index");
  if (i1 != i2)
    throw DomainError("common_transversal: indices differ (" + i1.get_str() + " vs " +
                      i2.get_str() + ")");
  SumIntersection si = group_sum_and_intersection(G1, G2);

  // quotient (G1 + G2) / (G1 ∩ G2) = G1/I ⊕ G2/I; pair the two enumerations
  std::vector<IntVector> a = coset_reps(si.intersection, G1);
  std::vector<IntVector> b = coset_reps(si.intersection, G2);
  check_internal(a.size() == b.size(), "quotient images of unequal size");
  for (std::size_t j = 1; j < a.size(); ++j)
    check_internal(!member(G2, a[j]) && !member(G1, b[j]), "quotient images intersect");
  std::vector<IntVector> x = coset_reps(si.sum, IntMatrix::identity(k));

  // reduction mod G1 ∩ G2 keeps every coset of G1 and of G2
  CosetReducer red(si.intersection);
  TransversalResult out;
  for (const auto& xs : x)
    for (std::size_t j = 0; j < a.size(); ++j) out.reps.push_back(red.reduce(a[j] + b[j] + xs));
  out.size = i1;
  check_internal(Integer(static_cast<unsigned long>(out.reps.size())) == i1, "transversal size");

  RatMatrix G1inv = inverse(to_rational(G1)), G2inv = inverse(to_rational(G2));
  for (std::size_t i = 0; i < out.reps.size(); ++i)
    for (std::size_t j = i + 1; j < out.reps.size(); ++j) {
      IntVector diff = out.reps[i] - out.reps[j];
      Certificate c{i, j, detail::dual_witness(G1inv, diff), detail::dual_witness(G2inv, diff)};
      check_internal(!c.xi1.empty() && !c.xi2.empty(), "transversal reps coincide mod a subgroup");
      out.certificates.push_back(std::move(c));
    }
  return out;
}

// Elements of source whose first-m coordinates represent each coset of the
// projection of target in Z^m exactly once.
inline std::vector<Vector> transversal_in_subgroup(const DiscreteGroup& source,
                                                   const DiscreteGroup& target, std::size_t m) {
  if (m == 0) return {Vector(source.ambient_dim(), Quad(0))};
  auto project = [&](const DiscreteGroup& G) {
    QuadMatrix P = G.basis().row_range(0, m);
    if (!is_integral(P)) throw DomainError("transversal_in_subgroup: projection not integral");
    return to_integer(P);
  };
  IntMatrix ps = project(source), pt = project(target);
  IntMatrix cat(m, ps.cols() + pt.cols());
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < ps.cols(); ++j) cat(i, j) = ps(i, j);
    for (std::size_t j = 0; j < pt.cols(); ++j) cat(i, ps.cols() + j) = pt(i, j);
  }
  if (abs(integer_determinant(column_basis(cat))) != 1)
    throw InternalError("transversal_in_subgroup: projections do not generate Z^m");
  IntMatrix ptb = column_basis(pt);
  if (ptb.cols() != m) throw InternalError("transversal_in_subgroup: target projection not full rank");
  // with an injective projection of source, reduce mod pi(source) ∩ pi(target)
  IntMatrix psb = column_basis(ps);
  std::optional<CosetReducer> red;
  if (ps.cols() == m && psb.cols() == m)
    red.emplace(group_sum_and_intersection(psb, ptb).intersection);
  std::vector<Vector> out;
  for (const auto& c : coset_reps(ptb, IntMatrix::identity(m))) {
    auto z = solve_integer(cat, c);
    check_internal(z.has_value(), "coset not reached");
    IntVector za(z->begin(), z->begin() + ps.cols());
    if (red) {
      auto zr = solve_integer(ps, red->reduce(ps * za));
      check_internal(zr.has_value(), "reduced projection left pi(source)");
      za = *zr;
    }
    out.push_back(source.basis() * to_quad(za));
  }
  return out;
}

}  // namespace ctile
