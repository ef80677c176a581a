#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "ctile/integer.hpp"
#include "ctile/matrix.hpp"

namespace ctile {

// Exact floor/ceil of a + b sqrt(D).
inline Integer floor(const Quad& x) {
  if (x.is_rational()) return floor(x.a());
  Integer f(std::floor(to_double(x)));
  while (Quad(f) > x) --f;
  while (Quad(Integer(f + 1)) <= x) ++f;
  return f;
}

inline Integer ceil(const Quad& x) { return -floor(-x); }

// Discrete subgroup of R^d given by R-independent basis columns.
class DiscreteGroup {
 public:
  DiscreteGroup() = default;
  explicit DiscreteGroup(QuadMatrix basis) : basis_(std::move(basis)) {
    if (ctile::rank(basis_) != basis_.cols()) throw DomainError("group generators are R-dependent");
  }
  static DiscreteGroup trivial(std::size_t d) { return DiscreteGroup(QuadMatrix(d, 0)); }

  std::size_t ambient_dim() const { return basis_.rows(); }
  std::size_t rank() const { return basis_.cols(); }
  const QuadMatrix& basis() const { return basis_; }

 private:
  QuadMatrix basis_;
};

class Lattice {
 public:
  Lattice() = default;
  explicit Lattice(QuadMatrix basis) : basis_(std::move(basis)) {
    if (basis_.rows() != basis_.cols()) throw DomainError("lattice basis must be square");
    if (determinant(basis_).is_zero()) throw DomainError("singular lattice basis");
  }
  static Lattice integer(std::size_t d) { return Lattice(QuadMatrix::identity(d)); }

  std::size_t dim() const { return basis_.rows(); }
  const QuadMatrix& basis() const { return basis_; }
  DiscreteGroup group() const { return DiscreteGroup(basis_); }

 private:
  QuadMatrix basis_;
};

inline Quad volume(const Lattice& L) { return abs(determinant(L.basis())); }

// det(B^T B): the squared covolume of a lower-rank group.
inline Quad gram_determinant(const DiscreteGroup& G) {
  if (G.rank() == 0) return Quad(1);
  return determinant(G.basis().transpose() * G.basis());
}

inline Lattice dual(const Lattice& L) { return Lattice(inverse(L.basis()).transpose()); }

inline std::optional<IntVector> member(const DiscreteGroup& G, const Vector& v) {
  if (v.size() != G.ambient_dim()) throw DomainError("dimension mismatch in member");
  auto c = solve(G.basis(), v);
  if (!c) return std::nullopt;
  for (const auto& x : *c)
    if (!x.is_integer()) return std::nullopt;
  return to_integer(*c);
}

inline std::optional<IntVector> member(const Lattice& L, const Vector& v) {
  return member(DiscreteGroup(L.basis()), v);
}

// L ∩ ({0}^m x R^n) for L ⊆ Z^m x R^n; rank is d - m.
inline DiscreteGroup intersect_coordinate_subspace(const Lattice& L, std::size_t m) {
  std::size_t d = L.dim();
  if (m > d) throw DomainError("m exceeds dimension");
  QuadMatrix top = L.basis().row_range(0, m);
  if (!is_integral(top)) throw DomainError("lattice is not contained in Z^m x R^n");
  IntMatrix K = m == 0 ? IntMatrix::identity(d) : integer_kernel(to_integer(top));
  DiscreteGroup G(L.basis() * to_quad(K));
  check_internal(G.rank() == d - m, "intersection with coordinate subspace has wrong rank");
  return G;
}

// Complement L1 of a primitive subgroup L2 of L: L = L1 ⊕ L2.
inline DiscreteGroup extend_basis(const Lattice& L, const DiscreteGroup& L2) {
  std::size_t d = L.dim(), r = L2.rank();
  QuadMatrix C = inverse(L.basis()) * L2.basis();
  if (!is_integral(C)) throw DomainError("subgroup is not contained in the lattice");
  if (r == 0) return DiscreteGroup(L.basis());
  SmithForm s = snf(to_integer(C));
  for (const auto& v : s.diagonal)
    if (v != 1) throw DomainError("subgroup is not primitive in the lattice");
  // U C V = [I; 0], so the first r columns of U^-1 span C's lattice and the
  // rest complete them to a unimodular matrix.
  RatMatrix Ui = inverse(to_rational(s.U));
  IntMatrix W(d, d - r);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = r; j < d; ++j) W(i, j - r) = Ui(i, j).get_num();
  return DiscreteGroup(L.basis() * to_quad(W));
}

struct SumIntersection {
  IntMatrix sum;           // basis of G1 + G2
  IntMatrix intersection;  // basis of G1 ∩ G2
  Integer sum_index;           // [Z^k : G1 + G2]
  Integer intersection_index;  // [Z^k : G1 ∩ G2]
};

inline SumIntersection group_sum_and_intersection(const IntMatrix& G1, const IntMatrix& G2) {
  std::size_t k = G1.rows();
  if (G1.cols() != k || G2.cols() != k || G2.rows() != k ||
      integer_determinant(G1) == 0 || integer_determinant(G2) == 0)
    throw DomainError("group_sum_and_intersection needs two full-rank sublattices");
  IntMatrix cat(k, 2 * k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      cat(i, j) = G1(i, j);
      cat(i, k + j) = -G2(i, j);
    }
  SumIntersection out;
  out.sum = column_basis(cat);
  IntMatrix ker = integer_kernel(cat);
  out.intersection = column_basis(G1 * ker.row_range(0, k));
  out.sum_index = abs(integer_determinant(out.sum));
  out.intersection_index = abs(integer_determinant(out.intersection));
  return out;
}

struct Superlattice {
  DiscreteGroup group;
  std::vector<Vector> transversal;  // j * b_1 / k, 0 <= j < k
};

inline Superlattice superlattice_with_index(const DiscreteGroup& G, const Integer& k) {
  if (k < 1) throw DomainError("superlattice index must be positive");
  if (G.rank() == 0) {
    if (k != 1) throw DomainError("trivial group has no proper superlattice of rank 0");
    return {G, {Vector(G.ambient_dim(), Quad(0))}};
  }
  QuadMatrix B = G.basis();
  Vector b1 = scale(Quad(Rational(1) / Rational(k)), B.column(0));
  B.set_column(0, b1);
  Superlattice out{DiscreteGroup(B), {}};
  for (Integer j = 0; j < k; ++j) out.transversal.push_back(scale(Quad(j), b1));
  return out;
}

// Closed axis-aligned box.
struct Box {
  Vector lo, hi;
  std::size_t dim() const { return lo.size(); }
  bool contains(const Vector& x) const {
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
  }
};

// All points of G in the box, ordered lexicographically by coefficients.
inline std::vector<Vector> enumerate_points(const DiscreteGroup& G, const Box& box) {
  std::size_t d = G.ambient_dim(), r = G.rank();
  if (box.dim() != d) throw DomainError("box dimension mismatch");
  for (std::size_t i = 0; i < d; ++i)
    if (box.hi[i] < box.lo[i]) return {};
  if (r == 0) return box.contains(Vector(d, Quad(0))) ? std::vector<Vector>{Vector(d, Quad(0))}
                                                      : std::vector<Vector>{};
  const QuadMatrix& B = G.basis();
  QuadMatrix Bt = B.transpose();
  QuadMatrix P = inverse(Bt * B) * Bt;  // left inverse
  std::vector<Integer> lo(r), hi(r);
  for (std::size_t i = 0; i < r; ++i) {
    Quad mn(0), mx(0);
    for (std::size_t j = 0; j < d; ++j) {
      const Quad& p = P(i, j);
      if (p.sign() >= 0) {
        mn += p * box.lo[j];
        mx += p * box.hi[j];
      } else {
        mn += p * box.hi[j];
        mx += p * box.lo[j];
      }
    }
    lo[i] = ceil(mn);
    hi[i] = floor(mx);
    if (hi[i] < lo[i]) return {};
  }
  std::vector<Vector> out;
  IntVector c(lo);
  while (true) {
    Vector x = B * to_quad(c);
    if (box.contains(x)) out.push_back(std::move(x));
    std::size_t i = r;
    while (i-- > 0) {
      if (c[i] < hi[i]) {
        ++c[i];
        break;
      }
      c[i] = lo[i];
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

inline std::vector<Vector> enumerate_points(const Lattice& L, const Box& box) {
  return enumerate_points(DiscreteGroup(L.basis()), box);
}

}  // namespace ctile
