#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "ctile/lattice.hpp"

namespace ctile {

// normal . x < offset (strict) or normal . x <= offset
struct Halfspace {
  Vector normal;
  Quad offset;
  bool strict = false;

  bool satisfied(const Vector& x) const {
    int s = (dot(normal, x) - offset).sign();
    return strict ? s < 0 : s <= 0;
  }
  Halfspace negated() const { return {-normal, -offset, !strict}; }
  friend bool operator==(const Halfspace&, const Halfspace&) = default;
};

struct Cell {
  std::size_t dim = 0;
  std::vector<Halfspace> conditions;

  bool contains(const Vector& x) const {
    return std::all_of(conditions.begin(), conditions.end(),
                       [&](const Halfspace& h) { return h.satisfied(x); });
  }
  friend bool operator==(const Cell&, const Cell&) = default;
};

// Finite union of pairwise interior-disjoint cells.
struct Region {
  std::size_t dim = 0;
  std::vector<Cell> cells;

  bool contains(const Vector& x) const {
    return std::any_of(cells.begin(), cells.end(), [&](const Cell& c) { return c.contains(x); });
  }
  friend bool operator==(const Region&, const Region&) = default;
};

// anchor + {sum t_k v_k : 0 <= t_k < 1}
inline Cell parallelotope(const QuadMatrix& V, const Vector& anchor) {
  std::size_t d = V.rows();
  if (V.cols() != d || rank(V) != d) throw DomainError("parallelotope needs independent vectors");
  QuadMatrix W = inverse(V);
  Cell c{d, {}};
  for (std::size_t i = 0; i < d; ++i) {
    Vector r = W.row(i);
    Quad base = dot(r, anchor);
    c.conditions.push_back({-r, -base, false});
    c.conditions.push_back({r, base + Quad(1), true});
  }
  return c;
}

inline Cell parallelotope(const QuadMatrix& V) { return parallelotope(V, Vector(V.rows(), Quad(0))); }

// Half-open box [lo, hi).
inline Cell box_cell(const Vector& lo, const Vector& hi) {
  std::size_t d = lo.size();
  Cell c{d, {}};
  for (std::size_t i = 0; i < d; ++i) {
    Vector e(d, Quad(0));
    e[i] = 1;
    c.conditions.push_back({-e, -lo[i], false});
    c.conditions.push_back({e, hi[i], true});
  }
  return c;
}

inline Region single(const Cell& c) { return Region{c.dim, {c}}; }

inline Cell translate(const Cell& c, const Vector& t) {
  Cell out = c;
  for (auto& h : out.conditions) h.offset += dot(h.normal, t);
  return out;
}

inline Region translate(const Region& r, const Vector& t) {
  Region out{r.dim, {}};
  for (const auto& c : r.cells) out.cells.push_back(translate(c, t));
  return out;
}

// Image under x -> S x, given S^-1.
inline Cell linear_image(const Cell& c, const QuadMatrix& S_inv) {
  QuadMatrix St = S_inv.transpose();
  Cell out{S_inv.rows(), {}};
  for (const auto& h : c.conditions) out.conditions.push_back({St * h.normal, h.offset, h.strict});
  return out;
}

inline Region linear_image(const Region& r, const QuadMatrix& S) {
  QuadMatrix S_inv = inverse(S);
  Region out{S.rows(), {}};
  for (const auto& c : r.cells) out.cells.push_back(linear_image(c, S_inv));
  return out;
}

namespace detail {

// Dense simplex in slack form, Bland's rule, exact arithmetic:
// x_B[i] = b[i] - sum_j A[i][j] x_N[j],  z = v + sum_j c[j] x_N[j].
struct SlackForm {
  std::vector<std::vector<Quad>> A;
  std::vector<Quad> b, c;
  Quad v;
  std::vector<int> basic, nonbasic;

  void pivot(std::size_t l, std::size_t e) {
    Quad a = A[l][e];
    Quad inv = Quad(1) / a;
    b[l] *= inv;
    for (std::size_t j = 0; j < A[l].size(); ++j)
      if (j != e) A[l][j] *= inv;
    A[l][e] = inv;
    for (std::size_t i = 0; i < A.size(); ++i) {
      if (i == l || A[i][e].is_zero()) continue;
      Quad f = A[i][e];
      b[i] -= f * b[l];
      for (std::size_t j = 0; j < A[i].size(); ++j)
        if (j != e) A[i][j] -= f * A[l][j];
      A[i][e] = -f * A[l][e];
    }
    if (!c[e].is_zero()) {
      Quad f = c[e];
      v += f * b[l];
      for (std::size_t j = 0; j < c.size(); ++j)
        if (j != e) c[j] -= f * A[l][j];
      c[e] = -f * A[l][e];
    }
    std::swap(basic[l], nonbasic[e]);
  }

  // false when unbounded
  bool optimize() {
    while (true) {
      std::size_t e = c.size();
      for (std::size_t j = 0; j < c.size(); ++j)
        if (c[j].sign() > 0 && (e == c.size() || nonbasic[j] < nonbasic[e])) e = j;
      if (e == c.size()) return true;
      std::size_t l = A.size();
      Quad best;
      for (std::size_t i = 0; i < A.size(); ++i) {
        if (A[i][e].sign() <= 0) continue;
        Quad ratio = b[i] / A[i][e];
        if (l == A.size() || ratio < best || (ratio == best && basic[i] < basic[l])) {
          l = i;
          best = ratio;
        }
      }
      if (l == A.size()) return false;
      pivot(l, e);
    }
  }
};

}  // namespace detail

// max c.x subject to A x <= b, x >= 0. Empty optional when infeasible;
// unbounded problems report optimum = nullopt with feasible = true.
struct LpResult {
  bool feasible = false;
  std::optional<Quad> optimum;
};

inline LpResult maximize(const std::vector<Quad>& c, const std::vector<std::vector<Quad>>& A,
                         const std::vector<Quad>& b) {
  std::size_t m = A.size(), n = c.size();
  detail::SlackForm s;
  s.A = A;
  s.b = b;
  s.c.assign(n, Quad(0));
  for (std::size_t j = 0; j < n; ++j) s.nonbasic.push_back(static_cast<int>(j));
  for (std::size_t i = 0; i < m; ++i) s.basic.push_back(static_cast<int>(n + i));

  std::size_t kmin = 0;
  for (std::size_t i = 1; i < m; ++i)
    if (b[i] < b[kmin]) kmin = i;
  if (m > 0 && b[kmin].sign() < 0) {
    // phase one with auxiliary x0 (index -1)
    for (auto& row : s.A) row.push_back(Quad(-1));
    s.c.push_back(Quad(-1));
    s.nonbasic.push_back(-1);
    s.pivot(kmin, n);
    s.optimize();
    if (!s.v.is_zero()) return {false, std::nullopt};
    auto it = std::find(s.basic.begin(), s.basic.end(), -1);
    if (it != s.basic.end()) {
      std::size_t l = it - s.basic.begin();
      std::size_t e = 0;
      while (s.A[l][e].is_zero()) ++e;
      s.pivot(l, e);
    }
    std::size_t col = std::find(s.nonbasic.begin(), s.nonbasic.end(), -1) - s.nonbasic.begin();
    for (auto& row : s.A) row.erase(row.begin() + col);
    s.nonbasic.erase(s.nonbasic.begin() + col);
    s.c.assign(n, Quad(0));
    s.v = 0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (c[j].is_zero()) continue;
    int var = static_cast<int>(j);
    auto nb = std::find(s.nonbasic.begin(), s.nonbasic.end(), var);
    if (nb != s.nonbasic.end()) {
      s.c[nb - s.nonbasic.begin()] += c[j];
    } else {
      std::size_t i = std::find(s.basic.begin(), s.basic.end(), var) - s.basic.begin();
      s.v += c[j] * s.b[i];
      for (std::size_t k = 0; k < n; ++k) s.c[k] -= c[j] * s.A[i][k];
    }
  }
  if (!s.optimize()) return {true, std::nullopt};
  return {true, s.v};
}

// True iff no point satisfies every condition strictly.
inline bool is_empty_interior(const Cell& cell) {
  std::size_t d = cell.dim;
  if (cell.conditions.empty()) return false;
  // x = y - w 1 with y, w >= 0; maximize t subject to n.x + t <= c, t <= 1
  std::vector<std::vector<Quad>> A;
  std::vector<Quad> b;
  for (const auto& h : cell.conditions) {
    std::vector<Quad> row(h.normal);
    Quad s(0);
    for (const auto& x : h.normal) s += x;
    row.push_back(-s);
    row.push_back(Quad(1));
    A.push_back(std::move(row));
    b.push_back(h.offset);
  }
  std::vector<Quad> cap(d + 2, Quad(0));
  cap[d + 1] = 1;
  A.push_back(cap);
  b.push_back(Quad(1));
  std::vector<Quad> obj(d + 2, Quad(0));
  obj[d + 1] = 1;
  LpResult r = maximize(obj, A, b);
  return !r.feasible || (r.optimum && r.optimum->sign() <= 0);
}

inline Cell intersect(const Cell& a, const Cell& b) {
  if (a.dim != b.dim) throw DomainError("dimension mismatch in intersect");
  Cell out = a;
  out.conditions.insert(out.conditions.end(), b.conditions.begin(), b.conditions.end());
  return out;
}

inline Region intersect(const Region& A, const Region& B) {
  if (A.dim != B.dim) throw DomainError("dimension mismatch in intersect");
  Region out{A.dim, {}};
  for (const auto& a : A.cells)
    for (const auto& b : B.cells) {
      Cell c = intersect(a, b);
      if (!is_empty_interior(c)) out.cells.push_back(std::move(c));
    }
  return out;
}

// a \ b as interior-disjoint cells (complement decomposition).
inline std::vector<Cell> subtract(const Cell& a, const Cell& b) {
  if (a.dim != b.dim) throw DomainError("dimension mismatch in subtract");
  if (is_empty_interior(intersect(a, b))) return {a};
  std::vector<Cell> out;
  Cell acc = a;
  for (const auto& h : b.conditions) {
    Cell piece = acc;
    piece.conditions.push_back(h.negated());
    if (!is_empty_interior(piece)) out.push_back(std::move(piece));
    acc.conditions.push_back(h);
  }
  return out;
}

inline Region subtract(const Region& A, const Region& B) {
  if (A.dim != B.dim) throw DomainError("dimension mismatch in subtract");
  Region out{A.dim, {}};
  for (const auto& a : A.cells) {
    std::vector<Cell> pieces{a};
    for (const auto& b : B.cells) {
      std::vector<Cell> next;
      for (const auto& p : pieces)
        for (auto& q : subtract(p, b)) next.push_back(std::move(q));
      pieces = std::move(next);
    }
    for (auto& p : pieces) out.cells.push_back(std::move(p));
  }
  return out;
}

namespace detail {

inline bool lex_less(const Vector& x, const Vector& y) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    int s = (x[i] - y[i]).sign();
    if (s != 0) return s < 0;
  }
  return false;
}

// Drops conditions whose normal is a positive multiple of another one's,
// keeping the tighter.
inline std::vector<Halfspace> dedupe_parallel(const std::vector<Halfspace>& hs) {
  std::vector<Halfspace> out;
  for (const auto& h : hs) {
    if (is_zero_vector(h.normal)) {
      if (h.offset.sign() < 0 || (h.strict && h.offset.is_zero())) out.push_back(h);
      continue;
    }
    bool merged = false;
    for (auto& g : out) {
      if (is_zero_vector(g.normal)) continue;
      std::size_t k = 0;
      while (h.normal[k].is_zero()) ++k;
      if (g.normal[k].is_zero()) continue;
      Quad lambda = g.normal[k] / h.normal[k];
      if (lambda.sign() <= 0 || scale(lambda, h.normal) != g.normal) continue;
      Quad off = lambda * h.offset;
      int cmp = (off - g.offset).sign();
      if (cmp < 0 || (cmp == 0 && h.strict)) g = {g.normal, off, h.strict || (cmp == 0 && g.strict)};
      merged = true;
      break;
    }
    if (!merged) out.push_back(h);
  }
  return out;
}

inline std::size_t affine_rank(const std::vector<Vector>& pts, const std::vector<std::size_t>& idx) {
  if (idx.size() <= 1) return 0;
  std::vector<Vector> diffs;
  for (std::size_t k = 1; k < idx.size(); ++k) diffs.push_back(pts[idx[k]] - pts[idx[0]]);
  return rank(QuadMatrix::from_rows(diffs));
}

}  // namespace detail

struct Polytope {
  std::vector<Vector> vertices;                    // lexicographically sorted
  std::vector<std::vector<std::size_t>> facets;    // vertex indices per facet
};

// Vertices and facets of a bounded cell with nonempty interior.
inline Polytope polytope(const Cell& cell) {
  std::size_t d = cell.dim;
  std::vector<Halfspace> hs = detail::dedupe_parallel(cell.conditions);
  Polytope P;
  if (hs.size() < d + 1) return P;
  std::vector<std::size_t> pick(d);
  for (std::size_t i = 0; i < d; ++i) pick[i] = i;
  while (true) {
    QuadMatrix A(d, d);
    Vector rhs(d);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) A(i, j) = hs[pick[i]].normal[j];
      rhs[i] = hs[pick[i]].offset;
    }
    QuadMatrix aug = A;
    if (rank(aug) == d) {
      Vector x = *solve(A, rhs);
      bool ok = std::all_of(hs.begin(), hs.end(),
                            [&](const Halfspace& h) { return (dot(h.normal, x) - h.offset).sign() <= 0; });
      if (ok) P.vertices.push_back(std::move(x));
    }
    std::size_t i = d;
    while (i-- > 0) {
      if (pick[i] < hs.size() - d + i) {
        ++pick[i];
        for (std::size_t j = i + 1; j < d; ++j) pick[j] = pick[j - 1] + 1;
        break;
      }
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  std::sort(P.vertices.begin(), P.vertices.end(), detail::lex_less);
  P.vertices.erase(std::unique(P.vertices.begin(), P.vertices.end()), P.vertices.end());
  std::set<std::vector<std::size_t>> seen;
  for (const auto& h : hs) {
    std::vector<std::size_t> on;
    for (std::size_t k = 0; k < P.vertices.size(); ++k)
      if (dot(h.normal, P.vertices[k]) == h.offset) on.push_back(k);
    if (on.size() >= d && detail::affine_rank(P.vertices, on) == d - 1 && seen.insert(on).second)
      P.facets.push_back(on);
  }
  return P;
}

inline std::vector<Vector> vertices(const Cell& cell) { return polytope(cell).vertices; }

namespace detail {

inline void pull(const std::vector<Vector>& V, const std::vector<std::vector<std::size_t>>& hyper,
                 const std::vector<std::size_t>& face, std::size_t k,
                 std::vector<std::size_t>& prefix, std::vector<std::vector<std::size_t>>& out) {
  if (k == 0) {
    prefix.push_back(face[0]);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  std::size_t apex = face[0];
  std::set<std::vector<std::size_t>> subfaces;
  for (const auto& h : hyper) {
    std::vector<std::size_t> f;
    std::set_intersection(face.begin(), face.end(), h.begin(), h.end(), std::back_inserter(f));
    if (f.size() < k || f.size() == face.size() || std::binary_search(f.begin(), f.end(), apex))
      continue;
    if (affine_rank(V, f) == k - 1) subfaces.insert(f);
  }
  prefix.push_back(apex);
  for (const auto& f : subfaces) pull(V, hyper, f, k - 1, prefix, out);
  prefix.pop_back();
}

}  // namespace detail

// Pulling triangulation: simplices as (d+1)-tuples of vertices.
inline std::vector<std::vector<Vector>> triangulate(const Cell& cell) {
  Polytope P = polytope(cell);
  std::size_t d = cell.dim;
  std::vector<std::vector<Vector>> out;
  if (P.vertices.size() < d + 1) return out;
  std::vector<std::size_t> all(P.vertices.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  if (detail::affine_rank(P.vertices, all) < d) return out;
  std::vector<std::vector<std::size_t>> simplices;
  std::vector<std::size_t> prefix;
  detail::pull(P.vertices, P.facets, all, d, prefix, simplices);
  for (const auto& s : simplices) {
    std::vector<Vector> simplex;
    for (std::size_t i : s) simplex.push_back(P.vertices[i]);
    out.push_back(std::move(simplex));
  }
  return out;
}

inline Quad simplex_volume(const std::vector<Vector>& s) {
  std::size_t d = s.size() - 1;
  QuadMatrix E(d, d);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < d; ++i) E(i, j) = s[j + 1][i] - s[0][i];
  Integer fact = 1;
  for (std::size_t k = 2; k <= d; ++k) fact *= static_cast<long>(k);
  return abs(determinant(E)) / Quad(fact);
}

// Measure of a bounded cell (strictness ignored).
inline Quad volume(const Cell& cell) {
  if (is_empty_interior(cell)) return Quad(0);
  auto simplices = triangulate(cell);
  if (simplices.empty()) throw DomainError("volume of an unbounded cell");
  Quad v(0);
  for (const auto& s : simplices) v += simplex_volume(s);
  return v;
}

inline Quad volume(const Region& r) {
  Quad v(0);
  for (const auto& c : r.cells) v += volume(c);
  return v;
}

inline Box bounding_box(const std::vector<Vector>& pts, std::size_t d) {
  if (pts.empty()) throw DomainError("bounding box of an empty or unbounded set");
  Box b{pts[0], pts[0]};
  for (const auto& p : pts)
    for (std::size_t i = 0; i < d; ++i) {
      if (p[i] < b.lo[i]) b.lo[i] = p[i];
      if (p[i] > b.hi[i]) b.hi[i] = p[i];
    }
  return b;
}

inline Box bounding_box(const Cell& c) { return bounding_box(vertices(c), c.dim); }

inline Box bounding_box(const Region& r) {
  std::vector<Vector> pts;
  for (const auto& c : r.cells) {
    auto v = vertices(c);
    pts.insert(pts.end(), v.begin(), v.end());
  }
  return bounding_box(pts, r.dim);
}

// Drops conditions that are not facet-defining (cell must be bounded).
inline Cell simplify(const Cell& cell) {
  if (is_empty_interior(cell)) return cell;
  std::vector<Halfspace> hs = detail::dedupe_parallel(cell.conditions);
  Polytope P = polytope(cell);
  Cell out{cell.dim, {}};
  for (const auto& h : hs) {
    std::vector<std::size_t> on;
    for (std::size_t k = 0; k < P.vertices.size(); ++k)
      if (dot(h.normal, P.vertices[k]) == h.offset) on.push_back(k);
    if (on.size() >= cell.dim && detail::affine_rank(P.vertices, on) == cell.dim - 1)
      out.conditions.push_back(h);
  }
  return out;
}

inline Box difference_box(const Box& a, const Box& b) {
  Box out{a.lo, a.hi};
  for (std::size_t i = 0; i < a.dim(); ++i) {
    out.lo[i] = a.lo[i] - b.hi[i];
    out.hi[i] = a.hi[i] - b.lo[i];
  }
  return out;
}

}  // namespace ctile
