#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctile/region.hpp"

namespace ctile {

class EquidecompositionIncomplete : public std::runtime_error {
 public:
  EquidecompositionIncomplete(const std::string& what, Quad residual, std::size_t pieces)
      : std::runtime_error(what), residual_volume(std::move(residual)), pieces_so_far(pieces) {}
  Quad residual_volume;
  std::size_t pieces_so_far;
};

// L + M with integer coefficient tracking: z = (p, q) stands for L p + M q.
class SumGroup {
 public:
  SumGroup(const Lattice& L, const Lattice& M) : L_(L), M_(M) {
    std::size_t d = L.dim();
    if (M.dim() != d) throw DomainError("lattices of different dimension");
    // rational and sqrt(D) parts of each coordinate, scaled to integers
    A_ = IntMatrix(2 * d, 2 * d);
    scale_.assign(2 * d, Integer(1));
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t part = 0; part < 2; ++part) {
        std::size_t row = part * d + i;
        std::vector<Rational> r;
        for (std::size_t j = 0; j < 2 * d; ++j) {
          const Quad& w = j < d ? L.basis()(i, j) : M.basis()(i, j - d);
          r.push_back(part == 0 ? w.a() : w.b());
        }
        Integer den = 1;
        for (const auto& x : r) den = lcm(den, x.get_den());
        scale_[row] = den;
        for (std::size_t j = 0; j < 2 * d; ++j) A_(row, j) = Rational(r[j] * den).get_num();
      }
  }

  std::size_t dim() const { return L_.dim(); }
  const Lattice& L() const { return L_; }
  const Lattice& M() const { return M_; }

  Vector ell(const IntVector& z) const {
    return L_.basis() * to_quad(IntVector(z.begin(), z.begin() + dim()));
  }
  Vector em(const IntVector& z) const {
    return M_.basis() * to_quad(IntVector(z.begin() + dim(), z.end()));
  }
  Vector value(const IntVector& z) const { return ell(z) + em(z); }

  std::optional<IntVector> decompose(const Vector& v) const {
    std::size_t d = dim();
    IntVector rhs(2 * d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t part = 0; part < 2; ++part) {
        std::size_t row = part * d + i;
        Rational x = (part == 0 ? v[i].a() : v[i].b()) * scale_[row];
        if (x.get_den() != 1) return std::nullopt;
        rhs[row] = x.get_num();
      }
    return solve_integer(A_, rhs);
  }

 private:
  Lattice L_, M_;
  IntMatrix A_;
  std::vector<Integer> scale_;
};

struct PieceAssignment {
  Cell piece;  // inside the L window
  Vector ell, em;
  Vector shift() const { return ell + em; }
};

struct Equidecomposition {
  Cell window_L, window_M;
  std::vector<PieceAssignment> pieces;
  std::string strategy;
  std::size_t chain_length = 0;
};

enum class Strategy { BasisChain, Greedy };

struct EquidecomposeOptions {
  long max_coeff_radius = 12;
  std::size_t max_pieces = 4096;
  Strategy strategy = Strategy::BasisChain;
};

struct CutProjectScheme {
  std::size_t d = 0;
  Integer c = 1;
  QuadMatrix Gamma;  // [[c I, sqrt(D) I], [L, M]]
  QuadMatrix K() const { return Gamma.row_range(0, d); }
};

inline std::int64_t radicand_of(const QuadMatrix& A) {
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j)
      if (!A(i, j).is_rational()) return A(i, j).radicand();
  return 0;
}

inline CutProjectScheme build_scheme(const Lattice& L, const Lattice& M, std::int64_t D = 0) {
  std::size_t d = L.dim();
  if (D == 0) D = radicand_of(L.basis());
  if (D == 0) D = radicand_of(M.basis());
  if (D < 2) throw DomainError("cut-and-project scheme needs an irrational radicand");
  Quad root = Quad::root(D);
  for (Integer c = 1;; ++c) {
    QuadMatrix G(2 * d, 2 * d);
    for (std::size_t i = 0; i < d; ++i) {
      G(i, i) = Quad(c);
      G(i, d + i) = root;
      for (std::size_t j = 0; j < d; ++j) {
        G(d + i, j) = L.basis()(i, j);
        G(d + i, d + j) = M.basis()(i, j);
      }
    }
    if (!determinant(G).is_zero()) return {d, c, G};
  }
}

// p1(gamma) for gamma in Gamma with |p1|_inf <= radius and p2(gamma) in W.
inline std::vector<Vector> model_set_points(const CutProjectScheme& s, const Region& W,
                                            const Quad& radius) {
  std::vector<Vector> out;
  if (W.cells.empty()) return out;
  std::size_t d = s.d;
  QuadMatrix L = s.Gamma.row_range(d, 2 * d).column_range(0, d);
  QuadMatrix M = s.Gamma.row_range(d, 2 * d).column_range(d, 2 * d);
  Quad root = s.Gamma(0, d);
  QuadMatrix Linv = inverse(L);
  // p1 = c L^-1 p2 + Q z2 with Q = sqrt(D) I - c L^-1 M
  QuadMatrix cLinv = Linv;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) cLinv(i, j) *= Quad(s.c);
  QuadMatrix Q = QuadMatrix::identity(d);
  QuadMatrix cLinvM = cLinv * M;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) Q(i, j) = (i == j ? root : Quad(0)) - cLinvM(i, j);
  QuadMatrix Qinv = inverse(Q);
  QuadMatrix A1 = Qinv, A2 = Qinv * cLinv;  // z2 = A1 p1 - A2 p2
  Box wb = bounding_box(W);
  std::vector<Integer> lo(d), hi(d);
  for (std::size_t i = 0; i < d; ++i) {
    Quad mn(0), mx(0);
    for (std::size_t k = 0; k < d; ++k) {
      Quad a = A1(i, k) * radius;
      mn += min(-a, a);
      mx += max(-a, a);
      Quad b0 = -A2(i, k) * wb.lo[k], b1 = -A2(i, k) * wb.hi[k];
      mn += min(b0, b1);
      mx += max(b0, b1);
    }
    lo[i] = ceil(mn);
    hi[i] = floor(mx);
  }
  Lattice Llat(L);
  for (std::size_t i = 0; i < d; ++i)
    if (lo[i] > hi[i]) return out;
  IntVector z2(lo.begin(), lo.end());
  while (true) {
    Vector mz = M * to_quad(z2);
    Box shifted{wb.lo - mz, wb.hi - mz};
    for (const auto& lz : enumerate_points(Llat, shifted)) {
      Vector p2 = lz + mz;
      if (!W.contains(p2)) continue;
      IntVector z1 = *member(Llat, lz);
      Vector p1 = scale(Quad(s.c), to_quad(z1)) + scale(root, to_quad(z2));
      if (std::all_of(p1.begin(), p1.end(), [&](const Quad& x) { return abs(x) <= radius; }))
        out.push_back(p1);
    }
    std::size_t i = d;
    while (i-- > 0) {
      if (z2[i] < hi[i]) {
        ++z2[i];
        break;
      }
      z2[i] = lo[i];
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  std::sort(out.begin(), out.end(), detail::lex_less);
  return out;
}

struct MatchingResult {
  bool ok = false;
  std::size_t left = 0, right = 0;  // point counts after restriction
  double max_displacement = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::string note;
};

namespace detail {

// Hopcroft-Karp on adjacency lists; returns match of left vertices (-1 if free).
inline std::vector<int> max_bipartite_matching(const std::vector<std::vector<int>>& adj,
                                               std::size_t nr) {
  std::size_t nl = adj.size();
  std::vector<int> ml(nl, -1), mr(nr, -1), dist(nl);
  auto bfs = [&]() {
    std::vector<int> queue;
    bool found = false;
    for (std::size_t u = 0; u < nl; ++u) {
      if (ml[u] < 0) {
        dist[u] = 0;
        queue.push_back(static_cast<int>(u));
      } else {
        dist[u] = -1;
      }
    }
    for (std::size_t h = 0; h < queue.size(); ++h) {
      int u = queue[h];
      for (int v : adj[u]) {
        int w = mr[v];
        if (w < 0) {
          found = true;
        } else if (dist[w] < 0) {
          dist[w] = dist[u] + 1;
          queue.push_back(w);
        }
      }
    }
    return found;
  };
  std::function<bool(int)> dfs = [&](int u) {
    for (int v : adj[u]) {
      int w = mr[v];
      if (w < 0 || (dist[w] == dist[u] + 1 && dfs(w))) {
        ml[u] = v;
        mr[v] = u;
        return true;
      }
    }
    dist[u] = -1;
    return false;
  };
  while (bfs())
    for (std::size_t u = 0; u < nl; ++u)
      if (ml[u] < 0) dfs(static_cast<int>(u));
  return ml;
}

inline double distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace detail

// Minimum-bottleneck matching of the points of A and B inside window. With
// unequal counts the smaller side is saturated instead.
inline MatchingResult bounded_distance_matching(const std::vector<std::vector<double>>& A,
                                                const std::vector<std::vector<double>>& B,
                                                const std::vector<double>& lo,
                                                const std::vector<double>& hi) {
  auto inside = [&](const std::vector<double>& p) {
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p[i] < lo[i] || p[i] > hi[i]) return false;
    return true;
  };
  std::vector<std::vector<double>> a, b;
  for (const auto& p : A)
    if (inside(p)) a.push_back(p);
  for (const auto& p : B)
    if (inside(p)) b.push_back(p);
  MatchingResult out;
  out.left = a.size();
  out.right = b.size();
  bool swapped = a.size() > b.size();
  if (swapped) std::swap(a, b);
  if (a.empty()) {
    out.ok = b.empty();
    out.note = b.empty() ? "empty" : "one side empty";
    return out;
  }
  if (a.size() != b.size()) out.note = "counts differ; smaller side saturated";
  std::vector<double> ds;
  ds.reserve(a.size() * b.size());
  for (const auto& p : a)
    for (const auto& q : b) ds.push_back(detail::distance(p, q));
  std::vector<double> sorted = ds;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  auto attempt = [&](double theta, std::vector<int>* match) {
    std::vector<std::vector<int>> adj(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j)
        if (ds[i * b.size() + j] <= theta) adj[i].push_back(static_cast<int>(j));
    auto m = detail::max_bipartite_matching(adj, b.size());
    bool full = std::all_of(m.begin(), m.end(), [](int v) { return v >= 0; });
    if (match) *match = m;
    return full;
  };
  std::size_t lo_i = 0, hi_i = sorted.size() - 1;
  while (lo_i < hi_i) {
    std::size_t mid = (lo_i + hi_i) / 2;
    if (attempt(sorted[mid], nullptr))
      hi_i = mid;
    else
      lo_i = mid + 1;
  }
  std::vector<int> match;
  out.ok = attempt(sorted[lo_i], &match);
  out.max_displacement = sorted[lo_i];
  for (std::size_t i = 0; i < match.size(); ++i) {
    auto pr = std::make_pair(i, static_cast<std::size_t>(match[i]));
    if (swapped) std::swap(pr.first, pr.second);
    out.pairs.push_back(pr);
  }
  std::sort(out.pairs.begin(), out.pairs.end());
  return out;
}

namespace detail {

struct Tracked {
  Cell piece;
  IntVector shift;
};

inline IntVector zero_coeffs(std::size_t d) { return IntVector(2 * d, Integer(0)); }

inline Vector unit(std::size_t d, std::size_t i) {
  Vector e(d, Quad(0));
  e[i] = 1;
  return e;
}

// Re-cuts pieces whose images partition a fundamental domain of B Z^d into
// pieces whose images partition P(B).
inline std::vector<Tracked> restep(const std::vector<Tracked>& pieces, const SumGroup& G,
                                   const QuadMatrix& B, const IntMatrix& coeffs,
                                   std::size_t max_pieces) {
  Cell target = parallelotope(B);
  Box tb = bounding_box(target);
  Lattice lam(B);
  QuadMatrix Binv = inverse(B);
  std::vector<Tracked> out;
  for (const auto& p : pieces) {
    Vector t = G.value(p.shift);
    Cell image = translate(p.piece, t);
    Box ib = bounding_box(image);
    for (const auto& l : enumerate_points(lam, difference_box(tb, ib))) {
      Cell hit = intersect(image, translate(target, -l));
      if (is_empty_interior(hit)) continue;
      IntVector a = to_integer(Binv * l);
      out.push_back({simplify(translate(hit, -t)), p.shift + coeffs * a});
      if (out.size() > max_pieces)
        throw EquidecompositionIncomplete("piece cap exceeded during re-cut", Quad(0), out.size());
    }
  }
  return out;
}

struct ChainStep {
  QuadMatrix B;
  IntMatrix coeffs;  // columns: coefficient vectors of B's columns in L + M
};

inline std::optional<IntVector> unimodular_complement(const IntVector& q) {
  // (q, r) with det = 1, q primitive in Z^2
  mpz_class g, s, t;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), q[0].get_mpz_t(), q[1].get_mpz_t());
  if (abs(g) != 1) return std::nullopt;
  if (g < 0) {
    s = -s;
    t = -t;
  }
  // q0 * s + q1 * t = 1  ->  det [[q0, -t], [q1, s]] = 1
  return IntVector{-t, s};
}

// Basis chain for d = 2 from the basis of A to a basis of C through shears
// inside A + C.
inline std::optional<std::vector<ChainStep>> plane_chain(const SumGroup& G, bool reversed,
                                                         long radius) {
  const Lattice& A = reversed ? G.M() : G.L();
  const Lattice& C = reversed ? G.L() : G.M();
  std::size_t offA = reversed ? 2 : 0, offC = reversed ? 0 : 2;
  auto coeff = [&](std::size_t off, const IntVector& v) {
    IntVector z = zero_coeffs(2);
    z[off] = v[0];
    z[off + 1] = v[1];
    return z;
  };
  QuadMatrix Ainv = inverse(A.basis());
  IntMatrix start(4, 2);
  start(offA, 0) = 1;
  start(offA + 1, 1) = 1;

  for (long r = 1; r <= radius; ++r) {
    // primitive q on the boundary of the max-norm box of radius r, lexicographic
    for (long q0 = -r; q0 <= r; ++q0)
      for (long q1 = -r; q1 <= r; ++q1) {
        if (std::max(std::labs(q0), std::labs(q1)) != r || std::gcd(q0, q1) != 1) continue;
        IntVector q{q0, q1};
        Vector m = C.basis() * to_quad(q);
        auto comp = unimodular_complement(q);
        IntVector qc = *comp;
        for (std::size_t j = 0; j < 2; ++j) {
          std::size_t k = 1 - j;
          Vector lj = A.basis().column(j), lk = A.basis().column(k);
          for (int sigma : {1, -1}) {
            Vector u = m - scale(Quad(sigma), lj);
            Vector cu = Ainv * u;  // u = cu[j] lj + cu[k] lk
            if (cu[k].is_zero()) continue;
            for (int tau : {1, -1}) {
              Quad t = Quad(tau) * cu[j] / cu[k];
              Vector s = scale(t, lj);
              auto zs = G.decompose(s);
              if (!zs) continue;
              std::vector<ChainStep> chain;
              QuadMatrix B = A.basis();
              IntMatrix Z = start;
              // shear column k
              if (!(tau == 1 && t.is_zero())) {
                B.set_column(k, scale(Quad(tau), lk) + s);
                for (std::size_t i = 0; i < 4; ++i) Z(i, k) = Integer(tau) * start(i, k) + (*zs)[i];
                chain.push_back({B, Z});
              }
              // insert m at column j
              B.set_column(j, m);
              IntVector zm = coeff(offC, q);
              for (std::size_t i = 0; i < 4; ++i) Z(i, j) = zm[i];
              chain.push_back({B, Z});
              // complete to a basis of C at column k
              B.set_column(k, C.basis() * to_quad(qc));
              IntVector zc = coeff(offC, qc);
              for (std::size_t i = 0; i < 4; ++i) Z(i, k) = zc[i];
              chain.push_back({B, Z});
              check_internal(abs(determinant(B)) == abs(determinant(A.basis())), "chain volume");
              return chain;
            }
          }
        }
      }
  }
  return std::nullopt;
}

inline Quad cells_volume(const std::vector<Tracked>& ps) {
  Quad v(0);
  for (const auto& p : ps) v += volume(p.piece);
  return v;
}

}  // namespace detail

// Pieces of a fundamental domain of L whose L+M translates tile a fundamental
// domain of M.
inline Equidecomposition equidecompose_chain(const Lattice& L, const Lattice& M,
                                             const EquidecomposeOptions& opt = {}) {
  using namespace detail;
  std::size_t d = L.dim();
  SumGroup G(L, M);
  Quad vol = volume(L);
  if (volume(M) != vol) throw DomainError("volumes differ");
  Equidecomposition out;
  out.strategy = "basis-chain";
  auto cols = M.basis().columns();
  if (std::all_of(cols.begin(), cols.end(), [&](const Vector& v) { return member(L, v).has_value(); })) {
    // M is a sublattice of L of equal volume: same lattice
    out.window_L = parallelotope(L.basis());
    std::vector<Tracked> ps{{out.window_L, zero_coeffs(d)}};
    IntMatrix Z(2 * d, d);
    for (std::size_t i = 0; i < d; ++i) Z(d + i, i) = 1;
    ps = restep(ps, G, M.basis(), Z, opt.max_pieces);
    out.window_M = parallelotope(M.basis());
    for (auto& p : ps) out.pieces.push_back({p.piece, G.ell(p.shift), G.em(p.shift)});
    out.chain_length = 1;
    return out;
  }
  if (d != 2)
    throw EquidecompositionIncomplete(
        "basis chain search is implemented for the plane only; use the greedy strategy", vol, 0);
  for (bool reversed : {false, true}) {
    auto chain = plane_chain(G, reversed, opt.max_coeff_radius);
    if (!chain) continue;
    const Lattice& A = reversed ? M : L;
    Cell start = parallelotope(A.basis());
    std::vector<Tracked> ps{{start, zero_coeffs(d)}};
    for (const auto& step : *chain) ps = restep(ps, G, step.B, step.coeffs, opt.max_pieces);
    check_internal(cells_volume(ps) == vol, "chain lost volume");
    Cell finish = parallelotope(chain->back().B);
    out.chain_length = chain->size();
    if (!reversed) {
      out.window_L = start;
      out.window_M = finish;
      for (auto& p : ps) out.pieces.push_back({p.piece, G.ell(p.shift), G.em(p.shift)});
    } else {
      // pieces of P(M) moved into a fundamental domain of L; invert the maps
      out.window_L = finish;
      out.window_M = start;
      for (auto& p : ps) {
        Vector t = G.value(p.shift);
        out.pieces.push_back({simplify(translate(p.piece, t)), -G.ell(p.shift), -G.em(p.shift)});
      }
      out.strategy = "basis-chain-reversed";
    }
    return out;
  }
  throw EquidecompositionIncomplete("no basis chain within coefficient radius " +
                                        std::to_string(opt.max_coeff_radius),
                                    vol, 0);
}

// Successive removal: shifts l + m in expanding max-norm coefficient boxes,
// each carving the part of the remaining source that lands in the remaining
// target.
inline Equidecomposition equidecompose_greedy(const Lattice& L, const Lattice& M,
                                              const EquidecomposeOptions& opt = {}) {
  using namespace detail;
  std::size_t d = L.dim();
  if (volume(M) != volume(L)) throw DomainError("volumes differ");
  SumGroup G(L, M);
  Equidecomposition out;
  out.strategy = "greedy";
  out.window_L = parallelotope(L.basis());
  out.window_M = parallelotope(M.basis());
  Region source = single(out.window_L), target = single(out.window_M);
  Box sb = bounding_box(out.window_L), tb = bounding_box(out.window_M);
  Box range = difference_box(tb, sb);
  for (long r = 0; r <= opt.max_coeff_radius; ++r) {
    IntVector z(2 * d, Integer(-r));
    while (true) {
      bool boundary = std::any_of(z.begin(), z.end(), [&](const Integer& x) { return abs(x) == r; });
      if (boundary) {
        Vector t = G.value(z);
        if (range.contains(t)) {
          Region carved = intersect(source, translate(target, -t));
          if (!carved.cells.empty()) {
            for (auto& c : carved.cells) {
              out.pieces.push_back({simplify(c), G.ell(z), G.em(z)});
              if (out.pieces.size() > opt.max_pieces)
                throw EquidecompositionIncomplete("piece cap exceeded", volume(source), out.pieces.size());
            }
            source = subtract(source, carved);
            target = subtract(target, translate(carved, t));
            if (source.cells.empty()) return out;
          }
        }
      }
      std::size_t i = 2 * d;
      while (i-- > 0) {
        if (z[i] < r) {
          ++z[i];
          break;
        }
        z[i] = -r;
      }
      if (i == static_cast<std::size_t>(-1)) break;
    }
  }
  throw EquidecompositionIncomplete("coefficient radius cap reached with positive residual",
                                    volume(source), out.pieces.size());
}

inline Equidecomposition equidecompose_windows(const Lattice& L, const Lattice& M,
                                               const EquidecomposeOptions& opt = {}) {
  return opt.strategy == Strategy::Greedy ? equidecompose_greedy(L, M, opt)
                                          : equidecompose_chain(L, M, opt);
}

struct DenseDomain {
  Region E;
  Equidecomposition eq;
  Box bounds;
};

// E = union of S_i + l_i: tiles with L (pieces of a fundamental domain moved
// by L) and with M (equal to the union of S_i + t_i - m_i).
inline DenseDomain dense_common_domain(const Lattice& L, const Lattice& M,
                                       const EquidecomposeOptions& opt = {}) {
  DenseDomain out;
  out.eq = equidecompose_windows(L, M, opt);
  out.E.dim = L.dim();
  for (const auto& p : out.eq.pieces) {
    check_internal(member(L, p.ell).has_value() && member(M, p.em).has_value(),
                   "shift does not decompose");
    out.E.cells.push_back(translate(p.piece, p.ell));
  }
  check_internal(volume(out.E) == volume(L), "common domain volume");
  out.bounds = bounding_box(out.E);
  return out;
}

}  // namespace ctile
