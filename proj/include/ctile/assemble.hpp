#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ctile/closure.hpp"
#include "ctile/equidecompose.hpp"
#include "ctile/transversal.hpp"

namespace ctile {

struct IntVectorLess {
  bool operator()(const IntVector& x, const IntVector& y) const { return detail::lex_less_int(x, y); }
};

// E inside Z^m x R^n: one n-dimensional region per integer key.
struct SlicedRegion {
  std::size_t m = 0, n = 0;
  std::map<IntVector, Region, IntVectorLess> slices;

  Quad volume() const {
    Quad v(0);
    for (const auto& [k, r] : slices) v += ctile::volume(r);
    return v;
  }
  std::size_t cell_count() const {
    std::size_t c = 0;
    for (const auto& [k, r] : slices) c += r.cells.size();
    return c;
  }
};

struct ConstructionReport;

struct AssemblyPlan {
  explicit AssemblyPlan(std::size_t d)
      : L1(DiscreteGroup::trivial(d)), L2(L1), M1(L1), M2(L1), L2p(L1), M2p(L1) {}

  DiscreteGroup L1, L2, M1, M2, L2p, M2p;
  Integer det_L1, det_M1;
  Quad det_L2, det_M2;
  std::vector<Vector> J1, K1, J2, K2;
  Region Eprime;
  std::shared_ptr<ConstructionReport> fiber;  // construction of E'
};

struct ConstructionReport {
  std::string case_taken;  // "equal", "dense", "rational", "general", "simple"
  std::size_t m = 0, n = 0;
  QuadMatrix T;
  std::size_t piece_count = 0;
  Box bounds;
  Quad volume;
  std::string equidecomposition;  // strategy used in the dense step, if any
  std::size_t chain_length = 0;
  // volume chain |E| = |E'| |K1| |J1| = det L (general case)
  Quad e_volume, eprime_volume;
  Integer k1_size = 0, j1_size = 0;
  std::vector<IntVector> transversal;  // F (rational case)
  std::shared_ptr<ConstructionReport> fiber;
};

struct ConstructOptions {
  EquidecomposeOptions equidecompose;
  bool prefer_simple_case = false;
};

struct Construction {
  Region omega;
  ConstructionReport report;
};

inline Construction common_fundamental_domain(const Lattice& L, const Lattice& M,
                                              const ConstructOptions& opt = {});

namespace detail {

inline Cell embed_fiber_cell(const Cell& c, std::size_t m) {
  Cell out{c.dim + m, {}};
  for (const auto& h : c.conditions) {
    Vector nrm(m, Quad(0));
    nrm.insert(nrm.end(), h.normal.begin(), h.normal.end());
    out.conditions.push_back({std::move(nrm), h.offset, h.strict});
  }
  return out;
}

inline QuadMatrix fiber_block(const DiscreteGroup& G, std::size_t m) {
  return G.basis().row_range(m, G.ambient_dim());
}

inline Vector fiber_part(const Vector& v, std::size_t m) { return Vector(v.begin() + m, v.end()); }

inline IntVector key_part(const Vector& v, std::size_t m) {
  return to_integer(Vector(v.begin(), v.begin() + m));
}

// E + [0,1)^m x {0}^n as cells of R^{m+n}
inline Region lift(const SlicedRegion& E) {
  Region out{E.m + E.n, {}};
  for (const auto& [key, r] : E.slices)
    for (const auto& c : r.cells) {
      Cell cell = embed_fiber_cell(c, E.m);
      for (std::size_t i = 0; i < E.m; ++i) {
        Vector e(E.m + E.n, Quad(0));
        e[i] = 1;
        cell.conditions.push_back({-e, -Quad(key[i]), false});
        cell.conditions.push_back({e, Quad(Rational(Integer(key[i] + 1))), true});
      }
      out.cells.push_back(std::move(cell));
    }
  return out;
}

inline void assert_slices_direct(const SlicedRegion& E) {
  for (const auto& [key, r] : E.slices)
    for (std::size_t i = 0; i < r.cells.size(); ++i)
      for (std::size_t j = i + 1; j < r.cells.size(); ++j)
        check_internal(is_empty_interior(intersect(r.cells[i], r.cells[j])),
                       "sum defining E is not direct");
}

inline Integer abs_int_det(const QuadMatrix& A) { return abs(integer_determinant(to_integer(A))); }

}  // namespace detail

struct GeneralCase {
  SlicedRegion E;
  AssemblyPlan plan;
};

// E = {x + y + phi(x) + psi(y) : x in K1, y in J1} + E' inside Z^m x R^n.
inline GeneralCase general_case(const Lattice& TL, const Lattice& TM, std::size_t m, std::size_t n,
                                const ConstructOptions& opt = {}) {
  using namespace detail;
  std::size_t d = m + n;
  if (TL.dim() != d || m == 0 || n == 0) throw DomainError("general case needs 0 < m < d");
  GeneralCase out{SlicedRegion{m, n, {}}, AssemblyPlan(d)};
  AssemblyPlan& P = out.plan;
  P.L2 = intersect_coordinate_subspace(TL, m);
  P.M2 = intersect_coordinate_subspace(TM, m);
  check_internal(P.L2.rank() == n && P.M2.rank() == n, "fiber intersection does not have rank n");
  P.L1 = extend_basis(TL, P.L2);
  P.M1 = extend_basis(TM, P.M2);
  P.det_L1 = abs_int_det(P.L1.basis().row_range(0, m));
  P.det_M1 = abs_int_det(P.M1.basis().row_range(0, m));
  P.det_L2 = abs(determinant(fiber_block(P.L2, m)));
  P.det_M2 = abs(determinant(fiber_block(P.M2, m)));
  check_internal(P.det_L2 * Quad(P.det_L1) == P.det_M2 * Quad(P.det_M1), "index ratios differ");

  Superlattice l2p = superlattice_with_index(P.L2, P.det_M1);
  Superlattice m2p = superlattice_with_index(P.M2, P.det_L1);
  P.L2p = l2p.group;
  P.M2p = m2p.group;
  P.J2 = l2p.transversal;
  P.K2 = m2p.transversal;
  check_internal(gram_determinant(P.L2p) * Quad(Rational(Integer(P.det_M1 * P.det_M1))) == gram_determinant(P.L2),
                 "superlattice index of L2'");
  check_internal(gram_determinant(P.M2p) * Quad(Rational(Integer(P.det_L1 * P.det_L1))) == gram_determinant(P.M2),
                 "superlattice index of M2'");

  Lattice fl(fiber_block(P.L2p, m)), fm(fiber_block(P.M2p, m));
  Construction fiber = common_fundamental_domain(fl, fm, opt);
  P.Eprime = fiber.omega;
  P.fiber = std::make_shared<ConstructionReport>(fiber.report);

  P.J1 = transversal_in_subgroup(P.L1, P.M1, m);
  P.K1 = transversal_in_subgroup(P.M1, P.L1, m);
  check_internal(Integer(static_cast<unsigned long>(P.J1.size())) == P.det_M1 &&
                     Integer(static_cast<unsigned long>(P.K1.size())) == P.det_L1,
                 "transversal sizes");

  for (std::size_t a = 0; a < P.K1.size(); ++a)
    for (std::size_t b = 0; b < P.J1.size(); ++b) {
      Vector v = P.K1[a] + P.J1[b] + P.K2[a] + P.J2[b];
      Region& slice = out.E.slices[key_part(v, m)];
      slice.dim = n;
      Region moved = translate(P.Eprime, fiber_part(v, m));
      slice.cells.insert(slice.cells.end(), moved.cells.begin(), moved.cells.end());
    }
  assert_slices_direct(out.E);
  Quad eprime = volume(P.Eprime);
  check_internal(eprime == abs(determinant(fl.basis())), "E' volume");
  check_internal(out.E.volume() == eprime * Quad(Rational(Integer(P.det_L1 * P.det_M1))) &&
                     out.E.volume() == volume(TL),
                 "volume chain |E| = |E'| |K1| |J1| = det L");
  return out;
}

// F + E' with F a common transversal of the Z^m projections; needs equal
// index ratios.
inline GeneralCase simple_case(const Lattice& TL, const Lattice& TM, std::size_t m, std::size_t n,
                               const ConstructOptions& opt = {}) {
  using namespace detail;
  std::size_t d = m + n;
  GeneralCase out{SlicedRegion{m, n, {}}, AssemblyPlan(d)};
  AssemblyPlan& P = out.plan;
  P.L2 = intersect_coordinate_subspace(TL, m);
  P.M2 = intersect_coordinate_subspace(TM, m);
  P.L1 = extend_basis(TL, P.L2);
  P.M1 = extend_basis(TM, P.M2);
  IntMatrix pl = to_integer(P.L1.basis().row_range(0, m)), pm = to_integer(P.M1.basis().row_range(0, m));
  P.det_L1 = abs(integer_determinant(pl));
  P.det_M1 = abs(integer_determinant(pm));
  P.det_L2 = abs(determinant(fiber_block(P.L2, m)));
  P.det_M2 = abs(determinant(fiber_block(P.M2, m)));
  if (P.det_L1 != P.det_M1 || P.det_L2 != P.det_M2)
    throw DomainError("simple case needs det L1 = det M1 and det L2 = det M2");
  Construction fiber =
      common_fundamental_domain(Lattice(fiber_block(P.L2, m)), Lattice(fiber_block(P.M2, m)), opt);
  P.Eprime = fiber.omega;
  P.fiber = std::make_shared<ConstructionReport>(fiber.report);
  // Z^m = pi(L1) + F = pi(M1) + F; the fiber parts of L1, M1 are absorbed by E'
  // only after subtracting them, so F is placed on keys with zero fiber shift
  for (const auto& f : common_transversal(pl, pm).reps) {
    Region& slice = out.E.slices[f];
    slice.dim = n;
    slice.cells.insert(slice.cells.end(), P.Eprime.cells.begin(), P.Eprime.cells.end());
  }
  assert_slices_direct(out.E);
  check_internal(out.E.volume() == volume(TL), "simple case volume");
  return out;
}

inline Construction common_fundamental_domain(const Lattice& L, const Lattice& M,
                                              const ConstructOptions& opt) {
  std::size_t d = L.dim();
  if (M.dim() != d) throw DomainError("lattices of different dimension");
  if (volume(L) != volume(M))
    throw DomainError("volumes differ: " + volume(L).str() + " vs " + volume(M).str());
  if (d > 4) throw DomainError("geometry cap: dimension above 4");
  ClosureDecomposition cd = closure_of_sum(L, M);
  if (cd.n > 3) throw DomainError("geometry cap: fiber dimension above 3");
  Lattice TL(cd.T * L.basis()), TM(cd.T * M.basis());

  Construction out;
  ConstructionReport& R = out.report;
  R.m = cd.m;
  R.n = cd.n;
  R.T = cd.T;
  Region lifted{d, {}};
  if (cd.m == 0) {
    DenseDomain dd = dense_common_domain(TL, TM, opt.equidecompose);
    R.case_taken = "dense";
    R.equidecomposition = dd.eq.strategy;
    R.chain_length = dd.eq.chain_length;
    lifted = dd.E;
  } else if (cd.m == d) {
    TransversalResult F = common_transversal(to_integer(TL.basis()), to_integer(TM.basis()));
    R.case_taken = "rational";
    R.transversal = F.reps;
    SlicedRegion E{d, 0, {}};
    for (const auto& f : F.reps) E.slices[f] = Region{0, {Cell{0, {}}}};
    lifted = detail::lift(E);
  } else {
    bool simple = false;
    GeneralCase g = [&] {
      if (opt.prefer_simple_case) {
        try {
          GeneralCase s = simple_case(TL, TM, cd.m, cd.n, opt);
          simple = true;
          return s;
        } catch (const DomainError&) {
        }
      }
      return general_case(TL, TM, cd.m, cd.n, opt);
    }();
    R.case_taken = simple ? "simple" : "general";
    R.fiber = g.plan.fiber;
    R.e_volume = g.E.volume();
    R.eprime_volume = volume(g.plan.Eprime);
    R.k1_size = static_cast<unsigned long>(g.plan.K1.size());
    R.j1_size = static_cast<unsigned long>(g.plan.J1.size());
    lifted = detail::lift(g.E);
  }
  out.omega = linear_image(lifted, cd.T_inv);
  R.piece_count = out.omega.cells.size();
  R.volume = volume(out.omega);
  check_internal(R.volume == volume(L), "vol(Omega) != vol(L)");
  R.bounds = bounding_box(out.omega);
  return out;
}

}  // namespace ctile
