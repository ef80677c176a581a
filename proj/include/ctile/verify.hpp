#pragma once

#include <cmath>
#include <complex>
#include <algorithm>
#include <string>
#include <vector>

#include "ctile/region.hpp"

namespace ctile {

struct Overlap {
  Vector ell;
  Quad volume;
};

struct TilingReport {
  std::string lattice_id;
  std::string kind;  // "packing" or "partition"
  Quad region_volume, lattice_volume;
  bool volume_ok = false;
  std::vector<Overlap> overlaps;
  std::size_t translates_examined = 0;
  bool pass = false;
  Quad deficit() const { return lattice_volume - region_volume; }
};

namespace detail {

struct FloatBox {
  std::vector<double> lo, hi;
};

inline FloatBox to_float_box(const Box& b) {
  FloatBox f;
  for (std::size_t i = 0; i < b.dim(); ++i) {
    f.lo.push_back(to_double(b.lo[i]));
    f.hi.push_back(to_double(b.hi[i]));
  }
  return f;
}

// false only when the boxes are certainly interior-disjoint
inline bool may_overlap(const FloatBox& a, const FloatBox& b, const std::vector<double>& shift) {
  for (std::size_t i = 0; i < a.lo.size(); ++i) {
    double slack = 1e-9 * (1 + std::abs(a.hi[i]) + std::abs(b.hi[i]) + std::abs(shift[i]));
    if (a.hi[i] <= b.lo[i] + shift[i] - slack || b.hi[i] + shift[i] <= a.lo[i] - slack) return false;
  }
  return true;
}

inline std::vector<double> to_float(const Vector& v) {
  std::vector<double> f;
  for (const auto& x : v) f.push_back(to_double(x));
  return f;
}

}  // namespace detail

// Packing of Omega + L (exact, over the difference box; cells of Omega must
// be interior-disjoint) plus vol(Omega) = vol(L).
inline TilingReport verify_tiling_exact(const Region& omega, const Lattice& L,
                                        const std::string& id = "L") {
  TilingReport r;
  r.lattice_id = id;
  r.kind = "packing";
  r.region_volume = volume(omega);
  r.lattice_volume = volume(L);
  r.volume_ok = r.region_volume == r.lattice_volume;
  if (omega.cells.empty()) {
    r.pass = false;
    return r;
  }
  std::vector<Box> boxes;
  std::vector<detail::FloatBox> fboxes;
  for (const auto& c : omega.cells) {
    boxes.push_back(bounding_box(c));
    fboxes.push_back(detail::to_float_box(boxes.back()));
  }
  Box b = bounding_box(omega);
  for (const auto& ell : enumerate_points(L, difference_box(b, b))) {
    // ell = 0 checks the cells of Omega against each other
    bool self = is_zero_vector(ell);
    if (!self) ++r.translates_examined;
    auto fl = detail::to_float(ell);
    Quad overlap(0);
    for (std::size_t i = 0; i < omega.cells.size(); ++i)
      for (std::size_t j = self ? i + 1 : 0; j < omega.cells.size(); ++j) {
        if (!detail::may_overlap(fboxes[i], fboxes[j], fl)) continue;
        Cell c = intersect(omega.cells[i], translate(omega.cells[j], ell));
        if (!is_empty_interior(c)) overlap += volume(c);
      }
    if (!overlap.is_zero()) r.overlaps.push_back({ell, overlap});
  }
  r.pass = r.volume_ok && r.overlaps.empty();
  return r;
}

// Covering side: the pieces (Omega + l) ∩ P_L are interior-disjoint and fill P_L.
inline TilingReport verify_partition_of_fundamental_domain(const Region& omega, const Lattice& L,
                                                           const std::string& id = "L") {
  TilingReport r;
  r.lattice_id = id;
  r.kind = "partition";
  r.lattice_volume = volume(L);
  r.region_volume = Quad(0);
  if (omega.cells.empty()) return r;
  Cell P = parallelotope(L.basis());
  Box pb = bounding_box(P);
  std::vector<Cell> pieces;
  std::vector<Vector> owners;
  for (const auto& c : omega.cells) {
    Box cb = bounding_box(c);
    for (const auto& ell : enumerate_points(L, difference_box(pb, cb))) {
      ++r.translates_examined;
      Cell piece = intersect(translate(c, ell), P);
      if (is_empty_interior(piece)) continue;
      r.region_volume += volume(piece);
      pieces.push_back(std::move(piece));
      owners.push_back(ell);
    }
  }
  std::vector<detail::FloatBox> fb;
  for (const auto& p : pieces) fb.push_back(detail::to_float_box(bounding_box(p)));
  std::vector<double> zero(L.dim(), 0.0);
  for (std::size_t i = 0; i < pieces.size(); ++i)
    for (std::size_t j = i + 1; j < pieces.size(); ++j) {
      if (!detail::may_overlap(fb[i], fb[j], zero)) continue;
      Cell c = intersect(pieces[i], pieces[j]);
      if (!is_empty_interior(c)) r.overlaps.push_back({owners[j] - owners[i], volume(c)});
    }
  r.volume_ok = r.region_volume == r.lattice_volume;
  r.pass = r.volume_ok && r.overlaps.empty();
  return r;
}

using Complex = std::complex<double>;

namespace detail {

// Divided difference exp[z_0, ..., z_n] as the corner entry of exp of the
// bidiagonal matrix with diagonal z and unit superdiagonal.
inline Complex exp_divided_difference_matrix(const std::vector<Complex>& z) {
  std::size_t n = z.size();
  using Mat = std::vector<Complex>;
  auto mul = [n](const Mat& A, const Mat& B) {
    Mat C(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = i; k < n; ++k) {
        Complex a = A[i * n + k];
        if (a == 0.0) continue;
        for (std::size_t j = k; j < n; ++j) C[i * n + j] += a * B[k * n + j];
      }
    return C;
  };
  double norm = 1;
  for (const auto& x : z) norm = std::max(norm, std::abs(x) + 1);
  int s = std::max(0, static_cast<int>(std::ceil(std::log2(norm))) + 1);
  double f = std::ldexp(1.0, -s);
  Mat A(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    A[i * n + i] = z[i] * f;
    if (i + 1 < n) A[i * n + i + 1] = f;
  }
  Mat E(n * n, 0.0), term(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) E[i * n + i] = term[i * n + i] = 1.0;
  for (int k = 1; k <= 20; ++k) {
    term = mul(term, A);
    for (auto& t : term) t /= static_cast<double>(k);
    for (std::size_t i = 0; i < n * n; ++i) E[i] += term[i];
  }
  for (int i = 0; i < s; ++i) E = mul(E, E);
  return E[n - 1];
}

// Nodes are shifted by their mean; well-separated nodes use the explicit sum
// of e^{z_i} / prod (z_i - z_j).
inline Complex exp_divided_difference(const std::vector<Complex>& z) {
  std::size_t n = z.size();
  Complex c = 0;
  for (const auto& x : z) c += x;
  c /= static_cast<double>(n);
  std::vector<Complex> w(z);
  for (auto& x : w) x -= c;
  double sep = INFINITY;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) sep = std::min(sep, std::abs(w[i] - w[j]));
  if (sep < 0.5) return std::exp(c) * exp_divided_difference_matrix(w);
  Complex total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Complex den = 1;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) den *= w[i] - w[j];
    total += std::exp(w[i]) / den;
  }
  return std::exp(c) * total;
}

}  // namespace detail

// Float simplices of a region, reused across frequencies.
class FourierEvaluator {
 public:
  explicit FourierEvaluator(const Region& omega) : dim_(omega.dim) {
    double fact = 1;
    for (std::size_t k = 2; k <= dim_; ++k) fact *= static_cast<double>(k);
    for (const auto& c : omega.cells) {
      if (is_empty_interior(c)) continue;
      for (const auto& s : triangulate(c)) {
        Simplex f;
        for (const auto& v : s) f.vertices.push_back(detail::to_float(v));
        f.weight = to_double(simplex_volume(s)) * fact;
        simplices_.push_back(std::move(f));
      }
    }
  }

  // integral over the region of exp(-2 pi i lambda . x)
  Complex operator()(const std::vector<double>& lambda) const {
    Complex total = 0, comp = 0;
    for (const auto& s : simplices_) {
      std::vector<Complex> z;
      for (const auto& v : s.vertices) {
        double p = 0;
        for (std::size_t i = 0; i < dim_; ++i) p += lambda[i] * v[i];
        z.emplace_back(0.0, -2 * M_PI * p);
      }
      // Kahan summation
      Complex y = s.weight * detail::exp_divided_difference(z) - comp;
      Complex t = total + y;
      comp = (t - total) - y;
      total = t;
    }
    return total;
  }

  std::size_t simplex_count() const { return simplices_.size(); }

 private:
  struct Simplex {
    std::vector<std::vector<double>> vertices;
    double weight = 0;
  };
  std::size_t dim_;
  std::vector<Simplex> simplices_;
};

inline Complex fourier_coefficient(const Region& omega, const std::vector<double>& lambda) {
  return FourierEvaluator(omega)(lambda);
}

struct FourierReport {
  std::string lattice_id;
  double radius = 0, tol = 0;
  std::size_t frequencies = 0;
  double max_nonzero = 0;          // max |1_Omega^(lambda)| over dual points != 0
  std::vector<double> worst_lambda;
  Complex at_zero;
  double zero_error_vs_lattice = 0;  // |1_Omega^(0) - vol(L)|
  double zero_relative_error = 0;    // |1_Omega^(0) - vol(Omega)| / vol(Omega)
  bool pass = false;
};

// Dual lattice points of Euclidean norm <= radius.
inline std::vector<Vector> dual_points(const Lattice& L, double radius) {
  Lattice Ls = dual(L);
  std::size_t d = L.dim();
  Quad R(Rational(static_cast<long>(std::ceil(radius * 1000)), 1000));
  Box b{Vector(d, -R), Vector(d, R)};
  std::vector<Vector> out;
  for (auto& p : enumerate_points(Ls, b)) {
    double n = 0;
    for (const auto& x : p) n += to_double(x) * to_double(x);
    if (std::sqrt(n) <= radius) out.push_back(std::move(p));
  }
  return out;
}

inline FourierReport fourier_tiling_check(const Region& omega, const Lattice& L, double radius = 5,
                                          double tol = 1e-8, const std::string& id = "L") {
  FourierReport r;
  r.lattice_id = id;
  r.radius = radius;
  r.tol = tol;
  FourierEvaluator F(omega);
  double vl = to_double(volume(L));
  double vo = to_double(volume(omega));
  for (const auto& p : dual_points(L, radius)) {
    auto lambda = detail::to_float(p);
    Complex v = F(lambda);
    if (is_zero_vector(p)) {
      r.at_zero = v;
      continue;
    }
    ++r.frequencies;
    if (std::abs(v) > r.max_nonzero) {
      r.max_nonzero = std::abs(v);
      r.worst_lambda = lambda;
    }
  }
  r.zero_error_vs_lattice = std::abs(r.at_zero - Complex(vl, 0));
  r.zero_relative_error = vo > 0 ? std::abs(r.at_zero - Complex(vo, 0)) / vo : INFINITY;
  r.pass = r.max_nonzero <= tol * vl && r.zero_error_vs_lattice <= tol * vl;
  return r;
}

struct GaborReport {
  std::size_t family_size = 0;
  double max_off_diagonal = 0, max_diagonal_error = 0;
  double volume = 0;
  bool precondition_ok = false;  // Omega tiles with K and the dual of the modulation lattice
  bool pass = false;
  std::vector<std::vector<Complex>> gram;
};

// Gram matrix of e^{2 pi i l.x} 1_Omega(x - k), |k|, |l| <= radius.
inline GaborReport gabor_gram(const Region& omega, const Lattice& K, const Lattice& Lmod,
                              double radius = 3, double tol_off = 1e-8, double tol_diag = 1e-10,
                              bool keep_matrix = false) {
  GaborReport r;
  r.precondition_ok =
      verify_tiling_exact(omega, K, "K").pass && verify_tiling_exact(omega, dual(Lmod), "Lmod*").pass;
  Quad vol = volume(omega);
  r.volume = to_double(vol);
  auto ball = [&](const Lattice& G) {
    std::size_t d = G.dim();
    Quad R(Rational(static_cast<long>(std::ceil(radius * 1000)), 1000));
    std::vector<Vector> out;
    for (auto& p : enumerate_points(G, Box{Vector(d, -R), Vector(d, R)})) {
      double n = 0;
      for (const auto& x : p) n += to_double(x) * to_double(x);
      if (std::sqrt(n) <= radius) out.push_back(std::move(p));
    }
    return out;
  };
  std::vector<Vector> ks = ball(K), ls = ball(Lmod);
  std::size_t nk = ks.size(), nl = ls.size();
  r.family_size = nk * nl;

  // distinct differences of translations and of modulations
  auto index_differences = [](const std::vector<Vector>& pts, std::vector<Vector>& distinct) {
    std::vector<std::vector<std::size_t>> id(pts.size(), std::vector<std::size_t>(pts.size()));
    for (std::size_t a = 0; a < pts.size(); ++a)
      for (std::size_t b = 0; b < pts.size(); ++b) {
        Vector diff = pts[a] - pts[b];
        auto it = std::find(distinct.begin(), distinct.end(), diff);
        id[a][b] = static_cast<std::size_t>(it - distinct.begin());
        if (it == distinct.end()) distinct.push_back(std::move(diff));
      }
    return id;
  };
  std::vector<Vector> dks, mus;
  auto dk_id = index_differences(ks, dks);
  auto mu_id = index_differences(ls, mus);
  // F_{Omega ∩ (Omega + dk)}(-mu)
  std::vector<std::vector<Complex>> table(dks.size(), std::vector<Complex>(mus.size(), 0.0));
  for (std::size_t i = 0; i < dks.size(); ++i) {
    FourierEvaluator F(intersect(omega, translate(omega, dks[i])));
    if (F.simplex_count() == 0) continue;
    for (std::size_t j = 0; j < mus.size(); ++j) table[i][j] = F(detail::to_float(-mus[j]));
  }
  std::vector<std::vector<double>> fk, fl;
  for (const auto& k : ks) fk.push_back(detail::to_float(k));
  for (const auto& l : ls) fl.push_back(detail::to_float(l));

  if (keep_matrix) r.gram.assign(r.family_size, std::vector<Complex>(r.family_size));
  for (std::size_t a = 0; a < nk; ++a)
    for (std::size_t la = 0; la < nl; ++la)
      for (std::size_t b = 0; b < nk; ++b)
        for (std::size_t lb = 0; lb < nl; ++lb) {
          // <g_{k_a,l_a}, g_{k_b,l_b}> = e^{2 pi i mu.k_b} F_{Omega ∩ (Omega+dk)}(-mu)
          Complex v = table[dk_id[a][b]][mu_id[la][lb]];
          if (v != 0.0) {
            double phase = 0;
            for (std::size_t i = 0; i < fk[b].size(); ++i) phase += (fl[la][i] - fl[lb][i]) * fk[b][i];
            v *= std::polar(1.0, 2 * M_PI * phase);
          }
          std::size_t i = a * nl + la, j = b * nl + lb;
          if (i == j)
            r.max_diagonal_error = std::max(r.max_diagonal_error, std::abs(v - Complex(r.volume, 0)));
          else
            r.max_off_diagonal = std::max(r.max_off_diagonal, std::abs(v));
          if (keep_matrix) r.gram[i][j] = v;
        }
  r.pass = r.precondition_ok && r.max_off_diagonal <= tol_off && r.max_diagonal_error <= tol_diag;
  return r;
}

}  // namespace ctile
