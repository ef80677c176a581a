#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "ctile/lattice.hpp"

namespace ctile {

struct ClosureDecomposition {
  std::size_t m = 0, n = 0;
  QuadMatrix T, T_inv;
  DiscreteGroup dual_group;  // G* = {xi : xi.w in Z for all generators w}
};

// G* for a spanning generator list, as W0^-T N with N in Hermite form.
inline DiscreteGroup dual_group_of_generators(const std::vector<Vector>& W) {
  if (W.empty()) throw DomainError("no generators");
  std::size_t d = W[0].size();
  QuadMatrix all = QuadMatrix::from_columns(d, W);
  if (rank(all) != d) throw DomainError("generators do not span R^d");

  std::vector<Vector> base, rest;
  for (const auto& w : W) {
    if (base.size() < d) {
      auto trial = base;
      trial.push_back(w);
      if (rank(QuadMatrix::from_columns(d, trial)) == trial.size()) {
        base = std::move(trial);
        continue;
      }
    }
    rest.push_back(w);
  }
  QuadMatrix W0 = QuadMatrix::from_columns(d, base);
  QuadMatrix W0inv = inverse(W0);

  std::size_t q = rest.size();
  RatMatrix Ca(q, d), Cb(q, d);
  bool irrational = false;
  for (std::size_t i = 0; i < q; ++i) {
    Vector c = W0inv * rest[i];
    for (std::size_t j = 0; j < d; ++j) {
      Ca(i, j) = c[j].a();
      Cb(i, j) = c[j].b();
      if (c[j].b() != 0) irrational = true;
    }
  }

  // n . c_b = 0 for every extra generator
  IntMatrix N0 = IntMatrix::identity(d);
  if (irrational) {
    IntMatrix Cb_int(q, d);
    for (std::size_t i = 0; i < q; ++i) {
      Integer den = 1;
      for (std::size_t j = 0; j < d; ++j) den = lcm(den, Cb(i, j).get_den());
      for (std::size_t j = 0; j < d; ++j) Cb_int(i, j) = Rational(Cb(i, j) * den).get_num();
    }
    N0 = integer_kernel(Cb_int);
  }
  IntMatrix N = N0;
  // n . c_a in Z for every extra generator
  if (q > 0 && N0.cols() > 0) {
    RatMatrix R = Ca * to_rational(N0);
    N = N0 * congruence_lattice(R);
  }
  if (N.cols() > 0) N = column_basis(N);
  return DiscreteGroup(W0inv.transpose() * to_quad(N));
}

inline ClosureDecomposition closure_of_sum(const Lattice& L, const Lattice& M) {
  if (L.dim() != M.dim()) throw DomainError("lattices of different dimension");
  if (volume(L) != volume(M))
    throw DomainError("volumes differ: " + volume(L).str() + " vs " + volume(M).str());
  std::size_t d = L.dim();
  std::vector<Vector> W = L.basis().columns();
  for (const auto& c : M.basis().columns()) W.push_back(c);

  ClosureDecomposition out;
  out.dual_group = dual_group_of_generators(W);
  out.m = out.dual_group.rank();
  out.n = d - out.m;
  std::vector<Vector> rows;
  // first nonzero entry of each dual basis row positive
  for (std::size_t j = 0; j < out.m; ++j) {
    Vector r = out.dual_group.basis().column(j);
    auto lead = std::find_if(r.begin(), r.end(), [](const Quad& x) { return !x.is_zero(); });
    if (lead != r.end() && lead->sign() < 0) r = -r;
    rows.push_back(std::move(r));
  }
  for (std::size_t i = 0; i < d && rows.size() < d; ++i) {
    Vector e(d, Quad(0));
    e[i] = 1;
    auto trial = rows;
    trial.push_back(e);
    if (rank(QuadMatrix::from_rows(trial)) == trial.size()) rows = std::move(trial);
  }
  out.T = QuadMatrix::from_rows(rows);
  out.T_inv = inverse(out.T);
  check_internal(is_integral((out.T * L.basis()).row_range(0, out.m)) &&
                     is_integral((out.T * M.basis()).row_range(0, out.m)),
                 "normalized lattices leave Z^m x R^n");
  return out;
}

struct DensityWitness {
  bool reached = false;
  double epsilon = 0;
  double worst_distance = 0;  // max over samples of the best approximation
  long radius_used = 0;       // coefficient radius at which all samples were reached
  std::size_t samples = 0;
};

// Float diagnostic: approximates points of Z^m x [0,1)^n by integer
// combinations T L a + T M b with |b|_inf <= radius (a recovered by rounding).
inline DensityWitness density_witness(const ClosureDecomposition& cd, const Lattice& L,
                                      const Lattice& M, double epsilon = 1e-3,
                                      long max_radius = 64, std::size_t samples = 1000) {
  std::size_t d = L.dim();
  auto to_f = [](const QuadMatrix& A) {
    std::vector<std::vector<double>> F(A.rows(), std::vector<double>(A.cols()));
    for (std::size_t i = 0; i < A.rows(); ++i)
      for (std::size_t j = 0; j < A.cols(); ++j) F[i][j] = to_double(A(i, j));
    return F;
  };
  QuadMatrix TL = cd.T * L.basis();
  auto tl = to_f(TL), tm = to_f(cd.T * M.basis()), tlinv = to_f(inverse(TL));

  // deterministic Kronecker sequence in the fiber, cycling integer keys
  const double alphas[4] = {0.7548776662466927, 0.5698402909980532, 0.6180339887498949,
                            0.4142135623730951};
  std::vector<std::vector<double>> targets;
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<double> x(d);
    for (std::size_t i = 0; i < cd.m; ++i) x[i] = static_cast<double>((s >> i) % 3);
    for (std::size_t i = cd.m; i < d; ++i) {
      double v = (s + 1) * alphas[i % 4];
      x[i] = v - std::floor(v);
    }
    targets.push_back(x);
  }

  DensityWitness out;
  out.epsilon = epsilon;
  out.samples = samples;
  std::vector<double> best(samples, 1e300);
  std::vector<long> b(d);
  for (long r = 1; r <= max_radius; r *= 2) {
    for (std::size_t s = 0; s < samples; ++s) {
      if (best[s] <= epsilon) continue;
      const auto& x = targets[s];
      std::fill(b.begin(), b.end(), -r);
      while (true) {
        std::vector<double> y(x);
        for (std::size_t i = 0; i < d; ++i)
          for (std::size_t j = 0; j < d; ++j) y[i] -= tm[i][j] * b[j];
        std::vector<double> a(d);
        bool small = true;
        for (std::size_t i = 0; i < d; ++i) {
          double c = 0;
          for (std::size_t j = 0; j < d; ++j) c += tlinv[i][j] * y[j];
          a[i] = std::round(c);
          if (std::abs(a[i]) > max_radius) small = false;
        }
        if (small) {
          double dist = 0;
          for (std::size_t i = 0; i < d; ++i) {
            double z = y[i];
            for (std::size_t j = 0; j < d; ++j) z -= tl[i][j] * a[j];
            dist = std::max(dist, std::abs(z));
          }
          best[s] = std::min(best[s], dist);
          if (best[s] <= epsilon) break;
        }
        std::size_t i = d;
        while (i-- > 0) {
          if (b[i] < r) {
            ++b[i];
            break;
          }
          b[i] = -r;
        }
        if (i == static_cast<std::size_t>(-1)) break;
      }
    }
    double worst = *std::max_element(best.begin(), best.end());
    out.worst_distance = worst;
    out.radius_used = r;
    if (worst <= epsilon) {
      out.reached = true;
      break;
    }
  }
  return out;
}

}  // namespace ctile
