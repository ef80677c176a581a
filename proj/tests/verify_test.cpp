#include <gtest/gtest.h>

#include <cmath>

#include "ctile/verify.hpp"

using namespace ctile;

namespace {

Quad q(long p, long d = 1) { return Quad(Rational(p, d)); }

QuadMatrix m2(Quad a, Quad b, Quad c, Quad d) {
  QuadMatrix A(2, 2);
  A(0, 0) = a;
  A(0, 1) = b;
  A(1, 0) = c;
  A(1, 1) = d;
  return A;
}

Region unit_square() { return single(box_cell({q(0), q(0)}, {q(1), q(1)})); }

// 1_[0,1)(t) transform, closed form
Complex interval_hat(double lambda) {
  if (lambda == 0) return 1.0;
  Complex w(0, -2 * M_PI * lambda);
  return (std::exp(w) - 1.0) / w;
}

// integral of exp(-2 pi i lambda.x) over the standard triangle by Simpson's
// rule on the Duffy square x = u, y = u v (Jacobian u)
Complex triangle_hat_quadrature(double l1, double l2) {
  const int n = 400;
  const double h = 1.0 / n;
  auto w = [&](int i) { return i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0); };
  Complex total = 0;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      double u = i * h, v = j * h;
      double x = u * (1 - v), y = u * v;
      total += w(i) * w(j) * u * std::polar(1.0, -2 * M_PI * (l1 * x + l2 * y));
    }
  return total * (h / 3) * (h / 3);
}

}  // namespace

TEST(DividedDifference, RepeatedNodesGiveTaylorCoefficient) {
  for (std::size_t n = 1; n <= 5; ++n) {
    Complex z(0.3, -1.7);
    double fact = 1;
    for (std::size_t k = 2; k < n; ++k) fact *= static_cast<double>(k);
    Complex got = detail::exp_divided_difference(std::vector<Complex>(n, z));
    EXPECT_NEAR(std::abs(got - std::exp(z) / fact), 0.0, 1e-13);
  }
}

TEST(DividedDifference, TwoDistinctNodes) {
  Complex a(0, -3.1), b(0, 40.0);
  Complex got = detail::exp_divided_difference({a, b});
  EXPECT_NEAR(std::abs(got - (std::exp(a) - std::exp(b)) / (a - b)), 0.0, 1e-13);
}

TEST(Fourier, UnitSquareMatchesClosedForm) {
  FourierEvaluator F(unit_square());
  for (double l1 : {0.0, 0.5, 1.0, -2.0, 3.25})
    for (double l2 : {0.0, 0.125, -1.0, 4.0}) {
      Complex want = interval_hat(l1) * interval_hat(l2);
      EXPECT_NEAR(std::abs(F({l1, l2}) - want), 0.0, 1e-12) << l1 << " " << l2;
    }
}

TEST(Fourier, TriangleMatchesQuadrature) {
  Region tri{2, {Cell{2,
                      {{{q(-1), q(0)}, q(0), false},
                       {{q(0), q(-1)}, q(0), false},
                       {{q(1), q(1)}, q(1), false}}}}};
  FourierEvaluator F(tri);
  for (auto [l1, l2] : std::vector<std::pair<double, double>>{{0, 0}, {1, 0}, {0.5, -1.5}, {2, 2}, {-3, 1}}) {
    Complex want = triangle_hat_quadrature(l1, l2);
    EXPECT_NEAR(std::abs(F({l1, l2}) - want), 0.0, 1e-8) << l1 << " " << l2;
  }
}

TEST(Fourier, DualPointsWithinRadius) {
  Lattice L(m2(q(2), q(0), q(0), q(1)));
  auto pts = dual_points(L, 1.0);
  // dual is (1/2)Z x Z: (0,0), (+-1/2, 0), (+-1, 0), (0, +-1)
  EXPECT_EQ(pts.size(), 7u);
}

TEST(ExactVerify, UnitSquareTilesIntegerLattice) {
  auto r = verify_tiling_exact(unit_square(), Lattice(QuadMatrix::identity(2)));
  EXPECT_TRUE(r.pass);
  EXPECT_TRUE(r.volume_ok);
  EXPECT_EQ(r.deficit(), q(0));
}

TEST(ExactVerify, WrongVolumeFails) {
  auto r = verify_tiling_exact(unit_square(), Lattice(m2(q(2), q(0), q(0), q(1))));
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.deficit(), q(1));
}

TEST(ExactVerify, OverlapIsReportedWithVolume) {
  // [0,1)^2 together with [0,1/2)x[0,1) + (1/2, 0): wrong volume and an overlap
  Region omega = unit_square();
  omega.cells.push_back(translate(box_cell({q(0), q(0)}, {q(1, 2), q(1)}), {q(1, 2), q(0)}));
  auto r = verify_tiling_exact(omega, Lattice(m2(q(3, 2), q(0), q(0), q(1))));
  EXPECT_FALSE(r.pass);
  ASSERT_FALSE(r.overlaps.empty());
  EXPECT_EQ(r.overlaps.front().volume, q(1, 2));
}

TEST(ExactVerify, ShearedParallelogramTiles) {
  QuadMatrix B = m2(q(1), Quad::root(2), q(0), q(1));
  Lattice L(B);
  Region P = single(parallelotope(B));
  EXPECT_TRUE(verify_tiling_exact(P, L).pass);
  EXPECT_TRUE(verify_partition_of_fundamental_domain(P, L).pass);
  // rows of unit squares shifted by k sqrt2 still tile the plane
  EXPECT_TRUE(verify_tiling_exact(unit_square(), L).pass);
}

TEST(PartitionVerify, PiecesOfShiftedSquare) {
  Region shifted = translate(unit_square(), {q(1, 3), q(-2, 7)});
  Lattice Z2(QuadMatrix::identity(2));
  auto r = verify_partition_of_fundamental_domain(shifted, Z2);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.region_volume, q(1));
}

TEST(CrossCheck, ExactAndFourierAgree) {
  Lattice Z2(QuadMatrix::identity(2));
  Region good = translate(unit_square(), {q(1, 3), q(1, 5)});
  Region bad = unit_square();
  bad.cells = subtract(bad.cells.front(), box_cell({q(1, 4), q(1, 4)}, {q(1, 2), q(1, 2)}));
  for (const Region* r : {&good, &bad}) {
    bool exact = verify_tiling_exact(*r, Z2).pass;
    bool fourier = fourier_tiling_check(*r, Z2, 4.0, 1e-8).pass;
    EXPECT_EQ(exact, fourier);
  }
  EXPECT_TRUE(verify_tiling_exact(good, Z2).pass);
  EXPECT_EQ(verify_tiling_exact(bad, Z2).deficit(), q(1, 16));
}

TEST(CrossCheck, PuncturedSquareFourierSeesTheHole) {
  Lattice Z2(QuadMatrix::identity(2));
  Region bad = unit_square();
  bad.cells = subtract(bad.cells.front(), box_cell({q(1, 4), q(1, 4)}, {q(1, 2), q(1, 2)}));
  auto f = fourier_tiling_check(bad, Z2, 2.0, 1e-8);
  EXPECT_FALSE(f.pass);
  EXPECT_NEAR(std::abs(f.at_zero - 15.0 / 16.0), 0.0, 1e-12);
  EXPECT_GT(f.max_nonzero, 1e-3);
}

TEST(Gabor, UnitSquareIsOrthonormal) {
  Lattice Z2(QuadMatrix::identity(2));
  auto g = gabor_gram(unit_square(), Z2, Z2, 1.5);
  EXPECT_TRUE(g.precondition_ok);
  EXPECT_TRUE(g.pass);
  EXPECT_LT(g.max_off_diagonal, 1e-8);
  EXPECT_LT(g.max_diagonal_error, 1e-10);
  EXPECT_EQ(g.family_size, 81u);
}

TEST(Gabor, PreconditionFailsForWrongModulation) {
  Lattice Z2(QuadMatrix::identity(2));
  auto g = gabor_gram(unit_square(), Z2, Lattice(m2(q(2), q(0), q(0), q(2))), 1.0);
  EXPECT_FALSE(g.precondition_ok);
  EXPECT_FALSE(g.pass);
}

TEST(Gabor, GramEntriesMatchDirectIntegration) {
  // Omega = [0, 3/2) in 1D with K = Lmod = Z: entries are integrals of
  // exp(2 pi i mu x) over the overlap of two translated intervals
  Region omega = single(box_cell({q(0)}, {q(3, 2)}));
  Lattice Z(QuadMatrix::identity(1));
  auto g = gabor_gram(omega, Z, Z, 1.0, 1e-8, 1e-10, true);
  EXPECT_FALSE(g.pass);
  std::vector<double> ks = {-1, 0, 1}, ls = {-1, 0, 1};
  ASSERT_EQ(g.gram.size(), 9u);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t la = 0; la < 3; ++la)
      for (std::size_t b = 0; b < 3; ++b)
        for (std::size_t lb = 0; lb < 3; ++lb) {
          double lo = std::max(ks[a], ks[b]), hi = std::min(ks[a], ks[b]) + 1.5;
          double mu = ls[la] - ls[lb];
          Complex want = 0;
          if (hi > lo) {
            if (mu == 0)
              want = hi - lo;
            else
              want = (std::polar(1.0, 2 * M_PI * mu * hi) - std::polar(1.0, 2 * M_PI * mu * lo)) /
                     Complex(0, 2 * M_PI * mu);
          }
          Complex got = g.gram[a * 3 + la][b * 3 + lb];
          EXPECT_NEAR(std::abs(got - want), 0.0, 1e-12);
        }
}
