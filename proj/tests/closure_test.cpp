#include <gtest/gtest.h>

#include "ctile/closure.hpp"

using namespace ctile;

namespace {

const Quad r2 = Quad::root(2);

QuadMatrix cols(std::vector<Vector> c) { return QuadMatrix::from_columns(c[0].size(), c); }

// Hand check of the dual group: xi . w integral for every generator.
void expect_annihilates(const DiscreteGroup& G, const std::vector<Vector>& W) {
  for (std::size_t j = 0; j < G.rank(); ++j)
    for (const auto& w : W) EXPECT_TRUE(dot(G.basis().column(j), w).is_integer());
}

}  // namespace

TEST(DualGroup, IdentityTwice) {
  std::vector<Vector> W = {{1, 0}, {0, 1}, {1, 0}, {0, 1}};
  DiscreteGroup G = dual_group_of_generators(W);
  EXPECT_EQ(G.rank(), 2u);
  EXPECT_EQ(abs(determinant(G.basis())), Quad(1));
}

TEST(DualGroup, RootTwoKillsEverything) {
  DiscreteGroup G = dual_group_of_generators({{1, 0}, {0, 1}, {r2, 0}, {0, r2}});
  EXPECT_EQ(G.rank(), 0u);
}

TEST(DualGroup, OneFreeCoordinate) {
  std::vector<Vector> W = {{1, 0}, {0, 1}, {r2, 0}};
  DiscreteGroup G = dual_group_of_generators(W);
  ASSERT_EQ(G.rank(), 1u);
  EXPECT_EQ(G.basis().column(0), (Vector{0, 1}));
  expect_annihilates(G, W);
}

TEST(DualGroup, RationalDenominators) {
  // Z^2 + Z(1/2, 1/3): dual is {xi in Z^2 : xi1/2 + xi2/3 in Z}, index 6
  std::vector<Vector> W = {{1, 0}, {0, 1}, {Quad(Rational(1, 2)), Quad(Rational(1, 3))}};
  DiscreteGroup G = dual_group_of_generators(W);
  ASSERT_EQ(G.rank(), 2u);
  EXPECT_EQ(abs(determinant(G.basis())), Quad(6));
  expect_annihilates(G, W);
}

TEST(DualGroup, RankDeficientThrows) {
  EXPECT_THROW(dual_group_of_generators({{1, 0}, {2, 0}}), DomainError);
}

TEST(Closure, EqualLattices) {
  auto cd = closure_of_sum(Lattice::integer(2), Lattice::integer(2));
  EXPECT_EQ(cd.m, 2u);
  EXPECT_EQ(cd.T, QuadMatrix::identity(2));
}

TEST(Closure, DenseSum) {
  auto cd = closure_of_sum(Lattice::integer(2), Lattice(cols({{r2, 1}, {1, r2}})));
  EXPECT_EQ(cd.m, 0u);
  EXPECT_EQ(cd.n, 2u);
  EXPECT_EQ(cd.T, QuadMatrix::identity(2));
}

TEST(Closure, CoordinateSwap) {
  auto cd = closure_of_sum(Lattice::integer(2), Lattice(cols({{1, 0}, {r2, 1}})));
  EXPECT_EQ(cd.m, 1u);
  EXPECT_EQ(cd.T, QuadMatrix::from_rows({{0, 1}, {1, 0}}));
  EXPECT_EQ(cd.T * cd.T_inv, QuadMatrix::identity(2));
}

TEST(Closure, VolumeMismatchThrows) {
  EXPECT_THROW(closure_of_sum(Lattice::integer(2), Lattice(cols({{2, 0}, {0, 1}}))), DomainError);
}

TEST(ClosureProperty, NormalizedFirstRowsIntegral) {
  std::vector<std::pair<Lattice, Lattice>> pairs = {
      {Lattice::integer(2), Lattice(cols({{2, r2}, {0, Quad(Rational(1, 2))}}))},
      {Lattice::integer(3), Lattice(cols({{1, 0, 0}, {r2, 1, 0}, {0, r2, 1}}))},
      {Lattice::integer(3), Lattice(cols({{1, r2, 0}, {0, r2, 1}, {0, 1, r2}}))},
      {Lattice(cols({{2, 0}, {0, 1}})), Lattice(cols({{1, 1}, {1, -1}}))},
  };
  for (const auto& [L, M] : pairs) {
    auto cd = closure_of_sum(L, M);
    EXPECT_TRUE(is_integral((cd.T * L.basis()).row_range(0, cd.m)));
    EXPECT_TRUE(is_integral((cd.T * M.basis()).row_range(0, cd.m)));
    std::vector<Vector> W = L.basis().columns();
    for (auto& c : M.basis().columns()) W.push_back(c);
    expect_annihilates(cd.dual_group, W);
    // idempotence on the normalized pair
    Lattice TL(cd.T * L.basis()), TM(cd.T * M.basis());
    auto again = closure_of_sum(TL, TM);
    EXPECT_EQ(again.m, cd.m);
    EXPECT_TRUE(is_integral((again.T * TL.basis()).row_range(0, again.m)));
  }
}

TEST(ClosureProperty, DensityWitnessDense) {
  Lattice L = Lattice::integer(2), M(cols({{r2, 1}, {1, r2}}));
  auto cd = closure_of_sum(L, M);
  // At coefficient radius 64 only 129^2 residues mod L exist, so the max-norm
  // covering radius is at least 1/(2*129); the witness must report that honestly.
  auto capped = density_witness(cd, L, M, 1e-3, 64, 200);
  EXPECT_FALSE(capped.reached);
  EXPECT_GT(capped.worst_distance, 1e-3);
  auto w = density_witness(cd, L, M, 1e-3, 1024, 100);
  EXPECT_TRUE(w.reached) << w.worst_distance;
}

TEST(ClosureProperty, DensityWitnessMixed) {
  Lattice L = Lattice::integer(2), M(cols({{1, 0}, {r2, 1}}));
  auto cd = closure_of_sum(L, M);
  auto w = density_witness(cd, L, M, 1e-3, 1024, 100);
  EXPECT_TRUE(w.reached) << w.worst_distance;
}

TEST(ClosureProperty, DensityWitnessDiscrete) {
  Lattice L(cols({{2, 0}, {0, 1}})), M(cols({{1, 1}, {1, -1}}));
  auto cd = closure_of_sum(L, M);
  auto w = density_witness(cd, L, M, 1e-9, 4, 50);
  EXPECT_TRUE(w.reached);
}
