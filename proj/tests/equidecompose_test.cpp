#include <gtest/gtest.h>

#include <cmath>

#include "ctile/equidecompose.hpp"

using namespace ctile;

namespace {

Quad q(long p, long d = 1) { return Quad(Rational(p, d)); }
Quad s(long p, long d, std::int64_t D = 2) { return Quad(Rational(0), Rational(p, d), D); }

QuadMatrix m2(Quad a, Quad b, Quad c, Quad d) {
  QuadMatrix A(2, 2);
  A(0, 0) = a;
  A(0, 1) = b;
  A(1, 0) = c;
  A(1, 1) = d;
  return A;
}

QuadMatrix dense_m() { return m2(s(1, 1), q(1), q(1), s(1, 1)); }

// pieces partition the L window and their shifted images partition the M window
void expect_valid(const Equidecomposition& eq, const Lattice& L, const Lattice& M) {
  Region src{L.dim(), {}}, dst{L.dim(), {}};
  for (const auto& p : eq.pieces) {
    EXPECT_TRUE(member(L, p.ell).has_value());
    EXPECT_TRUE(member(M, p.em).has_value());
    src.cells.push_back(p.piece);
    dst.cells.push_back(translate(p.piece, p.shift()));
  }
  EXPECT_EQ(volume(src), volume(eq.window_L));
  EXPECT_EQ(volume(dst), volume(eq.window_M));
  EXPECT_TRUE(subtract(single(eq.window_L), src).cells.empty());
  EXPECT_TRUE(subtract(single(eq.window_M), dst).cells.empty());
  for (std::size_t i = 0; i < src.cells.size(); ++i)
    for (std::size_t j = i + 1; j < src.cells.size(); ++j) {
      EXPECT_TRUE(is_empty_interior(intersect(src.cells[i], src.cells[j])));
      EXPECT_TRUE(is_empty_interior(intersect(dst.cells[i], dst.cells[j])));
    }
  EXPECT_EQ(volume(eq.window_L), volume(L));
  EXPECT_EQ(volume(eq.window_M), volume(M));
}

}  // namespace

TEST(Scheme, DenseSchemeIsInvertible) {
  Lattice L(QuadMatrix::identity(2)), M(dense_m());
  CutProjectScheme sc = build_scheme(L, M);
  EXPECT_EQ(sc.c, 1);
  EXPECT_FALSE(determinant(sc.Gamma).is_zero());
  EXPECT_EQ(sc.K()(0, 0), q(1));
  EXPECT_EQ(sc.K()(0, 2), Quad::root(2));
}

TEST(Scheme, ConstantEscalates) {
  // c = 1 gives two equal block rows: [I | sqrt2 I] and [I | sqrt2 I]
  Lattice L(QuadMatrix::identity(2));
  QuadMatrix B = QuadMatrix::identity(2);
  B(0, 0) = Quad::root(2);
  B(1, 1) = Quad::root(2);
  CutProjectScheme sc = build_scheme(L, Lattice(B), 2);
  EXPECT_EQ(sc.c, 2);
  EXPECT_FALSE(determinant(sc.Gamma).is_zero());
}

TEST(Scheme, ProjectionToFirstFactorIsInjective) {
  // p1(Gamma z) = 0 has no nonzero integer solution: the rational and
  // irrational parts of the K block have trivial common integer kernel
  Lattice L(QuadMatrix::identity(2)), M(dense_m());
  CutProjectScheme sc = build_scheme(L, M);
  QuadMatrix K = sc.K();
  IntMatrix parts(2 * K.rows(), K.cols());
  for (std::size_t i = 0; i < K.rows(); ++i)
    for (std::size_t j = 0; j < K.cols(); ++j) {
      parts(i, j) = K(i, j).a().get_num();
      parts(K.rows() + i, j) = K(i, j).b().get_num();
    }
  EXPECT_EQ(integer_kernel(parts).cols(), 0u);
}

TEST(ModelSet, EmptyWindowGivesNoPoints) {
  Lattice L(QuadMatrix::identity(2)), M(dense_m());
  EXPECT_TRUE(model_set_points(build_scheme(L, M), Region{2, {}}, q(5)).empty());
}

TEST(ModelSet, UnitWindowOverIntegerLattices) {
  // L = M = Z^2: z1 + z2 in [0,1)^2 forces z2 = -z1, so the points are
  // (c - sqrt2) k for k in Z^2
  Lattice L(QuadMatrix::identity(2));
  CutProjectScheme sc = build_scheme(L, L, 2);
  Quad step = Quad(sc.c) - Quad::root(2);
  Region W = single(box_cell({q(0), q(0)}, {q(1), q(1)}));
  auto pts = model_set_points(sc, W, q(3));
  long per_axis = 2 * static_cast<long>(std::floor(3.0 / std::abs(to_double(step)))) + 1;
  EXPECT_EQ(pts.size(), static_cast<std::size_t>(per_axis * per_axis));
  for (const auto& p : pts)
    for (std::size_t i = 0; i < 2; ++i) EXPECT_TRUE((p[i] / step).is_integer());
}

TEST(ModelSet, DensityMatchesWindowOverCovolume) {
  // 1D: Gamma = [[c, sqrt2], [1, 1]]; density = vol(W) / |det Gamma|
  QuadMatrix one = QuadMatrix::identity(1);
  Lattice L(one);
  CutProjectScheme sc = build_scheme(L, L, 2);
  Region W = single(box_cell({q(0)}, {q(1)}));
  long R = 50;
  auto pts = model_set_points(sc, W, q(R));
  double expected = 2.0 * R / std::abs(to_double(determinant(sc.Gamma)));
  EXPECT_NEAR(static_cast<double>(pts.size()), expected, 0.1 * expected);
}

TEST(Matching, IdenticalSetsMatchWithZeroDisplacement) {
  std::vector<std::vector<double>> A = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  auto r = bounded_distance_matching(A, A, {-1, -1}, {2, 2});
  EXPECT_TRUE(r.ok);
  EXPECT_DOUBLE_EQ(r.max_displacement, 0.0);
  EXPECT_EQ(r.pairs.size(), 4u);
}

TEST(Matching, ShiftedIntegersMatchAtTheShift) {
  std::vector<std::vector<double>> A, B;
  for (int k = -10; k <= 10; ++k) {
    A.push_back({double(k)});
    B.push_back({k + 0.3});
  }
  auto r = bounded_distance_matching(A, B, {-10.5}, {10.5});
  EXPECT_TRUE(r.ok);
  EXPECT_NEAR(r.max_displacement, 0.3, 1e-12);
}

TEST(Matching, ModelSetsOfDifferentWindowsStayClose) {
  // same scheme, windows W and W + t: displacement is bounded by the
  // physical-space spread of the scheme elements with internal part in W - W
  Lattice L(QuadMatrix::identity(1));
  CutProjectScheme sc = build_scheme(L, L, 2);
  auto a = model_set_points(sc, single(box_cell({q(0)}, {q(1)})), q(40));
  auto b = model_set_points(sc, single(box_cell({q(1, 3)}, {q(4, 3)})), q(40));
  std::vector<std::vector<double>> A, B;
  for (const auto& p : a) A.push_back({to_double(p[0])});
  for (const auto& p : b) B.push_back({to_double(p[0])});
  auto r = bounded_distance_matching(A, B, {-30}, {30});
  EXPECT_TRUE(r.ok);
  EXPECT_LT(r.max_displacement, 10.0);
}

TEST(SumGroupTest, DecomposeRoundTrip) {
  Lattice L(QuadMatrix::identity(2)), M(dense_m());
  SumGroup G(L, M);
  IntVector z = {Integer(3), Integer(-1), Integer(2), Integer(5)};
  Vector v = G.value(z);
  auto back = G.decompose(v);
  ASSERT_TRUE(back.has_value());
  EXPECT_EQ(G.value(*back), v);
  EXPECT_FALSE(G.decompose({Quad(Rational(1, 2)), q(0)}).has_value());
}

TEST(Chain, SameLatticeIsOneRestep) {
  Lattice L(QuadMatrix::identity(2)), M(m2(q(1), q(1), q(0), q(1)));
  Equidecomposition eq = equidecompose_chain(L, M);
  EXPECT_EQ(eq.chain_length, 1u);
  expect_valid(eq, L, M);
}

TEST(Chain, IdenticalLatticesGiveOnePiece) {
  Lattice L(QuadMatrix::identity(2));
  Equidecomposition eq = equidecompose_chain(L, L);
  EXPECT_EQ(eq.pieces.size(), 1u);
  expect_valid(eq, L, L);
}

TEST(Chain, DensePairs) {
  std::vector<std::pair<QuadMatrix, QuadMatrix>> cases = {
      {QuadMatrix::identity(2), dense_m()},
      {QuadMatrix::identity(2), m2(s(1, 1, 3), q(1), q(1), s(2, 3, 3))},
      {m2(q(2), q(0), q(0), q(1, 2)), m2(s(1, 1), q(0), q(0), s(1, 2))},
  };
  for (const auto& [A, B] : cases) {
    Lattice L(A), M(B);
    Equidecomposition eq = equidecompose_chain(L, M);
    EXPECT_GT(eq.pieces.size(), 1u);
    expect_valid(eq, L, M);
  }
}

TEST(Chain, DeterministicOutput) {
  Lattice L(QuadMatrix::identity(2)), M(dense_m());
  Equidecomposition a = equidecompose_chain(L, M), b = equidecompose_chain(L, M);
  ASSERT_EQ(a.pieces.size(), b.pieces.size());
  for (std::size_t i = 0; i < a.pieces.size(); ++i) {
    EXPECT_EQ(a.pieces[i].ell, b.pieces[i].ell);
    EXPECT_EQ(a.pieces[i].em, b.pieces[i].em);
  }
}

TEST(Chain, TinyRadiusIsIncomplete) {
  Lattice L(QuadMatrix::identity(2)), M(m2(s(1, 1, 3), q(1), q(1), s(2, 3, 3)));
  EquidecomposeOptions opt;
  opt.max_coeff_radius = 0;
  try {
    equidecompose_chain(L, M, opt);
    FAIL() << "expected EquidecompositionIncomplete";
  } catch (const EquidecompositionIncomplete& e) {
    EXPECT_EQ(e.residual_volume, volume(L));
  }
}

TEST(Greedy, RationalPairCompletes) {
  Lattice L(m2(q(2), q(0), q(0), q(1))), M(m2(q(1), q(0), q(0), q(2)));
  EquidecomposeOptions opt;
  opt.strategy = Strategy::Greedy;
  opt.max_coeff_radius = 3;
  Equidecomposition eq = equidecompose_windows(L, M, opt);
  EXPECT_EQ(eq.strategy, "greedy");
  expect_valid(eq, L, M);
}

TEST(Greedy, SmallRadiusReportsResidual) {
  Lattice L(QuadMatrix::identity(2)), M(dense_m());
  EquidecomposeOptions opt;
  opt.strategy = Strategy::Greedy;
  opt.max_coeff_radius = 0;
  try {
    equidecompose_windows(L, M, opt);
    FAIL() << "expected EquidecompositionIncomplete";
  } catch (const EquidecompositionIncomplete& e) {
    EXPECT_GT(e.residual_volume, Quad(0));
    EXPECT_LT(e.residual_volume, volume(L));
  }
}

TEST(DenseDomainTest, VolumeAndBounds) {
  Lattice L(QuadMatrix::identity(2)), M(dense_m());
  DenseDomain dd = dense_common_domain(L, M);
  EXPECT_EQ(volume(dd.E), q(1));
  for (const auto& c : dd.E.cells)
    for (const auto& v : vertices(c)) EXPECT_TRUE(dd.bounds.contains(v));
}
