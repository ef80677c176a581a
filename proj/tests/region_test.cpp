#include <gtest/gtest.h>

#include <random>

#include "ctile/region.hpp"

using namespace ctile;

namespace {

const Quad r2 = Quad::root(2);

QuadMatrix cols(std::vector<Vector> c) { return QuadMatrix::from_columns(c[0].size(), c); }

Quad q(long p, long d = 1) { return Quad(Rational(p, d)); }

Cell unit_square() { return box_cell({0, 0}, {1, 1}); }

}  // namespace

TEST(Lp, SmallProblems) {
  // max x + y s.t. x + 2y <= 4, 3x + y <= 6 -> (8/5, 6/5), value 14/5
  auto r = maximize({1, 1}, {{1, 2}, {3, 1}}, {4, 6});
  ASSERT_TRUE(r.feasible);
  EXPECT_EQ(*r.optimum, q(14, 5));
  // x >= 1 and x <= 0
  EXPECT_FALSE(maximize({1}, {{-1}, {1}}, {-1, 0}).feasible);
  // unbounded
  auto u = maximize({1}, {{-1}}, {-1});
  EXPECT_TRUE(u.feasible);
  EXPECT_FALSE(u.optimum);
  // phase one then irrational optimum: x >= 1, x <= sqrt2
  auto s = maximize({1}, {{-1}, {1}}, {-1, r2});
  EXPECT_EQ(*s.optimum, r2);
}

TEST(Region, ParallelotopeContainment) {
  Cell c = parallelotope(cols({{2, 0}, {1, 1}}), {1, 1});
  EXPECT_TRUE(c.contains({1, 1}));
  EXPECT_FALSE(c.contains({3, 1}));
  EXPECT_TRUE(c.contains({Quad(2), q(3, 2)}));
  EXPECT_FALSE(c.contains({2, 2}));
  EXPECT_EQ(volume(c), Quad(2));
}

TEST(Region, EmptyInterior) {
  EXPECT_FALSE(is_empty_interior(unit_square()));
  Cell touching = intersect(unit_square(), box_cell({1, 0}, {2, 1}));
  EXPECT_TRUE(is_empty_interior(touching));
  Cell sliver = intersect(unit_square(), box_cell({1 - r2 / Quad(1000), 0}, {2, 1}));
  EXPECT_FALSE(is_empty_interior(sliver));
  EXPECT_EQ(volume(sliver), r2 / Quad(1000));
  Cell line{2, {{{1, 0}, 0, false}, {{-1, 0}, 0, false}}};
  EXPECT_TRUE(is_empty_interior(line));
}

TEST(Region, Vertices) {
  auto v = vertices(parallelotope(cols({{1, 0}, {r2, 1}})));
  EXPECT_EQ(v, (std::vector<Vector>{{0, 0}, {1, 0}, {r2, 1}, {r2 + 1, 1}}));
  // duplicate conditions and a redundant one do not add vertices
  Cell c = unit_square();
  c.conditions.push_back({{2, 0}, 2, false});
  c.conditions.push_back({{1, 1}, 5, false});
  EXPECT_EQ(vertices(c).size(), 4u);
  EXPECT_EQ(simplify(c).conditions.size(), 4u);
}

TEST(Region, VolumeAgainstDeterminant) {
  std::vector<QuadMatrix> Bs = {
      cols({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}),
      cols({{1, r2, 0}, {0, r2, 1}, {0, 1, r2}}),
      cols({{2, 1, 0, 0}, {0, 1, 0, 1}, {0, 0, r2, 0}, {1, 0, 0, 1}}),
  };
  for (const auto& B : Bs) EXPECT_EQ(volume(parallelotope(B)), abs(determinant(B)));
}

TEST(Region, SimplexVolumes) {
  // x, y, z >= 0, x + y + z <= 1
  Cell s{3, {{{-1, 0, 0}, 0, false}, {{0, -1, 0}, 0, false}, {{0, 0, -1}, 0, false},
             {{1, 1, 1}, 1, false}}};
  EXPECT_EQ(volume(s), q(1, 6));
  EXPECT_EQ(triangulate(s).size(), 1u);
  // cross-polytope |x| + |y| <= 1 in the plane has area 2
  Cell d{2, {}};
  for (long a : {-1, 1})
    for (long b : {-1, 1}) d.conditions.push_back({{a, b}, 1, false});
  EXPECT_EQ(volume(d), Quad(2));
}

TEST(Region, TranslateAndLinearImage) {
  Region R = single(unit_square());
  Region T = translate(R, {r2, 0});
  EXPECT_TRUE(T.contains({r2, 0}));
  EXPECT_FALSE(T.contains({r2 + 1, 0}));
  QuadMatrix S = cols({{1, 0}, {r2, 2}});
  Region I = linear_image(R, S);
  EXPECT_EQ(volume(I), Quad(2));
  EXPECT_TRUE(I.contains(S * Vector{q(1, 2), q(1, 3)}));
  EXPECT_FALSE(I.contains(S * Vector{q(1, 2), Quad(1)}));
}

TEST(Region, SubtractKeepsHalfOpenness) {
  Region A = single(box_cell({0, 0}, {2, 1}));
  Region B = single(box_cell({1, 0}, {2, 1}));
  Region C = subtract(A, B);
  EXPECT_EQ(volume(C), Quad(1));
  EXPECT_TRUE(C.contains({0, 0}));
  EXPECT_TRUE(C.contains({q(99, 100), 0}));
  EXPECT_FALSE(C.contains({1, 0}));
  // disjoint pieces stay untouched
  Region D = subtract(A, single(box_cell({5, 5}, {6, 6})));
  EXPECT_EQ(D, A);
}

TEST(RegionProperty, SubtractIntersectVolumeIdentity) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> dist(-4, 4);
  for (int it = 0; it < 30; ++it) {
    QuadMatrix V = cols({{Quad(1 + (it % 3)), Quad(dist(rng)) * r2 / Quad(4)},
                         {q(dist(rng), 3), Quad(1) + r2 / Quad(2)}});
    if (rank(V) < 2) continue;
    Region A = single(parallelotope(V, {q(dist(rng), 5), q(dist(rng), 5)}));
    Region B = single(box_cell({q(dist(rng), 4), q(dist(rng), 4)}, {Quad(2), Quad(2)}));
    Region AmB = subtract(A, B), AB = intersect(A, B);
    EXPECT_EQ(volume(AmB) + volume(AB), volume(A));
    // pointwise: exactly one of A\B, A∩B holds on A
    std::uniform_int_distribution<long> p(-40, 40);
    for (int k = 0; k < 40; ++k) {
      Vector x{q(p(rng), 10), q(p(rng), 10)};
      EXPECT_EQ(A.contains(x), AmB.contains(x) != AB.contains(x));
      if (AmB.contains(x)) {
        EXPECT_FALSE(B.contains(x));
      }
    }
  }
}

TEST(RegionProperty, TriangulationCoversCell) {
  Cell c = parallelotope(cols({{1, r2, 0}, {0, r2, 1}, {0, 1, r2}}), {q(1, 3), 0, 0});
  auto simplices = triangulate(c);
  Quad total(0);
  for (const auto& s : simplices) {
    total += simplex_volume(s);
    for (const auto& v : s) EXPECT_TRUE(intersect(c, box_cell(v, v)).conditions.size() > 0);
  }
  EXPECT_EQ(total, abs(determinant(cols({{1, r2, 0}, {0, r2, 1}, {0, 1, r2}}))));
}

TEST(Region, BoundingBoxAndDifference) {
  Box b = bounding_box(parallelotope(cols({{1, 0}, {r2, 1}})));
  EXPECT_EQ(b.lo, (Vector{0, 0}));
  EXPECT_EQ(b.hi, (Vector{r2 + 1, 1}));
  Box d = difference_box(b, b);
  EXPECT_EQ(d.lo, (Vector{-r2 - 1, -1}));
}
