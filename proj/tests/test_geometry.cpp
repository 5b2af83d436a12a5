#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "minmax/geometry.hpp"

using namespace minmax;
using expr::vec;

namespace {

void expect_separates(const Hyperplane& h, const ConvexSet& x, const ConvexSet& y, double strict, double tol) {
  std::mt19937_64 rng(0);
  for (int k = 0; k < 1000; ++k) {
    EXPECT_LE(h.side(x.sample(rng)), -strict + tol);
    EXPECT_GE(h.side(y.sample(rng)), strict - tol);
  }
}

ConvexSet lower_half(int i) { return ConvexSet::box(vec({-1.0 * i, -1.0 * i}), vec({1.0 * i, 0.0})); }
ConvexSet upper_half(int i) { return ConvexSet::box(vec({-1.0 * i, 1.0}), vec({1.0 * i, 1.0 * i + 1.0})); }

}  // namespace

TEST(SeparateCompact, DisjointBalls) {
  const ConvexSet x = ConvexSet::ball(vec({-2, 0}), 1.0), y = ConvexSet::ball(vec({2, 0}), 1.0);
  const auto h = separate_compact(x, y);
  EXPECT_NEAR(h.v[0], 1.0, 1e-3);
  EXPECT_NEAR(h.v[1], 0.0, 1e-3);
  EXPECT_NEAR(h.alpha, 0.0, 1e-3);
  EXPECT_NEAR(h.margin, 1.0, 1e-3);
  EXPECT_NEAR(h.v.norm(), 1.0, 1e-12);
  expect_separates(h, x, y, h.margin, 1e-6);
}

TEST(SeparateCompact, DisjointBoxes) {
  const ConvexSet x = ConvexSet::box(vec({0, 0}), vec({1, 1})), y = ConvexSet::box(vec({3, 0}), vec({4, 1}));
  const auto h = separate_compact(x, y);
  EXPECT_NEAR(h.v[0], 1.0, 1e-3);
  EXPECT_NEAR(h.v[1], 0.0, 1e-3);
  EXPECT_NEAR(h.alpha, -2.0, 1e-3);
  EXPECT_NEAR(h.margin, 1.0, 1e-3);
  expect_separates(h, x, y, h.margin, 1e-6);
}

TEST(SeparateCompact, IntersectingSetsAreNotSeparable) {
  const ConvexSet b = ConvexSet::ball(vec({0, 0}), 1.0);
  EXPECT_THROW(separate_compact(b, b), NotSeparableError);
  EXPECT_THROW(separate_compact(ConvexSet::ball(vec({-0.5, 0}), 1.0), ConvexSet::ball(vec({0.5, 0}), 1.0)),
               NotSeparableError);
  EXPECT_THROW(separate_compact(b, ConvexSet::interval(0, 1)), DimensionError);
}

TEST(SeparateCompact, MarginIsHalfTheBallDistance) {
  const ConvexSet x = ConvexSet::ball(vec({0, 0}), 0.5), y = ConvexSet::ball(vec({3, 4}), 1.5);
  const auto h = separate_compact(x, y);
  EXPECT_NEAR(2 * h.margin, 5.0 - 0.5 - 1.5, 1e-3);
  EXPECT_NEAR(h.v[0], 0.6, 1e-3);
  EXPECT_NEAR(h.v[1], 0.8, 1e-3);
  expect_separates(h, x, y, h.margin, 1e-6);
}

TEST(SeparateCompact, DirectionIsScaleInvariant) {
  const ConvexSet x = ConvexSet::polytope({vec({0, 0}), vec({1, 0}), vec({0, 1})});
  const ConvexSet y = ConvexSet::ball(vec({2, 1.5}), 0.5);
  const auto h = separate_compact(x, y);
  const double c = 3.5;
  const ConvexSet xs = ConvexSet::polytope({vec({0, 0}), vec({c, 0}), vec({0, c})});
  const ConvexSet ys = ConvexSet::ball(c * vec({2, 1.5}), c * 0.5);
  const auto hs = separate_compact(xs, ys);
  EXPECT_LE((h.v - hs.v).norm(), 1e-6);
  EXPECT_NEAR(hs.margin, c * h.margin, 1e-6);
}

TEST(SeparateGeneral, Halfplanes) {
  const auto h = separate_general(lower_half, upper_half, 2, 5);
  EXPECT_NEAR(h.v[0], 0.0, 1e-3);
  EXPECT_NEAR(h.v[1], 1.0, 1e-3);
  EXPECT_NEAR(h.alpha, -0.5, 1e-3);
  expect_separates(h, lower_half(5), upper_half(5), 0.0, 1e-6);
}

TEST(SeparateGeneral, SwappedFamiliesFlipTheSign) {
  const auto h = separate_general(upper_half, lower_half, 2, 5);
  EXPECT_NEAR(h.v[1], -1.0, 1e-3);
  EXPECT_NEAR(h.alpha, 0.5, 1e-3);
}

TEST(SeparateGeneral, ConstantFamilyMatchesCompact) {
  const ConvexSet x = ConvexSet::ball(vec({-2, 0}), 1.0), y = ConvexSet::ball(vec({2, 0}), 1.0);
  const auto g = separate_general([&](int) { return x; }, [&](int) { return y; }, 2, 3);
  const auto c = separate_compact(x, y);
  EXPECT_LE((g.v - c.v).norm(), 1e-9);
  EXPECT_NEAR(g.alpha, c.alpha, 1e-6);
}

TEST(SeparateGeneral, Errors) {
  auto shrinking = [](int i) { return ConvexSet::box(vec({-1.0 / i, -1.0}), vec({1.0 / i, 0.0})); };
  EXPECT_THROW(separate_general(shrinking, upper_half, 2, 3), NestingError);
  auto touching = [](int i) { return ConvexSet::box(vec({-1.0 * i, 0.0}), vec({1.0 * i, 1.0 * i})); };
  EXPECT_THROW(separate_general(lower_half, touching, 2, 3), NotSeparableError);
  EXPECT_THROW(separate_general(lower_half, upper_half, 2, 0), DomainError);
}
