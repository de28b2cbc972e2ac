#include "test_support.hpp"

#include <simclust/clipping.hpp>

#include <gtest/gtest.h>

namespace simclust {
namespace {

using testing::rect;
using testing::square;

TEST(IntersectionAreaTest, WithItself)
{
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    const auto p = testing::random_polygon(rng);
    EXPECT_NEAR(intersection_area(p, p), area(p), 1e-9 * area(p));
    EXPECT_NEAR(general_intersection_area(p, p), area(p), 1e-9 * area(p));
  }
}

TEST(IntersectionAreaTest, Disjoint)
{
  EXPECT_EQ(intersection_area(square(0, 0, 1), square(5, 5, 1)), 0.0);
  // overlapping boxes, disjoint shapes
  const auto tri1 = Polygon::make({{0, 0}, {1, 0}, {0, 1}});
  const auto tri2 = Polygon::make({{1, 1}, {0.6, 1}, {1, 0.6}});
  EXPECT_NEAR(intersection_area(tri1, tri2), 0.0, 1e-15);
  EXPECT_NEAR(general_intersection_area(tri1, tri2), 0.0, 1e-15);
}

TEST(IntersectionAreaTest, ShiftedUnitSquares)
{
  const auto a = square(0, 0, 1);
  const auto b = square(0.5, 0, 1);
  EXPECT_NEAR(intersection_area(a, b), 0.5, 1e-12);
  EXPECT_NEAR(general_intersection_area(a, b), 0.5, 1e-12);
  EXPECT_NEAR(convex_intersection_area(a, b), 0.5, 1e-12);
}

TEST(IntersectionAreaTest, SharedEdgeOppositeSides)
{
  const auto a = square(0, 0, 1);
  const auto b = square(1, 0, 1);
  EXPECT_NEAR(general_intersection_area(a, b), 0.0, 1e-15);
  EXPECT_NEAR(intersection_area(a, b), 0.0, 1e-15);
}

TEST(IntersectionAreaTest, ContainedPolygon)
{
  const auto outer = square(0, 0, 4);
  const auto inner = square(1, 1, 1);
  EXPECT_NEAR(general_intersection_area(outer, inner), 1.0, 1e-12);
  EXPECT_NEAR(general_intersection_area(inner, outer), 1.0, 1e-12);
}

TEST(IntersectionAreaTest, NonConvexAnalytic)
{
  // L-shape (3 unit cells) against a 2x2 square covering two of them plus one empty cell
  const auto ell = Polygon::make({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
  const auto box = rect(0.5, 0.5, 2.5, 2.5);
  // overlap: [0.5,2]x[0.5,1] (0.75) + [0.5,1]x[1,2] (0.5)
  EXPECT_NEAR(intersection_area(ell, box), 1.25, 1e-12);
  EXPECT_NEAR(intersection_area(box, ell), 1.25, 1e-12);
}

TEST(IntersectionAreaTest, SharedCollinearEdgesSameDirection)
{
  // two L shapes sharing their lower and left boundaries
  const auto a = Polygon::make({{0, 0}, {3, 0}, {3, 1}, {1, 1}, {1, 3}, {0, 3}});
  const auto b = rect(0, 0, 2, 2);
  // a n b = [0,2]x[0,1] + [0,1]x[1,2] = 2 + 1
  EXPECT_NEAR(general_intersection_area(a, b), 3.0, 1e-12);
  EXPECT_NEAR(general_intersection_area(b, a), 3.0, 1e-12);
}

TEST(IntersectionAreaTest, AxisAlignedRectanglesAnalytic)
{
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    double x0 = u(rng), x1 = u(rng), y0 = u(rng), y1 = u(rng);
    double x2 = u(rng), x3 = u(rng), y2 = u(rng), y3 = u(rng);
    if (std::abs(x0 - x1) < 1e-3 || std::abs(y0 - y1) < 1e-3 || std::abs(x2 - x3) < 1e-3 ||
        std::abs(y2 - y3) < 1e-3)
      continue;
    const auto a = rect(std::min(x0, x1), std::min(y0, y1), std::max(x0, x1), std::max(y0, y1));
    const auto b = rect(std::min(x2, x3), std::min(y2, y3), std::max(x2, x3), std::max(y2, y3));
    const Mbr ma = mbr(a), mb = mbr(b);
    const double w = std::max(0.0, std::min(ma.max_x, mb.max_x) - std::max(ma.min_x, mb.min_x));
    const double h = std::max(0.0, std::min(ma.max_y, mb.max_y) - std::max(ma.min_y, mb.min_y));
    EXPECT_NEAR(intersection_area(a, b), w * h, 1e-9);
    EXPECT_NEAR(general_intersection_area(a, b), w * h, 1e-9);
  }
}

TEST(IntersectionAreaTest, ConvexRouteMatchesGeneralRoute)
{
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> shift(-1.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const auto a = testing::random_convex(rng);
    const auto b = testing::random_convex(rng, {shift(rng), shift(rng)});
    const double scale = std::max(area(a), area(b));
    EXPECT_NEAR(convex_intersection_area(a, b), general_intersection_area(a, b), 1e-9 * scale);
  }
}

TEST(IntersectionAreaTest, SymmetricAndBounded)
{
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> shift(-1.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const auto a = testing::random_polygon(rng);
    const auto b = testing::random_polygon(rng, {shift(rng), shift(rng)});
    const double ab = intersection_area(a, b);
    const double ba = intersection_area(b, a);
    const double big = std::max(area(a), area(b));
    EXPECT_NEAR(ab, ba, 1e-9 * big);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, std::min(area(a), area(b)) + 1e-9 * big);
  }
}

TEST(IntersectionAreaTest, AgreesWithMonteCarloOnRandomPairs)
{
  std::mt19937_64 rng(2024);
  int checked = 0;
  for (int i = 0; i < 20; ++i) {
    const auto a = center_at_origin(testing::random_polygon(rng));
    const auto b = center_at_origin(testing::random_polygon(rng));
    const auto mc = testing::monte_carlo_intersection(a, b, 200000, 1000 + i);
    if (mc.box_fraction < 0.2)
      continue; // too little signal for a 200k-point estimate
    ++checked;
    EXPECT_NEAR(intersection_area(a, b), mc.area, 0.02 * mc.area);
  }
  EXPECT_GT(checked, 10);
}

} // namespace
} // namespace simclust
