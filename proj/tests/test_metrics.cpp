#include "test_support.hpp"

#include <simclust/metrics.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace simclust {
namespace {

using testing::rect;
using testing::regular_ngon;
using testing::square;

const double kPi = std::numbers::pi;

Polygon
centered_square()
{
  return center_at_origin(square(0, 0, 1));
}

TEST(JaccardTest, Examples)
{
  const auto a = centered_square();
  EXPECT_NEAR(jaccard(a, a), 1.0, 1e-12);
  EXPECT_EQ(jaccard(square(0, 0, 1), square(3, 0, 1)), 0.0);
  EXPECT_NEAR(jaccard(square(0, 0, 1), square(0.5, 0, 1)), 1.0 / 3.0, 1e-12);
}

TEST(AreaSimilarityTest, Examples)
{
  const auto a = centered_square();
  EXPECT_NEAR(area_similarity(a, a), 1.0, 1e-12);
  EXPECT_EQ(area_similarity(square(0, 0, 1), square(3, 0, 1)), 0.0);
  EXPECT_NEAR(area_similarity(square(0, 0, 1), square(0.5, 0, 1)), 0.5, 1e-12);
}

TEST(CurvatureSimilarityTest, Examples)
{
  EXPECT_DOUBLE_EQ(curvature_similarity(centered_square(), centered_square()), 1.0);
  EXPECT_NEAR(curvature_similarity(centered_square(), regular_ngon(8, 1.0)), std::exp(-0.5), 1e-15);
  const auto tri = regular_ngon(3, 1.0);
  const auto many = regular_ngon(300, 1.0);
  EXPECT_NEAR(curvature_similarity(tri, many), std::exp(-297.0 / 300.0), 1e-15);
  EXPECT_NEAR(std::exp(-297.0 / 300.0), 0.3716, 1e-4);
}

TEST(FourierDescriptorTest, CircleHasSingleHarmonic)
{
  const auto d = fourier_descriptor(regular_ngon(64, 1.0));
  ASSERT_EQ(d.magnitudes.size(), 10u);
  EXPECT_NEAR(d.magnitudes[0], 1.0, 1e-12);
  for (std::size_t i = 1; i < d.magnitudes.size(); ++i)
    EXPECT_NEAR(d.magnitudes[i], 0.0, 1e-12);
}

TEST(FourierDescriptorTest, SquareOnlyHasHarmonicsOneModFour)
{
  // Four-fold symmetry: z[k + M/4] = i z[k] forces X_n = 0 unless n = 1 (mod 4).
  const auto d = fourier_descriptor(centered_square());
  for (std::size_t n = 1; n <= 10; ++n) {
    if (n % 4 == 1)
      EXPECT_GT(d.magnitudes[n - 1], 1e-3) << "n=" << n;
    else
      EXPECT_NEAR(d.magnitudes[n - 1], 0.0, 1e-12) << "n=" << n;
  }
}

TEST(FourierDescriptorTest, StartingVertexInvariant)
{
  const auto a = Polygon::make({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
  const auto b = Polygon::make({{1, -1}, {1, 1}, {-1, 1}, {-1, -1}});
  const auto da = fourier_descriptor(a);
  const auto db = fourier_descriptor(b);
  for (std::size_t i = 0; i < da.magnitudes.size(); ++i)
    EXPECT_NEAR(da.magnitudes[i], db.magnitudes[i], 1e-12);
}

TEST(FourierDescriptorTest, ScaleInvariant)
{
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    const auto p = center_at_origin(testing::random_polygon(rng));
    std::vector<Point2> scaled;
    for (const auto& v : p.vertices())
      scaled.push_back(3.0 * v);
    const auto q = Polygon::make(scaled);
    const auto dp = fourier_descriptor(p);
    const auto dq = fourier_descriptor(q);
    for (std::size_t i = 0; i < dp.magnitudes.size(); ++i)
      EXPECT_NEAR(dp.magnitudes[i], dq.magnitudes[i], 1e-9);
  }
}

TEST(FourierSimilarityTest, Formula)
{
  EXPECT_DOUBLE_EQ(fourier_similarity(centered_square(), centered_square()), 1.0);
  ShapeDescriptor a{{1.0, 0.0}};
  ShapeDescriptor b{{1.0, 1.0}};
  ShapeDescriptor c{{1.0, 3.0}};
  EXPECT_DOUBLE_EQ(1.0 / (1.0 + descriptor_distance(a, b)), 0.5);
  EXPECT_DOUBLE_EQ(1.0 / (1.0 + descriptor_distance(a, c)), 0.25);
}

TEST(AspectRatioSimilarityTest, Examples)
{
  EXPECT_DOUBLE_EQ(aspect_ratio_similarity(centered_square(), centered_square()), 1.0);
  EXPECT_DOUBLE_EQ(aspect_ratio_similarity(rect(-1, -0.5, 1, 0.5), centered_square()), 0.5);
  EXPECT_DOUBLE_EQ(aspect_ratio_similarity(rect(-2, -0.5, 2, 0.5), centered_square()), 0.25);
}

TEST(PerimeterSimilarityTest, Examples)
{
  EXPECT_DOUBLE_EQ(perimeter_similarity(centered_square(), centered_square()), 1.0);
  // perimeter 4 vs 5 (1.5 x 1 rectangle), 4 vs 8 (2 x 2 square)
  EXPECT_DOUBLE_EQ(perimeter_similarity(centered_square(), rect(-0.75, -0.5, 0.75, 0.5)), 0.5);
  EXPECT_DOUBLE_EQ(perimeter_similarity(centered_square(), rect(-1, -1, 1, 1)), 0.2);
}

TEST(BboxDistanceSimilarityTest, Examples)
{
  EXPECT_DOUBLE_EQ(bbox_distance_similarity(centered_square(), centered_square()), 1.0);
  EXPECT_DOUBLE_EQ(bbox_distance_similarity(square(0, 0, 1), square(1, 0, 1)), 0.5);
  EXPECT_DOUBLE_EQ(bbox_distance_similarity(square(0, 0, 1), square(0, 3, 1)), 0.25);
}

TEST(CircularityTest, Examples)
{
  EXPECT_NEAR(circularity(square(0, 0, 1)), kPi / 4.0, 1e-15);
  const auto tri = Polygon::make({{0, 0}, {4, 0}, {0, 3}});
  EXPECT_NEAR(circularity(tri), kPi / 6.0, 1e-15);
  double prev = 0.0;
  for (std::size_t n : {3u, 6u, 12u, 48u, 400u}) {
    const double c = circularity(regular_ngon(n, 1.0));
    EXPECT_GT(c, prev);
    EXPECT_LE(c, 1.0);
    prev = c;
  }
  EXPECT_GT(prev, 0.9999);
}

TEST(CircularitySimilarityTest, SquareVersusTriangle)
{
  const auto tri = Polygon::make({{0, 0}, {4, 0}, {0, 3}});
  const double expected = 1.0 / (1.0 + std::abs(kPi / 4.0 - kPi / 6.0));
  EXPECT_NEAR(circularity_similarity(square(0, 0, 1), tri), expected, 1e-15);
  EXPECT_NEAR(expected, 0.7926, 1e-4);
}

TEST(CombinedSimilarityTest, IdenticalShapesScoreOne)
{
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    std::array<double, kMetricCount> raw{};
    double sum = 0.0;
    for (auto& v : raw) {
      v = u(rng);
      sum += v;
    }
    for (auto& v : raw)
      v /= sum;
    const auto w = MetricWeights::normalized(raw);
    const auto p = make_profile(testing::random_polygon(rng));
    EXPECT_NEAR(combined_similarity(p, p, w).combined, 1.0, 1e-9);
  }
}

TEST(CombinedSimilarityTest, EqualWeightsHandSum)
{
  // unit square vs 2x1 rectangle, both centred
  const auto a = make_profile(square(0, 0, 1));
  const auto b = make_profile(rect(0, 0, 2, 1));
  const auto s = combined_similarity(a, b, MetricWeights::equal());

  const double fd = fourier_similarity(a.centered, b.centered);
  const std::array<double, kMetricCount> hand = {
    0.5,                                         // jaccard: 1 / 2
    2.0 / 3.0,                                   // area: 2*1 / 3
    1.0,                                         // curvature: 4 vs 4 vertices
    fd,                                          // fourier
    0.5,                                         // aspect ratio: 1 vs 2
    1.0 / 3.0,                                   // perimeter: 4 vs 6
    1.0,                                         // bbox centres coincide
    1.0 / (1.0 + std::abs(kPi / 4.0 - 2.0 * kPi / 9.0)), // circularity
  };
  double expected = 0.0;
  for (std::size_t i = 0; i < kMetricCount; ++i) {
    EXPECT_NEAR(s.scores[i], hand[i], 1e-12) << kMetricNames[i];
    expected += hand[i] / 8.0;
  }
  EXPECT_NEAR(s.combined, expected, 1e-12);
}

TEST(CombinedSimilarityTest, OneHotProjection)
{
  std::mt19937_64 rng(13);
  for (int t = 0; t < 20; ++t) {
    const auto a = make_profile(testing::random_polygon(rng));
    const auto b = make_profile(testing::random_polygon(rng));
    const auto s = combined_similarity(a, b, MetricWeights::one_hot(Metric::jaccard));
    EXPECT_DOUBLE_EQ(s.combined, jaccard(a.centered, b.centered));
  }
}

TEST(CombinedSimilarityTest, PolygonAndProfileRoutesAgree)
{
  std::mt19937_64 rng(14);
  for (int t = 0; t < 20; ++t) {
    const auto a = center_at_origin(testing::random_polygon(rng));
    const auto b = center_at_origin(testing::random_polygon(rng));
    const auto s = combined_similarity(make_profile(a), make_profile(b), MetricWeights::equal());
    EXPECT_NEAR(s[Metric::jaccard], jaccard(a, b), 1e-12);
    EXPECT_NEAR(s[Metric::area], area_similarity(a, b), 1e-12);
    EXPECT_NEAR(s[Metric::curvature], curvature_similarity(a, b), 1e-12);
    EXPECT_NEAR(s[Metric::fourier], fourier_similarity(a, b), 1e-12);
    EXPECT_NEAR(s[Metric::aspect_ratio], aspect_ratio_similarity(a, b), 1e-12);
    EXPECT_NEAR(s[Metric::perimeter], perimeter_similarity(a, b), 1e-12);
    EXPECT_NEAR(s[Metric::bbox_distance], bbox_distance_similarity(a, b), 1e-12);
    EXPECT_NEAR(s[Metric::circularity], circularity_similarity(a, b), 1e-12);
  }
}

TEST(MetricPropertiesTest, SymmetricBoundedAndReflexive)
{
  std::mt19937_64 rng(15);
  const auto w = MetricWeights::equal();
  const double floor_curv = std::exp(-1.0);
  for (int t = 0; t < 200; ++t) {
    const auto a = make_profile(testing::random_polygon(rng));
    const auto b = make_profile(testing::random_polygon(rng));
    const auto ab = combined_similarity(a, b, w);
    const auto ba = combined_similarity(b, a, w);
    EXPECT_EQ(ab.scores, ba.scores);
    EXPECT_EQ(ab.combined, ba.combined);
    for (double v : ab.scores) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
    EXPECT_GE(ab[Metric::curvature], floor_curv);
    const auto aa = combined_similarity(a, a, w);
    for (double v : aa.scores)
      EXPECT_GE(v, 1.0 - 1e-9);
  }
}

TEST(MetricPropertiesTest, CombinedMonotoneInEachMetric)
{
  // combined is a nonnegative dot product: raising one metric never lowers it
  const auto w = MetricWeights::equal();
  const auto base = combined_similarity(make_profile(square(0, 0, 1)), make_profile(rect(0, 0, 2, 1)), w);
  for (std::size_t i = 0; i < kMetricCount; ++i) {
    auto bumped = base.scores;
    bumped[i] = std::min(1.0, bumped[i] + 0.1);
    double total = 0.0;
    for (std::size_t k = 0; k < kMetricCount; ++k)
      total += w.values()[k] * bumped[k];
    EXPECT_GE(total, base.combined - 1e-15);
  }
}

TEST(MetricWeightsTest, Validation)
{
  EXPECT_THROW(MetricWeights::from({1, 0, 0, 0, 0, 0, 0, 0.1}), std::invalid_argument);
  EXPECT_THROW(MetricWeights::from({1.5, -0.5, 0, 0, 0, 0, 0, 0}), std::invalid_argument);
  EXPECT_NO_THROW(MetricWeights::normalized({0.1, 0.2, 0.1, 0.1, 0.1, 0.2, 0.1, 0.1}));
  double sum = 0.0;
  for (double v : MetricWeights::equal().values())
    sum += v;
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(SimilarityIndexTest, PrecomputedPairScores)
{
  // pairs (0,1)=0.9, (0,2)=0.8, (1,2)=0.7
  const double table[3][3] = {{1, 0.9, 0.8}, {0.9, 1, 0.7}, {0.8, 0.7, 1}};
  const auto r = similarity_index(3, [&](std::size_t i, std::size_t j) { return table[i][j]; });
  EXPECT_NEAR(r.value, 0.8, 1e-15);
  EXPECT_EQ(r.pairs, 3u);
  EXPECT_FALSE(r.sampled);
}

TEST(SimilarityIndexTest, IdenticalPolygonsScoreOne)
{
  const auto p = make_profile(regular_ngon(7, 2.0));
  std::vector<const ShapeProfile*> objs(5, &p);
  EXPECT_NEAR(similarity_index(objs, MetricWeights::equal()).value, 1.0, 1e-9);
}

TEST(SimilarityIndexTest, PairEqualsCombined)
{
  const auto a = make_profile(square(0, 0, 1));
  const auto b = make_profile(rect(0, 0, 2, 1));
  std::vector<const ShapeProfile*> objs = {&a, &b};
  const auto w = MetricWeights::equal();
  EXPECT_DOUBLE_EQ(similarity_index(objs, w).value, combined_similarity(a, b, w).combined);
}

TEST(SimilarityIndexTest, MatchesBruteForceMeanOnSmallClusters)
{
  std::mt19937_64 rng(16);
  const auto w = MetricWeights::equal();
  for (std::size_t size = 2; size <= 8; ++size) {
    std::vector<ShapeProfile> profiles;
    for (std::size_t i = 0; i < size; ++i)
      profiles.push_back(make_profile(testing::random_polygon(rng)));
    std::vector<const ShapeProfile*> objs;
    for (const auto& p : profiles)
      objs.push_back(&p);
    // brute force: ordered pairs, halve
    double sum = 0.0;
    for (std::size_t i = 0; i < size; ++i)
      for (std::size_t j = 0; j < size; ++j)
        if (i != j)
          sum += combined_similarity(profiles[i], profiles[j], w).combined;
    const double mean = sum / static_cast<double>(size * (size - 1));
    EXPECT_NEAR(similarity_index(objs, w).value, mean, 1e-12);
  }
}

TEST(SimilarityIndexTest, SingleObjectIsOne)
{
  const auto r = similarity_index(1, [](std::size_t, std::size_t) { return 0.0; });
  EXPECT_EQ(r.value, 1.0);
  EXPECT_EQ(r.pairs, 0u);
}

TEST(SimilarityIndexTest, LargeClustersAreSampledDeterministically)
{
  auto score = [](std::size_t i, std::size_t j) { return ((i + j) % 2 == 0) ? 1.0 : 0.0; };
  SimilarityIndexOptions opts;
  opts.seed = 42;
  const auto a = similarity_index(500, score, opts);
  const auto b = similarity_index(500, score, opts);
  EXPECT_TRUE(a.sampled);
  EXPECT_EQ(a.pairs, 200u * 199u / 2u);
  EXPECT_EQ(a.value, b.value);
  // exact mean of the parity score over distinct pairs is ~0.499
  EXPECT_NEAR(a.value, 0.5, 0.02);
}

} // namespace
} // namespace simclust
