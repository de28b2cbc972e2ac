#pragma once

// Pairwise shape similarity metrics, their weighted combination, and the
// cluster similarity index (mean combined score over all unordered pairs).
//
// Every pairwise metric expects polygons that were already moved so their
// centroid sits at the origin (see center_at_origin). ShapeProfile bundles a
// centred polygon with its per-shape quantities so each is computed once.

#include "clipping.hpp"
#include "error.hpp"
#include "geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace simclust {

enum class Metric : std::size_t
{
  jaccard = 0,
  area,
  curvature,
  fourier,
  aspect_ratio,
  perimeter,
  bbox_distance,
  circularity,
};

inline constexpr std::size_t kMetricCount = 8;

inline constexpr std::array<std::string_view, kMetricCount> kMetricNames = {
  "jaccard", "area", "curvature", "fourier", "aspect_ratio", "perimeter", "bbox_distance", "circularity"};

//! Nonnegative weights summing to one, indexed by Metric.
class MetricWeights
{
public:
  static MetricWeights equal()
  {
    MetricWeights w;
    w.values_.fill(1.0 / static_cast<double>(kMetricCount));
    return w;
  }

  //! Throws std::invalid_argument unless all weights are >= 0 and sum to 1
  //! within 1e-12.
  static MetricWeights from(const std::array<double, kMetricCount>& values)
  {
    double sum = 0.0;
    for (double v : values) {
      if (!(v >= 0.0) || !std::isfinite(v))
        throw std::invalid_argument("metric weights must be finite and nonnegative");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw std::invalid_argument("metric weights must sum to 1");
    MetricWeights w;
    w.values_ = values;
    return w;
  }

  //! Same as from(), after dividing by the sum. Accepts sums within 1e-6 of
  //! one so decimal user input such as 0.1,0.2,... is usable.
  static MetricWeights normalized(std::array<double, kMetricCount> values)
  {
    double sum = 0.0;
    for (double v : values)
      sum += v;
    if (!(std::abs(sum - 1.0) <= 1e-6))
      throw std::invalid_argument("metric weights must sum to 1");
    for (double& v : values)
      v /= sum;
    // exact renormalization can still leave the sum 1 ulp away; from() allows 1e-12
    return from(values);
  }

  static MetricWeights one_hot(Metric m)
  {
    MetricWeights w;
    w.values_.fill(0.0);
    w.values_[static_cast<std::size_t>(m)] = 1.0;
    return w;
  }

  double operator[](Metric m) const { return values_[static_cast<std::size_t>(m)]; }
  const std::array<double, kMetricCount>& values() const { return values_; }

private:
  std::array<double, kMetricCount> values_{};
};

struct FourierParams
{
  std::size_t points = 64;      // boundary resampling count
  std::size_t coefficients = 10; // magnitudes kept, starting at coefficient 1
};

//! Scale-normalized Fourier magnitudes of a resampled boundary.
struct ShapeDescriptor
{
  std::vector<double> magnitudes;
};

//! Magnitudes |X_1|..|X_K| of the DFT of the resampled boundary taken as
//! complex samples x + iy, divided by |X_1|. X_0 (position) is discarded.
inline ShapeDescriptor
fourier_descriptor(const Polygon& centered, const FourierParams& params = {})
{
  if (params.coefficients == 0 || params.coefficients >= params.points)
    throw std::invalid_argument("fourier_descriptor: need 0 < K < M");
  const auto samples = resample_boundary(centered, params.points);
  const auto m = static_cast<double>(params.points);

  double radius_sum = 0.0;
  for (const auto& p : samples)
    radius_sum += std::hypot(p.x, p.y);

  ShapeDescriptor out;
  out.magnitudes.resize(params.coefficients);
  for (std::size_t n = 1; n <= params.coefficients; ++n) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t k = 0; k < samples.size(); ++k) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(n * k % params.points) / m;
      acc += std::complex<double>(samples[k].x, samples[k].y) *
             std::complex<double>(std::cos(angle), std::sin(angle));
    }
    out.magnitudes[n - 1] = std::abs(acc);
  }
  const double first = out.magnitudes[0];
  // relative guard keeps the check independent of the polygon's scale
  if (!(first >= 1e-12 * radius_sum))
    throw DegenerateGeometry("fourier_descriptor: first coefficient vanishes");
  for (double& v : out.magnitudes)
    v /= first;
  return out;
}

inline double
descriptor_distance(const ShapeDescriptor& a, const ShapeDescriptor& b)
{
  if (a.magnitudes.size() != b.magnitudes.size())
    throw std::invalid_argument("descriptor length mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.magnitudes.size(); ++i) {
    const double d = a.magnitudes[i] - b.magnitudes[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

//! MBR width / height, height clamped below by 1e-12.
inline double
aspect_ratio(const Polygon& p)
{
  const Mbr box = mbr(p);
  return box.width() / std::max(box.height(), 1e-12);
}

inline double
circularity(const Polygon& p)
{
  const double per = perimeter(p);
  return 4.0 * std::numbers::pi * area(p) / (per * per);
}

//! Reciprocal-difference similarity 1 / (1 + |x - y|).
inline double
reciprocal_similarity(double x, double y)
{
  return 1.0 / (1.0 + std::abs(x - y));
}

inline double
curvature_from_counts(std::size_t na, std::size_t nb)
{
  const auto hi = static_cast<double>(std::max(na, nb));
  const auto diff = static_cast<double>(na > nb ? na - nb : nb - na);
  return std::exp(-diff / hi);
}

namespace detail {

//! Deterministic argument order so the clipping kernel sees the same pair
//! regardless of call order, which makes every metric exactly symmetric.
inline bool
canonical_first(const Polygon& a, const Polygon& b)
{
  const auto va = a.vertices();
  const auto vb = b.vertices();
  return !std::lexicographical_compare(vb.begin(), vb.end(), va.begin(), va.end(),
                                       [](Point2 p, Point2 q) {
                                         return p.x < q.x || (p.x == q.x && p.y < q.y);
                                       });
}

inline double
symmetric_intersection(const Polygon& a, const Polygon& b)
{
  return canonical_first(a, b) ? intersection_area(a, b) : intersection_area(b, a);
}

} // namespace detail

// -- single metrics on centred polygons -------------------------------------

inline double
jaccard(const Polygon& a, const Polygon& b)
{
  const double inter = detail::symmetric_intersection(a, b);
  const double uni = area(a) + area(b) - inter;
  return uni > 0.0 ? std::clamp(inter / uni, 0.0, 1.0) : 0.0;
}

inline double
area_similarity(const Polygon& a, const Polygon& b)
{
  const double inter = detail::symmetric_intersection(a, b);
  return std::clamp(2.0 * inter / (area(a) + area(b)), 0.0, 1.0);
}

inline double
curvature_similarity(const Polygon& a, const Polygon& b)
{
  return curvature_from_counts(complexity_count(a), complexity_count(b));
}

inline double
fourier_similarity(const Polygon& a, const Polygon& b, const FourierParams& params = {})
{
  return 1.0 / (1.0 + descriptor_distance(fourier_descriptor(a, params), fourier_descriptor(b, params)));
}

inline double
aspect_ratio_similarity(const Polygon& a, const Polygon& b)
{
  return reciprocal_similarity(aspect_ratio(a), aspect_ratio(b));
}

inline double
perimeter_similarity(const Polygon& a, const Polygon& b)
{
  return reciprocal_similarity(perimeter(a), perimeter(b));
}

inline double
bbox_distance_similarity(const Polygon& a, const Polygon& b)
{
  return 1.0 / (1.0 + distance(mbr(a).center(), mbr(b).center()));
}

inline double
circularity_similarity(const Polygon& a, const Polygon& b)
{
  return reciprocal_similarity(circularity(a), circularity(b));
}

// -- cached per-shape quantities --------------------------------------------

//! A centred polygon plus everything the pairwise metrics need from it.
struct ShapeProfile
{
  Polygon centered;
  double area = 0.0;
  double perimeter = 0.0;
  std::size_t complexity = 0;
  ShapeDescriptor descriptor;
  double aspect_ratio = 0.0;
  double circularity = 0.0;
  Point2 box_center;
};

//! Centres `raw` and precomputes its per-shape quantities.
inline ShapeProfile
make_profile(const Polygon& raw, const FourierParams& params = {})
{
  ShapeProfile p;
  p.centered = center_at_origin(raw);
  p.area = simclust::area(p.centered);
  p.perimeter = simclust::perimeter(p.centered);
  p.complexity = complexity_count(p.centered);
  p.descriptor = fourier_descriptor(p.centered, params);
  p.aspect_ratio = simclust::aspect_ratio(p.centered);
  p.circularity = 4.0 * std::numbers::pi * p.area / (p.perimeter * p.perimeter);
  p.box_center = mbr(p.centered).center();
  return p;
}

struct PairSimilarity
{
  std::array<double, kMetricCount> scores{};
  double combined = 0.0;

  double operator[](Metric m) const { return scores[static_cast<std::size_t>(m)]; }
};

//! All eight metrics and their weighted sum for two profiles.
inline PairSimilarity
combined_similarity(const ShapeProfile& a, const ShapeProfile& b, const MetricWeights& w)
{
  const double inter = detail::symmetric_intersection(a.centered, b.centered);
  const double uni = a.area + b.area - inter;

  PairSimilarity out;
  auto& s = out.scores;
  s[0] = uni > 0.0 ? std::clamp(inter / uni, 0.0, 1.0) : 0.0;
  s[1] = std::clamp(2.0 * inter / (a.area + b.area), 0.0, 1.0);
  s[2] = curvature_from_counts(a.complexity, b.complexity);
  s[3] = 1.0 / (1.0 + descriptor_distance(a.descriptor, b.descriptor));
  s[4] = reciprocal_similarity(a.aspect_ratio, b.aspect_ratio);
  s[5] = reciprocal_similarity(a.perimeter, b.perimeter);
  s[6] = 1.0 / (1.0 + distance(a.box_center, b.box_center));
  s[7] = reciprocal_similarity(a.circularity, b.circularity);

  double total = 0.0;
  for (std::size_t i = 0; i < kMetricCount; ++i)
    total += w.values()[i] * s[i];
  out.combined = std::clamp(total, 0.0, 1.0);
  return out;
}

//! Convenience overload on centred polygons.
inline PairSimilarity
combined_similarity(const Polygon& a, const Polygon& b, const MetricWeights& w,
                    const FourierParams& params = {})
{
  return combined_similarity(make_profile(a, params), make_profile(b, params), w);
}

// -- similarity index --------------------------------------------------------

struct SimilarityIndexOptions
{
  //! All pairs are scored exactly up to this many objects; above it a
  //! uniform sample of exact_limit*(exact_limit-1)/2 pairs is used.
  std::size_t exact_limit = 200;
  std::uint64_t seed = 0;
};

struct SimilarityIndexResult
{
  double value = 1.0;
  std::size_t pairs = 0;
  bool sampled = false;
};

//! Mean of `pair_score(i, j)` over unordered pairs i < j of `count` objects,
//! summed in a fixed order. Fewer than two objects yields 1.0.
template <class PairScore>
SimilarityIndexResult
similarity_index(std::size_t count, PairScore&& pair_score, const SimilarityIndexOptions& opts = {})
{
  SimilarityIndexResult r;
  if (count < 2)
    return r;
  double sum = 0.0;
  if (count <= opts.exact_limit) {
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t j = i + 1; j < count; ++j) {
        sum += pair_score(i, j);
        ++r.pairs;
      }
  } else {
    const std::size_t budget = opts.exact_limit * (opts.exact_limit - 1) / 2;
    std::mt19937_64 rng(opts.seed);
    std::uniform_int_distribution<std::size_t> pick(0, count - 1);
    for (std::size_t k = 0; k < budget; ++k) {
      std::size_t i = pick(rng);
      std::size_t j = pick(rng);
      while (j == i)
        j = pick(rng);
      if (j < i)
        std::swap(i, j);
      sum += pair_score(i, j);
    }
    r.pairs = budget;
    r.sampled = true;
  }
  r.value = std::clamp(sum / static_cast<double>(r.pairs), 0.0, 1.0);
  return r;
}

//! Similarity index over a set of shape profiles.
inline SimilarityIndexResult
similarity_index(std::span<const ShapeProfile* const> objects, const MetricWeights& w,
                 const SimilarityIndexOptions& opts = {})
{
  return similarity_index(
    objects.size(),
    [&](std::size_t i, std::size_t j) { return combined_similarity(*objects[i], *objects[j], w).combined; },
    opts);
}

} // namespace simclust
