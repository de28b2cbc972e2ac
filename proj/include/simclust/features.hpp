#pragma once

// Per-pair features of (member, representative) pairs and their two-level
// min-max normalization into one 16-value vector per cluster.

#include "cluster.hpp"
#include "error.hpp"
#include "geometry.hpp"
#include "spatial_index.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace simclust {

inline constexpr std::size_t kPairFeatureCount = 15;
inline constexpr std::size_t kClusterFeatureCount = 16;

//! f1..f15 stored zero-based: f[0] is f1.
struct PairFeatures
{
  std::array<double, kPairFeatureCount> f{};

  double operator[](std::size_t j) const { return f[j]; }
};

using ClusterFeatureVector = std::array<double, kClusterFeatureCount>;

//! The cluster's target geometry. Throws InvariantViolation if some member's
//! MBR misses it, which would mean cluster finding is broken.
inline const Polygon&
representative_geometry(const Cluster& c, std::span<const Polygon> sources, std::span<const Polygon> targets)
{
  if (c.target >= targets.size())
    throw InvariantViolation("cluster refers to an unknown target");
  const Polygon& g = targets[c.target];
  const Mbr gb = mbr(g);
  for (SourceId s : c.members) {
    if (s >= sources.size())
      throw InvariantViolation("cluster refers to an unknown source");
    if (!mbr_intersects(mbr(sources[s]), gb))
      throw InvariantViolation("cluster member does not intersect its representative");
  }
  return g;
}

//! Read-only context shared by feature extraction calls.
struct FeatureContext
{
  std::span<const Polygon> sources;
  std::span<const Polygon> targets;
  std::span<const SourceStats> stats;
  const GridIndex* index = nullptr;
};

inline PairFeatures
extract_pair_features(SourceId s, const Polygon& g, const FeatureContext& ctx, const Cluster& c)
{
  if (s >= ctx.sources.size() || s >= ctx.stats.size())
    throw std::out_of_range("extract_pair_features: unknown source id " + std::to_string(s));
  const Polygon& sp = ctx.sources[s];
  const Mbr sb = mbr(sp);
  const Mbr gb = mbr(g);
  const Granularity gran = ctx.index ? ctx.index->granularity() : Granularity{};
  const SourceStats& st = ctx.stats[s];

  double member_real = 0.0;
  double intersecting = 0.0;
  for (SourceId m : c.members) {
    member_real += static_cast<double>(ctx.stats[m].real_pairs);
    if (mbr_intersects(mbr(ctx.sources[m]), gb))
      intersecting += 1.0;
  }

  PairFeatures p;
  auto& f = p.f;
  f[0] = sb.area();
  f[1] = gb.area();
  f[2] = static_cast<double>(tile_range(sb, gran).count());
  f[3] = static_cast<double>(tile_range(gb, gran).count());
  f[4] = static_cast<double>(st.real_pairs);
  f[5] = static_cast<double>(sp.size());
  f[6] = static_cast<double>(g.size());
  f[7] = perimeter(sp);
  f[8] = perimeter(g);
  f[9] = static_cast<double>(st.total_cooccurrences);
  f[10] = static_cast<double>(st.distinct_cooccurrences);
  f[11] = intersecting; // members passing the MBR test
  f[12] = member_real;
  f[13] = intersecting;
  f[14] = static_cast<double>(c.members.size());
  return p;
}

//! Pair features for every member of `c`, in ascending member id order.
inline std::vector<PairFeatures>
cluster_pair_features(const Cluster& c, const FeatureContext& ctx)
{
  const Polygon& g = representative_geometry(c, ctx.sources, ctx.targets);
  std::vector<PairFeatures> out;
  out.reserve(c.members.size());
  for (SourceId s : c.members)
    out.push_back(extract_pair_features(s, g, ctx, c));
  return out;
}

enum class Normalization
{
  max_denominator,   // (v - min) / max * 10000
  range_denominator, // (v - min) / (max - min) * 10000
};

struct FeatureRange
{
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();

  void include(double v)
  {
    min = std::min(min, v);
    max = std::max(max, v);
  }
  bool empty() const { return min > max; }
};

inline double
normalize_value(double v, const FeatureRange& r, Normalization mode)
{
  if (r.empty())
    return 0.0;
  const double denom = mode == Normalization::max_denominator ? r.max : r.max - r.min;
  if (denom == 0.0)
    return 0.0;
  return (v - r.min) / denom * 10000.0;
}

//! Geometry-level and cluster-level feature ranges. Built once from a
//! population of clusters and then read-only; values outside the ranges
//! normalize outside [0, 10000] and are not clipped.
class MinMaxRegistry
{
public:
  explicit MinMaxRegistry(Normalization mode = Normalization::max_denominator) : mode_(mode) {}

  Normalization mode() const { return mode_; }
  const FeatureRange& geometry(std::size_t j) const { return geometry_.at(j); }
  const FeatureRange& cluster(std::size_t j) const { return cluster_.at(j); }
  bool frozen() const { return frozen_; }

  void set_geometry(std::size_t j, FeatureRange r) { mutate().geometry_.at(j) = r; }
  void set_cluster(std::size_t j, FeatureRange r) { mutate().cluster_.at(j) = r; }
  void freeze() { frozen_ = true; }

  //! Mean normalized pair features plus raw cluster size, before the
  //! cluster-level pass.
  ClusterFeatureVector aggregate(std::span<const PairFeatures> pairs) const
  {
    ClusterFeatureVector agg{};
    for (const auto& pf : pairs)
      for (std::size_t j = 0; j < kPairFeatureCount; ++j)
        agg[j] += normalize_value(pf[j], geometry_[j], mode_);
    if (!pairs.empty())
      for (std::size_t j = 0; j < kPairFeatureCount; ++j)
        agg[j] /= static_cast<double>(pairs.size());
    agg[kPairFeatureCount] = static_cast<double>(pairs.size());
    return agg;
  }

  ClusterFeatureVector normalize(const ClusterFeatureVector& agg) const
  {
    ClusterFeatureVector out{};
    for (std::size_t j = 0; j < kClusterFeatureCount; ++j)
      out[j] = normalize_value(agg[j], cluster_[j], mode_);
    return out;
  }

  //! Two-pass build over a population, each entry being one cluster's pair
  //! features. The result is frozen.
  static MinMaxRegistry build(std::span<const std::vector<PairFeatures>> population,
                              Normalization mode = Normalization::max_denominator)
  {
    MinMaxRegistry reg(mode);
    for (const auto& pairs : population)
      for (const auto& pf : pairs)
        for (std::size_t j = 0; j < kPairFeatureCount; ++j)
          reg.geometry_[j].include(pf[j]);
    for (const auto& pairs : population) {
      const auto agg = reg.aggregate(pairs);
      for (std::size_t j = 0; j < kClusterFeatureCount; ++j)
        reg.cluster_[j].include(agg[j]);
    }
    reg.frozen_ = true;
    return reg;
  }

private:
  MinMaxRegistry& mutate()
  {
    if (frozen_)
      throw std::logic_error("MinMaxRegistry is frozen");
    return *this;
  }

  Normalization mode_;
  std::array<FeatureRange, kPairFeatureCount> geometry_{};
  std::array<FeatureRange, kClusterFeatureCount> cluster_{};
  bool frozen_ = false;
};

inline double
normalize_geometry_feature(double fv, std::size_t j, const MinMaxRegistry& reg)
{
  return normalize_value(fv, reg.geometry(j), reg.mode());
}

inline double
normalize_cluster_feature(double aggregate, std::size_t j, const MinMaxRegistry& reg)
{
  return normalize_value(aggregate, reg.cluster(j), reg.mode());
}

inline ClusterFeatureVector
cluster_feature_vector(std::span<const PairFeatures> pairs, const MinMaxRegistry& reg)
{
  return reg.normalize(reg.aggregate(pairs));
}

inline ClusterFeatureVector
cluster_feature_vector(const Cluster& c, const FeatureContext& ctx, const MinMaxRegistry& reg)
{
  return cluster_feature_vector(cluster_pair_features(c, ctx), reg);
}

} // namespace simclust
