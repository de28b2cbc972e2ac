#pragma once

// Cluster finding over a grid index, per-source co-occurrence statistics and
// the seeded cluster samples used for thresholding and training.

#include "geometry.hpp"
#include "spatial_index.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <vector>

namespace simclust {

using ClusterId = std::uint32_t;

//! A target geometry g with every source whose MBR intersects g's MBR.
struct Cluster
{
  ClusterId id = 0;
  std::size_t target = 0;       // index into the target set
  std::vector<SourceId> members; // ascending
};

//! Co-occurrence counters of one source, accumulated while clustering.
struct SourceStats
{
  std::uint64_t total_cooccurrences = 0;    // tile-level encounters, with multiplicity
  std::uint64_t distinct_cooccurrences = 0; // targets sharing at least one tile
  std::uint64_t real_pairs = 0;             // targets with an intersecting MBR
};

struct ClusterSet
{
  GridIndex index;
  std::vector<SourceStats> stats; // indexed by source id
  std::vector<Cluster> clusters;  // id == position
  std::size_t dropped_targets = 0; // targets with no intersecting source
};

//! Indexes `sources`, then walks `targets` in order emitting one cluster per
//! target that has at least one MBR-intersecting source.
inline ClusterSet
find_clusters(std::span<const Polygon> sources, std::span<const Polygon> targets)
{
  ClusterSet out{build_index(sources), std::vector<SourceStats>(sources.size()), {}, 0};
  std::vector<Mbr> source_boxes;
  source_boxes.reserve(sources.size());
  for (const auto& s : sources)
    source_boxes.push_back(mbr(s));

  std::vector<SourceId> seen;
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const Mbr tb = mbr(targets[t]);
    seen.clear();
    out.index.for_each_entry(tb, [&](TileCoord, SourceId s) {
      ++out.stats[s].total_cooccurrences;
      seen.push_back(s);
    });
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());

    Cluster c;
    for (SourceId s : seen) {
      ++out.stats[s].distinct_cooccurrences;
      if (mbr_intersects(source_boxes[s], tb)) {
        ++out.stats[s].real_pairs;
        c.members.push_back(s);
      }
    }
    if (c.members.empty()) {
      ++out.dropped_targets;
      continue;
    }
    c.id = static_cast<ClusterId>(out.clusters.size());
    c.target = t;
    out.clusters.push_back(std::move(c));
  }
  return out;
}

enum class SamplingMode
{
  pair_weighted, // targets drawn through uniformly drawn pair ids
  uniform,       // clusters drawn uniformly
};

struct ClusterSamples
{
  std::vector<ClusterId> sample;     // training / labeling sample
  std::vector<ClusterId> kde_sample; // threshold estimation sample
};

//! Draws two disjoint cluster samples of at most `m` clusters each.
//!
//! In pair-weighted mode a pair id is drawn uniformly from the space of all
//! (member, target) pairs and mapped back to the cluster owning it, so each
//! cluster is hit with probability proportional to its size. Drawn clusters
//! alternate between the two samples; repeats are skipped.
inline ClusterSamples
draw_samples(std::span<const Cluster> clusters, std::size_t m, std::uint64_t seed,
             SamplingMode mode = SamplingMode::pair_weighted)
{
  ClusterSamples out;
  const std::size_t n = clusters.size();
  if (n == 0 || m == 0)
    return out;
  const std::size_t wanted = std::min(2 * m, n);

  std::vector<std::uint64_t> upper(n); // exclusive prefix end of each cluster's pair ids
  std::uint64_t acc = 0;
  for (std::size_t k = 0; k < n; ++k) {
    acc += mode == SamplingMode::pair_weighted ? clusters[k].members.size() : 1;
    upper[k] = acc;
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> pick(0, acc - 1);
  std::vector<char> taken(n, 0);
  std::size_t drawn = 0;
  const std::size_t max_attempts = 64 * wanted + 1024;
  for (std::size_t attempt = 0; attempt < max_attempts && drawn < wanted; ++attempt) {
    const std::uint64_t pair_id = pick(rng);
    const auto k = static_cast<std::size_t>(std::upper_bound(upper.begin(), upper.end(), pair_id) - upper.begin());
    if (taken[k])
      continue;
    taken[k] = 1;
    auto& dst = (drawn % 2 == 0) ? out.sample : out.kde_sample;
    if (dst.size() < m)
      dst.push_back(clusters[k].id);
    ++drawn;
  }
  return out;
}

} // namespace simclust
