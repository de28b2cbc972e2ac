#pragma once

// Seeded synthetic source/target datasets built from isolated neighborhoods.
//
// Each target sits alone in its own grid cell together with the sources that
// form its cluster. In a high-similarity neighborhood every source is a
// lightly jittered copy of the target's base shape. A background neighborhood
// draws a coherence level L in [0, 1): its sources are copies of the target's
// base with jitter shrinking as L grows, and the target's scale grows with L,
// so similarity varies smoothly and is partly visible in the geometry.

#include "geometry.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace simclust {

enum class ShapeFamily
{
  ngon,
  rectangle,
  star,
  disc, // 16-gon; high-similarity neighborhoods only, by default
};

struct GeneratorParams
{
  std::size_t neighborhoods = 2000; // one target each
  double high_fraction = 0.1;
  std::size_t min_members = 3;
  std::size_t max_members = 7;
  double vertex_noise = 0.02;  // relative radial jitter, high neighborhoods
  double scale_jitter = 0.02;  // relative scale jitter, high neighborhoods
  double background_noise_min = 0.1; // jitter at L -> 1
  double background_noise_max = 0.5; // jitter at L = 0
  double placement = 0.3;      // max member offset from the target centre
  double spacing = 12.0;
  bool distinct_high_family = true; // high neighborhoods use discs only
  std::uint64_t seed = 0;
};

struct SyntheticDataset
{
  std::vector<Polygon> sources;
  std::vector<Polygon> targets;
  std::vector<char> high; // per target
};

namespace detail {

//! Unit-scale base shape as radii at fixed angles (star-shaped about 0).
struct RadialShape
{
  std::vector<double> angles;
  std::vector<double> radii;
};

inline RadialShape
base_shape(ShapeFamily family, std::mt19937_64& rng)
{
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RadialShape s;
  const double rot = 2.0 * std::numbers::pi * u(rng);
  auto ring = [&](std::size_t n, auto radius) {
    for (std::size_t k = 0; k < n; ++k) {
      s.angles.push_back(rot + 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
      s.radii.push_back(radius(k));
    }
  };
  switch (family) {
  case ShapeFamily::ngon: {
    const auto n = static_cast<std::size_t>(3 + std::floor(u(rng) * 6.0)); // 3..8
    ring(n, [](std::size_t) { return 1.0; });
    break;
  }
  case ShapeFamily::rectangle: {
    const double aspect = 1.0 + 2.5 * u(rng);
    const double half = std::atan(1.0 / aspect);
    const double r = std::hypot(aspect, 1.0) / aspect;
    for (double a : {half, std::numbers::pi - half, std::numbers::pi + half, 2.0 * std::numbers::pi - half}) {
      s.angles.push_back(rot + a);
      s.radii.push_back(r);
    }
    break;
  }
  case ShapeFamily::star: {
    const auto spikes = static_cast<std::size_t>(5 + std::floor(u(rng) * 3.0)); // 5..7
    const double inner = 0.35 + 0.25 * u(rng);
    ring(2 * spikes, [&](std::size_t k) { return k % 2 ? inner : 1.0; });
    break;
  }
  case ShapeFamily::disc:
    ring(16, [](std::size_t) { return 1.0; });
    break;
  }
  return s;
}

inline Polygon
realize(const RadialShape& s, Point2 center, double scale, double noise, std::mt19937_64& rng,
        std::string id)
{
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Point2> ring;
  ring.reserve(s.angles.size());
  for (std::size_t k = 0; k < s.angles.size(); ++k) {
    const double r = scale * s.radii[k] * (1.0 + noise * u(rng));
    ring.push_back({center.x + r * std::cos(s.angles[k]), center.y + r * std::sin(s.angles[k])});
  }
  return Polygon::make(std::move(ring), std::move(id));
}

} // namespace detail

inline SyntheticDataset
generate_synthetic(const GeneratorParams& params)
{
  SyntheticDataset out;
  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> members(params.min_members,
                                                     std::max(params.min_members, params.max_members));
  const auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(params.neighborhoods))));
  const auto n_high = static_cast<std::size_t>(std::llround(params.high_fraction *
                                                            static_cast<double>(params.neighborhoods)));

  // which neighborhoods are high: a seeded choice of exactly n_high of them
  std::vector<char> high(params.neighborhoods, 0);
  std::fill(high.begin(), high.begin() + static_cast<std::ptrdiff_t>(std::min(n_high, high.size())), 1);
  std::shuffle(high.begin(), high.end(), rng);

  auto random_family = [&](bool allow_disc) {
    const int k = static_cast<int>(std::floor(u(rng) * (allow_disc ? 4.0 : 3.0)));
    return static_cast<ShapeFamily>(std::min(k, allow_disc ? 3 : 2));
  };
  auto offset = [&](Point2 c) {
    return Point2{c.x + params.placement * (2.0 * u(rng) - 1.0), c.y + params.placement * (2.0 * u(rng) - 1.0)};
  };

  for (std::size_t n = 0; n < params.neighborhoods; ++n) {
    const Point2 c{params.spacing * static_cast<double>(n % cols), params.spacing * static_cast<double>(n / cols)};
    const std::size_t k = members(rng);
    const std::string tid = "t" + std::to_string(n);
    if (high[n]) {
      const ShapeFamily fam = params.distinct_high_family ? ShapeFamily::disc : random_family(false);
      const auto base = detail::base_shape(fam, rng);
      const double scale = 1.0 + u(rng);
      out.targets.push_back(detail::realize(base, c, scale, params.vertex_noise, rng, tid));
      for (std::size_t m = 0; m < k; ++m) {
        const double sj = scale * (1.0 + params.scale_jitter * (2.0 * u(rng) - 1.0));
        out.sources.push_back(detail::realize(base, offset(c), sj, params.vertex_noise, rng,
                                              "s" + std::to_string(out.sources.size())));
      }
    } else {
      const double level = u(rng);
      const double jitter = params.background_noise_max -
                            (params.background_noise_max - params.background_noise_min) * level;
      const auto base = detail::base_shape(random_family(!params.distinct_high_family), rng);
      const double scale = 0.6 + 1.6 * level;
      out.targets.push_back(detail::realize(base, c, scale, jitter, rng, tid));
      for (std::size_t m = 0; m < k; ++m) {
        const double sj = scale * (1.0 + jitter * (2.0 * u(rng) - 1.0));
        out.sources.push_back(detail::realize(base, offset(c), sj, jitter, rng,
                                              "s" + std::to_string(out.sources.size())));
      }
    }
    out.high.push_back(high[n]);
  }
  return out;
}

} // namespace simclust
