#pragma once

#include "error.hpp"
#include "geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

namespace simclust {

using SourceId = std::uint32_t;

struct TileCoord
{
  std::int64_t i = 0;
  std::int64_t j = 0;
  friend constexpr bool operator==(TileCoord, TileCoord) = default;
};

struct TileCoordHash
{
  std::size_t operator()(TileCoord t) const noexcept
  {
    const auto a = static_cast<std::uint64_t>(t.i);
    const auto b = static_cast<std::uint64_t>(t.j);
    return static_cast<std::size_t>(a * 0x9E3779B97F4A7C15ull ^ (b + 0x632BE59BD9B4E019ull + (a << 6) + (a >> 2)));
  }
};

//! Inclusive tile range covered by an MBR: floor(min * delta) .. ceil(max * delta).
struct TileRange
{
  std::int64_t i0 = 0, i1 = 0, j0 = 0, j1 = 0;

  std::uint64_t count() const
  {
    return static_cast<std::uint64_t>(i1 - i0 + 1) * static_cast<std::uint64_t>(j1 - j0 + 1);
  }
};

//! Tiles per unit along each axis (the reciprocal of the tile side).
struct Granularity
{
  double delta_x = 1.0;
  double delta_y = 1.0;
};

//! One tile is roughly one average source geometry: delta = 1 / mean MBR extent.
inline Granularity
define_granularity(std::span<const Mbr> sources)
{
  if (sources.empty())
    throw InputError("define_granularity: empty source set");
  double w = 0.0;
  double h = 0.0;
  for (const auto& b : sources) {
    w += b.width();
    h += b.height();
  }
  const double n = static_cast<double>(sources.size());
  auto reciprocal = [](double mean) {
    const double d = 1.0 / mean;
    return (std::isfinite(d) && d > 0.0) ? d : 1.0;
  };
  return {reciprocal(w / n), reciprocal(h / n)};
}

inline Granularity
define_granularity(std::span<const Polygon> sources)
{
  std::vector<Mbr> boxes;
  boxes.reserve(sources.size());
  for (const auto& s : sources)
    boxes.push_back(mbr(s));
  return define_granularity(boxes);
}

inline TileRange
tile_range(const Mbr& box, const Granularity& g)
{
  auto to_tile = [](double v) {
    constexpr double limit = 9.0e15;
    if (!(std::abs(v) < limit))
      throw InputError("tile coordinate out of range; coordinates too large for the grid");
    return static_cast<std::int64_t>(v);
  };
  return {to_tile(std::floor(box.min_x * g.delta_x)), to_tile(std::ceil(box.max_x * g.delta_x)),
          to_tile(std::floor(box.min_y * g.delta_y)), to_tile(std::ceil(box.max_y * g.delta_y))};
}

//! Sparse uniform grid over source MBRs.
//!
//! Written by a single owner during the build phase. After freeze() every
//! tile holds its ids sorted and unique, so reads are deterministic and the
//! index can be shared read-only.
class GridIndex
{
public:
  explicit GridIndex(Granularity g = {}) : granularity_(g)
  {
    if (!(g.delta_x > 0.0) || !(g.delta_y > 0.0))
      throw std::invalid_argument("GridIndex: granularity must be positive");
  }

  const Granularity& granularity() const { return granularity_; }

  //! Registers `id` in every tile its MBR range covers.
  void add(SourceId id, const Mbr& box)
  {
    const TileRange r = tile_range(box, granularity_);
    for (std::int64_t i = r.i0; i <= r.i1; ++i)
      for (std::int64_t j = r.j0; j <= r.j1; ++j)
        tiles_[{i, j}].push_back(id);
    frozen_ = false;
  }

  //! Sorts and deduplicates tile contents. Idempotent.
  void freeze()
  {
    for (auto& [coord, ids] : tiles_) {
      std::sort(ids.begin(), ids.end());
      ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    }
    frozen_ = true;
  }

  bool frozen() const { return frozen_; }

  std::span<const SourceId> tile(TileCoord c) const
  {
    const auto it = tiles_.find(c);
    if (it == tiles_.end())
      return {};
    return it->second;
  }

  std::size_t tile_count() const { return tiles_.size(); }

  //! Calls fn(tile, id) for every id stored in every tile of `box`'s range,
  //! visiting tiles in (i, j) order.
  template <class Fn>
  void for_each_entry(const Mbr& box, Fn&& fn) const
  {
    const TileRange r = tile_range(box, granularity_);
    for (std::int64_t i = r.i0; i <= r.i1; ++i)
      for (std::int64_t j = r.j0; j <= r.j1; ++j)
        for (SourceId id : tile({i, j}))
          fn(TileCoord{i, j}, id);
  }

  //! Sorted union of tile contents over `box`'s range.
  std::vector<SourceId> candidates(const Mbr& box) const
  {
    std::vector<SourceId> out;
    for_each_entry(box, [&](TileCoord, SourceId id) { out.push_back(id); });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

private:
  Granularity granularity_;
  std::unordered_map<TileCoord, std::vector<SourceId>, TileCoordHash> tiles_;
  bool frozen_ = true;
};

inline void
add_to_index(GridIndex& idx, SourceId id, const Polygon& s)
{
  idx.add(id, mbr(s));
}

inline std::vector<SourceId>
candidate_set(const GridIndex& idx, const Polygon& t)
{
  return idx.candidates(mbr(t));
}

//! Builds and freezes an index over `sources`, ids being positions.
inline GridIndex
build_index(std::span<const Polygon> sources)
{
  GridIndex idx(define_granularity(sources));
  for (std::size_t k = 0; k < sources.size(); ++k)
    idx.add(static_cast<SourceId>(k), mbr(sources[k]));
  idx.freeze();
  return idx;
}

} // namespace simclust
