#pragma once

// Intersection area of two simple polygons.
//
// Two routes share one entry point:
//  * both inputs convex: Sutherland-Hodgman half-plane clipping followed by
//    the shoelace formula;
//  * otherwise: every edge of each ring is split at all crossings with the
//    other ring, and the area of A n B is integrated over the pieces that
//    bound it (Green's theorem). A piece of A bounds the intersection when it
//    lies inside B, or on B's boundary running in the same direction. A piece
//    of B bounds it when it lies strictly inside A (shared pieces were already
//    taken from A).

#include "error.hpp"
#include "geometry.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace simclust {

namespace detail {

inline double
shoelace_abs(std::span<const Point2> ring)
{
  if (ring.size() < 3)
    return 0.0;
  return std::abs(signed_area(ring));
}

//! Clips `subject` against the convex counter-clockwise ring `clip`.
inline std::vector<Point2>
clip_convex(std::span<const Point2> subject, std::span<const Point2> clip)
{
  std::vector<Point2> out(subject.begin(), subject.end());
  std::vector<Point2> in;
  const std::size_t n = clip.size();
  for (std::size_t e = 0; e < n && !out.empty(); ++e) {
    const Point2 a = clip[e];
    const Point2 b = clip[(e + 1) % n];
    const Point2 dir = b - a;
    in.swap(out);
    out.clear();
    const std::size_t m = in.size();
    for (std::size_t i = 0; i < m; ++i) {
      const Point2 p = in[i];
      const Point2 q = in[(i + 1) % m];
      const double sp = cross(dir, p - a);
      const double sq = cross(dir, q - a);
      if (sp >= 0.0)
        out.push_back(p);
      if ((sp >= 0.0) != (sq >= 0.0)) {
        const double t = sp / (sp - sq);
        out.push_back(p + t * (q - p));
      }
    }
  }
  return out;
}

struct RingView
{
  std::span<const Point2> pts;
  std::size_t size() const { return pts.size(); }
  Point2 at(std::size_t i) const { return pts[i % pts.size()]; }
};

enum class Side
{
  outside,
  inside,
  same_boundary,
  opposite_boundary
};

inline Side
classify_piece(Point2 p, Point2 q, const RingView& other, double tol)
{
  const Point2 mid = 0.5 * (p + q);
  const Point2 dir = q - p;
  for (std::size_t j = 0; j < other.size(); ++j) {
    const Point2 a = other.at(j);
    const Point2 b = other.at(j + 1);
    if (point_segment_distance(mid, a, b) <= tol) {
      const Point2 edge = b - a;
      // Only count it as shared when the piece is parallel to the edge; a
      // piece merely crossing near an edge endpoint is classified normally.
      if (std::abs(cross(dir, edge)) <= 1e-6 * norm(dir) * norm(edge))
        return dot(dir, edge) > 0.0 ? Side::same_boundary : Side::opposite_boundary;
    }
  }
  return contains_point(other.pts, mid) ? Side::inside : Side::outside;
}

//! Appends the parameters at which edge a0->a1 meets the ring `other`.
inline void
split_parameters(Point2 a0, Point2 a1, const RingView& other, double tol,
                 std::vector<double>& params)
{
  const Point2 r = a1 - a0;
  const double rlen = norm(r);
  if (rlen == 0.0)
    return;
  const Mbr ebox{std::min(a0.x, a1.x) - tol, std::min(a0.y, a1.y) - tol,
                 std::max(a0.x, a1.x) + tol, std::max(a0.y, a1.y) + tol};
  const double ttol = tol / rlen;
  for (std::size_t j = 0; j < other.size(); ++j) {
    const Point2 b0 = other.at(j);
    const Point2 b1 = other.at(j + 1);
    const Mbr obox{std::min(b0.x, b1.x), std::min(b0.y, b1.y), std::max(b0.x, b1.x),
                   std::max(b0.y, b1.y)};
    if (!mbr_intersects(ebox, obox))
      continue;
    const Point2 s = b1 - b0;
    const double slen = norm(s);
    if (slen == 0.0)
      continue;
    const double denom = cross(r, s);
    if (std::abs(denom) > 1e-12 * rlen * slen) {
      const Point2 w = b0 - a0;
      const double t = cross(w, s) / denom;
      const double u = cross(w, r) / denom;
      const double utol = tol / slen;
      if (t >= -ttol && t <= 1.0 + ttol && u >= -utol && u <= 1.0 + utol)
        params.push_back(std::clamp(t, 0.0, 1.0));
    } else if (std::abs(cross(b0 - a0, r)) <= tol * rlen) {
      // collinear: split at the other segment's endpoints
      for (const Point2 e : {b0, b1}) {
        const double t = dot(e - a0, r) / (rlen * rlen);
        if (t > 0.0 && t < 1.0)
          params.push_back(t);
      }
    }
  }
  // endpoints of `other` lying on this edge are caught above as u ~ 0 or 1
}

inline double
boundary_integral(const RingView& self, const RingView& other, Point2 origin, double tol,
                  bool take_shared)
{
  double twice = 0.0;
  std::vector<double> params;
  const double min_piece = 1e-3 * tol;
  for (std::size_t i = 0; i < self.size(); ++i) {
    const Point2 a0 = self.at(i);
    const Point2 a1 = self.at(i + 1);
    params.assign({0.0, 1.0});
    split_parameters(a0, a1, other, tol, params);
    std::sort(params.begin(), params.end());
    for (std::size_t k = 0; k + 1 < params.size(); ++k) {
      const Point2 p = a0 + params[k] * (a1 - a0);
      const Point2 q = a0 + params[k + 1] * (a1 - a0);
      if (distance(p, q) <= min_piece)
        continue;
      const Side side = classify_piece(p, q, other, tol);
      const bool keep = side == Side::inside || (take_shared && side == Side::same_boundary);
      if (keep)
        twice += cross(p - origin, q - origin);
    }
  }
  return twice;
}

} // namespace detail

//! Intersection area via half-plane clipping; both rings must be convex.
inline double
convex_intersection_area(const Polygon& a, const Polygon& b)
{
  const auto clipped = detail::clip_convex(a.vertices(), b.vertices());
  return detail::shoelace_abs(clipped);
}

//! Intersection area of arbitrary simple polygons by boundary integration.
inline double
general_intersection_area(const Polygon& a, const Polygon& b)
{
  const Mbr ba = mbr(a);
  const Mbr bb = mbr(b);
  if (!mbr_intersects(ba, bb))
    return 0.0;
  const Mbr joint{std::min(ba.min_x, bb.min_x), std::min(ba.min_y, bb.min_y),
                  std::max(ba.max_x, bb.max_x), std::max(ba.max_y, bb.max_y)};
  const double scale = std::max(joint.width(), joint.height());
  const double tol = 1e-10 * scale;
  const Point2 origin = joint.center();
  const detail::RingView ra{a.vertices()};
  const detail::RingView rb{b.vertices()};
  const double twice = detail::boundary_integral(ra, rb, origin, tol, true) +
                       detail::boundary_integral(rb, ra, origin, tol, false);
  return 0.5 * twice;
}

//! Area of a n b. Dispatches to the convex route when both inputs are convex.
//! Throws DegenerateGeometry when the result falls outside
//! [0, min(|a|, |b|)] by more than rounding noise.
inline double
intersection_area(const Polygon& a, const Polygon& b)
{
  if (!mbr_intersects(mbr(a), mbr(b)))
    return 0.0;
  const double aa = area(a);
  const double ab = area(b);
  const double result = (is_convex(a) && is_convex(b)) ? convex_intersection_area(a, b)
                                                       : general_intersection_area(a, b);
  const double upper = std::min(aa, ab);
  const double slack = 1e-9 * std::max(aa, ab);
  if (!std::isfinite(result) || result < -slack || result > upper + slack)
    throw DegenerateGeometry("intersection area " + std::to_string(result) +
                             " outside [0, " + std::to_string(upper) + "]");
  return std::clamp(result, 0.0, upper);
}

} // namespace simclust
