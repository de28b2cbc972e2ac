#pragma once

#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace simclust {

struct Point2
{
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Point2 a, Point2 b) = default;
};

inline constexpr double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline constexpr double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(b - a); }

//! Axis-aligned minimum bounding rectangle.
struct Mbr
{
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  double width() const { return max_x - min_x; }
  double height() const { return max_y - min_y; }
  double area() const { return width() * height(); }
  double diagonal() const { return std::hypot(width(), height()); }
  Point2 center() const { return {0.5 * (min_x + max_x), 0.5 * (min_y + max_y)}; }

  friend constexpr bool operator==(const Mbr&, const Mbr&) = default;
};

//! Closed-interval overlap test: touching boundaries count as intersecting.
inline bool
mbr_intersects(const Mbr& a, const Mbr& b)
{
  return a.min_x <= b.max_x && b.min_x <= a.max_x && a.min_y <= b.max_y &&
         b.min_y <= a.max_y;
}

inline Mbr
mbr_of(std::span<const Point2> pts)
{
  Mbr box{pts[0].x, pts[0].y, pts[0].x, pts[0].y};
  for (const auto& p : pts) {
    box.min_x = std::min(box.min_x, p.x);
    box.min_y = std::min(box.min_y, p.y);
    box.max_x = std::max(box.max_x, p.x);
    box.max_y = std::max(box.max_y, p.y);
  }
  return box;
}

namespace detail {

inline double
signed_area(std::span<const Point2> ring)
{
  // Shoelace relative to the first vertex keeps cancellation small for
  // rings far from the origin.
  const Point2 o = ring[0];
  double twice = 0.0;
  for (std::size_t i = 1; i + 1 < ring.size(); ++i)
    twice += cross(ring[i] - o, ring[i + 1] - o);
  return 0.5 * twice;
}

inline int
orientation_sign(Point2 a, Point2 b, Point2 c)
{
  const double v = cross(b - a, c - a);
  return (v > 0.0) - (v < 0.0);
}

inline bool
on_segment(Point2 a, Point2 b, Point2 p)
{
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

//! Closed segment intersection (touching and collinear overlap included).
inline bool
segments_touch(Point2 a, Point2 b, Point2 c, Point2 d)
{
  const int o1 = orientation_sign(a, b, c);
  const int o2 = orientation_sign(a, b, d);
  const int o3 = orientation_sign(c, d, a);
  const int o4 = orientation_sign(c, d, b);
  if (o1 != o2 && o3 != o4)
    return true;
  if (o1 == 0 && on_segment(a, b, c))
    return true;
  if (o2 == 0 && on_segment(a, b, d))
    return true;
  if (o3 == 0 && on_segment(c, d, a))
    return true;
  if (o4 == 0 && on_segment(c, d, b))
    return true;
  return false;
}

//! True if the ring has no self-intersections. Adjacent edges may only share
//! their common vertex; a 180 degree spike back along the previous edge is
//! rejected.
inline bool
ring_is_simple(std::span<const Point2> ring)
{
  const std::size_t n = ring.size();
  std::vector<Mbr> boxes(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = ring[i];
    const Point2 b = ring[(i + 1) % n];
    boxes[i] = {std::min(a.x, b.x), std::min(a.y, b.y), std::max(a.x, b.x),
                std::max(a.y, b.y)};
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = ring[i];
    const Point2 b = ring[(i + 1) % n];
    const Point2 c = ring[(i + 2) % n];
    // adjacent edge folding back onto itself
    if (orientation_sign(a, b, c) == 0 && dot(b - a, c - b) < 0.0)
      return false;
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1)
        continue; // adjacent through the closing edge
      if (!mbr_intersects(boxes[i], boxes[j]))
        continue;
      if (segments_touch(a, b, ring[j], ring[(j + 1) % n]))
        return false;
    }
  }
  return true;
}

inline double
point_segment_distance(Point2 p, Point2 a, Point2 b)
{
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, a + t * ab);
}

} // namespace detail

//! A simple polygon without holes. The exterior ring is stored implicitly
//! closed and in counter-clockwise order.
class Polygon
{
public:
  Polygon() = default;

  //! Validates and normalizes a ring. Consecutive duplicate vertices and an
  //! explicit closing vertex are dropped; clockwise rings are reversed.
  //! Throws InvalidGeometry when the result is not a valid simple polygon.
  static Polygon make(std::vector<Point2> ring, std::string id = {})
  {
    for (const auto& p : ring) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y))
        throw InvalidGeometry("polygon has a non-finite coordinate");
    }
    ring.erase(std::unique(ring.begin(), ring.end()), ring.end());
    while (ring.size() > 1 && ring.front() == ring.back())
      ring.pop_back();
    if (ring.size() < 3)
      throw InvalidGeometry("polygon needs at least 3 distinct vertices, got " +
                            std::to_string(ring.size()));
    const double a = detail::signed_area(ring);
    const Mbr box = mbr_of(ring);
    const double scale = std::max(box.width(), box.height());
    if (!(std::abs(a) > 1e-14 * scale * scale))
      throw InvalidGeometry("polygon has zero area");
    if (!detail::ring_is_simple(ring))
      throw InvalidGeometry("polygon ring is self-intersecting");
    if (a < 0.0)
      std::reverse(ring.begin(), ring.end());
    Polygon p;
    p.vertices_ = std::move(ring);
    p.id_ = std::move(id);
    return p;
  }

  std::span<const Point2> vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  const Point2& operator[](std::size_t i) const { return vertices_[i]; }
  const std::string& id() const { return id_; }

  //! Rigid translation; validity is preserved so no re-check is needed.
  Polygon translated(Point2 offset) const
  {
    Polygon p;
    p.vertices_.reserve(vertices_.size());
    for (const auto& v : vertices_)
      p.vertices_.push_back(v + offset);
    p.id_ = id_;
    return p;
  }

  friend bool operator==(const Polygon&, const Polygon&) = default;

private:
  std::vector<Point2> vertices_;
  std::string id_;
};

inline double
area(const Polygon& p)
{
  return std::abs(detail::signed_area(p.vertices()));
}

inline double
perimeter(const Polygon& p)
{
  const auto v = p.vertices();
  double total = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    total += distance(v[i], v[(i + 1) % v.size()]);
  return total;
}

//! Area-weighted centroid of the polygon interior.
inline Point2
centroid(const Polygon& p)
{
  const auto v = p.vertices();
  const Point2 o = v[0];
  double twice_area = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const Point2 a = v[i] - o;
    const Point2 b = v[i + 1] - o;
    const double c = cross(a, b);
    twice_area += c;
    cx += (a.x + b.x) * c;
    cy += (a.y + b.y) * c;
  }
  return {o.x + cx / (3.0 * twice_area), o.y + cy / (3.0 * twice_area)};
}

inline Polygon
center_at_origin(const Polygon& p)
{
  const Point2 c = centroid(p);
  return p.translated({-c.x, -c.y});
}

inline Mbr
mbr(const Polygon& p)
{
  return mbr_of(p.vertices());
}

//! m points spaced uniformly by arc length along the ring, starting at
//! vertex 0 and walking in storage (counter-clockwise) order.
inline std::vector<Point2>
resample_boundary(const Polygon& p, std::size_t m)
{
  if (m == 0)
    throw std::invalid_argument("resample_boundary: m must be positive");
  const auto v = p.vertices();
  const std::size_t n = v.size();
  const double total = perimeter(p);
  const double step = total / static_cast<double>(m);

  std::vector<Point2> out;
  out.reserve(m);
  std::size_t edge = 0;
  double edge_start = 0.0; // arc length at the start of `edge`
  double edge_len = distance(v[0], v[1 % n]);
  for (std::size_t k = 0; k < m; ++k) {
    const double s = step * static_cast<double>(k);
    while (edge + 1 < n && s >= edge_start + edge_len) {
      edge_start += edge_len;
      ++edge;
      edge_len = distance(v[edge], v[(edge + 1) % n]);
    }
    const double t = edge_len > 0.0 ? std::clamp((s - edge_start) / edge_len, 0.0, 1.0) : 0.0;
    const Point2 a = v[edge];
    const Point2 b = v[(edge + 1) % n];
    out.push_back(a + t * (b - a));
  }
  return out;
}

//! Vertex count after dropping vertices whose incident edges are collinear
//! (|cross| <= 1e-12 * |e1| * |e2|).
inline std::size_t
complexity_count(const Polygon& p)
{
  const auto v = p.vertices();
  const std::size_t n = v.size();
  std::size_t kept = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 e1 = v[i] - v[(i + n - 1) % n];
    const Point2 e2 = v[(i + 1) % n] - v[i];
    if (std::abs(cross(e1, e2)) > 1e-12 * norm(e1) * norm(e2))
      ++kept;
  }
  return kept;
}

inline bool
is_convex(const Polygon& p)
{
  const auto v = p.vertices();
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 e1 = v[(i + 1) % n] - v[i];
    const Point2 e2 = v[(i + 2) % n] - v[(i + 1) % n];
    if (cross(e1, e2) < -1e-12 * norm(e1) * norm(e2))
      return false;
  }
  return true;
}

//! Even-odd point containment; boundary points may land on either side.
inline bool
contains_point(std::span<const Point2> ring, Point2 q)
{
  bool inside = false;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2 a = ring[i];
    const Point2 b = ring[j];
    if ((a.y > q.y) != (b.y > q.y)) {
      const double x = a.x + (q.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (q.x < x)
        inside = !inside;
    }
  }
  return inside;
}

inline bool
contains_point(const Polygon& p, Point2 q)
{
  return contains_point(p.vertices(), q);
}

} // namespace simclust
