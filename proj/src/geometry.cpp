// Copyright 2026 The pcsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pcsim/geometry.hpp"

#include <algorithm>
#include <limits>

namespace pcsim
{

double wrap_angle(double angle)
{
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double a = std::fmod(angle + std::numbers::pi, two_pi);
  if (a <= 0.0) {
    a += two_pi;
  }
  return a - std::numbers::pi;
}

double interpolate_heading(double from, double to, double ratio)
{
  return wrap_angle(from + wrap_angle(to - from) * ratio);
}

Vec2 to_local(const Vec2 & p, const Vec2 & origin, double heading)
{
  const Vec2 d = p - origin;
  const double c = std::cos(heading);
  const double s = std::sin(heading);
  return {c * d.x + s * d.y, -s * d.x + c * d.y};
}

Vec2 to_world(const Vec2 & p, const Vec2 & origin, double heading)
{
  const double c = std::cos(heading);
  const double s = std::sin(heading);
  return {origin.x + c * p.x - s * p.y, origin.y + s * p.x + c * p.y};
}

std::array<Vec2, 4> OrientedBox::corners() const
{
  const Vec2 f = unit_from_heading(heading) * (0.5 * length);
  const Vec2 l = Vec2{-std::sin(heading), std::cos(heading)} * (0.5 * width);
  return {center + f + l, center - f + l, center - f - l, center + f - l};
}

namespace
{

// Gap between the projections of two corner sets on `axis`; negative when they overlap.
double projection_gap(const std::array<Vec2, 4> & a, const std::array<Vec2, 4> & b, const Vec2 & axis)
{
  double a_min = std::numeric_limits<double>::infinity();
  double a_max = -a_min;
  double b_min = a_min;
  double b_max = -a_min;
  for (const auto & p : a) {
    const double d = dot(p, axis);
    a_min = std::min(a_min, d);
    a_max = std::max(a_max, d);
  }
  for (const auto & p : b) {
    const double d = dot(p, axis);
    b_min = std::min(b_min, d);
    b_max = std::max(b_max, d);
  }
  return std::max(b_min - a_max, a_min - b_max);
}

double orientation(const Vec2 & a, const Vec2 & b, const Vec2 & c) { return cross(b - a, c - a); }

bool on_segment(const Vec2 & a, const Vec2 & b, const Vec2 & p)
{
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

double obb_separation(const OrientedBox & a, const OrientedBox & b)
{
  const auto ca = a.corners();
  const auto cb = b.corners();
  const std::array<Vec2, 4> axes{
    unit_from_heading(a.heading), unit_from_heading(a.heading + 0.5 * std::numbers::pi),
    unit_from_heading(b.heading), unit_from_heading(b.heading + 0.5 * std::numbers::pi)};
  double gap = -std::numeric_limits<double>::infinity();
  for (const auto & axis : axes) {
    gap = std::max(gap, projection_gap(ca, cb, axis));
  }
  return gap;
}

bool obb_overlap(const OrientedBox & a, const OrientedBox & b)
{
  return obb_separation(a, b) <= 0.0;
}

bool point_in_polygon(const Vec2 & p, const Polygon & poly)
{
  const std::size_t n = poly.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 & a = poly[j];
    const Vec2 & b = poly[i];
    if (orientation(a, b, p) == 0.0 && on_segment(a, b, p)) {
      return true;
    }
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) {
        inside = !inside;
      }
    }
  }
  return inside;
}

bool segments_intersect(const Vec2 & a1, const Vec2 & a2, const Vec2 & b1, const Vec2 & b2)
{
  const int o1 = sign(orientation(a1, a2, b1));
  const int o2 = sign(orientation(a1, a2, b2));
  const int o3 = sign(orientation(b1, b2, a1));
  const int o4 = sign(orientation(b1, b2, a2));
  if (o1 != o2 && o3 != o4) {
    return true;
  }
  return (o1 == 0 && on_segment(a1, a2, b1)) || (o2 == 0 && on_segment(a1, a2, b2)) ||
         (o3 == 0 && on_segment(b1, b2, a1)) || (o4 == 0 && on_segment(b1, b2, a2));
}

bool segment_intersects_polygon(const Vec2 & p1, const Vec2 & p2, const Polygon & poly)
{
  if (poly.size() < 3) {
    return false;
  }
  if (point_in_polygon(p1, poly) || point_in_polygon(p2, poly)) {
    return true;
  }
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    if (segments_intersect(p1, p2, poly[j], poly[i])) {
      return true;
    }
  }
  return false;
}

bool polygon_is_simple(const Polygon & poly)
{
  const std::size_t n = poly.size();
  if (n < 3) {
    return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (poly[i] == poly[(i + 1) % n]) {
      return false;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 & a1 = poly[i];
    const Vec2 & a2 = poly[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      // adjacent edges share a vertex by construction
      if (j == i + 1 || (i == 0 && j == n - 1)) {
        continue;
      }
      if (segments_intersect(a1, a2, poly[j], poly[(j + 1) % n])) {
        return false;
      }
    }
  }
  // zero-area polygons are degenerate
  double area2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    area2 += cross(poly[i], poly[(i + 1) % n]);
  }
  return std::abs(area2) > 0.0;
}

Polygon clip_to_slab(const Polygon & convex_world, const Vec2 & origin, double heading,
                     double half_width)
{
  Polygon poly;
  poly.reserve(convex_world.size());
  for (const auto & p : convex_world) {
    poly.push_back(to_local(p, origin, heading));
  }
  // Sutherland-Hodgman against y <= half_width, then -y <= half_width.
  for (const double side : {1.0, -1.0}) {
    Polygon out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 & cur = poly[i];
      const Vec2 & nxt = poly[(i + 1) % n];
      const double dc = side * cur.y - half_width;
      const double dn = side * nxt.y - half_width;
      if (dc <= 0.0) {
        out.push_back(cur);
      }
      if ((dc < 0.0 && dn > 0.0) || (dc > 0.0 && dn < 0.0)) {
        const double r = dc / (dc - dn);
        out.push_back(cur + (nxt - cur) * r);
      }
    }
    poly = std::move(out);
    if (poly.empty()) {
      break;
    }
  }
  return poly;
}

}  // namespace pcsim
