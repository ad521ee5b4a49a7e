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

#ifndef PCSIM__GEOMETRY_HPP_
#define PCSIM__GEOMETRY_HPP_

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace pcsim
{

struct Vec2
{
  double x{0.0};
  double y{0.0};

  constexpr Vec2 operator+(const Vec2 & o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(const Vec2 & o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr bool operator==(const Vec2 & o) const = default;

  double norm() const { return std::hypot(x, y); }
};

constexpr double dot(const Vec2 & a, const Vec2 & b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(const Vec2 & a, const Vec2 & b) { return a.x * b.y - a.y * b.x; }
inline Vec2 unit_from_heading(double heading) { return {std::cos(heading), std::sin(heading)}; }

/// Wraps an angle to (-pi, pi].
double wrap_angle(double angle);

/// Shortest-arc interpolation between two headings; `ratio` in [0, 1].
double interpolate_heading(double from, double to, double ratio);

/// Expresses `p` in a frame with origin `origin` and x-axis along `heading`.
Vec2 to_local(const Vec2 & p, const Vec2 & origin, double heading);
Vec2 to_world(const Vec2 & p, const Vec2 & origin, double heading);

/// Rectangle footprint. `center` is the geometric center; `heading` points along the length.
struct OrientedBox
{
  Vec2 center;
  double heading{0.0};
  double length{0.0};
  double width{0.0};

  /// Corners in counter-clockwise order starting at front-left.
  std::array<Vec2, 4> corners() const;
};

/// Separating-axis test over the four edge normals. Touching boxes overlap.
bool obb_overlap(const OrientedBox & a, const OrientedBox & b);

/// Smallest separation distance along the separating axes; <= 0 when overlapping.
/// Used as a margin estimate by oracles, not an exact Euclidean distance.
double obb_separation(const OrientedBox & a, const OrientedBox & b);

using Polygon = std::vector<Vec2>;

/// Inclusive point-in-polygon test (boundary counts as inside).
bool point_in_polygon(const Vec2 & p, const Polygon & poly);

/// Closed-segment intersection, collinear overlap and touching included.
bool segments_intersect(const Vec2 & a1, const Vec2 & a2, const Vec2 & b1, const Vec2 & b2);

/// True iff the segment crosses or touches the polygon boundary, or lies inside it.
bool segment_intersects_polygon(const Vec2 & p1, const Vec2 & p2, const Polygon & poly);

/// Non-self-intersecting check for a closed polygon with >= 3 vertices.
bool polygon_is_simple(const Polygon & poly);

/// Clips a convex polygon to the slab |local y| <= half_width of the frame (origin, heading).
/// Returned vertices are in the local frame.
Polygon clip_to_slab(const Polygon & convex_world, const Vec2 & origin, double heading,
                     double half_width);

}  // namespace pcsim

#endif  // PCSIM__GEOMETRY_HPP_
