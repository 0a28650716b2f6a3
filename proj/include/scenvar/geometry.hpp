// Copyright 2026 the scenvar authors
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

#pragma once

#include <cmath>
#include <numbers>

#include "scenvar/errors.hpp"

namespace scenvar {

inline constexpr double kPi = std::numbers::pi;

/// Wraps an angle to (-pi, pi].
inline double normalize_angle(double a) {
  a = std::fmod(a + kPi, 2.0 * kPi);
  if (a <= 0.0) {
    a += 2.0 * kPi;
  }
  return a - kPi;
}

struct Vec2 {
  double x{0.0};
  double y{0.0};
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

/// Planar pose. Heading is CCW from +x, normalized to (-pi, pi].
struct Pose2d {
  double x{0.0};
  double y{0.0};
  double heading{0.0};

  Vec2 position() const { return {x, y}; }
};

inline Pose2d make_pose(double x, double y, double heading) {
  return Pose2d{x, y, normalize_angle(heading)};
}

inline Vec2 heading_dir(double heading) { return {std::cos(heading), std::sin(heading)}; }

/// Unit normal pointing to the left of the given heading.
inline Vec2 left_normal(double heading) { return {-std::sin(heading), std::cos(heading)}; }

/// Point at signed lateral offset from a pose (positive = left).
inline Vec2 offset_point(const Pose2d& p, double lateral) {
  return p.position() + lateral * left_normal(p.heading);
}

inline double distance(Vec2 a, Vec2 b) { return norm(b - a); }

enum class GeomKind { kLine, kArc };

/// One piece of a road reference line: straight segment or circular arc.
/// Curvature is signed, positive for a left turn; lines carry curvature 0.
struct GeomSegment {
  GeomKind kind{GeomKind::kLine};
  Pose2d start{};
  double length{0.0};
  double curvature{0.0};
};

inline GeomSegment make_line(const Pose2d& start, double length) {
  return GeomSegment{GeomKind::kLine, start, length, 0.0};
}

inline GeomSegment make_arc(const Pose2d& start, double length, double curvature) {
  return GeomSegment{GeomKind::kArc, start, length, curvature};
}

inline bool segment_valid(const GeomSegment& seg) {
  if (!(seg.length > 0.0) || !std::isfinite(seg.length)) {
    return false;
  }
  if (seg.kind == GeomKind::kLine) {
    return seg.curvature == 0.0;
  }
  return std::abs(seg.curvature) > 0.0 && std::isfinite(seg.curvature);
}

/// Pose at arc length s along a segment, 0 <= s <= length.
///
/// For arcs the closed form integrates dx/ds = cos(h), dy/ds = sin(h),
/// dh/ds = k exactly:
///   h(s) = h0 + k s,  x(s) = x0 + (sin h(s) - sin h0) / k,
///   y(s) = y0 - (cos h(s) - cos h0) / k.
inline Pose2d segment_point(const GeomSegment& seg, double s) {
  const Pose2d& p = seg.start;
  if (seg.kind == GeomKind::kLine || seg.curvature == 0.0) {
    return make_pose(p.x + s * std::cos(p.heading), p.y + s * std::sin(p.heading), p.heading);
  }
  const double k = seg.curvature;
  const double h = p.heading + k * s;
  return make_pose(p.x + (std::sin(h) - std::sin(p.heading)) / k,
                   p.y - (std::cos(h) - std::cos(p.heading)) / k, h);
}

inline Pose2d segment_end_pose(const GeomSegment& seg) { return segment_point(seg, seg.length); }

/// Parallel offset of a segment, positive = shift to the left of travel.
/// Arcs keep their sweep angle, so length rescales with the radius.
inline GeomSegment offset_segment(const GeomSegment& seg, double lateral) {
  Pose2d start = seg.start;
  const Vec2 sp = offset_point(start, lateral);
  start.x = sp.x;
  start.y = sp.y;
  if (seg.kind == GeomKind::kLine) {
    return make_line(start, seg.length);
  }
  const double scale = 1.0 - lateral * seg.curvature;
  if (scale <= 0.0) {
    throw DegenerateGeometryError("offset radius <= 0 for arc segment");
  }
  return make_arc(start, seg.length * scale, seg.curvature / scale);
}

}  // namespace scenvar
