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

#include <string>
#include <vector>

#include "scenvar/road_network.hpp"

namespace scenvar {

struct ParamRange {
  std::string name;
  double min{0.0};
  double max{0.0};
  std::string unit{"m"};
};

/// Linearly spaced parameter values: n >= 2 gives exact endpoints, n == 1 the
/// midpoint of the range.
inline std::vector<double> linspace_variants(const ParamRange& range, int n) {
  if (n < 1) {
    throw InvalidArgumentError("linspace_variants: count must be >= 1");
  }
  if (range.min > range.max) {
    throw InvalidArgumentError("linspace_variants: min > max for " + range.name);
  }
  std::vector<double> values;
  values.reserve(static_cast<size_t>(n));
  if (n == 1) {
    values.push_back(0.5 * (range.min + range.max));
    return values;
  }
  const double span = range.max - range.min;
  for (int i = 0; i < n; ++i) {
    values.push_back(range.min + span * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  return values;
}

enum class TurnDirection { kLeft, kRight };

/// A single road: entry tangent, circular arc, exit tangent.
inline RoadNetwork gen_curved_road(double lane_width, double radius, TurnDirection direction,
                                   double entry_len = 50.0, double exit_len = 50.0,
                                   double arc_angle = 0.5 * kPi) {
  if (!(radius > lane_width)) {
    throw DegenerateGeometryError("curve radius must exceed the lane width");
  }
  if (!(entry_len > 0.0) || !(exit_len > 0.0)) {
    throw InvalidArgumentError("tangent lengths must be > 0");
  }
  if (!(arc_angle > 0.0) || arc_angle > kPi) {
    throw InvalidArgumentError("arc angle must lie in (0, pi]");
  }
  const double curvature = (direction == TurnDirection::kLeft ? 1.0 : -1.0) / radius;

  Road road;
  road.id = "1";
  road.name = "curve";
  road.lane_width = lane_width;
  road.segments.push_back(make_line(make_pose(0.0, 0.0, 0.0), entry_len));
  road.segments.push_back(
      make_arc(segment_end_pose(road.segments.back()), radius * arc_angle, curvature));
  road.segments.push_back(make_line(segment_end_pose(road.segments.back()), exit_len));

  RoadNetwork net;
  net.name = "curved_road";
  net.roads.push_back(std::move(road));
  return net;
}

namespace detail {

/// Lane-center pose of traffic leaving the road across the given end.
inline Pose2d leaving_pose(const Road& r, ContactPoint end) {
  if (end == ContactPoint::kEnd) {
    const Pose2d e = r.end_pose();
    const Vec2 p = offset_point(e, -0.5 * r.lane_width);
    return make_pose(p.x, p.y, e.heading);
  }
  const Pose2d s = r.start_pose();
  const Vec2 p = offset_point(s, 0.5 * r.lane_width);
  return make_pose(p.x, p.y, s.heading + kPi);
}

/// Lane-center pose of traffic entering the road across the given end.
inline Pose2d entering_pose(const Road& r, ContactPoint end) {
  if (end == ContactPoint::kStart) {
    const Pose2d s = r.start_pose();
    const Vec2 p = offset_point(s, -0.5 * r.lane_width);
    return make_pose(p.x, p.y, s.heading);
  }
  const Pose2d e = r.end_pose();
  const Vec2 p = offset_point(e, 0.5 * r.lane_width);
  return make_pose(p.x, p.y, e.heading + kPi);
}

inline bool is_u_turn(const Pose2d& from, const Pose2d& to, double tol = 1e-9) {
  return kPi - std::abs(normalize_angle(to.heading - from.heading)) < tol;
}

/// G1 connector between two lane-center poses: an arc fillet tangent to both
/// rays, preceded/followed by a straight piece when the tangent lengths
/// differ. Collinear poses yield a single line.
inline std::vector<GeomSegment> solve_connector(const Pose2d& from, const Pose2d& to,
                                                double min_radius) {
  const double dtheta = normalize_angle(to.heading - from.heading);
  const Vec2 d1 = heading_dir(from.heading);
  const Vec2 d2 = heading_dir(to.heading);
  const Vec2 r = to.position() - from.position();

  if (std::abs(dtheta) < 1e-9) {
    const double lat = cross(d1, r);
    const double fwd = dot(d1, r);
    if (std::abs(lat) > 1e-9 || !(fwd > 0.0)) {
      throw DegenerateGeometryError("parallel connector poses are laterally offset");
    }
    return {make_line(from, fwd)};
  }
  if (is_u_turn(from, to)) {
    throw DegenerateGeometryError("u-turn connector is not constructible");
  }

  const double denom = cross(d1, d2);
  const double t1 = cross(r, d2) / denom;  // from -> corner
  const double t2 = cross(d1, r) / denom;  // corner -> to
  if (!(t1 > 1e-9) || !(t2 > 1e-9)) {
    throw DegenerateGeometryError("connector corner lies behind an endpoint");
  }
  const double u = std::min(t1, t2);
  const double radius = u / std::tan(0.5 * std::abs(dtheta));
  if (!(radius > min_radius)) {
    throw DegenerateGeometryError("fillet radius " + std::to_string(radius) +
                                  " m below minimum " + std::to_string(min_radius) + " m");
  }

  std::vector<GeomSegment> segs;
  Pose2d cursor = from;
  if (t1 - u > 1e-12) {
    segs.push_back(make_line(cursor, t1 - u));
    cursor = segment_end_pose(segs.back());
  }
  const double sign = dtheta > 0.0 ? 1.0 : -1.0;
  segs.push_back(make_arc(cursor, radius * std::abs(dtheta), sign / radius));
  cursor = segment_end_pose(segs.back());
  if (t2 - u > 1e-12) {
    segs.push_back(make_line(cursor, t2 - u));
  }
  return segs;
}

}  // namespace detail

struct TJunctionParams {
  double lane_width{3.5};
  double angle_deg{90.0};  // between the through road and the minor arm
  double gap{10.0};        // virtual crossing point to each arm end
  double arm_length{100.0};
  TurnDirection minor_side{TurnDirection::kLeft};  // side of the minor arm
};

/// Three approach arms around a virtual crossing point plus one connecting
/// road per drivable arm pair. Arm ids: "1" west, "2" east (the through road),
/// "3" the minor arm; junction id "10"; connectors "11"...
inline RoadNetwork gen_t_junction(const TJunctionParams& p,
                                  std::vector<std::string>* warnings = nullptr) {
  if (!(p.lane_width > 0.0) || !(p.gap > 0.0) || !(p.arm_length > 0.0)) {
    throw InvalidArgumentError("t-junction parameters must be positive");
  }
  if (!(p.angle_deg > 0.0) || p.angle_deg > 180.0) {
    throw InvalidArgumentError("intersection angle must lie in (0, 180] degrees");
  }
  const auto warn = [&](const std::string& msg) {
    if (warnings != nullptr) {
      warnings->push_back(msg);
    }
  };
  if (p.angle_deg < 35.0 || p.angle_deg > 135.0) {
    warn("intersection angle " + std::to_string(p.angle_deg) +
         " deg outside the 35-135 deg design range");
  }

  RoadNetwork net;
  net.name = "t_junction";
  const std::string junction_id = "10";
  const double phi = p.angle_deg * kPi / 180.0;
  const double sy = p.minor_side == TurnDirection::kLeft ? 1.0 : -1.0;
  const Vec2 u{std::cos(phi), sy * std::sin(phi)};

  Road west;
  west.id = "1";
  west.name = "arm_west";
  west.lane_width = p.lane_width;
  west.segments.push_back(
      make_line(make_pose(-p.gap - p.arm_length, 0.0, 0.0), p.arm_length));
  west.successor = RoadLink{LinkType::kJunction, junction_id, ContactPoint::kStart};

  Road east;
  east.id = "2";
  east.name = "arm_east";
  east.lane_width = p.lane_width;
  east.segments.push_back(make_line(make_pose(p.gap, 0.0, 0.0), p.arm_length));
  east.predecessor = RoadLink{LinkType::kJunction, junction_id, ContactPoint::kStart};

  Road minor;
  minor.id = "3";
  minor.name = "arm_minor";
  minor.lane_width = p.lane_width;
  minor.segments.push_back(
      make_line(make_pose(p.gap * u.x, p.gap * u.y, std::atan2(u.y, u.x)), p.arm_length));
  minor.predecessor = RoadLink{LinkType::kJunction, junction_id, ContactPoint::kStart};

  net.roads = {west, east, minor};

  Junction junction;
  junction.id = junction_id;
  junction.name = "t";
  junction.incoming_road_ids = {"1", "2", "3"};

  struct Movement {
    std::string in;
    ContactPoint in_end;
    int in_lane;
    std::string out;
    ContactPoint out_end;
  };
  // Arm "1" points into the junction, arms "2" and "3" point away from it.
  const std::vector<Movement> movements = {
      {"1", ContactPoint::kEnd, -1, "2", ContactPoint::kStart},
      {"1", ContactPoint::kEnd, -1, "3", ContactPoint::kStart},
      {"2", ContactPoint::kStart, 1, "1", ContactPoint::kEnd},
      {"2", ContactPoint::kStart, 1, "3", ContactPoint::kStart},
      {"3", ContactPoint::kStart, 1, "1", ContactPoint::kEnd},
      {"3", ContactPoint::kStart, 1, "2", ContactPoint::kStart},
  };

  int next_connection = 0;
  for (size_t i = 0; i < movements.size(); ++i) {
    const auto& m = movements[i];
    const Road* in = net.find_road(m.in);
    const Road* out = net.find_road(m.out);
    const Pose2d from = detail::leaving_pose(*in, m.in_end);
    const Pose2d to = detail::entering_pose(*out, m.out_end);
    if (detail::is_u_turn(from, to, 1e-6)) {
      warn("skipping u-turn movement " + m.in + " -> " + m.out);
      continue;
    }
    const auto center_path = detail::solve_connector(from, to, 0.5 * p.lane_width);

    Road connector;
    connector.id = std::to_string(11 + i);
    connector.name = "connector_" + m.in + "_" + m.out;
    connector.lane_width = p.lane_width;
    connector.junction = junction_id;
    // The reference line runs along the left lane edge so that lane -1 covers
    // the turning corridor; this puts the connector endpoints exactly on the
    // arm reference lines.
    for (const auto& seg : center_path) {
      connector.segments.push_back(offset_segment(seg, 0.5 * p.lane_width));
    }
    connector.predecessor = RoadLink{LinkType::kRoad, m.in, m.in_end};
    connector.successor = RoadLink{LinkType::kRoad, m.out, m.out_end};
    net.roads.push_back(std::move(connector));

    JunctionConnection conn;
    conn.id = std::to_string(next_connection++);
    conn.incoming_road = m.in;
    conn.connecting_road = std::to_string(11 + i);
    conn.contact = ContactPoint::kStart;
    conn.lane_link = LaneLink{m.in_lane, -1};
    junction.connections.push_back(std::move(conn));
  }
  net.junctions.push_back(std::move(junction));
  return net;
}

struct ComplexParams {
  TJunctionParams tj{};
  double radius{150.0};
  TurnDirection curve_direction{TurnDirection::kLeft};
  double entry_len{50.0};
  double exit_len{50.0};
  double arc_angle{0.5 * kPi};
};

/// T-junction whose east arm continues into a curved section (road "4").
inline RoadNetwork gen_complex(const ComplexParams& p,
                               std::vector<std::string>* warnings = nullptr) {
  if (!(p.radius > p.tj.lane_width)) {
    throw DegenerateGeometryError("curve radius must exceed the lane width");
  }
  RoadNetwork net = gen_t_junction(p.tj, warnings);
  net.name = "complex_road";

  Road* east = nullptr;
  for (auto& r : net.roads) {
    if (r.id == "2") {
      east = &r;
    }
  }
  const double curvature = (p.curve_direction == TurnDirection::kLeft ? 1.0 : -1.0) / p.radius;
  Road curve;
  curve.id = "4";
  curve.name = "curve";
  curve.lane_width = p.tj.lane_width;
  curve.segments.push_back(make_line(east->end_pose(), p.entry_len));
  curve.segments.push_back(
      make_arc(segment_end_pose(curve.segments.back()), p.radius * p.arc_angle, curvature));
  curve.segments.push_back(make_line(segment_end_pose(curve.segments.back()), p.exit_len));
  curve.predecessor = RoadLink{LinkType::kRoad, "2", ContactPoint::kEnd};
  east->successor = RoadLink{LinkType::kRoad, "4", ContactPoint::kStart};
  net.roads.push_back(std::move(curve));
  return net;
}

}  // namespace scenvar
