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

#include <optional>
#include <string>
#include <vector>

#include "scenvar/geometry.hpp"

namespace scenvar {

enum class LinkType { kRoad, kJunction };
enum class ContactPoint { kStart, kEnd };

inline const char* to_string(ContactPoint c) { return c == ContactPoint::kStart ? "start" : "end"; }

struct RoadLink {
  LinkType type{LinkType::kRoad};
  std::string id;
  ContactPoint contact{ContactPoint::kStart};  // meaningful for road links only
};

/// A road with a piecewise line/arc reference line and one driving lane per
/// direction of constant width (lane -1 right of the reference line, +1 left).
/// Roads inside a junction carry the junction id and only have lane -1.
struct Road {
  std::string id;
  std::string name;
  std::vector<GeomSegment> segments;
  double lane_width{3.5};
  std::optional<RoadLink> predecessor;
  std::optional<RoadLink> successor;
  std::string junction;  // empty for normal roads

  bool is_connecting() const { return !junction.empty(); }

  double length() const {
    double total = 0.0;
    for (const auto& seg : segments) {
      total += seg.length;
    }
    return total;
  }

  Pose2d start_pose() const { return segments.front().start; }
  Pose2d end_pose() const { return segment_end_pose(segments.back()); }
  Pose2d contact_pose(ContactPoint c) const {
    return c == ContactPoint::kStart ? start_pose() : end_pose();
  }

  /// Pose on the reference line at arc length s (clamped to [0, length]).
  Pose2d point_at(double s) const {
    double acc = 0.0;
    for (const auto& seg : segments) {
      if (s <= acc + seg.length) {
        return segment_point(seg, std::max(0.0, s - acc));
      }
      acc += seg.length;
    }
    return end_pose();
  }

  double curvature_at(double s) const {
    double acc = 0.0;
    for (const auto& seg : segments) {
      if (s < acc + seg.length) {
        return seg.curvature;
      }
      acc += seg.length;
    }
    return segments.back().curvature;
  }
};

struct LaneLink {
  int from{0};  // lane on the incoming road
  int to{0};    // lane on the connecting road
};

struct JunctionConnection {
  std::string id;
  std::string incoming_road;
  std::string connecting_road;
  ContactPoint contact{ContactPoint::kStart};  // contact point on the connecting road
  LaneLink lane_link;
};

struct Junction {
  std::string id;
  std::string name;
  std::vector<std::string> incoming_road_ids;
  std::vector<JunctionConnection> connections;
};

struct RoadNetwork {
  std::string name;
  std::vector<Road> roads;
  std::vector<Junction> junctions;

  const Road* find_road(const std::string& id) const {
    for (const auto& r : roads) {
      if (r.id == id) {
        return &r;
      }
    }
    return nullptr;
  }

  const Junction* find_junction(const std::string& id) const {
    for (const auto& j : junctions) {
      if (j.id == id) {
        return &j;
      }
    }
    return nullptr;
  }
};

struct CenterlineSample {
  double s{0.0};
  Pose2d pose{};
  double curvature{0.0};
};

/// Samples the reference line at s = 0, ds, 2ds, ...; the end point is always
/// included and joints appear exactly once. Curvature at a joint is taken from
/// the following segment.
inline std::vector<CenterlineSample> sample_centerline(const Road& road, double ds) {
  if (!(ds > 0.0)) {
    throw InvalidArgumentError("sample_centerline: ds must be > 0");
  }
  const double total = road.length();
  std::vector<CenterlineSample> out;
  const auto n_steps = static_cast<size_t>(std::floor(total / ds + 1e-9));
  out.reserve(n_steps + 2);
  for (size_t i = 0; i <= n_steps; ++i) {
    const double s = std::min(static_cast<double>(i) * ds, total);
    out.push_back({s, road.point_at(s), road.curvature_at(s)});
  }
  if (total - out.back().s > 1e-9) {
    out.push_back({total, road.point_at(total), road.curvature_at(total)});
  }
  return out;
}

enum class LaneSide { kLeft, kRight };

inline int lane_id(LaneSide side) { return side == LaneSide::kLeft ? 1 : -1; }

struct LaneBoundaries {
  std::vector<Vec2> inner;  // the road reference line
  std::vector<Vec2> outer;  // offset by +/- lane_width
};

/// Boundary polylines of one driving lane. The inner boundary is the road
/// reference line; the outer one is offset laterally by the lane width.
/// Throws DegenerateGeometryError when the offset of an arc collapses
/// (lane wider than the arc radius on the inside of the turn).
inline LaneBoundaries lane_boundaries(const Road& road, LaneSide side, double ds) {
  if (!(ds > 0.0)) {
    throw InvalidArgumentError("lane_boundaries: ds must be > 0");
  }
  const double off = side == LaneSide::kLeft ? road.lane_width : -road.lane_width;
  for (const auto& seg : road.segments) {
    if (seg.kind == GeomKind::kArc && 1.0 - off * seg.curvature <= 0.0) {
      throw DegenerateGeometryError("road " + road.id + ": lane offset exceeds arc radius");
    }
  }
  const auto samples = sample_centerline(road, ds);
  LaneBoundaries b;
  b.inner.reserve(samples.size());
  b.outer.reserve(samples.size());
  for (const auto& c : samples) {
    b.inner.push_back(c.pose.position());
    b.outer.push_back(offset_point(c.pose, off));
  }
  return b;
}

struct Violation {
  std::string element_id;
  std::string rule;
  std::string detail;
};

namespace detail {

inline void check_symmetric_link(const RoadNetwork& net, const Road& road, const RoadLink& link,
                                 ContactPoint own_end, std::vector<Violation>& out) {
  if (link.type == LinkType::kJunction) {
    if (net.find_junction(link.id) == nullptr) {
      out.push_back({road.id, "dangling-reference", "linked junction " + link.id + " not found"});
    }
    return;
  }
  const Road* other = net.find_road(link.id);
  if (other == nullptr) {
    out.push_back({road.id, "dangling-reference", "linked road " + link.id + " not found"});
    return;
  }
  if (road.is_connecting()) {
    // Connector links attach to arm roads; the arm points back at the junction.
    const auto& back = link.contact == ContactPoint::kEnd ? other->successor : other->predecessor;
    if (!back || back->type != LinkType::kJunction || back->id != road.junction) {
      out.push_back({road.id, "asymmetric-link",
                     "road " + other->id + " does not link junction " + road.junction + " at its " +
                         to_string(link.contact)});
    }
    return;
  }
  if (other->is_connecting()) {
    return;  // arm-side view of a junction link; checked from the connector
  }
  const auto& back = link.contact == ContactPoint::kEnd ? other->successor : other->predecessor;
  if (!back || back->type != LinkType::kRoad || back->id != road.id ||
      back->contact != own_end) {
    out.push_back({road.id, "asymmetric-link",
                   "road " + other->id + " does not link back at its " + to_string(link.contact)});
  }
}

inline double pose_gap(const Pose2d& a, const Pose2d& b) {
  return distance(a.position(), b.position());
}

}  // namespace detail

/// Structural and geometric validation. Returns the list of violations; an
/// empty list means all invariants hold. Pure: never throws, never mutates.
inline std::vector<Violation> validate_network(const RoadNetwork& net, double pose_tol = 1e-9) {
  std::vector<Violation> out;
  const double junction_tol = 1e-6;

  for (size_t i = 0; i < net.roads.size(); ++i) {
    for (size_t j = i + 1; j < net.roads.size(); ++j) {
      if (net.roads[i].id == net.roads[j].id) {
        out.push_back({net.roads[i].id, "duplicate-road-id", ""});
      }
    }
  }

  for (const auto& road : net.roads) {
    if (road.segments.empty()) {
      out.push_back({road.id, "empty-road", "road has no geometry"});
      continue;
    }
    if (!(road.lane_width > 0.0)) {
      out.push_back({road.id, "invalid-lane-width", ""});
    }
    for (size_t i = 0; i < road.segments.size(); ++i) {
      if (!segment_valid(road.segments[i])) {
        out.push_back({road.id, "invalid-segment", "segment " + std::to_string(i)});
      }
      if (i > 0) {
        const Pose2d prev_end = segment_end_pose(road.segments[i - 1]);
        const Pose2d start = road.segments[i].start;
        const double gap = detail::pose_gap(prev_end, start);
        if (gap > pose_tol) {
          out.push_back({road.id, "g0-continuity",
                         "gap " + std::to_string(gap) + " m before segment " + std::to_string(i)});
        }
        const double dh = std::abs(normalize_angle(start.heading - prev_end.heading));
        if (dh > pose_tol) {
          out.push_back({road.id, "g1-continuity",
                         "heading step " + std::to_string(dh) + " rad before segment " +
                             std::to_string(i)});
        }
      }
    }
    if (road.predecessor) {
      detail::check_symmetric_link(net, road, *road.predecessor, ContactPoint::kStart, out);
    }
    if (road.successor) {
      detail::check_symmetric_link(net, road, *road.successor, ContactPoint::kEnd, out);
    }
    if (road.is_connecting() && net.find_junction(road.junction) == nullptr) {
      out.push_back({road.id, "dangling-reference", "junction " + road.junction + " not found"});
    }
  }

  for (const auto& junction : net.junctions) {
    for (const auto& id : junction.incoming_road_ids) {
      if (net.find_road(id) == nullptr) {
        out.push_back({junction.id, "dangling-reference", "incoming road " + id + " not found"});
      }
    }
    for (const auto& conn : junction.connections) {
      const Road* incoming = net.find_road(conn.incoming_road);
      const Road* connecting = net.find_road(conn.connecting_road);
      if (incoming == nullptr || connecting == nullptr) {
        out.push_back({junction.id, "dangling-reference",
                       "connection " + conn.id + " references a missing road"});
        continue;
      }
      if (connecting->junction != junction.id) {
        out.push_back({junction.id, "junction-membership",
                       "connecting road " + connecting->id + " does not belong to this junction"});
      }
      if (!connecting->predecessor || connecting->predecessor->id != conn.incoming_road) {
        out.push_back({junction.id, "connection-link",
                       "connection " + conn.id + " incoming road disagrees with connector link"});
        continue;
      }
      // Connector endpoints must land on the linked arm reference lines.
      const auto check_contact = [&](const RoadLink& link, const Pose2d& connector_pose,
                                     bool at_start) {
        const Road* arm = net.find_road(link.id);
        if (arm == nullptr || connecting->segments.empty() || arm->segments.empty()) {
          return;
        }
        const Pose2d arm_pose = arm->contact_pose(link.contact);
        const double gap = detail::pose_gap(arm_pose, connector_pose);
        if (gap > junction_tol) {
          out.push_back({junction.id, "connector-endpoint",
                         "connector " + connecting->id + (at_start ? " start" : " end") +
                             " is " + std::to_string(gap) + " m off road " + arm->id});
        }
        // Tangency: connector heading matches the direction of travel on the arm.
        const bool leaving = at_start;
        const bool forward_lane =
            leaving ? link.contact == ContactPoint::kEnd : link.contact == ContactPoint::kStart;
        const double travel = forward_lane ? arm_pose.heading : arm_pose.heading + kPi;
        const double dh = std::abs(normalize_angle(connector_pose.heading - travel));
        if (dh > junction_tol) {
          out.push_back({junction.id, "connector-tangency",
                         "connector " + connecting->id + (at_start ? " start" : " end") +
                             " heading off by " + std::to_string(dh) + " rad"});
        }
      };
      if (connecting->predecessor && !connecting->segments.empty()) {
        check_contact(*connecting->predecessor, connecting->start_pose(), true);
      }
      if (connecting->successor && connecting->successor->type == LinkType::kRoad &&
          !connecting->segments.empty()) {
        check_contact(*connecting->successor, connecting->end_pose(), false);
      }
    }
  }
  return out;
}

}  // namespace scenvar
