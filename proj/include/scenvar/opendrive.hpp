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
//
// OpenDRIVE 1.6 subset: line/arc planView records, one lane section with
// constant-width driving lanes (+1/0/-1, -1 only inside junctions), road
// links and junction connections. Elevation, signals, objects and the other
// geometry primitives are outside the subset.

#pragma once

#include <string>
#include <vector>

#include "scenvar/road_network.hpp"
#include "scenvar/strings.hpp"
#include "scenvar/xml.hpp"

namespace scenvar {

inline constexpr const char* kOpenDriveDate = "2026-01-01T00:00:00";

class InvalidNetworkError : public Error {
public:
  using Error::Error;
};

/// Serializes a validated network. Emission is deterministic: element order
/// follows the network's own ordering and numbers carry 17 significant digits.
inline std::string emit_opendrive(const RoadNetwork& net, const std::string& name) {
  const auto violations = validate_network(net);
  if (!violations.empty()) {
    std::string msg = "refusing to emit invalid network:";
    for (const auto& v : violations) {
      msg += "\n  [" + v.element_id + "] " + v.rule + (v.detail.empty() ? "" : ": " + v.detail);
    }
    throw InvalidNetworkError(msg);
  }

  XmlNode root;
  root.name = "OpenDRIVE";
  XmlNode& header = root.add_child("header");
  header.set_attr("revMajor", "1");
  header.set_attr("revMinor", "6");
  header.set_attr("name", name);
  header.set_attr("version", "1.00");
  header.set_attr("date", kOpenDriveDate);
  header.add_child("geoReference");

  const auto link_node = [](XmlNode& parent, const char* tag, const RoadLink& link) {
    XmlNode& n = parent.add_child(tag);
    n.set_attr("elementType", link.type == LinkType::kRoad ? "road" : "junction");
    n.set_attr("elementId", link.id);
    if (link.type == LinkType::kRoad) {
      n.set_attr("contactPoint", to_string(link.contact));
    }
  };

  for (const auto& road : net.roads) {
    XmlNode& r = root.add_child("road");
    r.set_attr("name", road.name);
    r.set_attr("length", fmt17(road.length()));
    r.set_attr("id", road.id);
    r.set_attr("junction", road.is_connecting() ? road.junction : "-1");
    if (road.predecessor || road.successor) {
      XmlNode& link = r.add_child("link");
      if (road.predecessor) {
        link_node(link, "predecessor", *road.predecessor);
      }
      if (road.successor) {
        link_node(link, "successor", *road.successor);
      }
    }
    XmlNode& plan = r.add_child("planView");
    double s = 0.0;
    for (const auto& seg : road.segments) {
      XmlNode& g = plan.add_child("geometry");
      g.set_attr("s", fmt17(s));
      g.set_attr("x", fmt17(seg.start.x));
      g.set_attr("y", fmt17(seg.start.y));
      g.set_attr("hdg", fmt17(seg.start.heading));
      g.set_attr("length", fmt17(seg.length));
      if (seg.kind == GeomKind::kLine) {
        g.add_child("line");
      } else {
        g.add_child("arc").set_attr("curvature", fmt17(seg.curvature));
      }
      s += seg.length;
    }

    XmlNode& lanes = r.add_child("lanes");
    XmlNode& section = lanes.add_child("laneSection");
    section.set_attr("s", "0");
    const auto lane_node = [&](XmlNode& side, int id, const char* type) {
      XmlNode& lane = side.add_child("lane");
      lane.set_attr("id", std::to_string(id));
      lane.set_attr("type", type);
      lane.set_attr("level", "false");
      if (id != 0) {
        XmlNode& width = lane.add_child("width");
        width.set_attr("sOffset", "0");
        width.set_attr("a", fmt17(road.lane_width));
        width.set_attr("b", "0");
        width.set_attr("c", "0");
        width.set_attr("d", "0");
      }
      return &lane;
    };
    if (!road.is_connecting()) {
      lane_node(section.add_child("left"), 1, "driving");
    }
    lane_node(section.add_child("center"), 0, "none");
    lane_node(section.add_child("right"), -1, "driving");
  }

  for (const auto& junction : net.junctions) {
    XmlNode& j = root.add_child("junction");
    j.set_attr("id", junction.id);
    j.set_attr("name", junction.name);
    for (const auto& conn : junction.connections) {
      XmlNode& c = j.add_child("connection");
      c.set_attr("id", conn.id);
      c.set_attr("incomingRoad", conn.incoming_road);
      c.set_attr("connectingRoad", conn.connecting_road);
      c.set_attr("contactPoint", to_string(conn.contact));
      XmlNode& l = c.add_child("laneLink");
      l.set_attr("from", std::to_string(conn.lane_link.from));
      l.set_attr("to", std::to_string(conn.lane_link.to));
    }
  }
  return xml_serialize(root);
}

struct OpenDriveParseOptions {
  bool strict{false};  // strict: unknown geometry kinds abort instead of warn
};

struct OpenDriveParseResult {
  RoadNetwork network;
  std::vector<std::string> warnings;
};

namespace detail {

inline ContactPoint contact_from_string(const std::string& s) {
  if (s == "start") return ContactPoint::kStart;
  if (s == "end") return ContactPoint::kEnd;
  throw StructuralError("unknown contactPoint '" + s + "'");
}

inline RoadLink parse_road_link(const XmlNode& n) {
  RoadLink link;
  const std::string type = n.require_attr("elementType");
  if (type == "road") {
    link.type = LinkType::kRoad;
    link.contact = contact_from_string(n.attr_or("contactPoint", "start"));
  } else if (type == "junction") {
    link.type = LinkType::kJunction;
  } else {
    throw StructuralError("unknown link elementType '" + type + "'");
  }
  link.id = n.require_attr("elementId");
  return link;
}

}  // namespace detail

inline OpenDriveParseResult parse_opendrive(std::string_view text,
                                            const OpenDriveParseOptions& options = {}) {
  const XmlNode root = xml_parse(text);
  if (root.name != "OpenDRIVE") {
    throw StructuralError("root element is <" + root.name + ">, expected <OpenDRIVE>");
  }
  OpenDriveParseResult result;
  result.network.name = root.child("header") != nullptr
                            ? root.require_child("header").attr_or("name", "")
                            : "";

  for (const XmlNode* r : root.children_named("road")) {
    Road road;
    road.id = r->require_attr("id");
    road.name = r->attr_or("name", "");
    const std::string junction = r->attr_or("junction", "-1");
    road.junction = junction == "-1" ? "" : junction;

    if (const XmlNode* link = r->child("link")) {
      if (const XmlNode* pre = link->child("predecessor")) {
        road.predecessor = detail::parse_road_link(*pre);
      }
      if (const XmlNode* suc = link->child("successor")) {
        road.successor = detail::parse_road_link(*suc);
      }
    }

    const XmlNode& plan = r->require_child("planView");
    for (const XmlNode* g : plan.children_named("geometry")) {
      const Pose2d start =
          make_pose(g->attr_double("x"), g->attr_double("y"), g->attr_double("hdg"));
      const double length = g->attr_double("length");
      if (g->child("line") != nullptr) {
        road.segments.push_back(make_line(start, length));
      } else if (const XmlNode* arc = g->child("arc")) {
        road.segments.push_back(make_arc(start, length, arc->attr_double("curvature")));
      } else {
        const std::string kind = g->children.empty() ? "<empty>" : g->children.front().name;
        if (options.strict) {
          throw UnsupportedElementError("road " + road.id + ": unsupported geometry <" + kind +
                                        ">");
        }
        result.warnings.push_back("road " + road.id + ": skipped unsupported geometry <" + kind +
                                  ">");
      }
    }

    for (const char* skipped : {"elevationProfile", "lateralProfile", "objects", "signals"}) {
      if (r->child(skipped) != nullptr) {
        result.warnings.push_back("road " + road.id + ": skipped <" + std::string{skipped} + ">");
      }
    }

    const XmlNode& lanes = r->require_child("lanes");
    const XmlNode& section = lanes.require_child("laneSection");
    bool width_found = false;
    for (const char* side : {"left", "right"}) {
      const XmlNode* side_node = section.child(side);
      if (side_node == nullptr) {
        continue;
      }
      for (const XmlNode* lane : side_node->children_named("lane")) {
        const int id = lane->attr_int("id");
        if (id != 1 && id != -1) {
          result.warnings.push_back("road " + road.id + ": skipped lane " + std::to_string(id) +
                                    " outside the single-lane subset");
          continue;
        }
        if (const XmlNode* width = lane->child("width")) {
          road.lane_width = width->attr_double("a");
          width_found = true;
        }
      }
    }
    if (!width_found) {
      throw StructuralError("road " + road.id + ": no driving lane width found");
    }
    result.network.roads.push_back(std::move(road));
  }

  for (const XmlNode* j : root.children_named("junction")) {
    Junction junction;
    junction.id = j->require_attr("id");
    junction.name = j->attr_or("name", "");
    for (const XmlNode* c : j->children_named("connection")) {
      JunctionConnection conn;
      conn.id = c->require_attr("id");
      conn.incoming_road = c->require_attr("incomingRoad");
      conn.connecting_road = c->require_attr("connectingRoad");
      conn.contact = detail::contact_from_string(c->attr_or("contactPoint", "start"));
      if (const XmlNode* l = c->child("laneLink")) {
        conn.lane_link.from = l->attr_int("from");
        conn.lane_link.to = l->attr_int("to");
      }
      junction.connections.push_back(std::move(conn));
    }
    result.network.junctions.push_back(std::move(junction));
  }

  // Incoming roads are implied by the connections; rebuild the lists.
  for (auto& junction : result.network.junctions) {
    for (const auto& conn : junction.connections) {
      bool known = false;
      for (const auto& id : junction.incoming_road_ids) {
        known = known || id == conn.incoming_road;
      }
      if (!known) {
        junction.incoming_road_ids.push_back(conn.incoming_road);
      }
    }
  }
  return result;
}

}  // namespace scenvar
