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
// Lanelet-style map: nodes / linestrings / lanelets in a local metric frame,
// serialized as an OSM XML subset. One lanelet per driving direction of each
// road, one per junction connector. Physically connected lanelets share their
// boundary endpoint nodes, so the routing graph falls out of node identity.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "scenvar/road_network.hpp"
#include "scenvar/strings.hpp"
#include "scenvar/xml.hpp"

namespace scenvar {

struct LaneletNode {
  int64_t id{0};
  double x{0.0};
  double y{0.0};
};

struct LineString {
  int64_t id{0};
  std::vector<int64_t> nodes;
};

struct Lanelet {
  int64_t id{0};
  int64_t left{0};   // linestring on the driver's left
  int64_t right{0};  // linestring on the driver's right
  std::map<std::string, std::string> attributes;
};

struct LaneletMap {
  std::map<int64_t, LaneletNode> nodes;
  std::map<int64_t, LineString> linestrings;
  std::map<int64_t, Lanelet> lanelets;

  const LineString& linestring(int64_t id) const {
    const auto it = linestrings.find(id);
    if (it == linestrings.end()) {
      throw StructuralError("linestring " + std::to_string(id) + " not found");
    }
    return it->second;
  }

  Vec2 node_pos(int64_t id) const {
    const auto it = nodes.find(id);
    if (it == nodes.end()) {
      throw StructuralError("node " + std::to_string(id) + " not found");
    }
    return {it->second.x, it->second.y};
  }
};

/// Midpoints of the paired left/right boundary samples.
inline std::vector<Vec2> lanelet_centerline(const LaneletMap& map, const Lanelet& ll) {
  const LineString& left = map.linestring(ll.left);
  const LineString& right = map.linestring(ll.right);
  if (left.nodes.size() != right.nodes.size()) {
    throw StructuralError("lanelet " + std::to_string(ll.id) + " boundary point counts differ");
  }
  std::vector<Vec2> center;
  center.reserve(left.nodes.size());
  for (size_t i = 0; i < left.nodes.size(); ++i) {
    center.push_back(0.5 * (map.node_pos(left.nodes[i]) + map.node_pos(right.nodes[i])));
  }
  return center;
}

inline double polyline_length(const std::vector<Vec2>& pts) {
  double total = 0.0;
  for (size_t i = 1; i < pts.size(); ++i) {
    total += distance(pts[i - 1], pts[i]);
  }
  return total;
}

inline double lanelet_length(const LaneletMap& map, const Lanelet& ll) {
  return polyline_length(lanelet_centerline(map, ll));
}

/// Lanelet carrying the given (road, lane) pair, 0 when absent.
inline int64_t find_lanelet(const LaneletMap& map, const std::string& road_id, int lane) {
  for (const auto& [id, ll] : map.lanelets) {
    const auto road_it = ll.attributes.find("road_id");
    const auto lane_it = ll.attributes.find("lane_id");
    if (road_it != ll.attributes.end() && lane_it != ll.attributes.end() &&
        road_it->second == road_id && lane_it->second == std::to_string(lane)) {
      return id;
    }
  }
  return 0;
}

struct LaneletBuildOptions {
  double ds_road{1.0};
  double ds_connector{0.5};  // junction connectors curve harder
};

namespace detail {

class NodeUnion {
public:
  int64_t find(int64_t id) {
    auto it = parent_.find(id);
    if (it == parent_.end() || it->second == id) {
      return id;
    }
    const int64_t root = find(it->second);
    it->second = root;
    return root;
  }

  void unite(int64_t a, int64_t b) {
    a = find(a);
    b = find(b);
    if (a == b) {
      return;
    }
    if (a > b) {
      std::swap(a, b);
    }
    parent_[b] = a;  // keep the smaller id
  }

private:
  std::map<int64_t, int64_t> parent_;
};

struct RoadLanelets {
  int64_t forward{0};   // lane -1
  int64_t backward{0};  // lane +1, absent on connectors
};

}  // namespace detail

/// Converts a road network to a lanelet map. Boundary polylines are sampled
/// from the lane geometry; endpoint nodes of linked roads are merged so the
/// routing graph arises exactly at physical connections.
inline LaneletMap to_lanelets(const RoadNetwork& net, const LaneletBuildOptions& options = {}) {
  if (!(options.ds_road > 0.0) || !(options.ds_connector > 0.0)) {
    throw InvalidArgumentError("to_lanelets: sampling step must be > 0");
  }
  LaneletMap map;
  int64_t next_node = 1;

  struct Polys {
    std::vector<int64_t> center, right, left;
  };
  std::map<std::string, Polys> road_polys;

  for (const auto& road : net.roads) {
    const double w = road.lane_width;
    for (const auto& seg : road.segments) {
      const bool right_ok = 1.0 + w * seg.curvature > 0.0;
      const bool left_ok = road.is_connecting() || 1.0 - w * seg.curvature > 0.0;
      if (!right_ok || !left_ok) {
        throw DegenerateGeometryError("to_lanelets: road " + road.id +
                                      " has a lane boundary collapsing on an arc");
      }
    }
    const double ds = road.is_connecting() ? options.ds_connector : options.ds_road;
    const auto samples = sample_centerline(road, ds);
    Polys polys;
    for (const auto& c : samples) {
      const auto add_node = [&](Vec2 p) {
        map.nodes[next_node] = LaneletNode{next_node, p.x, p.y};
        return next_node++;
      };
      polys.center.push_back(add_node(c.pose.position()));
      polys.right.push_back(add_node(offset_point(c.pose, -w)));
      if (!road.is_connecting()) {
        polys.left.push_back(add_node(offset_point(c.pose, w)));
      }
    }
    road_polys[road.id] = std::move(polys);
  }

  int64_t next_ls = next_node;
  int64_t next_lanelet = 0;  // assigned after linestrings
  std::map<std::string, detail::RoadLanelets> by_road;

  std::vector<std::pair<const Road*, bool>> lanelet_order;  // (road, forward?)
  for (const auto& road : net.roads) {
    lanelet_order.emplace_back(&road, true);
    if (!road.is_connecting()) {
      lanelet_order.emplace_back(&road, false);
    }
  }
  next_lanelet = next_ls + static_cast<int64_t>(2 * lanelet_order.size());

  for (const auto& [road, forward] : lanelet_order) {
    const Polys& polys = road_polys[road->id];
    LineString left_ls{next_ls++, {}};
    LineString right_ls{next_ls++, {}};
    if (forward) {
      left_ls.nodes = polys.center;
      right_ls.nodes = polys.right;
    } else {
      left_ls.nodes.assign(polys.center.rbegin(), polys.center.rend());
      right_ls.nodes.assign(polys.left.rbegin(), polys.left.rend());
    }
    Lanelet ll;
    ll.id = next_lanelet++;
    ll.left = left_ls.id;
    ll.right = right_ls.id;
    ll.attributes = {{"type", "lanelet"},
                     {"subtype", "road"},
                     {"one_way", "yes"},
                     {"road_id", road->id},
                     {"lane_id", forward ? "-1" : "1"}};
    if (road->is_connecting()) {
      ll.attributes["junction"] = road->junction;
    }
    map.linestrings[left_ls.id] = std::move(left_ls);
    map.linestrings[right_ls.id] = std::move(right_ls);
    if (forward) {
      by_road[road->id].forward = ll.id;
    } else {
      by_road[road->id].backward = ll.id;
    }
    map.lanelets[ll.id] = std::move(ll);
  }

  // Collect the physical road-to-road joints once each.
  using End = std::pair<std::string, ContactPoint>;
  std::vector<std::pair<End, End>> joints;
  const auto add_joint = [&](End a, End b) {
    if (b < a) {
      std::swap(a, b);
    }
    for (const auto& j : joints) {
      if (j.first == a && j.second == b) {
        return;
      }
    }
    joints.emplace_back(std::move(a), std::move(b));
  };
  for (const auto& road : net.roads) {
    if (road.predecessor && road.predecessor->type == LinkType::kRoad) {
      add_joint({road.predecessor->id, road.predecessor->contact},
                {road.id, ContactPoint::kStart});
    }
    if (road.successor && road.successor->type == LinkType::kRoad) {
      add_joint({road.id, ContactPoint::kEnd}, {road.successor->id, road.successor->contact});
    }
  }

  // Traffic leaving road R across the given end / entering it there.
  const auto leaving = [&](const End& e) {
    return e.second == ContactPoint::kEnd ? by_road[e.first].forward : by_road[e.first].backward;
  };
  const auto entering = [&](const End& e) {
    return e.second == ContactPoint::kStart ? by_road[e.first].forward : by_road[e.first].backward;
  };

  detail::NodeUnion merge;
  const auto unite_checked = [&](int64_t a, int64_t b) {
    if (distance(map.node_pos(a), map.node_pos(b)) > 1e-6) {
      throw DegenerateGeometryError("to_lanelets: linked boundaries do not coincide");
    }
    merge.unite(a, b);
  };
  for (const auto& [a, b] : joints) {
    for (const auto& [from_end, to_end] : {std::pair{a, b}, std::pair{b, a}}) {
      const int64_t from_ll = leaving(from_end);
      const int64_t to_ll = entering(to_end);
      if (from_ll == 0 || to_ll == 0) {
        continue;
      }
      const Lanelet& from = map.lanelets[from_ll];
      const Lanelet& to = map.lanelets[to_ll];
      unite_checked(map.linestring(from.left).nodes.back(),
                    map.linestring(to.left).nodes.front());
      unite_checked(map.linestring(from.right).nodes.back(),
                    map.linestring(to.right).nodes.front());
    }
  }

  std::map<int64_t, bool> referenced;
  for (auto& [id, ls] : map.linestrings) {
    for (auto& node : ls.nodes) {
      node = merge.find(node);
      referenced[node] = true;
    }
  }
  for (auto it = map.nodes.begin(); it != map.nodes.end();) {
    it = referenced.count(it->first) > 0 ? std::next(it) : map.nodes.erase(it);
  }
  return map;
}

inline LaneletMap to_lanelets(const RoadNetwork& net, double ds) {
  return to_lanelets(net, LaneletBuildOptions{ds, 0.5 * ds});
}

inline constexpr double kMetersPerDegree = 111320.0;

/// Equirectangular inverse: local meters to WGS84-ish degrees around origin.
inline std::string emit_osm(const LaneletMap& map, double origin_lat = 49.0,
                            double origin_lon = 8.0) {
  if (!std::isfinite(origin_lat) || !std::isfinite(origin_lon)) {
    throw InvalidArgumentError("emit_osm: origin must be finite");
  }
  const double lon_scale = kMetersPerDegree * std::cos(origin_lat * kPi / 180.0);
  XmlNode root;
  root.name = "osm";
  root.set_attr("version", "0.6");
  root.set_attr("generator", "scenvar");
  for (const auto& [id, node] : map.nodes) {
    XmlNode& n = root.add_child("node");
    n.set_attr("id", std::to_string(id));
    n.set_attr("lat", fmt17(origin_lat + node.y / kMetersPerDegree));
    n.set_attr("lon", fmt17(origin_lon + node.x / lon_scale));
  }
  for (const auto& [id, ls] : map.linestrings) {
    XmlNode& w = root.add_child("way");
    w.set_attr("id", std::to_string(id));
    for (const int64_t node : ls.nodes) {
      w.add_child("nd").set_attr("ref", std::to_string(node));
    }
  }
  for (const auto& [id, ll] : map.lanelets) {
    XmlNode& r = root.add_child("relation");
    r.set_attr("id", std::to_string(id));
    const auto member = [&](int64_t ref, const char* role) {
      XmlNode& m = r.add_child("member");
      m.set_attr("type", "way");
      m.set_attr("ref", std::to_string(ref));
      m.set_attr("role", role);
    };
    member(ll.left, "left");
    member(ll.right, "right");
    for (const auto& [k, v] : ll.attributes) {
      XmlNode& t = r.add_child("tag");
      t.set_attr("k", k);
      t.set_attr("v", v);
    }
  }
  return xml_serialize(root);
}

inline LaneletMap parse_osm(std::string_view text, double origin_lat = 49.0,
                            double origin_lon = 8.0) {
  const XmlNode root = xml_parse(text);
  if (root.name != "osm") {
    throw StructuralError("root element is <" + root.name + ">, expected <osm>");
  }
  const double lon_scale = kMetersPerDegree * std::cos(origin_lat * kPi / 180.0);
  LaneletMap map;
  for (const XmlNode* n : root.children_named("node")) {
    LaneletNode node;
    node.id = std::strtoll(n->require_attr("id").c_str(), nullptr, 10);
    node.y = (n->attr_double("lat") - origin_lat) * kMetersPerDegree;
    node.x = (n->attr_double("lon") - origin_lon) * lon_scale;
    map.nodes[node.id] = node;
  }
  for (const XmlNode* w : root.children_named("way")) {
    LineString ls;
    ls.id = std::strtoll(w->require_attr("id").c_str(), nullptr, 10);
    for (const XmlNode* nd : w->children_named("nd")) {
      const int64_t ref = std::strtoll(nd->require_attr("ref").c_str(), nullptr, 10);
      if (map.nodes.count(ref) == 0) {
        throw StructuralError("way " + std::to_string(ls.id) + " references missing node " +
                              std::to_string(ref));
      }
      ls.nodes.push_back(ref);
    }
    map.linestrings[ls.id] = std::move(ls);
  }
  for (const XmlNode* r : root.children_named("relation")) {
    Lanelet ll;
    ll.id = std::strtoll(r->require_attr("id").c_str(), nullptr, 10);
    for (const XmlNode* m : r->children_named("member")) {
      const std::string role = m->require_attr("role");
      const int64_t ref = std::strtoll(m->require_attr("ref").c_str(), nullptr, 10);
      if (map.linestrings.count(ref) == 0) {
        throw StructuralError("relation " + std::to_string(ll.id) +
                              " references missing way " + std::to_string(ref));
      }
      if (role == "left") {
        ll.left = ref;
      } else if (role == "right") {
        ll.right = ref;
      }
    }
    if (ll.left == 0 || ll.right == 0) {
      throw StructuralError("relation " + std::to_string(ll.id) +
                            " lacks a left or right boundary member");
    }
    for (const XmlNode* t : r->children_named("tag")) {
      ll.attributes[t->require_attr("k")] = t->require_attr("v");
    }
    map.lanelets[ll.id] = std::move(ll);
  }
  return map;
}

/// Directed lane-level routing graph. An edge runs from lanelet a to lanelet b
/// exactly when a's end boundary nodes are b's start boundary nodes.
struct RouteGraph {
  std::vector<int64_t> vertices;                       // ascending lanelet ids
  std::map<int64_t, std::vector<int64_t>> successors;  // ascending per vertex
  std::map<int64_t, double> length;                    // centerline length [m]
};

inline RouteGraph build_route_graph(const LaneletMap& map) {
  RouteGraph graph;
  std::map<std::pair<int64_t, int64_t>, std::vector<int64_t>> by_start;
  for (const auto& [id, ll] : map.lanelets) {
    graph.vertices.push_back(id);
    graph.length[id] = lanelet_length(map, ll);
    graph.successors[id] = {};
    by_start[{map.linestring(ll.left).nodes.front(), map.linestring(ll.right).nodes.front()}]
        .push_back(id);
  }
  for (const auto& [id, ll] : map.lanelets) {
    const std::pair<int64_t, int64_t> end{map.linestring(ll.left).nodes.back(),
                                          map.linestring(ll.right).nodes.back()};
    const auto it = by_start.find(end);
    if (it == by_start.end()) {
      continue;
    }
    for (const int64_t succ : it->second) {
      if (succ != id) {
        graph.successors[id].push_back(succ);
      }
    }
  }
  return graph;
}

}  // namespace scenvar
