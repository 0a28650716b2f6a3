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

#include <limits>
#include <optional>
#include <queue>
#include <vector>

#include "scenvar/lanelet.hpp"

namespace scenvar {

/// Shortest lanelet sequence by total centerline length (every traversed
/// lanelet counts, including start and goal). Among equal-cost routes the
/// lexicographically smallest id sequence wins. nullopt when unreachable.
inline std::optional<std::vector<int64_t>> shortest_route(const RouteGraph& graph, int64_t start,
                                                          int64_t goal) {
  if (graph.length.count(start) == 0 || graph.length.count(goal) == 0) {
    return std::nullopt;
  }
  if (start == goal) {
    return std::vector<int64_t>{start};
  }

  constexpr double kInf = std::numeric_limits<double>::infinity();
  const auto dijkstra = [&](int64_t source, bool reverse) {
    std::map<int64_t, std::vector<int64_t>> reversed;
    if (reverse) {
      for (const auto& [u, succs] : graph.successors) {
        for (const int64_t v : succs) {
          reversed[v].push_back(u);
        }
      }
    }
    const auto& adjacency = reverse ? reversed : graph.successors;
    std::map<int64_t, double> dist;
    for (const int64_t v : graph.vertices) {
      dist[v] = kInf;
    }
    dist[source] = graph.length.at(source);
    using Item = std::pair<double, int64_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    queue.push({dist[source], source});
    while (!queue.empty()) {
      const auto [d, u] = queue.top();
      queue.pop();
      if (d > dist[u]) {
        continue;
      }
      const auto it = adjacency.find(u);
      if (it == adjacency.end()) {
        continue;
      }
      for (const int64_t v : it->second) {
        const double nd = d + graph.length.at(v);
        if (nd < dist[v]) {
          dist[v] = nd;
          queue.push({nd, v});
        }
      }
    }
    return dist;
  };

  const auto dist_from = dijkstra(start, false);
  if (dist_from.at(goal) == kInf) {
    return std::nullopt;
  }
  const auto dist_to = dijkstra(goal, true);
  const double total = dist_from.at(goal);
  const double tol = 1e-9 * std::max(1.0, total);

  // Walk tight edges, at each step taking the smallest id that still lies on
  // some shortest path; this yields the lexicographically smallest route.
  std::vector<int64_t> route{start};
  int64_t current = start;
  while (current != goal) {
    int64_t best = -1;
    for (const int64_t v : graph.successors.at(current)) {
      const bool tight = std::abs(dist_from.at(current) + graph.length.at(v) - dist_from.at(v)) <=
                         tol;
      const bool on_path =
          std::abs(dist_from.at(v) + dist_to.at(v) - graph.length.at(v) - total) <= tol;
      if (tight && on_path && (best < 0 || v < best)) {
        best = v;
      }
    }
    if (best < 0) {
      return std::nullopt;  // inconsistent graph; cannot happen on finite costs
    }
    route.push_back(best);
    current = best;
  }
  return route;
}

struct PathPoint {
  double x{0.0};
  double y{0.0};
  double heading{0.0};
  double s{0.0};
  double curvature{0.0};
  bool in_junction{false};  // point lies on a junction connector lanelet
};

namespace detail {

/// Signed circumcircle curvature through three points (positive = left turn).
inline double three_point_curvature(Vec2 a, Vec2 b, Vec2 c) {
  const Vec2 ab = b - a;
  const Vec2 bc = c - b;
  const double denom = norm(ab) * norm(bc) * norm(c - a);
  if (denom < 1e-12) {
    return 0.0;
  }
  return 2.0 * cross(ab, bc) / denom;
}

}  // namespace detail

/// Concatenates lanelet centerlines into one polyline, resampled at a fixed
/// arc-length step, with per-point heading and curvature. The curvature
/// channel is boxcar-smoothed over `curvature_smoothing` meters; the road
/// primitives have curvature steps at segment joints and downstream consumers
/// (speed planning, lateral-jerk evaluation) want a finite-width transition.
inline std::vector<PathPoint> stitch_centerline(const LaneletMap& map,
                                                const std::vector<int64_t>& lanelets,
                                                double resample_ds = 0.5,
                                                double curvature_smoothing = 4.0) {
  std::vector<Vec2> raw;
  std::vector<bool> raw_junction;
  for (const int64_t id : lanelets) {
    const auto it = map.lanelets.find(id);
    if (it == map.lanelets.end()) {
      throw StructuralError("stitch_centerline: lanelet " + std::to_string(id) + " not found");
    }
    const bool in_junction = it->second.attributes.count("junction") > 0;
    const auto center = lanelet_centerline(map, it->second);
    for (const auto& p : center) {
      if (!raw.empty() && distance(raw.back(), p) < 1e-9) {
        continue;  // shared joint node
      }
      raw.push_back(p);
      raw_junction.push_back(in_junction);
    }
  }
  if (raw.size() < 2) {
    throw InvalidArgumentError("stitch_centerline: need at least two distinct points");
  }

  const size_t n = raw.size();
  std::vector<double> s(n, 0.0);
  for (size_t i = 1; i < n; ++i) {
    s[i] = s[i - 1] + distance(raw[i - 1], raw[i]);
  }
  std::vector<double> heading(n);
  std::vector<double> curvature(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    const Vec2 a = raw[i == 0 ? 0 : i - 1];
    const Vec2 b = raw[i + 1 >= n ? n - 1 : i + 1];
    heading[i] = std::atan2(b.y - a.y, b.x - a.x);
    if (i > 0 && i + 1 < n) {
      curvature[i] = detail::three_point_curvature(raw[i - 1], raw[i], raw[i + 1]);
    }
  }
  if (n > 2) {
    curvature[0] = curvature[1];
    curvature[n - 1] = curvature[n - 2];
  }

  const double total = s.back();
  std::vector<PathPoint> out;
  out.reserve(static_cast<size_t>(total / resample_ds) + 2);
  size_t seg = 0;
  const auto emit = [&](double at) {
    while (seg + 2 < n && s[seg + 1] < at) {
      ++seg;
    }
    const double span = std::max(s[seg + 1] - s[seg], 1e-12);
    const double t = std::clamp((at - s[seg]) / span, 0.0, 1.0);
    PathPoint p;
    p.x = raw[seg].x + t * (raw[seg + 1].x - raw[seg].x);
    p.y = raw[seg].y + t * (raw[seg + 1].y - raw[seg].y);
    p.heading =
        normalize_angle(heading[seg] + t * normalize_angle(heading[seg + 1] - heading[seg]));
    p.curvature = curvature[seg] + t * (curvature[seg + 1] - curvature[seg]);
    p.in_junction = t < 0.5 ? raw_junction[seg] : raw_junction[seg + 1];
    p.s = at;
    out.push_back(p);
  };
  const auto steps = static_cast<size_t>(std::floor(total / resample_ds + 1e-9));
  for (size_t i = 0; i <= steps; ++i) {
    emit(std::min(static_cast<double>(i) * resample_ds, total));
  }
  if (total - out.back().s > 1e-9) {
    emit(total);
  }

  if (curvature_smoothing > resample_ds && out.size() > 2) {
    const auto half = static_cast<size_t>(0.5 * curvature_smoothing / resample_ds);
    std::vector<double> smooth(out.size());
    for (size_t i = 0; i < out.size(); ++i) {
      const size_t lo = i > half ? i - half : 0;
      const size_t hi = std::min(i + half, out.size() - 1);
      double acc = 0.0;
      for (size_t j = lo; j <= hi; ++j) {
        acc += out[j].curvature;
      }
      smooth[i] = acc / static_cast<double>(hi - lo + 1);
    }
    for (size_t i = 0; i < out.size(); ++i) {
      out[i].curvature = smooth[i];
    }
  }
  return out;
}

struct RoutePlan {
  std::vector<int64_t> lanelets;
  std::vector<PathPoint> path;
};

/// Minimal-length route between two lanelets plus its stitched centerline.
/// nullopt when no route exists.
inline std::optional<RoutePlan> plan_route(const RouteGraph& graph, const LaneletMap& map,
                                           int64_t start, int64_t target,
                                           double resample_ds = 0.5) {
  auto seq = shortest_route(graph, start, target);
  if (!seq) {
    return std::nullopt;
  }
  RoutePlan plan;
  plan.lanelets = std::move(*seq);
  plan.path = stitch_centerline(map, plan.lanelets, resample_ds);
  return plan;
}

struct PathProjection {
  size_t index{0};        // segment index (between path[index] and path[index+1])
  double s{0.0};          // arc position of the foot point
  double distance{0.0};   // unsigned distance to the path
  double signed_offset{0.0};  // positive = left of travel direction
};

inline PathProjection project_on_segment(const std::vector<PathPoint>& path, size_t i, double x,
                                         double y) {
  const Vec2 a{path[i].x, path[i].y};
  const Vec2 b{path[i + 1].x, path[i + 1].y};
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  const double t = len2 > 0.0 ? std::clamp(dot(Vec2{x, y} - a, ab) / len2, 0.0, 1.0) : 0.0;
  const Vec2 foot = a + t * ab;
  PathProjection proj;
  proj.index = i;
  proj.s = path[i].s + t * (path[i + 1].s - path[i].s);
  proj.distance = distance({x, y}, foot);
  const double len = std::sqrt(len2);
  proj.signed_offset = len > 0.0 ? cross((1.0 / len) * ab, Vec2{x, y} - foot) : 0.0;
  return proj;
}

/// Projects a point onto the whole path (global scan).
inline PathProjection project_point(const std::vector<PathPoint>& path, double x, double y) {
  PathProjection best = project_on_segment(path, 0, x, y);
  for (size_t i = 1; i + 1 < path.size(); ++i) {
    const PathProjection p = project_on_segment(path, i, x, y);
    if (p.distance < best.distance) {
      best = p;
    }
  }
  return best;
}

/// Sub-path between two arc positions, re-based so s starts at zero.
inline std::vector<PathPoint> trim_path(const std::vector<PathPoint>& path, double s0, double s1) {
  if (!(s1 > s0)) {
    throw InvalidArgumentError("trim_path: empty range");
  }
  const auto interpolate = [&](double at) {
    size_t i = 0;
    while (i + 2 < path.size() && path[i + 1].s < at) {
      ++i;
    }
    const double span = std::max(path[i + 1].s - path[i].s, 1e-12);
    const double t = std::clamp((at - path[i].s) / span, 0.0, 1.0);
    PathPoint p;
    p.x = path[i].x + t * (path[i + 1].x - path[i].x);
    p.y = path[i].y + t * (path[i + 1].y - path[i].y);
    p.heading = normalize_angle(path[i].heading +
                                t * normalize_angle(path[i + 1].heading - path[i].heading));
    p.curvature = path[i].curvature + t * (path[i + 1].curvature - path[i].curvature);
    p.s = at;
    return p;
  };
  std::vector<PathPoint> out;
  out.push_back(interpolate(s0));
  for (const auto& p : path) {
    if (p.s > s0 + 1e-9 && p.s < s1 - 1e-9) {
      out.push_back(p);
    }
  }
  out.push_back(interpolate(s1));
  for (auto& p : out) {
    p.s -= s0;
  }
  return out;
}

}  // namespace scenvar
