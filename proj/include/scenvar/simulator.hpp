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
// Deterministic closed-loop execution: plan a route on the lanelet graph,
// precompute the speed profile, then run pure pursuit + proportional speed
// control through the kinematic bicycle at a fixed step. No wall clock, no
// randomness; rerunning a scenario reproduces the result bit for bit.

#pragma once

#include <charconv>
#include <string>
#include <vector>

#include "scenvar/adf.hpp"
#include "scenvar/openscenario.hpp"
#include "scenvar/scenario.hpp"

namespace scenvar {

enum class SimStatus { kSuccess, kOffRoad, kTimeout, kStalled, kPlanningFailed };

inline const char* to_string(SimStatus s) {
  switch (s) {
    case SimStatus::kSuccess:
      return "success";
    case SimStatus::kOffRoad:
      return "offroad";
    case SimStatus::kTimeout:
      return "timeout";
    case SimStatus::kStalled:
      return "stalled";
    case SimStatus::kPlanningFailed:
      return "planning_failed";
  }
  return "?";
}

struct TrajectorySample {
  double t{0.0};
  double x{0.0};
  double y{0.0};
  double heading{0.0};
  double v{0.0};
  double a_long{0.0};
  double a_lat{0.0};  // v^2 * path curvature at the matched point
  double steer{0.0};
  double s{0.0};  // arc position along the planned route
  double lane_dev{0.0};  // signed offset from the lane centerline, + = left
};

struct SimResult {
  SimStatus status{SimStatus::kPlanningFailed};
  std::vector<TrajectorySample> trajectory;
  int attempts_used{0};
  std::string failure_detail;
  Vec2 target_point{};  // resolved target on the lane centerline
};

struct SimParams {
  VehicleParams vehicle{};
  AdfParams adf{};
  double dt{0.01};
  double offroad_margin{0.2};
};

struct ResolvedRoute {
  int64_t start_lanelet{0};
  int64_t target_lanelet{0};
  Vec2 start_point{};
  Vec2 target_point{};
};

/// Maps (road, lane, s) route endpoints to lanelets and lane-center points.
inline ResolvedRoute resolve_route(const RoadNetwork& net, const LaneletMap& map,
                                   const RouteSpec& route) {
  const auto resolve = [&](const RouteEndpoint& e) {
    const Road* road = net.find_road(e.road);
    if (road == nullptr) {
      throw InvalidArgumentError("route references missing road " + e.road);
    }
    double s = e.s < 0.0 ? road->length() + e.s : e.s;
    s = std::clamp(s, 0.0, road->length());
    const Pose2d pose = road->point_at(s);
    const double offset = e.lane < 0 ? -0.5 * road->lane_width : 0.5 * road->lane_width;
    const int64_t lanelet = find_lanelet(map, e.road, e.lane);
    if (lanelet == 0) {
      throw InvalidArgumentError("no lanelet for road " + e.road + " lane " +
                                 std::to_string(e.lane));
    }
    return std::pair{lanelet, offset_point(pose, offset)};
  };
  ResolvedRoute out;
  std::tie(out.start_lanelet, out.start_point) = resolve(route.start);
  std::tie(out.target_lanelet, out.target_point) = resolve(route.target);
  return out;
}

namespace detail {

struct Episode {
  SimStatus status{SimStatus::kTimeout};
  std::vector<TrajectorySample> trajectory;
  std::string detail;
};

inline Episode run_episode(const std::vector<PathPoint>& path, const std::vector<double>& profile,
                           double initial_speed, double allowed_dev, double timeout,
                           const AdfParams& adf, const VehicleParams& vp, double dt) {
  Episode ep;
  const Vec2 target{path.back().x, path.back().y};
  VehicleState st;
  st.x = path.front().x;
  st.y = path.front().y;
  st.heading = path.front().heading;
  st.v = initial_speed;
  PathMatcher matcher;
  SpeedController speed;

  const auto stall_window = static_cast<size_t>(10.0 / dt);
  std::vector<double> s_history;
  s_history.reserve(static_cast<size_t>(timeout / dt) + 2);

  while (true) {
    const PathProjection proj = matcher.update(path, st.x, st.y);
    const double k = path[proj.index].curvature +
                     (path[proj.index + 1].curvature - path[proj.index].curvature) *
                         (proj.s - path[proj.index].s) /
                         std::max(path[proj.index + 1].s - path[proj.index].s, 1e-12);
    ep.trajectory.push_back({st.t, st.x, st.y, st.heading, st.v, st.a, st.v * st.v * k, st.steer,
                             proj.s, proj.signed_offset});

    const double dist_target = distance({st.x, st.y}, target);
    if (dist_target <= adf.arrival_tolerance && st.v <= adf.stop_speed_eps) {
      ep.status = SimStatus::kSuccess;
      return ep;
    }
    if (std::abs(proj.signed_offset) > allowed_dev) {
      ep.status = SimStatus::kOffRoad;
      ep.detail = "lane deviation " + fmt_g(proj.signed_offset, 4) + " m at s=" +
                  fmt_g(proj.s, 6) + " m";
      return ep;
    }
    if (st.t >= timeout) {
      ep.status = SimStatus::kTimeout;
      ep.detail = "timeout after " + fmt_g(st.t, 6) + " s at s=" + fmt_g(proj.s, 6) + " m";
      return ep;
    }
    s_history.push_back(proj.s);
    if (s_history.size() > stall_window &&
        proj.s - s_history[s_history.size() - 1 - stall_window] < 0.1) {
      ep.status = SimStatus::kStalled;
      ep.detail = "progress < 0.1 m over 10 s at s=" + fmt_g(proj.s, 6) + " m";
      return ep;
    }

    const double steer_cmd = pure_pursuit_steer(st, path, adf, vp, &proj);
    const double accel_cmd = speed.command(st, path, profile, proj, adf, vp, dt);
    st = step_vehicle(st, steer_cmd, accel_cmd, dt, vp);
  }
}

}  // namespace detail

/// Runs the closed loop on a prepared map. On failure the run is retried up
/// to the attempt limit, the k-th retry scaling the pure-pursuit lookahead
/// gain by (1 + 0.1 k); the returned trajectory is the last attempt's.
/// Planning failures are not retried.
inline SimResult run_simulation(const LaneletMap& map, const RouteGraph& graph,
                                const ResolvedRoute& route, double initial_speed,
                                double lane_width, int attempt_limit, double timeout,
                                const SimParams& params) {
  SimResult result;
  const auto plan = plan_route(graph, map, route.start_lanelet, route.target_lanelet);
  if (!plan) {
    result.status = SimStatus::kPlanningFailed;
    result.failure_detail = "no route from lanelet " + std::to_string(route.start_lanelet) +
                            " to " + std::to_string(route.target_lanelet);
    return result;
  }
  const PathProjection at_start = project_point(plan->path, route.start_point.x,
                                                route.start_point.y);
  const PathProjection at_target = project_point(plan->path, route.target_point.x,
                                                 route.target_point.y);
  if (at_target.s <= at_start.s + 1.0) {
    result.status = SimStatus::kPlanningFailed;
    result.failure_detail = "route window shorter than 1 m";
    return result;
  }
  const auto path = trim_path(plan->path, at_start.s, at_target.s);
  result.target_point = {path.back().x, path.back().y};

  // The controller handles the terminal stop itself; it tracks the
  // non-stopping profile.
  const std::vector<double> profile =
      speed_profile(path, params.adf, params.vehicle, /*stop_at_end=*/false);
  const double allowed_dev =
      0.5 * lane_width - 0.5 * params.vehicle.width + params.offroad_margin;

  for (int attempt = 0; attempt < std::max(attempt_limit, 1); ++attempt) {
    AdfParams adf = params.adf;
    adf.lookahead_gain *= 1.0 + 0.1 * attempt;
    auto ep = detail::run_episode(path, profile, initial_speed, allowed_dev, timeout, adf,
                                  params.vehicle, params.dt);
    result.status = ep.status;
    result.trajectory = std::move(ep.trajectory);
    result.failure_detail = std::move(ep.detail);
    result.attempts_used = attempt + 1;
    if (result.status == SimStatus::kSuccess) {
      break;
    }
  }
  return result;
}

/// Convenience entry for in-memory scenarios: converts the network, builds the
/// routing graph and resolves the route from the scenario config.
inline SimResult run_simulation(const ConcreteScenario& cs, const ScenarioConfig& cfg,
                                const SimParams& params) {
  const LaneletMap map = to_lanelets(cs.network);
  const RouteGraph graph = build_route_graph(map);
  RouteSpec route;
  route.start = {cfg.start.road, cfg.start.lane, cfg.start.s};
  route.target = {cfg.target.road, cfg.target.lane, cfg.target.s};
  ResolvedRoute resolved;
  try {
    resolved = resolve_route(cs.network, map, route);
  } catch (const Error& e) {
    SimResult result;
    result.status = SimStatus::kPlanningFailed;
    result.failure_detail = e.what();
    return result;
  }
  const double lane_width = cs.params.count("lane_width") > 0 ? cs.params.at("lane_width") : 3.5;
  return run_simulation(map, graph, resolved, cfg.initial_speed, lane_width, cfg.attempt_limit,
                        cfg.timeout, params);
}

inline constexpr const char* kTrajectoryCsvHeader = "t,x,y,heading,v,a_long,a_lat,steer,s,lane_dev";

/// Trajectory as CSV: fixed column order, %g values with 12 significant
/// digits (relative round-trip error below 1e-9), LF line endings.
inline std::string export_csv(const SimResult& result) {
  std::string out = kTrajectoryCsvHeader;
  out.push_back('\n');
  for (const auto& p : result.trajectory) {
    out += fmt_g(p.t, 12);
    for (const double v : {p.x, p.y, p.heading, p.v, p.a_long, p.a_lat, p.steer, p.s, p.lane_dev}) {
      out.push_back(',');
      out += fmt_g(v, 12);
    }
    out.push_back('\n');
  }
  return out;
}

inline std::vector<TrajectorySample> parse_trajectory_csv(std::string_view text) {
  std::vector<TrajectorySample> samples;
  size_t pos = 0;
  const auto next_line = [&]() {
    if (pos >= text.size()) {
      return std::string_view{};
    }
    const size_t end = text.find('\n', pos);
    const auto line = text.substr(pos, end == std::string_view::npos ? end : end - pos);
    pos = end == std::string_view::npos ? text.size() : end + 1;
    return line;
  };
  const auto header = next_line();
  if (header != kTrajectoryCsvHeader) {
    throw ParseError("unexpected trajectory CSV header: " + std::string{header});
  }
  int line_no = 1;
  while (true) {
    const auto line = next_line();
    ++line_no;
    if (line.empty()) {
      if (pos >= text.size()) {
        break;
      }
      continue;
    }
    double fields[10];
    size_t start = 0;
    for (int i = 0; i < 10; ++i) {
      const size_t comma = line.find(',', start);
      const auto cell = line.substr(start, comma == std::string_view::npos ? comma : comma - start);
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), fields[i]);
      if (res.ec != std::errc{}) {
        throw ParseError("bad number in trajectory CSV", line_no, static_cast<int>(start + 1));
      }
      if (comma == std::string_view::npos) {
        if (i != 9) {
          throw ParseError("trajectory CSV row has too few columns", line_no, 1);
        }
        break;
      }
      start = comma + 1;
    }
    samples.push_back({fields[0], fields[1], fields[2], fields[3], fields[4], fields[5], fields[6],
                       fields[7], fields[8], fields[9]});
  }
  return samples;
}

}  // namespace scenvar
