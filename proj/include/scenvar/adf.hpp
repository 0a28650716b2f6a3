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
// The reference driving function: curvature-aware speed planning, a
// proportional speed controller with comfort bounds, and pure-pursuit
// steering. Deliberately the smallest controller that slows down for curves,
// stops at the target and loses tracking on over-tight radii.

#pragma once

#include <vector>

#include "scenvar/routing.hpp"
#include "scenvar/vehicle.hpp"

namespace scenvar {

struct AdfParams {
  double cruise_speed{13.89};      // m/s (50 km/h)
  double lat_accel_limit{2.5};     // m/s^2, caps curve speed
  double curve_speed_min{13.0};    // m/s, floor on planned curve speed outside junctions
  double lookahead_gain{0.8};      // s
  double lookahead_min{3.0};       // m
  double lookahead_max{15.0};      // m
  double stop_speed_eps{0.1};      // m/s
  double arrival_tolerance{2.0};   // m
  double speed_gain{0.8};          // 1/s, proportional speed control
  double accel_comfort{1.5};       // m/s^2, commanded acceleration cap
  double decel_comfort{1.5};       // m/s^2, commanded deceleration cap
  double command_jerk{3.5};        // m/s^3, slew on the acceleration command
  double speed_preview_time{1.0};  // s, how far ahead the speed target looks
  double stop_offset{0.3};         // m, braking aims this far before the path end
};

/// Desired speed per path point: curve speed sqrt(a_lat_max / |k|) capped at
/// cruise, zero at the path end, then a backward pass bounding deceleration by
/// the comfort value and a forward pass bounding acceleration by the vehicle
/// limit (in v^2-per-distance form).
///
/// Outside junction connectors the planned curve speed never drops below
/// curve_speed_min: the driving function keeps flowing-traffic speed through
/// road curves and only crawls in junction maneuvers. Tight radii therefore
/// get driven faster than their comfort speed, which is what eventually
/// breaks lateral tracking.
inline std::vector<double> speed_profile(const std::vector<PathPoint>& path, const AdfParams& adf,
                                         const VehicleParams& vp, bool stop_at_end = true) {
  if (path.empty()) {
    throw InvalidArgumentError("speed_profile: empty path");
  }
  const size_t n = path.size();
  std::vector<double> v(n);
  for (size_t i = 0; i < n; ++i) {
    const double k = std::abs(path[i].curvature);
    double curve_speed = k > 1e-9 ? std::sqrt(adf.lat_accel_limit / k) : adf.cruise_speed;
    if (!path[i].in_junction) {
      curve_speed = std::max(curve_speed, adf.curve_speed_min);
    }
    v[i] = std::min(adf.cruise_speed, curve_speed);
  }
  if (stop_at_end) {
    v[n - 1] = 0.0;
  }
  for (size_t i = n - 1; i > 0; --i) {
    const double ds = path[i].s - path[i - 1].s;
    v[i - 1] = std::min(v[i - 1], std::sqrt(v[i] * v[i] + 2.0 * adf.decel_comfort * ds));
  }
  for (size_t i = 0; i + 1 < n; ++i) {
    const double ds = path[i + 1].s - path[i].s;
    v[i + 1] = std::min(v[i + 1], std::sqrt(v[i] * v[i] + 2.0 * vp.accel_max * ds));
  }
  return v;
}

/// Pure-pursuit steering: aim at the first path point at least one lookahead
/// distance ahead of the projection, steer = atan(2 L sin(alpha) / L_d).
/// Projects the state onto the path unless a projection is supplied.
inline double pure_pursuit_steer(const VehicleState& state, const std::vector<PathPoint>& path,
                                 const AdfParams& adf, const VehicleParams& vp,
                                 const PathProjection* projection = nullptr) {
  if (path.size() < 2) {
    throw InvalidArgumentError("pure_pursuit_steer: path too short");
  }
  const PathProjection proj =
      projection != nullptr ? *projection : project_point(path, state.x, state.y);
  const double lookahead =
      std::clamp(adf.lookahead_gain * state.v, adf.lookahead_min, adf.lookahead_max);
  const double goal_s = proj.s + lookahead;
  size_t gi = proj.index;
  while (gi + 1 < path.size() && path[gi].s < goal_s) {
    ++gi;
  }
  const PathPoint& goal = path[gi];
  const double alpha =
      normalize_angle(std::atan2(goal.y - state.y, goal.x - state.x) - state.heading);
  const double steer = std::atan(2.0 * vp.wheelbase * std::sin(alpha) / lookahead);
  return std::clamp(steer, -vp.max_steer, vp.max_steer);
}

/// Longitudinal controller. Proportional control toward the lowest desired
/// speed within the preview window, with an explicit stopping law toward the
/// path end: the target speed follows the braking parabola into the stop
/// point, and when the remaining distance demands more deceleration than the
/// proportional term delivers, the required braking is commanded directly
/// (up to just under the vehicle limit). Commands are jerk-shaped.
class SpeedController {
public:
  /// `profile` must be the non-stopping profile (speed_profile with
  /// stop_at_end = false); the stop ramp is handled here.
  double command(const VehicleState& state, const std::vector<PathPoint>& path,
                 const std::vector<double>& profile, const PathProjection& proj,
                 const AdfParams& adf, const VehicleParams& vp, double dt) {
    const double preview = std::max(state.v, 1.0) * adf.speed_preview_time;
    double v_target = profile[std::min(proj.index, profile.size() - 1)];
    for (size_t i = proj.index; i < path.size(); ++i) {
      if (path[i].s > proj.s + preview) {
        break;
      }
      v_target = std::min(v_target, profile[i]);
    }
    const double remaining = std::max(path.back().s - proj.s, 0.0);
    const double braking_dist = std::max(remaining - adf.stop_offset, 0.0);
    v_target = std::min(v_target, std::sqrt(2.0 * adf.decel_comfort * braking_dist));

    double accel = std::clamp(adf.speed_gain * (v_target - state.v), -adf.decel_comfort,
                              adf.accel_comfort);
    // Backstop: when the proportional term would under-brake for the stop
    // point, command the physically required deceleration directly.
    const double braking_needed =
        -state.v * state.v / (2.0 * std::max(remaining - adf.stop_offset, 0.05));
    if (braking_needed < -adf.decel_comfort) {
      accel = std::min(accel, std::max(braking_needed, vp.accel_min + 0.1));
    }
    const double max_step = adf.command_jerk * dt;
    last_command_ += std::clamp(accel - last_command_, -max_step, max_step);
    return last_command_;
  }

private:
  double last_command_{0.0};
};

/// Monotone path matcher for the simulation loop: never moves backwards and
/// only searches a short window ahead of the previous match.
class PathMatcher {
public:
  PathProjection update(const std::vector<PathPoint>& path, double x, double y) {
    const size_t last = path.size() - 2;
    PathProjection best = project_on_segment(path, index_, x, y);
    const size_t window_end = std::min(index_ + 8, last);
    for (size_t i = index_ + 1; i <= window_end; ++i) {
      const PathProjection p = project_on_segment(path, i, x, y);
      if (p.distance < best.distance) {
        best = p;
      }
    }
    index_ = best.index;
    return best;
  }

private:
  size_t index_{0};
};

}  // namespace scenvar
