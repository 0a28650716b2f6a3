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

#include <algorithm>
#include <array>
#include <cmath>

#include "scenvar/geometry.hpp"

namespace scenvar {

struct VehicleParams {
  double wheelbase{2.7};       // m
  double width{1.8};           // m
  double max_steer{0.61};      // rad
  double max_steer_rate{0.7};  // rad/s
  double accel_min{-3.5};      // m/s^2
  double accel_max{2.0};       // m/s^2
  double jerk_limit{5.0};      // m/s^3
};

struct VehicleState {
  double t{0.0};
  double x{0.0};
  double y{0.0};
  double heading{0.0};
  double v{0.0};
  double a{0.0};
  double steer{0.0};
};

/// One kinematic-bicycle step. The steering and acceleration commands are
/// slew- and bound-limited first, then held constant while (x, y, heading, v)
/// integrate with classic RK4:
///   x' = v cos(h), y' = v sin(h), h' = (v / wheelbase) tan(steer), v' = a.
/// Speed is floored at zero (no reversing).
inline VehicleState step_vehicle(const VehicleState& state, double steer_cmd, double accel_cmd,
                                 double dt, const VehicleParams& vp) {
  if (!(dt > 0.0)) {
    throw InvalidArgumentError("step_vehicle: dt must be > 0");
  }
  VehicleState next = state;

  const double steer_target = std::clamp(steer_cmd, -vp.max_steer, vp.max_steer);
  const double max_dsteer = vp.max_steer_rate * dt;
  next.steer += std::clamp(steer_target - state.steer, -max_dsteer, max_dsteer);

  const double accel_target = std::clamp(accel_cmd, vp.accel_min, vp.accel_max);
  const double max_da = vp.jerk_limit * dt;
  next.a += std::clamp(accel_target - state.a, -max_da, max_da);

  const double yaw_gain = std::tan(next.steer) / vp.wheelbase;
  const auto deriv = [&](const std::array<double, 4>& q) {
    const double v = std::max(q[3], 0.0);
    return std::array<double, 4>{v * std::cos(q[2]), v * std::sin(q[2]), v * yaw_gain, next.a};
  };
  const std::array<double, 4> q0{state.x, state.y, state.heading, state.v};
  const auto k1 = deriv(q0);
  std::array<double, 4> q;
  for (int i = 0; i < 4; ++i) q[i] = q0[i] + 0.5 * dt * k1[i];
  const auto k2 = deriv(q);
  for (int i = 0; i < 4; ++i) q[i] = q0[i] + 0.5 * dt * k2[i];
  const auto k3 = deriv(q);
  for (int i = 0; i < 4; ++i) q[i] = q0[i] + dt * k3[i];
  const auto k4 = deriv(q);
  for (int i = 0; i < 4; ++i) {
    q[i] = q0[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  next.x = q[0];
  next.y = q[1];
  next.heading = normalize_angle(q[2]);
  next.v = std::max(q[3], 0.0);
  if (next.v == 0.0 && next.a < 0.0) {
    next.a = 0.0;  // standing still, not pushing backward
  }
  next.t = state.t + dt;
  return next;
}

}  // namespace scenvar
