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

#include <gtest/gtest.h>

#include "scenvar/adf.hpp"
#include "testutil.hpp"

namespace scenvar {
namespace {

TEST(StepVehicle, StraightAdvanceExact) {
  VehicleParams vp;
  VehicleState st;
  st.v = 10.0;
  const VehicleState next = step_vehicle(st, 0.0, 0.0, 0.01, vp);
  EXPECT_DOUBLE_EQ(next.x, 0.1);
  EXPECT_DOUBLE_EQ(next.y, 0.0);
  EXPECT_DOUBLE_EQ(next.v, 10.0);
  EXPECT_DOUBLE_EQ(next.t, 0.01);
}

TEST(StepVehicle, ConstantSteerTracksCircle) {
  // tan(steer)/wheelbase = 1/100: the trajectory is a circle of radius 100.
  VehicleParams vp;
  const double steer = std::atan(vp.wheelbase / 100.0);
  VehicleState st;
  st.v = 10.0;
  st.steer = steer;
  const Vec2 center{0.0, 100.0};
  double max_err = 0.0;
  const double loop_time = 2.0 * kPi * 100.0 / st.v;
  const int steps = static_cast<int>(loop_time / 0.01);
  for (int i = 0; i < steps; ++i) {
    st = step_vehicle(st, steer, 0.0, 0.01, vp);
    max_err = std::max(max_err, std::abs(distance({st.x, st.y}, center) - 100.0));
  }
  EXPECT_LT(max_err, 1e-3);
}

TEST(StepVehicle, CommandClampsAndSlews) {
  VehicleParams vp;
  VehicleState st;
  st.v = 5.0;
  VehicleState next = st;
  for (int i = 0; i < 200; ++i) {
    next = step_vehicle(next, 0.0, 10.0, 0.01, vp);
  }
  EXPECT_DOUBLE_EQ(next.a, vp.accel_max);  // +10 clamped to 2

  // Jerk limit bounds the acceleration ramp.
  VehicleState ramp;
  ramp.v = 5.0;
  const VehicleState after = step_vehicle(ramp, 0.0, 2.0, 0.01, vp);
  EXPECT_NEAR(after.a, vp.jerk_limit * 0.01, 1e-12);

  // Steering slews at max_steer_rate.
  const VehicleState turned = step_vehicle(ramp, 0.5, 0.0, 0.01, vp);
  EXPECT_NEAR(turned.steer, vp.max_steer_rate * 0.01, 1e-12);
}

TEST(StepVehicle, SpeedFlooredAtZero) {
  VehicleParams vp;
  VehicleState st;
  st.v = 0.05;
  st.a = -2.0;
  VehicleState next = st;
  for (int i = 0; i < 50; ++i) {
    next = step_vehicle(next, 0.0, -2.0, 0.01, vp);
  }
  EXPECT_DOUBLE_EQ(next.v, 0.0);
  EXPECT_GE(next.a, 0.0);
}

std::vector<PathPoint> straight_path(double length, double ds = 0.5) {
  std::vector<PathPoint> path;
  for (double s = 0.0; s <= length + 1e-9; s += ds) {
    path.push_back({s, 0.0, 0.0, s, 0.0, false});
  }
  return path;
}

std::vector<PathPoint> circle_path(double radius, double arc, double ds = 0.5) {
  std::vector<PathPoint> path;
  for (double s = 0.0; s <= arc + 1e-9; s += ds) {
    const double phi = s / radius;
    path.push_back({radius * std::sin(phi), radius * (1.0 - std::cos(phi)),
                    normalize_angle(phi), s, 1.0 / radius, false});
  }
  return path;
}

TEST(PurePursuitSteer, AlignedOnStraightPathIsZero) {
  VehicleState st;
  st.v = 10.0;
  EXPECT_NEAR(pure_pursuit_steer(st, straight_path(50.0), AdfParams{}, VehicleParams{}), 0.0,
              1e-12);
}

TEST(PurePursuitSteer, NinetyDegreeGoal) {
  // Goal at alpha = 90 deg with lookahead = 2 * wheelbase gives atan(1);
  // widen the steering clamp so the raw law is visible.
  VehicleParams vp;
  vp.max_steer = 1.0;
  AdfParams adf;
  adf.lookahead_min = 2.0 * vp.wheelbase;
  adf.lookahead_max = 2.0 * vp.wheelbase;
  std::vector<PathPoint> path;
  path.push_back({0.0, 0.0, 0.0, 0.0, 0.0, false});
  path.push_back({0.001, 0.0, 0.0, 0.001, 0.0, false});
  path.push_back({0.0, 2.0 * vp.wheelbase, 0.5 * kPi, 0.001 + 2.0 * vp.wheelbase, 0.0, false});
  VehicleState st;  // at origin, heading +x, v = 0
  const double steer = pure_pursuit_steer(st, path, adf, vp);
  EXPECT_NEAR(steer, std::atan(1.0), 1e-6);
}

TEST(PurePursuitSteer, CircleLimitApproachesGeometricSteer) {
  // On a circular path the commanded steer tends to atan(wheelbase / R) as
  // the lookahead shrinks (numeric limit check).
  VehicleParams vp;
  const double radius = 50.0;
  const auto path = circle_path(radius, 80.0, 0.005);
  VehicleState st;  // on the path, aligned
  const double exact = std::atan(vp.wheelbase / radius);
  std::vector<double> errors;
  for (const double lookahead : {8.0, 4.0, 2.0, 1.0}) {
    AdfParams adf;
    adf.lookahead_min = lookahead;
    adf.lookahead_max = lookahead;
    errors.push_back(std::abs(pure_pursuit_steer(st, path, adf, vp) - exact));
  }
  EXPECT_LT(errors.back(), errors.front());
  EXPECT_LT(errors.back(), 2e-3);
}

TEST(SpeedProfile, StraightPathCruiseWithTerminalRamp) {
  AdfParams adf;
  VehicleParams vp;
  const auto path = straight_path(400.0);
  const auto profile = speed_profile(path, adf, vp);
  ASSERT_EQ(profile.size(), path.size());
  EXPECT_DOUBLE_EQ(profile.back(), 0.0);
  size_t cruise_points = 0;
  for (const double v : profile) {
    cruise_points += v == adf.cruise_speed ? 1 : 0;
  }
  EXPECT_GT(cruise_points, profile.size() / 2);
  // The ramp decelerates at the comfort rate.
  for (size_t i = 0; i + 1 < profile.size(); ++i) {
    const double ds = path[i + 1].s - path[i].s;
    EXPECT_LE(profile[i] * profile[i] - profile[i + 1] * profile[i + 1],
              2.0 * adf.decel_comfort * ds + 1e-9);
  }
}

TEST(SpeedProfile, CurveSpeedFormula) {
  AdfParams adf;
  adf.lat_accel_limit = 3.0;
  adf.curve_speed_min = 0.0;  // expose the raw formula
  VehicleParams vp;
  const auto path = circle_path(100.0, 300.0);
  const auto profile = speed_profile(path, adf, vp, /*stop_at_end=*/false);
  // sqrt(3 / 0.01) ~ 17.32 m/s, capped by cruise 13.89.
  EXPECT_DOUBLE_EQ(profile[profile.size() / 2], adf.cruise_speed);

  adf.cruise_speed = 30.0;
  const auto uncapped = speed_profile(path, adf, vp, false);
  EXPECT_NEAR(uncapped[uncapped.size() / 2], std::sqrt(300.0), 1e-9);
}

TEST(SpeedProfile, CurveSpeedFloorSkipsJunctions) {
  AdfParams adf;
  VehicleParams vp;
  auto path = circle_path(10.0, 60.0);
  const auto floored = speed_profile(path, adf, vp, false);
  EXPECT_DOUBLE_EQ(floored[floored.size() / 2], adf.curve_speed_min);
  for (auto& p : path) {
    p.in_junction = true;
  }
  const auto junction = speed_profile(path, adf, vp, false);
  EXPECT_NEAR(junction[junction.size() / 2], std::sqrt(adf.lat_accel_limit * 10.0), 1e-9);
}

TEST(SpeedProfile, ForwardPassRespectsAccelBound) {
  AdfParams adf;
  VehicleParams vp;
  // Alternating tight arcs and straights force profile transitions.
  std::vector<PathPoint> path;
  for (double s = 0.0; s <= 500.0; s += 0.5) {
    const double k = std::fmod(s, 100.0) < 50.0 ? 0.0 : 1.0 / 40.0;
    path.push_back({s, 0.0, 0.0, s, k, false});
  }
  const auto profile = speed_profile(path, adf, vp);
  for (size_t i = 0; i + 1 < profile.size(); ++i) {
    const double ds = path[i + 1].s - path[i].s;
    EXPECT_LE(profile[i + 1] * profile[i + 1] - profile[i] * profile[i],
              2.0 * vp.accel_max * ds + 1e-9)
        << i;
  }
}

TEST(PathMatcher, MonotoneAlongPath) {
  const auto path = circle_path(50.0, 150.0);
  PathMatcher matcher;
  double last_s = -1.0;
  for (double s = 0.0; s < 140.0; s += 1.3) {
    const double phi = s / 50.0;
    const auto proj =
        matcher.update(path, 50.0 * std::sin(phi) + 0.3, 50.0 * (1.0 - std::cos(phi)) - 0.1);
    EXPECT_GE(proj.s, last_s);
    last_s = proj.s;
  }
}

}  // namespace
}  // namespace scenvar
