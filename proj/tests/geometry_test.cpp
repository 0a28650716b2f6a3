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

#include "scenvar/road_network.hpp"
#include "testutil.hpp"

namespace scenvar {
namespace {

TEST(NormalizeAngle, WrapsToHalfOpenInterval) {
  EXPECT_DOUBLE_EQ(normalize_angle(kPi), kPi);
  EXPECT_DOUBLE_EQ(normalize_angle(-kPi), kPi);
  EXPECT_NEAR(normalize_angle(3.0 * kPi), kPi, 1e-12);
  EXPECT_NEAR(normalize_angle(-0.5 * kPi), -0.5 * kPi, 1e-15);
  EXPECT_DOUBLE_EQ(normalize_angle(0.0), 0.0);
}

TEST(SegmentEndPose, StraightTranslation) {
  const auto seg = make_line(make_pose(0.0, 0.0, 0.0), 10.0);
  const Pose2d end = segment_end_pose(seg);
  EXPECT_DOUBLE_EQ(end.x, 10.0);
  EXPECT_DOUBLE_EQ(end.y, 0.0);
  EXPECT_DOUBLE_EQ(end.heading, 0.0);
}

TEST(SegmentEndPose, QuarterCircleLeft) {
  const auto seg = make_arc(make_pose(0.0, 0.0, 0.0), 0.5 * kPi * 100.0, 0.01);
  const Pose2d end = segment_end_pose(seg);
  EXPECT_NEAR(end.x, 100.0, 1e-9);
  EXPECT_NEAR(end.y, 100.0, 1e-9);
  EXPECT_NEAR(end.heading, 0.5 * kPi, 1e-9);
}

TEST(SegmentEndPose, HalfCircleRightNormalizesHeading) {
  // Half circle to the right, R = 50: heading -pi normalizes to pi.
  const auto seg = make_arc(make_pose(0.0, 0.0, 0.0), kPi * 50.0, -0.02);
  const Pose2d end = segment_end_pose(seg);
  EXPECT_NEAR(end.x, 0.0, 1e-8);
  EXPECT_NEAR(end.y, -100.0, 1e-8);
  EXPECT_DOUBLE_EQ(end.heading, kPi);
  const Pose2d ref = test::integrate_segment_rk4(seg, 1e-4);
  EXPECT_NEAR(end.x, ref.x, 1e-8);
  EXPECT_NEAR(end.y, ref.y, 1e-8);
}

TEST(SegmentEndPose, MatchesIntegratedReferenceOnRandomSegments) {
  auto& gen = test::rng();
  std::uniform_real_distribution<double> len(1.0, 50.0);
  std::uniform_real_distribution<double> pos(-100.0, 100.0);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  std::uniform_real_distribution<double> curv_mag(1.0 / 500.0, 0.5);
  std::uniform_int_distribution<int> kind(0, 3);
  for (int i = 0; i < 300; ++i) {
    const Pose2d start = make_pose(pos(gen), pos(gen), ang(gen));
    const int k = kind(gen);
    const GeomSegment seg =
        k == 0 ? make_line(start, len(gen))
               : make_arc(start, len(gen), (k % 2 == 0 ? 1.0 : -1.0) * curv_mag(gen));
    const Pose2d end = segment_end_pose(seg);
    const Pose2d ref = test::integrate_segment_rk4(seg);
    EXPECT_NEAR(end.x, ref.x, 1e-8) << "segment " << i;
    EXPECT_NEAR(end.y, ref.y, 1e-8) << "segment " << i;
    EXPECT_NEAR(normalize_angle(end.heading - ref.heading), 0.0, 1e-8) << "segment " << i;
  }
}

TEST(OffsetSegment, ArcRadiusChangesWithSide) {
  const auto arc = make_arc(make_pose(0.0, 0.0, 0.0), 100.0, 0.01);  // R = 100 left
  const auto inner = offset_segment(arc, 4.0);
  EXPECT_NEAR(1.0 / inner.curvature, 96.0, 1e-12);
  const auto outer = offset_segment(arc, -4.0);
  EXPECT_NEAR(1.0 / outer.curvature, 104.0, 1e-12);
  EXPECT_THROW(offset_segment(make_arc(make_pose(0, 0, 0), 1.0, 1.0 / 3.0), 4.0),
               DegenerateGeometryError);
}

Road straight_road(double length, double width = 3.5) {
  Road road;
  road.id = "1";
  road.lane_width = width;
  road.segments.push_back(make_line(make_pose(0.0, 0.0, 0.0), length));
  return road;
}

TEST(SampleCenterline, SingleLine) {
  const auto samples = sample_centerline(straight_road(10.0), 5.0);
  ASSERT_EQ(samples.size(), 3u);
  EXPECT_DOUBLE_EQ(samples[0].s, 0.0);
  EXPECT_DOUBLE_EQ(samples[1].s, 5.0);
  EXPECT_DOUBLE_EQ(samples[2].s, 10.0);
  EXPECT_DOUBLE_EQ(samples[2].pose.x, 10.0);
}

TEST(SampleCenterline, QuarterCircleMidpoint) {
  Road road;
  road.id = "1";
  const double length = 0.5 * kPi * 100.0;
  road.segments.push_back(make_arc(make_pose(0.0, 0.0, 0.0), length, 0.01));
  const auto samples = sample_centerline(road, 0.5 * length);
  ASSERT_EQ(samples.size(), 3u);
  // Midpoint sits at 45 degrees on the circle centered (0, 100).
  EXPECT_NEAR(samples[1].pose.x, 100.0 * std::sin(kPi / 4.0), 1e-9);
  EXPECT_NEAR(samples[1].pose.y, 100.0 * (1.0 - std::cos(kPi / 4.0)), 1e-9);
  EXPECT_DOUBLE_EQ(samples[1].curvature, 0.01);
}

TEST(SampleCenterline, JointSampledOnce) {
  Road road;
  road.id = "1";
  road.segments.push_back(make_line(make_pose(0.0, 0.0, 0.0), 10.0));
  road.segments.push_back(make_arc(segment_end_pose(road.segments[0]), 20.0, 0.02));
  const auto samples = sample_centerline(road, 2.0);
  int joint_count = 0;
  for (const auto& c : samples) {
    if (std::abs(c.s - 10.0) < 1e-12) {
      ++joint_count;
      // Curvature at the joint belongs to the following (arc) segment.
      EXPECT_DOUBLE_EQ(c.curvature, 0.02);
    }
  }
  EXPECT_EQ(joint_count, 1);

  // Against a per-segment sampling reference: identical point positions.
  size_t i = 0;
  for (const auto& c : samples) {
    const Pose2d ref = road.point_at(c.s);
    EXPECT_NEAR(c.pose.x, ref.x, 1e-12) << i;
    EXPECT_NEAR(c.pose.y, ref.y, 1e-12) << i;
    ++i;
  }
}

TEST(SampleCenterline, SpacingProperty) {
  auto& gen = test::rng();
  std::uniform_real_distribution<double> lens(5.0, 60.0);
  std::uniform_real_distribution<double> curv(-0.05, 0.05);
  for (int trial = 0; trial < 20; ++trial) {
    Road road;
    road.id = "1";
    Pose2d cursor = make_pose(0.0, 0.0, 0.0);
    for (int s = 0; s < 3; ++s) {
      const double c = curv(gen);
      road.segments.push_back(std::abs(c) < 0.005 ? make_line(cursor, lens(gen))
                                                  : make_arc(cursor, lens(gen), c));
      cursor = segment_end_pose(road.segments.back());
    }
    const double ds = 1.25;
    const auto samples = sample_centerline(road, ds);
    for (size_t i = 1; i < samples.size(); ++i) {
      const double gap = distance(samples[i - 1].pose.position(), samples[i].pose.position());
      EXPECT_LE(gap, ds + 1e-9);
    }
  }
  // Straight segments: chord length equals ds exactly.
  const auto samples = sample_centerline(straight_road(20.0), 2.0);
  for (size_t i = 1; i < samples.size(); ++i) {
    EXPECT_NEAR(distance(samples[i - 1].pose.position(), samples[i].pose.position()), 2.0, 1e-6);
  }
}

TEST(LaneBoundaries, StraightRoadRightLane) {
  const auto b = lane_boundaries(straight_road(100.0), LaneSide::kRight, 1.0);
  ASSERT_EQ(b.inner.size(), 101u);
  for (const auto& p : b.outer) {
    EXPECT_NEAR(p.y, -3.5, 1e-12);
  }
}

TEST(LaneBoundaries, LeftArcOuterRadius) {
  Road road;
  road.id = "1";
  road.lane_width = 4.0;
  road.segments.push_back(make_arc(make_pose(0.0, 0.0, 0.0), 0.5 * kPi * 100.0, 0.01));
  const auto b = lane_boundaries(road, LaneSide::kLeft, 1.0);
  const Vec2 center{0.0, 100.0};
  for (const auto& p : b.outer) {
    EXPECT_NEAR(distance(p, center), 96.0, 1e-9);
  }
}

TEST(LaneBoundaries, DegenerateOffsetThrows) {
  Road road;
  road.id = "1";
  road.lane_width = 4.0;
  road.segments.push_back(make_arc(make_pose(0.0, 0.0, 0.0), 3.0, 1.0 / 3.0));
  EXPECT_THROW(lane_boundaries(road, LaneSide::kLeft, 0.5), DegenerateGeometryError);
}

TEST(LaneBoundaries, OffsetDistanceEqualsLaneWidth) {
  Road road;
  road.id = "1";
  road.lane_width = 3.25;
  road.segments.push_back(make_line(make_pose(0.0, 0.0, 0.3), 20.0));
  road.segments.push_back(make_arc(segment_end_pose(road.segments[0]), 40.0, 0.02));
  const auto b = lane_boundaries(road, LaneSide::kRight, 0.5);
  ASSERT_EQ(b.inner.size(), b.outer.size());
  for (size_t i = 0; i < b.inner.size(); ++i) {
    EXPECT_NEAR(distance(b.inner[i], b.outer[i]), 3.25, 1e-9);
  }
}

TEST(ValidateNetwork, WellFormedTemplateIsClean) {
  const auto net = gen_curved_road(3.5, 100.0, TurnDirection::kLeft);
  EXPECT_TRUE(validate_network(net).empty());
}

TEST(ValidateNetwork, MillimeterGapIsReported) {
  RoadNetwork net;
  Road road;
  road.id = "1";
  road.segments.push_back(make_line(make_pose(0.0, 0.0, 0.0), 10.0));
  road.segments.push_back(make_line(make_pose(10.001, 0.0, 0.0), 10.0));
  net.roads.push_back(road);
  const auto violations = validate_network(net);
  ASSERT_FALSE(violations.empty());
  EXPECT_EQ(violations[0].rule, "g0-continuity");
  EXPECT_EQ(violations[0].element_id, "1");
}

TEST(ValidateNetwork, DanglingJunctionReference) {
  RoadNetwork net;
  net.roads.push_back(straight_road(10.0));
  Junction junction;
  junction.id = "10";
  junction.incoming_road_ids = {"1", "99"};
  net.junctions.push_back(junction);
  const auto violations = validate_network(net);
  ASSERT_EQ(violations.size(), 1u);
  EXPECT_EQ(violations[0].rule, "dangling-reference");
  EXPECT_EQ(violations[0].element_id, "10");
}

TEST(ValidateNetwork, IdempotentAndPure) {
  auto net = gen_t_junction(TJunctionParams{});
  const auto first = validate_network(net);
  const auto second = validate_network(net);
  EXPECT_EQ(first.size(), second.size());
  EXPECT_TRUE(first.empty());
}

}  // namespace
}  // namespace scenvar
