// Copyright 2026 The pcsim Authors
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

#include "pcsim/perception.hpp"

#include "pcsim/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace pcsim
{
namespace
{

using std::numbers::pi;

constexpr Dimensions kCar{4.0, 2.0};
const TrajectorySample kEgo{0.0, 0.0, 0.0, 0.0, 10.0, 0.0};

TrajectorySample at(double x, double y, double heading = 0.0)
{
  return {0.0, x, y, heading, 5.0, 0.0};
}

TEST(SensorSets, TableValues)
{
  const auto v1 = sensor_set("1V");
  EXPECT_NEAR(v1.onboard.half_angle, 50.0 * pi / 180.0, 1e-12);
  EXPECT_DOUBLE_EQ(v1.onboard.range, 120.0);
  EXPECT_DOUBLE_EQ(v1.onboard.mount_from_front, 1.40);
  EXPECT_DOUBLE_EQ(v1.onboard.detection_delay, 0.2);
  const auto r5 = sensor_set("5R1V");
  EXPECT_NEAR(r5.onboard.half_angle, 120.0 * pi / 180.0, 1e-12);
  EXPECT_DOUBLE_EQ(r5.onboard.mount_from_front, 0.25);
  ASSERT_TRUE(r5.v2x.has_value());
  EXPECT_DOUBLE_EQ(r5.v2x->range, 56.0);
  EXPECT_DOUBLE_EQ(r5.v2x->detection_delay, 0.3);
  EXPECT_NEAR(r5.v2x->half_angle, pi, 1e-12);
  EXPECT_FALSE(r5.v2x->occludable);
  EXPECT_DOUBLE_EQ(r5.v2x->recognition_point_fraction, 0.75);
}

TEST(SensorSets, NamesAreCaseAndSlashInsensitive)
{
  EXPECT_EQ(sensor_set("1r1v").name, "1R1V");
  EXPECT_EQ(sensor_set("5R/1V").name, "5R1V");
  EXPECT_THROW(sensor_set("7R"), ConfigError);
  EXPECT_EQ(sensor_set_names().size(), 3u);
}

TEST(Channel, CheckRejectsBadValues)
{
  SensorChannelConfig c = v2x_channel();
  EXPECT_NO_THROW(check(c));
  c.range = 0.0;
  EXPECT_THROW(check(c), ConfigError);
  c = v2x_channel();
  c.detection_delay = -0.1;
  EXPECT_THROW(check(c), ConfigError);
}

TEST(Mount, OffsetsFromFront)
{
  const auto v1 = sensor_set("1V");
  EXPECT_NEAR(sensor_mount(v1.onboard, kEgo, kCar).x, 2.0 - 1.40, 1e-12);
  // V2X antenna at three quarters of the ego length from the front
  EXPECT_NEAR(sensor_mount(*v1.v2x, kEgo, kCar).x, 2.0 - 3.0, 1e-12);
}

TEST(RecognitionPoint, Fractions)
{
  const auto car = at(0.0, 0.0);
  const Vec2 half = recognition_point(car, kCar, VehicleType::kPassengerCar, 0.5,
                                      ChannelKind::kOnboard);
  EXPECT_NEAR(half.x, 0.0, 1e-12);
  const Vec2 three_q = recognition_point(car, kCar, VehicleType::kPassengerCar, 0.75,
                                         ChannelKind::kV2x);
  EXPECT_NEAR(three_q.x, -1.0, 1e-12);
  const Vec2 bike = recognition_point(car, {1.8, 0.6}, VehicleType::kBicycle, 0.75,
                                      ChannelKind::kV2x);
  EXPECT_NEAR(bike.x, 0.0, 1e-12);
  const Vec2 bike_onboard = recognition_point(car, {1.8, 0.6}, VehicleType::kBicycle, 0.75,
                                              ChannelKind::kOnboard);
  EXPECT_NEAR(bike_onboard.x, 0.9 - 1.35, 1e-12);
}

TEST(RecognitionPoint, FollowsHeading)
{
  const Vec2 p = recognition_point(at(5.0, 5.0, pi / 2.0), kCar, VehicleType::kPassengerCar, 0.75,
                                   ChannelKind::kV2x);
  EXPECT_NEAR(p.x, 5.0, 1e-12);
  EXPECT_NEAR(p.y, 4.0, 1e-12);
}

const std::vector<Obstruction> kWall{{{{20.0, -3.0}, {22.0, -3.0}, {22.0, 3.0}, {20.0, 3.0}}}};

TEST(FieldOfView, V2xSeesThroughObstruction)
{
  const auto set = sensor_set("1R1V");
  // 55 m from the antenna at x = -1
  EXPECT_TRUE(in_field_of_view(*set.v2x, kEgo, kCar, {54.0, 0.0}, kWall));
  EXPECT_FALSE(in_field_of_view(*set.v2x, kEgo, kCar, {56.0, 0.0}, kWall));
}

TEST(FieldOfView, OnboardIsOccluded)
{
  const auto set = sensor_set("1R1V");
  EXPECT_FALSE(in_field_of_view(set.onboard, kEgo, kCar, {54.0, 0.0}, kWall));
  EXPECT_TRUE(in_field_of_view(set.onboard, kEgo, kCar, {54.0, 0.0}, {}));
}

TEST(FieldOfView, OnboardRange)
{
  const auto set = sensor_set("5R1V");
  EXPECT_FALSE(in_field_of_view(set.onboard, kEgo, kCar, {130.0, 0.0}, {}));
  EXPECT_TRUE(in_field_of_view(set.onboard, kEgo, kCar, {110.0, 0.0}, {}));
}

TEST(FieldOfView, OpeningAngle)
{
  const auto v1 = sensor_set("1V");
  const auto r5 = sensor_set("5R1V");
  // 60 degrees to the left of the mount
  const Vec2 mount = sensor_mount(v1.onboard, kEgo, kCar);
  const Vec2 p = mount + unit_from_heading(60.0 * pi / 180.0) * 20.0;
  EXPECT_FALSE(in_field_of_view(v1.onboard, kEgo, kCar, p, {}));
  EXPECT_TRUE(in_field_of_view(r5.onboard, kEgo, kCar, p, {}));
  // directly behind is outside 240 degrees
  EXPECT_FALSE(in_field_of_view(r5.onboard, kEgo, kCar, {-30.0, 0.0}, {}));
  EXPECT_TRUE(in_field_of_view(*r5.v2x, kEgo, kCar, {-30.0, 0.0}, {}));
}

TEST(Detection, DelayAfterFirstSight)
{
  DetectionState s;
  const auto opp = at(10.0, 0.0);
  s = update_detection(s, false, 1.99, opp, 0.3);
  s = update_detection(s, true, 2.0, opp, 0.3);
  ASSERT_TRUE(s.available_from_t.has_value());
  EXPECT_NEAR(*s.first_in_fov_t, 2.0, 1e-12);
  EXPECT_NEAR(*s.available_from_t, 2.3, 1e-12);
  EXPECT_FALSE(s.detected(2.0));
  EXPECT_FALSE(s.last_known.has_value());
  for (int k = 201; k <= 230; ++k) {
    s = update_detection(s, true, k / 100.0, opp, 0.3);
  }
  EXPECT_TRUE(s.detected(2.3));
  EXPECT_TRUE(s.last_known.has_value());
}

TEST(Detection, NeverVisible)
{
  DetectionState s;
  for (int k = 0; k < 50; ++k) {
    s = update_detection(s, false, k / 100.0, at(0, 0), 0.2);
  }
  EXPECT_FALSE(s.first_in_fov_t.has_value());
  EXPECT_FALSE(s.available_from_t.has_value());
  EXPECT_FALSE(s.last_known.has_value());
  EXPECT_FALSE(s.detected(1.0));
}

TEST(Detection, GapRestartsDelay)
{
  DetectionState s;
  const auto opp = at(10.0, 0.0);
  for (int k = 200; k <= 300; ++k) {
    const bool visible = k <= 210 || k >= 250;
    s = update_detection(s, visible, k / 100.0, opp, 0.3);
    if (k == 260) {
      EXPECT_FALSE(s.detected(2.6));
    }
  }
  EXPECT_NEAR(*s.available_from_t, 2.8, 1e-12);
  EXPECT_NEAR(*s.first_in_fov_t, 2.5, 1e-12);
  EXPECT_TRUE(s.detected(3.0));
}

TEST(Detection, LostTargetIsNotDetected)
{
  DetectionState s;
  const auto opp = at(10.0, 0.0);
  for (int k = 0; k <= 50; ++k) {
    s = update_detection(s, true, k / 100.0, opp, 0.2);
  }
  EXPECT_TRUE(s.detected(0.5));
  s = update_detection(s, false, 0.51, opp, 0.2);
  EXPECT_FALSE(s.detected(0.51));
}

TEST(Detection, TimeMustIncrease)
{
  DetectionState s = update_detection({}, true, 1.0, at(0, 0), 0.2);
  EXPECT_THROW(update_detection(s, true, 1.0, at(0, 0), 0.2), Error);
}

TEST(Detection, ObserveUsesChannel)
{
  VehicleTrack opp_track;
  opp_track.samples = {{0.0, 30.0, 0.0, pi, 5.0, 0.0}, {1.0, 25.0, 0.0, pi, 5.0, 0.0}};
  const auto set = sensor_set("1V");
  DetectionState s;
  s = observe(s, set.onboard, kEgo, kCar, opp_track.samples[0], opp_track, kWall, 0.0);
  EXPECT_FALSE(s.currently_visible);
  s = observe(s, set.onboard, kEgo, kCar, opp_track.samples[0], opp_track, {}, 0.01);
  EXPECT_TRUE(s.currently_visible);
}

}  // namespace
}  // namespace pcsim
