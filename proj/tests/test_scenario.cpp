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

#include "pcsim/scenario.hpp"

#include "pcsim/errors.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace pcsim
{
namespace
{

VehicleTrack two_sample_track(double t0, double t1, double x0, double x1, double speed)
{
  VehicleTrack track;
  track.samples = {{t0, x0, 0.0, 0.0, speed, 0.0}, {t1, x1, 0.0, 0.0, speed, 0.0}};
  return track;
}

Scenario minimal()
{
  Scenario s;
  s.id = "minimal";
  s.ego = two_sample_track(0.0, 1.0, 0.0, 10.0, 10.0);
  s.opponent = two_sample_track(0.0, 1.0, 50.0, 55.0, 5.0);
  return s;
}

TEST(Ticks, NearestTick)
{
  EXPECT_EQ(nearest_tick(0.0), 0);
  EXPECT_EQ(nearest_tick(1.234), 123);
  EXPECT_EQ(nearest_tick(0.0149999), 1);
  EXPECT_DOUBLE_EQ(tick_time(250), 2.5);
}

TEST(VehicleTypes, Names)
{
  EXPECT_EQ(vehicle_type_from_string("bicycle"), VehicleType::kBicycle);
  EXPECT_EQ(std::string(to_string(VehicleType::kPassengerCar)), "passenger_car");
  EXPECT_THROW(vehicle_type_from_string("truck"), ValidationError);
}

TEST(Track, HandInterpolation)
{
  VehicleTrack track;
  track.samples = {{0.0, 0.0, 0.0, 0.0, 10.0, 0.0}, {0.1, 1.0, 0.5, 0.2, 12.0, 1.0}};
  const auto s = track.sample_at(0.03);
  EXPECT_NEAR(s.x, 0.3, 1e-12);
  EXPECT_NEAR(s.y, 0.15, 1e-12);
  EXPECT_NEAR(s.heading, 0.06, 1e-12);
  EXPECT_NEAR(s.speed, 10.6, 1e-12);
  EXPECT_THROW(track.sample_at(0.2), Error);
  EXPECT_THROW(track.sample_at(-0.01), Error);
}

TEST(Track, ExtrapolatesAtConstantSpeed)
{
  VehicleTrack track;
  track.samples = {{0.0, 0.0, 0.0, std::numbers::pi / 2.0, 5.0, 0.0},
                   {1.0, 0.0, 5.0, std::numbers::pi / 2.0, 5.0, 0.0}};
  const auto s = track.extrapolated_at(3.0);
  EXPECT_NEAR(s.x, 0.0, 1e-12);
  EXPECT_NEAR(s.y, 15.0, 1e-12);
  EXPECT_NEAR(track.extrapolated_at(0.5).y, 2.5, 1e-12);
}

TEST(Footprint, AxisAlignedAndRotated)
{
  const TrajectorySample s{0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  for (const auto & c : footprint(s, {4.0, 2.0}).corners()) {
    EXPECT_NEAR(std::abs(c.x), 2.0, 1e-12);
    EXPECT_NEAR(std::abs(c.y), 1.0, 1e-12);
  }
  TrajectorySample r = s;
  r.heading = std::numbers::pi / 2.0;
  for (const auto & c : footprint(r, {4.0, 2.0}).corners()) {
    EXPECT_NEAR(std::abs(c.x), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(c.y), 2.0, 1e-12);
  }
}

TEST(Footprint, InterpolatedCenter)
{
  VehicleTrack track = two_sample_track(0.0, 0.1, 0.0, 1.0, 10.0);
  const auto box = footprint(track, 0.04);
  EXPECT_NEAR(box.center.x, 0.4, 1e-12);
  EXPECT_DOUBLE_EQ(box.length, 4.0);
}

TEST(Resample, GridAlignedTwoSamples)
{
  const auto r = resample(two_sample_track(0.0, 1.0, 0.0, 10.0, 10.0));
  ASSERT_EQ(r.samples.size(), 101u);
  EXPECT_DOUBLE_EQ(r.samples.front().x, 0.0);
  EXPECT_DOUBLE_EQ(r.samples.back().x, 10.0);
  for (std::size_t i = 1; i < r.samples.size(); ++i) {
    EXPECT_NEAR(r.samples[i].x - r.samples[i - 1].x, 0.1, 1e-9);
    EXPECT_NEAR(r.samples[i].t, tick_time(static_cast<std::int64_t>(i)), 1e-12);
  }
}

TEST(Resample, CoarseInputAdvancesPerTick)
{
  VehicleTrack track;
  for (int i = 0; i <= 20; ++i) {
    const double t = 0.1 * i;
    track.samples.push_back({t, 10.0 * t, 0.0, 0.0, 10.0, 0.0});
  }
  const auto r = resample(track);
  ASSERT_EQ(r.samples.size(), 201u);
  for (std::size_t i = 1; i < r.samples.size(); ++i) {
    EXPECT_NEAR(r.samples[i].x - r.samples[i - 1].x, 0.1, 1e-9);
  }
}

TEST(Resample, OffGridEndpointsAreTrimmed)
{
  const auto r = resample(two_sample_track(0.005, 0.995, 0.0, 1.0, 1.0));
  EXPECT_NEAR(r.start_time(), 0.01, 1e-12);
  EXPECT_NEAR(r.end_time(), 0.99, 1e-12);
}

TEST(Validate, FrictionMustBePositive)
{
  Scenario s = minimal();
  s.friction_mu = 0.0;
  try {
    validate(s);
    FAIL() << "expected a validation error";
  } catch (const ValidationError & e) {
    EXPECT_EQ(e.field_path(), "friction_mu");
  }
}

TEST(Validate, NamesBadSample)
{
  Scenario s = minimal();
  s.ego.samples[1].speed = -1.0;
  try {
    validate(s);
    FAIL() << "expected a validation error";
  } catch (const ValidationError & e) {
    EXPECT_EQ(e.field_path(), "ego.samples[1].speed");
  }
}

TEST(Validate, RejectsNonIncreasingTime)
{
  Scenario s = minimal();
  s.opponent.samples[1].t = 0.0;
  EXPECT_THROW(validate(s), ValidationError);
}

TEST(Validate, RejectsDisjointTracks)
{
  Scenario s = minimal();
  s.opponent = two_sample_track(5.0, 6.0, 50.0, 55.0, 5.0);
  EXPECT_THROW(validate(s), ValidationError);
}

TEST(Validate, RejectsDegenerateObstruction)
{
  Scenario s = minimal();
  s.obstructions.push_back({{{0.0, 0.0}, {1.0, 1.0}, {1.0, 0.0}, {0.0, 1.0}}});
  EXPECT_THROW(validate(s), ValidationError);
}

TEST(Validate, SpeedMismatchIsOnlyAWarning)
{
  Scenario s = minimal();
  s.ego.samples[1].x = 30.0;
  std::vector<std::string> warnings;
  EXPECT_NO_THROW(prepare(s, &warnings));
  EXPECT_FALSE(warnings.empty());
}

TEST(Scenario, CommonInterval)
{
  Scenario s = minimal();
  s.opponent = two_sample_track(0.5, 2.0, 50.0, 57.5, 5.0);
  EXPECT_DOUBLE_EQ(s.start_time(), 0.5);
  EXPECT_DOUBLE_EQ(s.end_time(), 1.0);
}

TEST(TrackPath, ArcLengthAndPose)
{
  const auto track = test::straight_track({0.0, 0.0}, 0.0, 10.0, 0.0, 1.0);
  const TrackPath path(track);
  EXPECT_NEAR(path.total_length(), 10.0, 1e-9);
  const auto pose = path.pose_at(2.5);
  EXPECT_NEAR(pose.position.x, 2.5, 1e-9);
  EXPECT_NEAR(pose.heading, 0.0, 1e-12);
  EXPECT_NEAR(path.pose_at(12.0).position.x, 12.0, 1e-9);
}

}  // namespace
}  // namespace pcsim
