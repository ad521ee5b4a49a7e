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

#ifndef PCSIM__SCENARIO_HPP_
#define PCSIM__SCENARIO_HPP_

#include "pcsim/geometry.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace pcsim
{

inline constexpr int kTicksPerSecond = 100;
inline constexpr double kSimulationStep = 1.0 / kTicksPerSecond;  // s
inline constexpr double kGravity = 9.81;                          // m/s^2

/// Time of grid tick `k`. Division keeps k/100 correctly rounded, so grid times
/// compare equal to their decimal literals.
inline double tick_time(std::int64_t k) { return static_cast<double>(k) / kTicksPerSecond; }

/// Nearest grid tick of `t`.
std::int64_t nearest_tick(double t);

enum class VehicleType { kPassengerCar, kBicycle };

const char * to_string(VehicleType type);
VehicleType vehicle_type_from_string(const std::string & name);

struct TrajectorySample
{
  double t{0.0};        // s
  double x{0.0};        // m
  double y{0.0};        // m
  double heading{0.0};  // rad, CCW from +x
  double speed{0.0};    // m/s, longitudinal
  double accel{0.0};    // m/s^2, longitudinal

  Vec2 position() const { return {x, y}; }
  Vec2 velocity() const { return unit_from_heading(heading) * speed; }
};

struct Dimensions
{
  double length{4.0};
  double width{2.0};
};

struct VehicleTrack
{
  VehicleType vehicle_type{VehicleType::kPassengerCar};
  double length{4.0};
  double width{2.0};
  std::vector<TrajectorySample> samples;

  Dimensions dims() const { return {length, width}; }
  double start_time() const { return samples.front().t; }
  double end_time() const { return samples.back().t; }

  /// Interpolated state; throws pcsim::Error when `t` is outside the track.
  TrajectorySample sample_at(double t) const;

  /// Like sample_at, but continues past the end at constant speed along the last heading.
  TrajectorySample extrapolated_at(double t) const;
};

/// Resamples onto the global 10 ms grid (times k/100 inside the track span).
/// Position, speed and accel are interpolated linearly; heading along the shortest arc.
/// Grid-aligned input is returned unchanged.
VehicleTrack resample(const VehicleTrack & track);

/// Footprint centered at the track's reference point (geometric center).
OrientedBox footprint(const VehicleTrack & track, double t);
OrientedBox footprint(const TrajectorySample & s, const Dimensions & dims);

struct Obstruction
{
  Polygon polygon;
};

struct Scenario
{
  std::string id;
  VehicleTrack ego;
  VehicleTrack opponent;
  std::vector<Obstruction> obstructions;
  double friction_mu{1.0};
  std::map<std::string, std::string> meta;

  /// Common interval of both tracks.
  double start_time() const;
  double end_time() const;
};

/// Checks every invariant; throws ValidationError naming the first violation.
/// Returns non-fatal warnings (e.g. positions inconsistent with speed).
std::vector<std::string> validate(const Scenario & scenario);

/// validate() followed by resampling of both tracks.
Scenario prepare(const Scenario & scenario, std::vector<std::string> * warnings = nullptr);

/// Arc-length parameterization of a recorded path; extends past both ends along the
/// boundary headings.
class TrackPath
{
public:
  explicit TrackPath(const VehicleTrack & track);

  double arc_at_index(std::size_t i) const { return arc_[i]; }
  double total_length() const { return arc_.back(); }

  struct Pose
  {
    Vec2 position;
    double heading{0.0};
  };
  Pose pose_at(double arc) const;

private:
  std::vector<Vec2> points_;
  std::vector<double> headings_;
  std::vector<double> arc_;
};

}  // namespace pcsim

#endif  // PCSIM__SCENARIO_HPP_
