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

#ifndef PCSIM__PERCEPTION_HPP_
#define PCSIM__PERCEPTION_HPP_

#include "pcsim/scenario.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pcsim
{

enum class ChannelKind { kOnboard, kV2x };

const char * to_string(ChannelKind kind);

struct SensorChannelConfig
{
  ChannelKind kind{ChannelKind::kOnboard};
  double half_angle{0.0};        // rad
  double range{0.0};             // m
  double mount_from_front{0.0};  // m, or a fraction of ego length when mount_is_fraction
  bool mount_is_fraction{false};
  double recognition_point_fraction{0.5};  // of opponent length, from its front
  double detection_delay{0.0};             // s
  bool occludable{true};
};

/// Throws ConfigError on out-of-range parameters.
void check(const SensorChannelConfig & channel);

struct SensorSet
{
  std::string name;
  SensorChannelConfig onboard;
  std::optional<SensorChannelConfig> v2x;
};

/// 360 deg, 56 m, antenna at 3/4 length, 300 ms, not occludable.
SensorChannelConfig v2x_channel();

/// "1V", "1R1V" or "5R1V" (case-insensitive, "/" and spaces ignored). Throws ConfigError.
SensorSet sensor_set(const std::string & name);

/// Canonical names in table order.
const std::vector<std::string> & sensor_set_names();

/// Sensor position on the ego centerline.
Vec2 sensor_mount(const SensorChannelConfig & channel, const TrajectorySample & ego,
                  const Dimensions & ego_dims);

/// Point on the opponent centerline at `fraction` of its length from the front.
/// V2X antennas of bicycles sit at half length regardless of `fraction`.
Vec2 recognition_point(const TrajectorySample & opponent, const Dimensions & opp_dims,
                       VehicleType opp_type, double fraction, ChannelKind kind);
Vec2 recognition_point(const VehicleTrack & opponent, double t, double fraction, ChannelKind kind);

bool in_field_of_view(const SensorChannelConfig & channel, const TrajectorySample & ego,
                      const Dimensions & ego_dims, const Vec2 & opp_point,
                      const std::vector<Obstruction> & obstructions);

struct DetectionState
{
  std::optional<double> first_in_fov_t;
  std::optional<double> available_from_t;
  std::optional<TrajectorySample> last_known;
  bool currently_visible{false};
  std::optional<double> last_update_t;

  /// Opponent state usable for triggering at `t`.
  bool detected(double t) const;
};

/// Advances the detection clock. A visibility gap restarts acquisition.
/// Throws Error when `t` does not increase.
DetectionState update_detection(const DetectionState & state, bool visible_now, double t,
                                const TrajectorySample & opp_sample, double delay);

/// Runs one channel against the scene at time `t` and folds the result into `state`.
DetectionState observe(const DetectionState & state, const SensorChannelConfig & channel,
                       const TrajectorySample & ego, const Dimensions & ego_dims,
                       const TrajectorySample & opponent, const VehicleTrack & opp_track,
                       const std::vector<Obstruction> & obstructions, double t);

}  // namespace pcsim

#endif  // PCSIM__PERCEPTION_HPP_
