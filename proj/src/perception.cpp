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

#include <algorithm>
#include <cctype>
#include <numbers>

namespace pcsim
{

namespace
{

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr double kEps = 1e-9;

SensorChannelConfig onboard(double fov_deg, double range, double mount_from_front)
{
  SensorChannelConfig c;
  c.kind = ChannelKind::kOnboard;
  c.half_angle = 0.5 * fov_deg * kDeg;
  c.range = range;
  c.mount_from_front = mount_from_front;
  c.recognition_point_fraction = 0.5;
  c.detection_delay = 0.2;
  c.occludable = true;
  return c;
}

}  // namespace

const char * to_string(ChannelKind kind) { return kind == ChannelKind::kV2x ? "v2x" : "onboard"; }

void check(const SensorChannelConfig & channel)
{
  if (!(channel.range > 0.0)) {
    throw ConfigError("sensor range must be > 0");
  }
  if (!(channel.half_angle > 0.0) || channel.half_angle > std::numbers::pi + kEps) {
    throw ConfigError("sensor half angle must lie in (0, pi]");
  }
  if (channel.recognition_point_fraction < 0.0 || channel.recognition_point_fraction > 1.0) {
    throw ConfigError("recognition point fraction must lie in [0, 1]");
  }
  if (channel.detection_delay < 0.0) {
    throw ConfigError("detection delay must be >= 0");
  }
}

SensorChannelConfig v2x_channel()
{
  SensorChannelConfig c;
  c.kind = ChannelKind::kV2x;
  c.half_angle = std::numbers::pi;
  c.range = 56.0;
  c.mount_from_front = 0.75;
  c.mount_is_fraction = true;
  c.recognition_point_fraction = 0.75;
  c.detection_delay = 0.3;
  c.occludable = false;
  return c;
}

const std::vector<std::string> & sensor_set_names()
{
  static const std::vector<std::string> names{"1V", "1R1V", "5R1V"};
  return names;
}

SensorSet sensor_set(const std::string & name)
{
  std::string key;
  for (char ch : name) {
    if (ch != '/' && ch != ' ') {
      key.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
    }
  }
  SensorSet set;
  if (key == "1V") {
    set.onboard = onboard(100.0, 120.0, 1.40);
  } else if (key == "1R1V") {
    set.onboard = onboard(120.0, 120.0, 0.25);
  } else if (key == "5R1V") {
    set.onboard = onboard(240.0, 120.0, 0.25);
  } else {
    throw ConfigError("unknown sensor set '" + name + "' (expected 1V, 1R1V or 5R1V)");
  }
  set.name = key;
  set.v2x = v2x_channel();
  return set;
}

Vec2 sensor_mount(const SensorChannelConfig & channel, const TrajectorySample & ego,
                  const Dimensions & ego_dims)
{
  const double from_front =
    channel.mount_is_fraction ? channel.mount_from_front * ego_dims.length : channel.mount_from_front;
  return ego.position() + unit_from_heading(ego.heading) * (0.5 * ego_dims.length - from_front);
}

Vec2 recognition_point(const TrajectorySample & opponent, const Dimensions & opp_dims,
                       VehicleType opp_type, double fraction, ChannelKind kind)
{
  if (kind == ChannelKind::kV2x && opp_type == VehicleType::kBicycle) {
    fraction = 0.5;
  }
  return opponent.position() +
         unit_from_heading(opponent.heading) * (0.5 * opp_dims.length - fraction * opp_dims.length);
}

Vec2 recognition_point(const VehicleTrack & opponent, double t, double fraction, ChannelKind kind)
{
  return recognition_point(opponent.sample_at(t), opponent.dims(), opponent.vehicle_type, fraction,
                           kind);
}

bool in_field_of_view(const SensorChannelConfig & channel, const TrajectorySample & ego,
                      const Dimensions & ego_dims, const Vec2 & opp_point,
                      const std::vector<Obstruction> & obstructions)
{
  const Vec2 mount = sensor_mount(channel, ego, ego_dims);
  const Vec2 d = opp_point - mount;
  const double dist = d.norm();
  if (dist > channel.range) {
    return false;
  }
  if (channel.half_angle < std::numbers::pi && dist > 0.0) {
    const double bearing = wrap_angle(std::atan2(d.y, d.x) - ego.heading);
    if (std::abs(bearing) > channel.half_angle) {
      return false;
    }
  }
  if (channel.occludable) {
    for (const auto & o : obstructions) {
      if (segment_intersects_polygon(mount, opp_point, o.polygon)) {
        return false;
      }
    }
  }
  return true;
}

bool DetectionState::detected(double t) const
{
  return currently_visible && available_from_t.has_value() && t >= *available_from_t - kEps;
}

DetectionState update_detection(const DetectionState & state, bool visible_now, double t,
                                const TrajectorySample & opp_sample, double delay)
{
  if (state.last_update_t && !(t > *state.last_update_t)) {
    throw Error("detection updates must have increasing time");
  }
  DetectionState next = state;
  next.last_update_t = t;
  if (!visible_now) {
    next.currently_visible = false;
    return next;
  }
  if (!state.currently_visible) {
    next.first_in_fov_t = t;
    next.available_from_t = t + delay;
  }
  next.currently_visible = true;
  if (t >= *next.available_from_t - kEps) {
    next.last_known = opp_sample;
  }
  return next;
}

DetectionState observe(const DetectionState & state, const SensorChannelConfig & channel,
                       const TrajectorySample & ego, const Dimensions & ego_dims,
                       const TrajectorySample & opponent, const VehicleTrack & opp_track,
                       const std::vector<Obstruction> & obstructions, double t)
{
  const Vec2 p = recognition_point(opponent, opp_track.dims(), opp_track.vehicle_type,
                                   channel.recognition_point_fraction, channel.kind);
  const bool visible = in_field_of_view(channel, ego, ego_dims, p, obstructions);
  return update_detection(state, visible, t, opponent, channel.detection_delay);
}

}  // namespace pcsim
