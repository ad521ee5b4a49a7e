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

#include "pcsim/prediction.hpp"

#include "pcsim/errors.hpp"

#include <algorithm>
#include <cmath>

namespace pcsim
{

namespace
{

constexpr double kStandstill = 1e-9;  // m/s

struct Interval
{
  double lo;
  double hi;
};

// Times at which an opponent body centered at arc s (s = v * t) overlaps [s_lo, s_hi].
bool occupancy(double s_lo, double s_hi, double speed, Interval & out)
{
  if (speed <= kStandstill) {
    if (s_lo <= 0.0 && 0.0 <= s_hi) {
      out = {0.0, kInfinity};
      return true;
    }
    return false;
  }
  if (s_hi < 0.0) {
    return false;
  }
  out = {std::max(0.0, s_lo / speed), s_hi / speed};
  return true;
}

}  // namespace

CrashPrediction predict_crash(const TrajectorySample & ego, const Dimensions & ego_dims,
                              const TrajectorySample & opponent, const Dimensions & opp_dims,
                              double safety_dist, double horizon)
{
  CrashPrediction result;
  if (ego.speed <= kStandstill) {
    return result;
  }

  const Vec2 dir = unit_from_heading(opponent.heading);
  const Vec2 lat{-dir.y, dir.x};
  const double reach = 0.5 * opp_dims.length + opponent.speed * horizon;
  const Vec2 rear = opponent.position() - dir * (0.5 * opp_dims.length);
  const Vec2 front = opponent.position() + dir * reach;
  const Vec2 hw = lat * (0.5 * opp_dims.width);
  const Polygon tube{front + hw, rear + hw, rear - hw, front - hw};

  const Polygon conflict = clip_to_slab(tube, ego.position(), ego.heading, 0.5 * ego_dims.width);
  if (conflict.empty()) {
    return result;
  }
  double x_min = kInfinity;
  double x_max = -kInfinity;
  for (const auto & p : conflict) {
    x_min = std::min(x_min, p.x);
    x_max = std::max(x_max, p.x);
  }
  const double half_len = 0.5 * ego_dims.length;
  const double entry = x_min - half_len;
  const double exit = x_max - half_len;
  if (exit < 0.0 || std::max(entry, 0.0) > ego.speed * horizon) {
    return result;
  }

  // Conflict region along the opponent's path, relative to its current center.
  double c_min = kInfinity;
  double c_max = -kInfinity;
  for (const auto & p : conflict) {
    const Vec2 w = to_world(p, ego.position(), ego.heading);
    const double s = dot(w - opponent.position(), dir);
    c_min = std::min(c_min, s);
    c_max = std::max(c_max, s);
  }
  Interval opp_iv;
  if (!occupancy(c_min - 0.5 * opp_dims.length, c_max + 0.5 * opp_dims.length, opponent.speed,
                 opp_iv)) {
    return result;
  }
  const Interval ego_iv{std::max(entry, 0.0) / ego.speed, exit / ego.speed};
  const double lo = std::max({ego_iv.lo, opp_iv.lo, 0.0});
  const double hi = std::min({ego_iv.hi, opp_iv.hi, horizon});
  if (lo > hi) {
    return result;
  }

  result.predicted = true;
  result.tube_entry = std::max(entry, 0.0);
  result.tube_exit = exit;
  result.ttc = result.tube_entry / ego.speed;
  const double mid = 0.5 * (x_min + x_max);
  result.crash_point = to_world({mid, 0.0}, ego.position(), ego.heading);
  result.time_to_crash_point = std::max(mid, 0.0) / ego.speed;
  result.x_crash = std::max(0.0, result.tube_entry - safety_dist);
  return result;
}

StoppingProfile stopping_distance(double v0, double commanded_decel, double jerk,
                                  double application_delay, double mu_assumed)
{
  if (!(jerk > 0.0) || !(commanded_decel > 0.0) || !(mu_assumed > 0.0)) {
    throw ConfigError("stopping distance needs positive jerk, deceleration and friction");
  }
  if (v0 < 0.0 || application_delay < 0.0) {
    throw ConfigError("stopping distance needs v0 >= 0 and delay >= 0");
  }
  StoppingProfile p;
  p.initial_speed = v0;
  p.commanded_decel = commanded_decel;
  p.jerk = jerk;
  p.application_delay = application_delay;
  p.effective_decel = std::min(commanded_decel, mu_assumed * kGravity);
  if (v0 == 0.0) {
    return p;
  }
  const double a = p.effective_decel;
  const double t_ramp = a / jerk;
  const double dv_ramp = 0.5 * a * a / jerk;
  double braking = 0.0;
  double t_brake = 0.0;
  if (dv_ramp >= v0) {
    t_brake = std::sqrt(2.0 * v0 / jerk);
    braking = 2.0 / 3.0 * v0 * t_brake;
  } else {
    const double v1 = v0 - dv_ramp;
    braking = v0 * t_ramp - jerk * t_ramp * t_ramp * t_ramp / 6.0 + v1 * v1 / (2.0 * a);
    t_brake = t_ramp + v1 / a;
  }
  p.distance = v0 * application_delay + braking;
  p.time_to_stop = application_delay + t_brake;
  return p;
}

double time_to_brake(const CrashPrediction & prediction, const StoppingProfile & profile)
{
  if (!prediction.predicted) {
    throw Error("time_to_brake requires a predicted crash");
  }
  if (profile.initial_speed <= kStandstill) {
    return kInfinity;
  }
  return (prediction.x_crash - profile.distance) / profile.initial_speed;
}

double time_to_evade(const CrashPrediction & prediction, double ego_width, double opp_width,
                     double a_lat_max, double margin)
{
  if (!(a_lat_max > 0.0)) {
    throw ConfigError("lateral acceleration must be > 0");
  }
  if (!prediction.predicted) {
    throw Error("time_to_evade requires a predicted crash");
  }
  const double y_req = 0.5 * (ego_width + opp_width) + margin;
  return prediction.ttc - std::sqrt(2.0 * y_req / a_lat_max);
}

}  // namespace pcsim
