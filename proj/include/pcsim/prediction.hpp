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

#ifndef PCSIM__PREDICTION_HPP_
#define PCSIM__PREDICTION_HPP_

#include "pcsim/scenario.hpp"

#include <limits>

namespace pcsim
{

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline constexpr double kDefaultHorizon = 5.0;   // s
inline constexpr double kDefaultLateralAccel = 5.0;  // m/s^2

struct CrashPrediction
{
  bool predicted{false};
  Vec2 crash_point;
  double ttc{kInfinity};                  // s, ego front to tube entry
  double time_to_crash_point{kInfinity};  // s, ego center to crash point
  double x_crash{kInfinity};              // m, tube entry minus safety distance, >= 0
  double tube_entry{kInfinity};           // m, from ego front along its heading
  double tube_exit{kInfinity};            // m
};

/// Constant-velocity prediction of a front crash into the opponent's swept tube.
CrashPrediction predict_crash(const TrajectorySample & ego, const Dimensions & ego_dims,
                              const TrajectorySample & opponent, const Dimensions & opp_dims,
                              double safety_dist, double horizon = kDefaultHorizon);

struct StoppingProfile
{
  double initial_speed{0.0};    // m/s
  double commanded_decel{0.0};  // m/s^2
  double jerk{0.0};             // m/s^3
  double application_delay{0.0};
  double effective_decel{0.0};  // m/s^2
  double distance{0.0};         // m
  double time_to_stop{0.0};     // s
};

/// Delay, jerk ramp to min(decel, mu * g), then constant deceleration.
/// Throws ConfigError for non-positive jerk, deceleration or mu, or negative v0 / delay.
StoppingProfile stopping_distance(double v0, double commanded_decel, double jerk,
                                  double application_delay, double mu_assumed);

/// Remaining time at constant speed until x_crash equals the stopping distance.
/// Non-positive means brake now; +inf when the ego is standing. Throws Error if not predicted.
double time_to_brake(const CrashPrediction & prediction, const StoppingProfile & profile);

/// ttc minus the time needed to swerve by half the combined widths plus `margin`.
/// Throws ConfigError for non-positive lateral acceleration.
double time_to_evade(const CrashPrediction & prediction, double ego_width, double opp_width,
                     double a_lat_max, double margin = 0.5);

}  // namespace pcsim

#endif  // PCSIM__PREDICTION_HPP_
