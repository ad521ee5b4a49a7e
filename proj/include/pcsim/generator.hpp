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

#ifndef PCSIM__GENERATOR_HPP_
#define PCSIM__GENERATOR_HPP_

#include "pcsim/cause_analysis.hpp"
#include "pcsim/scenario.hpp"

#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace pcsim
{

/// Axis-aligned square in the quadrant between the two approach legs (x < 0, y < 0).
/// Its near corner sits `setback_opp` from the opponent path and `setback_ego` from the ego path.
struct CornerObstruction
{
  double setback_ego{5.0};  // m
  double setback_opp{5.0};  // m
  double size{40.0};        // m
};

struct Behavior
{
  enum class Kind { kConstant, kAccelerate, kTurn };
  Kind kind{Kind::kConstant};
  double value{0.0};    // m/s^2 for kAccelerate, rad/s for kTurn
  double t_start{0.0};  // s

  static Behavior constant() { return {}; }
  static Behavior accelerate(double a, double t_start) { return {Kind::kAccelerate, a, t_start}; }
  static Behavior turn(double yaw_rate, double t_start) { return {Kind::kTurn, yaw_rate, t_start}; }
};

/// Two vehicles approaching one crossing point at the origin. The ego drives along +x and its
/// center reaches the origin at `time_to_crossing`; the opponent's final heading is
/// `crossing_angle` and it reaches the origin `approach_sync` seconds later.
/// Speeds are initial speeds. A turn runs from its start time until the crossing.
struct CrossingSpec
{
  double ego_speed{10.0};  // m/s
  double opp_speed{7.5};   // m/s
  double crossing_angle{std::numbers::pi / 2.0};
  double approach_sync{0.0};  // s
  std::optional<CornerObstruction> obstruction;
  Behavior opp_behavior;
  Behavior ego_behavior;
  double friction_mu{1.0};
  double duration{8.0};  // s
  std::uint64_t seed{0};
  double time_to_crossing{4.0};  // s
  VehicleType opp_type{VehicleType::kPassengerCar};
  Dimensions ego_dims{4.0, 2.0};
  Dimensions opp_dims{4.0, 2.0};
  std::string id;
};

/// Deterministic scenario on the 10 ms grid. Throws ConfigError for infeasible specs.
Scenario generate(const CrossingSpec & spec);

/// Profiles: "mixed", "constant-velocity", "reduced-friction", "cause:<cause>" for each crash
/// cause except NotClassified, and "pair:<label>" for "Ego a x2", "Fri & TTC", "Fri & Ste"
/// and "Det & TTC". Targeted scenarios carry meta keys target_cause, target_brake,
/// target_sensor_set and target_ttc. Throws ConfigError for unknown profiles.
std::vector<Scenario> generate_corpus(std::size_t n, const std::string & profile,
                                      std::uint64_t seed);

/// Profile names understood by generate_corpus.
std::vector<std::string> corpus_profiles();

/// Crossing spec for a cause-targeted scenario.
CrossingSpec targeted_spec(CrashCause cause, std::uint64_t seed);

}  // namespace pcsim

#endif  // PCSIM__GENERATOR_HPP_
