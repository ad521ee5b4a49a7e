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

#ifndef PCSIM__SIMULATION_HPP_
#define PCSIM__SIMULATION_HPP_

#include "pcsim/brake_logic.hpp"
#include "pcsim/perception.hpp"
#include "pcsim/scenario.hpp"

#include <string>
#include <vector>

namespace pcsim
{

/// Simulated time after the last recorded sample before a braked run is cut off.
inline constexpr double kRunOverhang = 20.0;  // s

struct EgoActuationState
{
  double arc_pos{0.0};        // m along the recorded ego path
  double speed{0.0};          // m/s
  double current_decel{0.0};  // m/s^2, >= 0
  double command{0.0};        // m/s^2
  double command_since{0.0};  // s
};

/// Advances the braked ego by `dt` with a constant command: deceleration ramps at `jerk`
/// toward min(command, mu_actual * g), speed is floored at 0. Integration is exact.
EgoActuationState apply_actuation(const EgoActuationState & state, double dt, double mu_actual,
                                  double jerk);

bool detect_collision(const OrientedBox & ego, const OrientedBox & opponent);

enum class RunResult { kAvoided, kCrash };

const char * to_string(RunResult result);

struct TriggerEvent
{
  std::size_t stage_index{0};
  StageName stage{StageName::kAeb};
  double t{0.0};
};

struct TraceRecord
{
  double t{0.0};
  double ego_x{0.0};
  double ego_y{0.0};
  double ego_heading{0.0};
  double ego_v{0.0};
  double ego_a{0.0};
  double opp_x{0.0};
  double opp_y{0.0};
  double opp_heading{0.0};
  bool det_onboard{false};
  bool det_v2x{false};
  unsigned stage_flags{0};
  std::vector<TriggerDecision> decisions;
};

struct SimulationOutcome
{
  RunResult result{RunResult::kAvoided};
  double t_end{0.0};
  double impact_speed_ego{0.0};       // m/s
  double impact_relative_speed{0.0};  // m/s
  std::vector<TriggerEvent> trigger_events;
  std::vector<TraceRecord> trace;
  TrajectorySample final_ego;
  TrajectorySample final_opponent;
};

struct RunOptions
{
  bool friction_known{false};
  bool record_trace{false};
};

/// Copy of `cascade` with each stage's assumed friction set to the scenario value when known.
CascadeConfig effective_cascade(const CascadeConfig & cascade, const Scenario & scenario,
                                bool friction_known);

/// Closed-loop 10 ms simulation. An empty cascade replays the recording.
/// Throws ValidationError for invalid scenarios and ConfigError for invalid stages.
SimulationOutcome run(const Scenario & scenario, const CascadeConfig & cascade,
                      const SensorSet & sensors, const RunOptions & options = {});

/// Counterfactual run with `stage` forced to fire at `t_trigger` regardless of its conditions.
/// The ego footprint is lengthened forward by `front_extension` for the collision test.
/// Returns true when no contact occurs.
bool forced_trigger_avoids(const Scenario & scenario, const BrakeStageConfig & stage,
                           double t_trigger, double mu_actual, double front_extension = 0.0);

/// Trace as CSV: t,ego_x,ego_y,ego_v,ego_a,opp_x,opp_y,det_onboard,det_v2x,stage_flags
std::string trace_csv(const SimulationOutcome & outcome);

}  // namespace pcsim

#endif  // PCSIM__SIMULATION_HPP_
