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

#ifndef PCSIM__BRAKE_LOGIC_HPP_
#define PCSIM__BRAKE_LOGIC_HPP_

#include "pcsim/perception.hpp"
#include "pcsim/prediction.hpp"

#include <string>
#include <vector>

namespace pcsim
{

enum class StageName { kAeb, kV2xPartial };

const char * to_string(StageName name);

struct BrakeStageConfig
{
  StageName name{StageName::kAeb};
  ChannelKind source_channel{ChannelKind::kOnboard};
  double max_decel{9.0};             // m/s^2
  double jerk{45.0};                 // m/s^3
  double application_delay{0.12};    // s
  double ttc_threshold{1.25};        // s
  double ego_accel_threshold{1.0};   // m/s^2
  double safety_dist{0.5};           // m
  bool use_tte_condition{true};
  double mu_assumed{1.0};
  double a_lat_max{kDefaultLateralAccel};  // m/s^2
  double horizon{kDefaultHorizon};         // s
  bool fuse_onboard{false};  // V2X stage may also use the onboard channel
};

/// Throws ConfigError on non-positive thresholds or dynamics.
void check(const BrakeStageConfig & cfg);

BrakeStageConfig aeb_stage();
BrakeStageConfig v2x_stage(double ttc_threshold);

struct CascadeConfig
{
  std::string name;
  std::vector<BrakeStageConfig> stages;
};

/// "aeb", "v2x" or "two-stage". AEB keeps its own 1.25 s threshold. Throws ConfigError.
CascadeConfig brake_preset(const std::string & name, double v2x_ttc_threshold = 2.0);

/// Canonical preset names.
const std::vector<std::string> & brake_preset_names();

struct ConditionLedger
{
  bool detected{false};
  bool crash_predicted{false};
  bool below_ttc_threshold{false};
  bool ttb_elapsed{false};
  bool no_ego_accel{false};
  bool tte_applicable{false};
  bool tte_elapsed{false};
  double ttc{kInfinity};
  double ttb{kInfinity};
  double tte{kInfinity};

  bool all() const
  {
    return detected && crash_predicted && below_ttc_threshold && ttb_elapsed && no_ego_accel &&
           (!tte_applicable || tte_elapsed);
  }
};

struct TriggerDecision
{
  StageName stage{StageName::kAeb};
  bool fire{false};
  double t{0.0};
  ConditionLedger ledger;
};

struct Detections
{
  DetectionState onboard;
  DetectionState v2x;
};

/// Ego state carries the longitudinal acceleration used for the ego-acceleration gate.
TriggerDecision evaluate_stage(const BrakeStageConfig & cfg, const Detections & detections,
                               const TrajectorySample & ego, const Dimensions & ego_dims,
                               const Dimensions & opp_dims, double t);

/// Condition ledger for a known opponent state, bypassing detection.
ConditionLedger evaluate_conditions(const BrakeStageConfig & cfg, const TrajectorySample & ego,
                                    const Dimensions & ego_dims, const TrajectorySample & opponent,
                                    const Dimensions & opp_dims);

/// Evaluates every stage independently.
std::vector<TriggerDecision> evaluate_cascade(const CascadeConfig & cascade,
                                              const Detections & detections,
                                              const TrajectorySample & ego,
                                              const Dimensions & ego_dims,
                                              const Dimensions & opp_dims, double t);

/// Latches fired stages and reports the commanded deceleration (maximum over applied stages).
class InterventionManager
{
public:
  explicit InterventionManager(const CascadeConfig & cascade);

  /// Latches the stages that fire in `decisions`; already latched stages are unaffected.
  void update(const std::vector<TriggerDecision> & decisions);
  void latch(std::size_t stage, double t);

  bool latched(std::size_t stage) const { return fired_at_[stage] < kInfinity; }
  bool any_latched() const;
  double fired_at(std::size_t stage) const { return fired_at_[stage]; }

  /// Earliest time any latched stage starts applying (fire time + application delay).
  double application_start() const;

  /// Maximum deceleration of latched stages whose application delay has elapsed at `t`.
  double commanded_decel(double t) const;

  /// Bitmask of latched stages, bit i for stage i.
  unsigned flags() const;

private:
  const CascadeConfig * cascade_;
  std::vector<double> fired_at_;
};

}  // namespace pcsim

#endif  // PCSIM__BRAKE_LOGIC_HPP_
