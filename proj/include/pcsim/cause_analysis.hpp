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

#ifndef PCSIM__CAUSE_ANALYSIS_HPP_
#define PCSIM__CAUSE_ANALYSIS_HPP_

#include "pcsim/simulation.hpp"

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pcsim
{

enum class CrashCause {
  kDetection,
  kTte,
  kTtc,
  kEgoAcceleration,
  kFriction,
  kSteering,
  kOpponentAcceleration,
  kNotClassified,
};

inline constexpr std::array<CrashCause, 8> kAllCauses{
  CrashCause::kDetection,       CrashCause::kTte,      CrashCause::kTtc,
  CrashCause::kEgoAcceleration, CrashCause::kFriction, CrashCause::kSteering,
  CrashCause::kOpponentAcceleration, CrashCause::kNotClassified};

/// "Detection", "TTE", "TTC", "EgoAcceleration", "Friction", "Steering",
/// "OpponentAcceleration", "NotClassified".
const char * to_string(CrashCause cause);

/// Plot labels: "Det", "TTE", "TTC", "Ego a", "Fri", "Ste", "Opp a", "n.c.".
const char * short_label(CrashCause cause);

/// Accepts either spelling, case-insensitive. Throws ConfigError.
CrashCause crash_cause_from_string(const std::string & name);

struct ClassifierConfig
{
  double steering_threshold{10.0 * 3.14159265358979323846 / 180.0};  // rad
  double opp_accel_threshold{1.0};                                  // m/s^2
  /// Order in which the non-trigger causes are tried after the trigger cause.
  std::vector<CrashCause> precedence{CrashCause::kFriction, CrashCause::kSteering,
                                     CrashCause::kOpponentAcceleration};
};

struct StageCause
{
  StageName stage{StageName::kAeb};
  std::optional<CrashCause> primary_trigger_cause;
  bool friction_flag{false};
  bool steering_flag{false};
  bool opp_accel_flag{false};
  CrashCause resolved_label{CrashCause::kNotClassified};
  std::optional<double> t_star_true;     // s, latest sufficient trigger under the real friction
  std::optional<double> t_star_assumed;  // s, same under the friction the stage assumes
  /// Lateness of Detection, TTE, TTC and EgoAcceleration relative to the reference time.
  std::array<double, 4> condition_delay{0.0, 0.0, 0.0, 0.0};
};

struct CrashCauseReport
{
  std::vector<StageCause> stages;
  /// Two-stage cascades only: (AEB cause, V2X cause).
  std::optional<std::pair<CrashCause, CrashCause>> pair;
};

/// "A & B", or "A x2" for equal causes.
std::string pair_label(const std::pair<CrashCause, CrashCause> & pair);

/// Unbraked replay of a scenario as seen by one sensor set, shared by all stage analyses.
class GroundTruth
{
public:
  GroundTruth(const Scenario & scenario, const SensorSet & sensors);
  /// The replay refers to `scenario`, which must outlive it.
  GroundTruth(Scenario && scenario, const SensorSet & sensors) = delete;

  bool crashes() const { return crash_index_.has_value(); }
  double crash_time() const;
  std::int64_t first_tick() const { return k0_; }
  std::size_t size() const { return ticks_.size(); }

  struct Tick
  {
    double t;
    TrajectorySample ego;
    TrajectorySample opponent;
    bool det_onboard;
    bool det_v2x;
  };
  const Tick & tick(std::size_t i) const { return ticks_[i]; }

  const Scenario & scenario() const { return *scenario_; }

private:
  const Scenario * scenario_;
  std::int64_t k0_{0};
  std::vector<Tick> ticks_;
  std::optional<std::size_t> crash_index_;
};

/// Latest trigger tick whose forced braking keeps the ego front at least the safety distance
/// from the opponent; nullopt when even the first tick is too late.
/// Throws Error when the unbraked replay does not crash.
std::optional<double> theoretical_ttb_time(const Scenario & scenario,
                                           const BrakeStageConfig & stage, double mu);
std::optional<double> theoretical_ttb_time(const GroundTruth & truth,
                                           const BrakeStageConfig & stage, double mu);

/// Cause fields for one stage; `crash_time` is the time of contact in the braked run.
StageCause classify_stage(const GroundTruth & truth, const BrakeStageConfig & stage,
                          double crash_time, const ClassifierConfig & config = {});

/// Classifies every stage of a crashed run. Throws Error for an avoided outcome.
/// `cascade` is the configuration as passed to run(); friction knowledge is applied here.
CrashCauseReport classify(const SimulationOutcome & outcome, const Scenario & scenario,
                          const CascadeConfig & cascade, const SensorSet & sensors,
                          bool friction_known, const ClassifierConfig & config = {});

/// Same, reusing a precomputed unbraked replay for the run's sensor set.
CrashCauseReport classify(const SimulationOutcome & outcome, const GroundTruth & truth,
                          const CascadeConfig & cascade, bool friction_known,
                          const ClassifierConfig & config = {});

}  // namespace pcsim

#endif  // PCSIM__CAUSE_ANALYSIS_HPP_
