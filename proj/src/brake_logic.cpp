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

#include "pcsim/brake_logic.hpp"

#include "pcsim/errors.hpp"

#include <algorithm>
#include <cctype>

namespace pcsim
{

namespace
{

constexpr double kTimeEps = 1e-9;

}  // namespace

const char * to_string(StageName name) { return name == StageName::kAeb ? "AEB" : "V2X_PARTIAL"; }

void check(const BrakeStageConfig & cfg)
{
  if (!(cfg.max_decel > 0.0) || !(cfg.jerk > 0.0)) {
    throw ConfigError(std::string(to_string(cfg.name)) + ": max_decel and jerk must be > 0");
  }
  if (!(cfg.ttc_threshold > 0.0)) {
    throw ConfigError(std::string(to_string(cfg.name)) + ": ttc_threshold must be > 0");
  }
  if (cfg.application_delay < 0.0 || cfg.safety_dist < 0.0) {
    throw ConfigError(std::string(to_string(cfg.name)) +
                      ": application_delay and safety_dist must be >= 0");
  }
  if (!(cfg.mu_assumed > 0.0) || !(cfg.a_lat_max > 0.0) || !(cfg.horizon > 0.0)) {
    throw ConfigError(std::string(to_string(cfg.name)) +
                      ": mu_assumed, a_lat_max and horizon must be > 0");
  }
}

BrakeStageConfig aeb_stage() { return BrakeStageConfig{}; }

BrakeStageConfig v2x_stage(double ttc_threshold)
{
  BrakeStageConfig c;
  c.name = StageName::kV2xPartial;
  c.source_channel = ChannelKind::kV2x;
  c.max_decel = 4.0;
  c.ttc_threshold = ttc_threshold;
  c.use_tte_condition = false;
  return c;
}

const std::vector<std::string> & brake_preset_names()
{
  static const std::vector<std::string> names{"aeb", "v2x", "two-stage"};
  return names;
}

CascadeConfig brake_preset(const std::string & name, double v2x_ttc_threshold)
{
  std::string key;
  for (char ch : name) {
    key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  std::replace(key.begin(), key.end(), '_', '-');
  CascadeConfig c;
  if (key == "aeb") {
    c.stages = {aeb_stage()};
  } else if (key == "v2x") {
    c.stages = {v2x_stage(v2x_ttc_threshold)};
  } else if (key == "two-stage" || key == "2-stage" || key == "twostage") {
    key = "two-stage";
    c.stages = {v2x_stage(v2x_ttc_threshold), aeb_stage()};
  } else {
    throw ConfigError("unknown brake type '" + name + "' (expected aeb, v2x or two-stage)");
  }
  c.name = key;
  return c;
}

ConditionLedger evaluate_conditions(const BrakeStageConfig & cfg, const TrajectorySample & ego,
                                    const Dimensions & ego_dims, const TrajectorySample & opponent,
                                    const Dimensions & opp_dims)
{
  ConditionLedger l;
  l.detected = true;
  l.no_ego_accel = ego.accel < cfg.ego_accel_threshold;
  l.tte_applicable = cfg.use_tte_condition;
  const auto pred = predict_crash(ego, ego_dims, opponent, opp_dims, cfg.safety_dist, cfg.horizon);
  l.crash_predicted = pred.predicted;
  if (!pred.predicted) {
    return l;
  }
  l.ttc = pred.ttc;
  l.below_ttc_threshold = pred.ttc <= cfg.ttc_threshold;
  const auto profile =
    stopping_distance(ego.speed, cfg.max_decel, cfg.jerk, cfg.application_delay, cfg.mu_assumed);
  l.ttb = time_to_brake(pred, profile);
  l.ttb_elapsed = l.ttb <= 0.0;
  if (cfg.use_tte_condition) {
    l.tte = time_to_evade(pred, ego_dims.width, opp_dims.width, cfg.a_lat_max, cfg.safety_dist);
    l.tte_elapsed = l.tte <= 0.0;
  }
  return l;
}

TriggerDecision evaluate_stage(const BrakeStageConfig & cfg, const Detections & detections,
                               const TrajectorySample & ego, const Dimensions & ego_dims,
                               const Dimensions & opp_dims, double t)
{
  TriggerDecision d;
  d.stage = cfg.name;
  d.t = t;
  const DetectionState * source =
    cfg.source_channel == ChannelKind::kV2x ? &detections.v2x : &detections.onboard;
  if (!source->detected(t) && cfg.fuse_onboard && cfg.source_channel == ChannelKind::kV2x) {
    source = &detections.onboard;
  }
  if (!source->detected(t) || !source->last_known) {
    d.ledger.no_ego_accel = ego.accel < cfg.ego_accel_threshold;
    d.ledger.tte_applicable = cfg.use_tte_condition;
    return d;
  }
  d.ledger = evaluate_conditions(cfg, ego, ego_dims, *source->last_known, opp_dims);
  d.fire = d.ledger.all();
  return d;
}

std::vector<TriggerDecision> evaluate_cascade(const CascadeConfig & cascade,
                                              const Detections & detections,
                                              const TrajectorySample & ego,
                                              const Dimensions & ego_dims,
                                              const Dimensions & opp_dims, double t)
{
  std::vector<TriggerDecision> out;
  out.reserve(cascade.stages.size());
  for (const auto & stage : cascade.stages) {
    out.push_back(evaluate_stage(stage, detections, ego, ego_dims, opp_dims, t));
  }
  return out;
}

InterventionManager::InterventionManager(const CascadeConfig & cascade)
: cascade_(&cascade), fired_at_(cascade.stages.size(), kInfinity)
{
}

void InterventionManager::update(const std::vector<TriggerDecision> & decisions)
{
  for (std::size_t i = 0; i < decisions.size() && i < fired_at_.size(); ++i) {
    if (decisions[i].fire) {
      latch(i, decisions[i].t);
    }
  }
}

void InterventionManager::latch(std::size_t stage, double t)
{
  if (!latched(stage)) {
    fired_at_[stage] = t;
  }
}

bool InterventionManager::any_latched() const
{
  return std::any_of(fired_at_.begin(), fired_at_.end(), [](double t) { return t < kInfinity; });
}

double InterventionManager::application_start() const
{
  double start = kInfinity;
  for (std::size_t i = 0; i < fired_at_.size(); ++i) {
    if (latched(i)) {
      start = std::min(start, fired_at_[i] + cascade_->stages[i].application_delay);
    }
  }
  return start;
}

double InterventionManager::commanded_decel(double t) const
{
  double decel = 0.0;
  for (std::size_t i = 0; i < fired_at_.size(); ++i) {
    if (latched(i) && t >= fired_at_[i] + cascade_->stages[i].application_delay - kTimeEps) {
      decel = std::max(decel, cascade_->stages[i].max_decel);
    }
  }
  return decel;
}

unsigned InterventionManager::flags() const
{
  unsigned f = 0;
  for (std::size_t i = 0; i < fired_at_.size(); ++i) {
    if (latched(i)) {
      f |= 1u << i;
    }
  }
  return f;
}

}  // namespace pcsim
