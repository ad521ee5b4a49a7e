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

#include "pcsim/cause_analysis.hpp"

#include "pcsim/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace pcsim
{

namespace
{

constexpr double kTimeEps = 1e-9;

std::string normalized(const std::string & s)
{
  std::string out;
  for (char ch : s) {
    if (std::isalnum(static_cast<unsigned char>(ch))) {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
  }
  return out;
}

bool channel_detected(const GroundTruth::Tick & tick, const BrakeStageConfig & stage)
{
  if (stage.source_channel == ChannelKind::kV2x) {
    return tick.det_v2x || (stage.fuse_onboard && tick.det_onboard);
  }
  return tick.det_onboard;
}

}  // namespace

const char * to_string(CrashCause cause)
{
  switch (cause) {
    case CrashCause::kDetection:
      return "Detection";
    case CrashCause::kTte:
      return "TTE";
    case CrashCause::kTtc:
      return "TTC";
    case CrashCause::kEgoAcceleration:
      return "EgoAcceleration";
    case CrashCause::kFriction:
      return "Friction";
    case CrashCause::kSteering:
      return "Steering";
    case CrashCause::kOpponentAcceleration:
      return "OpponentAcceleration";
    case CrashCause::kNotClassified:
      break;
  }
  return "NotClassified";
}

const char * short_label(CrashCause cause)
{
  switch (cause) {
    case CrashCause::kDetection:
      return "Det";
    case CrashCause::kTte:
      return "TTE";
    case CrashCause::kTtc:
      return "TTC";
    case CrashCause::kEgoAcceleration:
      return "Ego a";
    case CrashCause::kFriction:
      return "Fri";
    case CrashCause::kSteering:
      return "Ste";
    case CrashCause::kOpponentAcceleration:
      return "Opp a";
    case CrashCause::kNotClassified:
      break;
  }
  return "n.c.";
}

CrashCause crash_cause_from_string(const std::string & name)
{
  const std::string key = normalized(name);
  for (CrashCause c : kAllCauses) {
    if (key == normalized(to_string(c)) || key == normalized(short_label(c))) {
      return c;
    }
  }
  if (key == "oppaccel" || key == "opponentaccel") {
    return CrashCause::kOpponentAcceleration;
  }
  if (key == "egoaccel") {
    return CrashCause::kEgoAcceleration;
  }
  throw ConfigError("unknown crash cause '" + name + "'");
}

std::string pair_label(const std::pair<CrashCause, CrashCause> & pair)
{
  if (pair.first == pair.second) {
    return std::string(short_label(pair.first)) + " x2";
  }
  return std::string(short_label(pair.first)) + " & " + short_label(pair.second);
}

GroundTruth::GroundTruth(const Scenario & scenario, const SensorSet & sensors)
: scenario_(&scenario)
{
  const auto & ego = scenario.ego;
  const auto & opp = scenario.opponent;
  const Dimensions ego_dims = ego.dims();
  const Dimensions opp_dims = opp.dims();
  k0_ = static_cast<std::int64_t>(std::ceil(scenario.start_time() * kTicksPerSecond - 1e-6));
  const auto k1 =
    static_cast<std::int64_t>(std::floor(scenario.end_time() * kTicksPerSecond + 1e-6));
  Detections det;
  ticks_.reserve(static_cast<std::size_t>(std::max<std::int64_t>(0, k1 - k0_ + 1)));
  for (std::int64_t k = k0_; k <= k1; ++k) {
    const double t = tick_time(k);
    Tick tick{t, ego.sample_at(t), opp.sample_at(t), false, false};
    det.onboard = observe(det.onboard, sensors.onboard, tick.ego, ego_dims, tick.opponent, opp,
                          scenario.obstructions, t);
    if (sensors.v2x) {
      det.v2x = observe(det.v2x, *sensors.v2x, tick.ego, ego_dims, tick.opponent, opp,
                        scenario.obstructions, t);
    }
    tick.det_onboard = det.onboard.detected(t);
    tick.det_v2x = det.v2x.detected(t);
    const bool hit = obb_overlap(footprint(tick.ego, ego_dims), footprint(tick.opponent, opp_dims));
    ticks_.push_back(tick);
    if (hit) {
      crash_index_ = ticks_.size() - 1;
      break;
    }
  }
}

double GroundTruth::crash_time() const
{
  if (!crash_index_) {
    throw Error("unbraked replay of '" + scenario_->id + "' does not crash");
  }
  return ticks_[*crash_index_].t;
}

std::optional<double> theoretical_ttb_time(const GroundTruth & truth,
                                           const BrakeStageConfig & stage, double mu)
{
  if (!truth.crashes()) {
    throw Error("theoretical TTB requires a crashing unbraked replay");
  }
  const Scenario & s = truth.scenario();
  const auto avoids = [&](std::size_t i) {
    return forced_trigger_avoids(s, stage, truth.tick(i).t, mu, stage.safety_dist);
  };
  std::size_t lo = 0;
  std::size_t hi = truth.size() - 1;
  if (!avoids(lo)) {
    return std::nullopt;
  }
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (avoids(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return truth.tick(lo).t;
}

std::optional<double> theoretical_ttb_time(const Scenario & scenario,
                                           const BrakeStageConfig & stage, double mu)
{
  const GroundTruth truth(scenario, sensor_set("1V"));
  return theoretical_ttb_time(truth, stage, mu);
}

StageCause classify_stage(const GroundTruth & truth, const BrakeStageConfig & stage,
                          double crash_time, const ClassifierConfig & config)
{
  const Scenario & s = truth.scenario();
  const double mu = s.friction_mu;
  const Dimensions ego_dims = s.ego.dims();
  const Dimensions opp_dims = s.opponent.dims();

  StageCause out;
  out.stage = stage.name;
  if (truth.crashes()) {
    out.t_star_assumed = theoretical_ttb_time(truth, stage, stage.mu_assumed);
    out.t_star_true = std::abs(stage.mu_assumed - mu) < 1e-12
                        ? out.t_star_assumed
                        : theoretical_ttb_time(truth, stage, mu);
  }

  // Trigger conditions from the reference time on, along the unbraked replay.
  if (out.t_star_assumed) {
    const double t_ref = *out.t_star_assumed;
    std::array<bool, 4> found{false, false, false, false};
    std::array<double, 4> first{kInfinity, kInfinity, kInfinity, kInfinity};
    for (std::size_t i = 0; i < truth.size(); ++i) {
      const auto & tick = truth.tick(i);
      if (tick.t < t_ref - kTimeEps) {
        continue;
      }
      const auto l = evaluate_conditions(stage, tick.ego, ego_dims, tick.opponent, opp_dims);
      const std::array<bool, 4> holds{
        channel_detected(tick, stage),
        !stage.use_tte_condition || !l.crash_predicted || l.tte_elapsed,
        !l.crash_predicted || l.below_ttc_threshold,
        l.no_ego_accel,
      };
      for (std::size_t c = 0; c < 4; ++c) {
        if (!found[c] && holds[c]) {
          found[c] = true;
          first[c] = tick.t;
        }
      }
      if (found[0] && found[1] && found[2] && found[3]) {
        break;
      }
    }
    double worst = kTimeEps;
    for (std::size_t c = 0; c < 4; ++c) {
      out.condition_delay[c] = found[c] ? std::max(0.0, first[c] - t_ref) : kInfinity;
      if (out.condition_delay[c] > worst) {
        worst = out.condition_delay[c];
        out.primary_trigger_cause = static_cast<CrashCause>(c);
      }
    }
  }

  out.friction_flag = !out.primary_trigger_cause && out.t_star_assumed &&
                      stage.mu_assumed > mu && mu * kGravity < stage.max_decel &&
                      (!out.t_star_true || *out.t_star_true < *out.t_star_assumed - kTimeEps);

  // Heading and opponent-acceleration checks over the activation window.
  double window_start = crash_time - stage.ttc_threshold;
  if (out.t_star_assumed) {
    window_start = std::min(window_start, *out.t_star_assumed);
  }
  const double opp_h0 = s.opponent.extrapolated_at(std::max(window_start, s.opponent.start_time())).heading;
  std::optional<double> ego_h0;
  for (std::int64_t k = nearest_tick(std::max(window_start, s.start_time()));
       tick_time(k) <= crash_time + kTimeEps; ++k) {
    const double t = tick_time(k);
    const auto o = s.opponent.extrapolated_at(t);
    if (std::abs(wrap_angle(o.heading - opp_h0)) > config.steering_threshold) {
      out.steering_flag = true;
    }
    const auto e = s.ego.extrapolated_at(t);
    if (!ego_h0) {
      ego_h0 = e.heading;
    }
    if (std::abs(wrap_angle(e.heading - *ego_h0)) > config.steering_threshold) {
      out.steering_flag = true;
    }
  }
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto & tick = truth.tick(i);
    if (tick.t < window_start - kTimeEps || tick.t > crash_time + kTimeEps) {
      continue;
    }
    if (channel_detected(tick, stage) && std::abs(tick.opponent.accel) > config.opp_accel_threshold) {
      out.opp_accel_flag = true;
      break;
    }
  }

  if (out.primary_trigger_cause) {
    out.resolved_label = *out.primary_trigger_cause;
    return out;
  }
  for (CrashCause c : config.precedence) {
    const bool hit = (c == CrashCause::kFriction && out.friction_flag) ||
                     (c == CrashCause::kSteering && out.steering_flag) ||
                     (c == CrashCause::kOpponentAcceleration && out.opp_accel_flag);
    if (hit) {
      out.resolved_label = c;
      return out;
    }
  }
  out.resolved_label = CrashCause::kNotClassified;
  return out;
}

CrashCauseReport classify(const SimulationOutcome & outcome, const Scenario & scenario,
                          const CascadeConfig & cascade, const SensorSet & sensors,
                          bool friction_known, const ClassifierConfig & config)
{
  if (outcome.result != RunResult::kCrash) {
    throw Error("classify requires a crashed outcome");
  }
  const GroundTruth truth(scenario, sensors);
  return classify(outcome, truth, cascade, friction_known, config);
}

CrashCauseReport classify(const SimulationOutcome & outcome, const GroundTruth & truth,
                          const CascadeConfig & cascade, bool friction_known,
                          const ClassifierConfig & config)
{
  if (outcome.result != RunResult::kCrash) {
    throw Error("classify requires a crashed outcome");
  }
  const CascadeConfig eff = effective_cascade(cascade, truth.scenario(), friction_known);
  CrashCauseReport report;
  for (const auto & stage : eff.stages) {
    report.stages.push_back(classify_stage(truth, stage, outcome.t_end, config));
  }
  if (report.stages.size() == 2) {
    const StageCause * aeb = nullptr;
    const StageCause * v2x = nullptr;
    for (const auto & st : report.stages) {
      (st.stage == StageName::kAeb ? aeb : v2x) = &st;
    }
    if (aeb != nullptr && v2x != nullptr) {
      report.pair = std::make_pair(aeb->resolved_label, v2x->resolved_label);
    }
  }
  return report;
}

}  // namespace pcsim
