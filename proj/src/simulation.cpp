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

#include "pcsim/simulation.hpp"

#include "pcsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace pcsim
{

namespace
{

constexpr double kTimeEps = 1e-9;

// Ego that replays its recording until braking starts, then follows the recorded path.
class EgoMotion
{
public:
  explicit EgoMotion(const VehicleTrack & track) : track_(&track), path_(track) {}

  bool braking() const { return braking_; }
  bool stopped() const { return braking_ && act_.speed <= 0.0; }
  const EgoActuationState & actuation() const { return act_; }

  TrajectorySample state(double t) const
  {
    if (!braking_) {
      return track_->extrapolated_at(t);
    }
    const auto pose = path_.pose_at(act_.arc_pos);
    TrajectorySample s;
    s.t = t;
    s.x = pose.position.x;
    s.y = pose.position.y;
    s.heading = pose.heading;
    s.speed = act_.speed;
    s.accel = act_.speed > 0.0 ? -act_.current_decel : 0.0;
    return s;
  }

  // Advances from t0 to t1. `command(t)` is the deceleration command, `breaks` are the
  // instants in (t0, t1) where it may change, `start` is the first application time.
  template <typename Command>
  void advance(double t0, double t1, double start, const std::vector<double> & breaks,
               const Command & command, double mu_actual, double jerk)
  {
    double from = t0;
    if (!braking_) {
      if (start > t1 + kTimeEps) {
        return;
      }
      from = std::max(t0, start);
      if (from > t1 - kTimeEps) {
        from = t1;
      }
      begin_braking(from);
    }
    std::vector<double> cuts{from};
    for (double b : breaks) {
      if (b > from + kTimeEps && b < t1 - kTimeEps) {
        cuts.push_back(b);
      }
    }
    cuts.push_back(t1);
    std::sort(cuts.begin() + 1, cuts.end() - 1);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double dt = cuts[i + 1] - cuts[i];
      if (dt <= 0.0) {
        continue;
      }
      const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
      const double cmd = command(mid);
      if (cmd != act_.command) {
        act_.command = cmd;
        act_.command_since = cuts[i];
      }
      act_ = apply_actuation(act_, dt, mu_actual, jerk);
    }
  }

private:
  void begin_braking(double t)
  {
    braking_ = true;
    act_.speed = track_->extrapolated_at(t).speed;
    act_.arc_pos = recorded_arc(t);
    act_.current_decel = 0.0;
    act_.command = 0.0;
    act_.command_since = t;
  }

  double recorded_arc(double t) const
  {
    const auto & samples = track_->samples;
    if (t >= track_->end_time()) {
      return path_.total_length() + samples.back().speed * (t - track_->end_time());
    }
    auto it = std::upper_bound(samples.begin(), samples.end(), t,
                               [](double v, const TrajectorySample & s) { return v < s.t; });
    const auto i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - samples.begin() - 1));
    const TrajectorySample p = track_->sample_at(t);
    return path_.arc_at_index(i) + (p.position() - samples[i].position()).norm();
  }

  const VehicleTrack * track_;
  TrackPath path_;
  bool braking_{false};
  EgoActuationState act_;
};

OrientedBox extended_front(const OrientedBox & box, double extension)
{
  if (extension <= 0.0) {
    return box;
  }
  OrientedBox b = box;
  b.center = b.center + unit_from_heading(b.heading) * (0.5 * extension);
  b.length += extension;
  return b;
}

std::int64_t first_tick(double t) { return static_cast<std::int64_t>(std::ceil(t * kTicksPerSecond - 1e-6)); }
std::int64_t last_tick(double t) { return static_cast<std::int64_t>(std::floor(t * kTicksPerSecond + 1e-6)); }

}  // namespace

EgoActuationState apply_actuation(const EgoActuationState & state, double dt, double mu_actual,
                                  double jerk)
{
  EgoActuationState s = state;
  if (s.speed <= 0.0) {
    s.speed = 0.0;
    return s;
  }
  const double target = std::min(s.command, mu_actual * kGravity);
  if (s.current_decel > target) {
    s.current_decel = target;
  }
  double rem = dt;
  double a = s.current_decel;
  double v = s.speed;
  if (a < target) {
    const double ramp = std::min(rem, (target - a) / jerk);
    const double stop = (-a + std::sqrt(a * a + 2.0 * jerk * v)) / jerk;
    if (stop <= ramp) {
      s.arc_pos += v * stop - 0.5 * a * stop * stop - jerk * stop * stop * stop / 6.0;
      s.speed = 0.0;
      s.current_decel = a + jerk * stop;
      return s;
    }
    s.arc_pos += v * ramp - 0.5 * a * ramp * ramp - jerk * ramp * ramp * ramp / 6.0;
    v -= a * ramp + 0.5 * jerk * ramp * ramp;
    a += jerk * ramp;
    rem -= ramp;
    if (target - a < 1e-12) {
      a = target;
    }
  }
  if (rem > 0.0) {
    if (a > 0.0 && v / a <= rem) {
      s.arc_pos += 0.5 * v * v / a;
      v = 0.0;
    } else {
      s.arc_pos += v * rem - 0.5 * a * rem * rem;
      v -= a * rem;
    }
  }
  s.speed = std::max(0.0, v);
  s.current_decel = a;
  return s;
}

bool detect_collision(const OrientedBox & ego, const OrientedBox & opponent)
{
  return obb_overlap(ego, opponent);
}

const char * to_string(RunResult result) { return result == RunResult::kCrash ? "crash" : "avoided"; }

CascadeConfig effective_cascade(const CascadeConfig & cascade, const Scenario & scenario,
                                bool friction_known)
{
  CascadeConfig c = cascade;
  if (friction_known) {
    for (auto & stage : c.stages) {
      stage.mu_assumed = scenario.friction_mu;
    }
  }
  return c;
}

SimulationOutcome run(const Scenario & scenario, const CascadeConfig & cascade_in,
                      const SensorSet & sensors, const RunOptions & options)
{
  validate(scenario);
  if (cascade_in.stages.size() > 2) {
    throw ConfigError("a cascade has at most two stages");
  }
  for (const auto & stage : cascade_in.stages) {
    check(stage);
  }
  check(sensors.onboard);
  const CascadeConfig cascade = effective_cascade(cascade_in, scenario, options.friction_known);

  const auto & ego_track = scenario.ego;
  const auto & opp_track = scenario.opponent;
  const Dimensions ego_dims = ego_track.dims();
  const Dimensions opp_dims = opp_track.dims();
  const double mu = scenario.friction_mu;

  const std::int64_t k0 = first_tick(scenario.start_time());
  const std::int64_t k_unbraked_end = last_tick(scenario.end_time());
  const std::int64_t k_cap =
    last_tick(std::max(ego_track.end_time(), opp_track.end_time()) + kRunOverhang);
  const double opp_end = opp_track.end_time();

  EgoMotion ego(ego_track);
  InterventionManager manager(cascade);
  Detections det;
  SimulationOutcome out;

  double jerk = 0.0;
  for (const auto & stage : cascade.stages) {
    jerk = std::max(jerk, stage.jerk);
  }
  const auto command = [&manager](double t) { return manager.commanded_decel(t); };

  for (std::int64_t k = k0;; ++k) {
    const double t = tick_time(k);
    const TrajectorySample e = ego.state(t);
    const TrajectorySample o = opp_track.extrapolated_at(t);
    const bool hit = detect_collision(footprint(e, ego_dims), footprint(o, opp_dims));

    std::vector<TriggerDecision> decisions;
    if (!hit) {
      det.onboard = observe(det.onboard, sensors.onboard, e, ego_dims, o, opp_track,
                            scenario.obstructions, t);
      if (sensors.v2x) {
        det.v2x = observe(det.v2x, *sensors.v2x, e, ego_dims, o, opp_track,
                          scenario.obstructions, t);
      }
      if (!cascade.stages.empty()) {
        decisions = evaluate_cascade(cascade, det, e, ego_dims, opp_dims, t);
        for (std::size_t i = 0; i < decisions.size(); ++i) {
          if (decisions[i].fire && !manager.latched(i)) {
            manager.latch(i, t);
            out.trigger_events.push_back({i, cascade.stages[i].name, t});
          }
        }
      }
    }

    if (options.record_trace) {
      TraceRecord r;
      r.t = t;
      r.ego_x = e.x;
      r.ego_y = e.y;
      r.ego_heading = e.heading;
      r.ego_v = e.speed;
      r.ego_a = e.accel;
      r.opp_x = o.x;
      r.opp_y = o.y;
      r.opp_heading = o.heading;
      r.det_onboard = det.onboard.detected(t);
      r.det_v2x = det.v2x.detected(t);
      r.stage_flags = manager.flags();
      r.decisions = std::move(decisions);
      out.trace.push_back(std::move(r));
    }

    out.t_end = t;
    out.final_ego = e;
    out.final_opponent = o;
    if (hit) {
      out.result = RunResult::kCrash;
      out.impact_speed_ego = e.speed;
      out.impact_relative_speed = (e.velocity() - o.velocity()).norm();
      break;
    }
    if (!manager.any_latched()) {
      if (k >= k_unbraked_end) {
        break;
      }
    } else if (ego.stopped() && t >= opp_end - kTimeEps) {
      break;
    }
    if (k >= k_cap) {
      break;
    }

    std::vector<double> breaks;
    for (std::size_t i = 0; i < cascade.stages.size(); ++i) {
      if (manager.latched(i)) {
        breaks.push_back(manager.fired_at(i) + cascade.stages[i].application_delay);
      }
    }
    ego.advance(t, tick_time(k + 1), manager.application_start(), breaks, command, mu, jerk);
  }
  return out;
}

bool forced_trigger_avoids(const Scenario & scenario, const BrakeStageConfig & stage,
                           double t_trigger, double mu_actual, double front_extension)
{
  const auto & ego_track = scenario.ego;
  const auto & opp_track = scenario.opponent;
  const Dimensions ego_dims = ego_track.dims();
  const Dimensions opp_dims = opp_track.dims();
  const std::int64_t k0 = first_tick(scenario.start_time());
  const std::int64_t k_cap =
    last_tick(std::max(ego_track.end_time(), opp_track.end_time()) + kRunOverhang);
  const double opp_end = opp_track.end_time();
  const double start = t_trigger + stage.application_delay;
  const std::vector<double> breaks{start};
  const auto command = [&](double t) { return t >= start - kTimeEps ? stage.max_decel : 0.0; };

  EgoMotion ego(ego_track);
  for (std::int64_t k = k0; k <= k_cap; ++k) {
    const double t = tick_time(k);
    const TrajectorySample e = ego.state(t);
    const TrajectorySample o = opp_track.extrapolated_at(t);
    if (obb_overlap(extended_front(footprint(e, ego_dims), front_extension),
                    footprint(o, opp_dims))) {
      return false;
    }
    if (ego.stopped() && t >= opp_end - kTimeEps) {
      return true;
    }
    ego.advance(t, tick_time(k + 1), start, breaks, command, mu_actual, stage.jerk);
  }
  return true;
}

std::string trace_csv(const SimulationOutcome & outcome)
{
  std::ostringstream os;
  os << "t,ego_x,ego_y,ego_v,ego_a,opp_x,opp_y,det_onboard,det_v2x,stage_flags\n";
  os << std::setprecision(10);
  for (const auto & r : outcome.trace) {
    os << r.t << ',' << r.ego_x << ',' << r.ego_y << ',' << r.ego_v << ',' << r.ego_a << ','
       << r.opp_x << ',' << r.opp_y << ',' << (r.det_onboard ? 1 : 0) << ','
       << (r.det_v2x ? 1 : 0) << ',' << r.stage_flags << '\n';
  }
  return os.str();
}

}  // namespace pcsim
