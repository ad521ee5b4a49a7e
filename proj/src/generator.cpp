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

#include "pcsim/generator.hpp"

#include "pcsim/brake_logic.hpp"
#include "pcsim/errors.hpp"
#include "pcsim/perception.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

namespace pcsim
{

namespace
{

constexpr double kSubstep = 1e-3;  // s
constexpr double kPi = std::numbers::pi;

struct Motion
{
  double v0;
  double heading_final;
  double t_cross;
  Behavior behavior;

  double speed(double t) const
  {
    if (behavior.kind == Behavior::Kind::kAccelerate && t > behavior.t_start) {
      return std::max(0.0, v0 + behavior.value * (t - behavior.t_start));
    }
    return v0;
  }

  double accel(double t) const
  {
    if (behavior.kind == Behavior::Kind::kAccelerate && t >= behavior.t_start &&
        (behavior.value > 0.0 || speed(t) > 0.0)) {
      return behavior.value;
    }
    return 0.0;
  }

  double heading(double t) const
  {
    if (behavior.kind != Behavior::Kind::kTurn || behavior.t_start >= t_cross) {
      return heading_final;
    }
    const double remaining = t_cross - std::clamp(t, behavior.t_start, t_cross);
    return wrap_angle(heading_final - behavior.value * remaining);
  }

  // Midpoint integration of the velocity over [t0, t1].
  Vec2 displacement(double t0, double t1) const
  {
    const double span = t1 - t0;
    if (span == 0.0) {
      return {};
    }
    const int n = std::max(1, static_cast<int>(std::ceil(std::abs(span) / kSubstep - 1e-9)));
    const double h = span / n;
    Vec2 d;
    for (int i = 0; i < n; ++i) {
      const double tm = t0 + (i + 0.5) * h;
      d = d + unit_from_heading(heading(tm)) * (speed(tm) * h);
    }
    return d;
  }

  bool ever_moves(double duration) const
  {
    return v0 > 0.0 || (behavior.kind == Behavior::Kind::kAccelerate && behavior.value > 0.0 &&
                        behavior.t_start < duration);
  }
};

VehicleTrack make_track(const Motion & m, const Dimensions & dims, VehicleType type,
                        double duration)
{
  VehicleTrack track;
  track.vehicle_type = type;
  track.length = dims.length;
  track.width = dims.width;
  const auto n = static_cast<std::int64_t>(std::llround(duration * kTicksPerSecond));
  const Vec2 at_cross = m.displacement(0.0, m.t_cross);
  Vec2 p = Vec2{} - at_cross;
  track.samples.reserve(static_cast<std::size_t>(n + 1));
  for (std::int64_t k = 0; k <= n; ++k) {
    const double t = tick_time(k);
    if (k > 0) {
      p = p + m.displacement(tick_time(k - 1), t);
    }
    track.samples.push_back({t, p.x, p.y, m.heading(t), m.speed(t), m.accel(t)});
  }
  return track;
}

std::string fmt(double v)
{
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

class Rng
{
public:
  Rng(std::uint64_t seed, std::uint64_t stream)
  {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
  }

  double uniform(double lo, double hi)
  {
    return lo + (hi - lo) * std::generate_canonical<double, 53>(engine_);
  }
  bool chance(double p) { return uniform(0.0, 1.0) < p; }
  std::size_t index(std::size_t n)
  {
    return std::min(n - 1, static_cast<std::size_t>(uniform(0.0, static_cast<double>(n))));
  }
  std::uint64_t next() { return engine_(); }

private:
  std::mt19937_64 engine_;
};

struct Target
{
  std::string brake;
  std::string sensor_set;
  double ttc;
};

void tag(Scenario & s, const std::string & cause, const Target & target)
{
  s.meta["target_cause"] = cause;
  s.meta["target_brake"] = target.brake;
  s.meta["target_sensor_set"] = target.sensor_set;
  s.meta["target_ttc"] = fmt(target.ttc);
}

// Corner setbacks that keep the onboard line of sight blocked until `t_clear`.
CornerObstruction occluder_clearing_at(const CrossingSpec & base, double t_clear,
                                       double mount_from_front, Rng & rng)
{
  const Scenario s = generate(base);
  const auto ego = s.ego.sample_at(t_clear);
  const auto opp = s.opponent.sample_at(t_clear);
  const double xs = std::abs(ego.x + 0.5 * base.ego_dims.length - mount_from_front);
  const double yo = std::abs(opp.y);
  const double lateral_min = 0.5 * std::max(base.ego_dims.width, base.opp_dims.width) + 0.5;
  double b = rng.uniform(lateral_min, std::max(lateral_min, 0.5 * yo));
  double a = xs * (1.0 - b / yo);
  if (a < lateral_min) {
    a = lateral_min;
    b = yo * (1.0 - a / xs);
  }
  return {b, a, 40.0};
}

CrossingSpec constant_velocity_spec(Rng & rng)
{
  CrossingSpec spec;
  spec.ego_speed = rng.uniform(5.0, 12.0);
  spec.opp_speed = rng.uniform(3.0, 12.0);
  return spec;
}

CrossingSpec steering_spec(Rng & rng, double ego_lo, double ego_hi)
{
  CrossingSpec spec;
  spec.ego_speed = rng.uniform(ego_lo, ego_hi);
  // Lane offset v * turn_time * 2 / pi stays above 2.6 m, clear of the ego lane.
  spec.opp_speed = rng.uniform(5.2, 6.2);
  const double turn_time = rng.uniform(0.8, 0.95);
  spec.opp_behavior = Behavior::turn(0.5 * kPi / turn_time, spec.time_to_crossing - turn_time);
  return spec;
}

CrossingSpec ego_accel_spec(Rng & rng)
{
  CrossingSpec spec;
  spec.ego_speed = rng.uniform(4.0, 6.0);
  spec.ego_behavior = Behavior::accelerate(rng.uniform(1.5, 2.5), 0.0);
  spec.opp_speed = rng.uniform(5.0, 10.0);
  return spec;
}

std::pair<CrossingSpec, Target> cause_design(CrashCause cause, Rng & rng)
{
  CrossingSpec spec;
  switch (cause) {
    case CrashCause::kDetection: {
      spec.ego_speed = rng.uniform(7.0, 11.0);
      spec.opp_speed = spec.ego_speed * rng.uniform(0.7, 1.2);
      const SensorSet sensors = sensor_set("1R1V");
      const Scenario unbraked = generate(spec);
      const GroundTruth truth(unbraked, sensors);
      const auto t_star = theoretical_ttb_time(truth, aeb_stage(), 1.0);
      const double t_clear = t_star.value_or(spec.time_to_crossing - 1.0) + rng.uniform(0.3, 0.6);
      spec.obstruction =
        occluder_clearing_at(spec, t_clear, sensors.onboard.mount_from_front, rng);
      return {spec, {"aeb", "1R1V", 1.25}};
    }
    case CrashCause::kTte:
      spec.ego_speed = rng.uniform(14.5, 17.0);
      spec.opp_speed = rng.uniform(4.0, 7.0);
      return {spec, {"aeb", "5R1V", 1.25}};
    case CrashCause::kTtc:
      spec.ego_speed = rng.uniform(15.5, 18.0);
      spec.opp_speed = rng.uniform(2.0, 3.5);
      return {spec, {"v2x", "1V", 2.0}};
    case CrashCause::kEgoAcceleration:
      return {ego_accel_spec(rng), {"aeb", "5R1V", 1.25}};
    case CrashCause::kFriction:
      spec.ego_speed = rng.uniform(7.0, 11.0);
      spec.opp_speed = rng.uniform(3.0, 6.0);
      spec.friction_mu = rng.uniform(0.3, 0.5);
      return {spec, {"aeb", "5R1V", 1.25}};
    case CrashCause::kSteering:
      return {steering_spec(rng, 8.5, 10.0), {"aeb", "5R1V", 1.25}};
    case CrashCause::kOpponentAcceleration: {
      // Opponent looks like it clears first, then brakes to a stop on the ego path.
      spec.ego_speed = rng.uniform(8.0, 10.0);
      spec.opp_speed = rng.uniform(8.0, 10.0);
      const double decel = rng.uniform(5.0, 6.0);
      spec.approach_sync = -rng.uniform(0.2, 0.5);
      spec.opp_behavior = Behavior::accelerate(
        -decel, spec.time_to_crossing + spec.approach_sync - spec.opp_speed / decel);
      return {spec, {"v2x", "1V", 2.0}};
    }
    case CrashCause::kNotClassified:
      break;
  }
  throw ConfigError("no targeted design for cause '" + std::string(to_string(cause)) + "'");
}

std::pair<CrossingSpec, Target> pair_design(const std::string & label, Rng & rng)
{
  CrossingSpec spec;
  if (label == "Ego a x2") {
    return {ego_accel_spec(rng), {"two-stage", "5R1V", 2.0}};
  }
  if (label == "Fri & TTC") {
    spec.ego_speed = rng.uniform(9.5, 12.5);
    spec.opp_speed = rng.uniform(4.0, 7.0);
    spec.friction_mu = rng.uniform(0.3, 0.4);
    return {spec, {"two-stage", "5R1V", 1.25}};
  }
  if (label == "Fri & Ste") {
    spec = steering_spec(rng, 8.5, 9.5);
    spec.friction_mu = rng.uniform(0.5, 0.7);
    return {spec, {"two-stage", "5R1V", 2.0}};
  }
  if (label == "Det & TTC") {
    spec.ego_speed = rng.uniform(9.5, 12.5);
    spec.opp_speed = rng.uniform(4.0, 8.0);
    spec.obstruction = CornerObstruction{1.2, 1.2, 40.0};
    return {spec, {"two-stage", "1R1V", 1.25}};
  }
  throw ConfigError("no targeted design for cause pair '" + label + "'");
}

CrossingSpec mixed_spec(Rng & rng)
{
  CrossingSpec spec;
  spec.ego_speed = rng.uniform(5.0, 20.0);
  spec.opp_speed = rng.uniform(3.0, 15.0);
  static constexpr double kMu[] = {0.3, 0.5, 0.8, 1.0};
  spec.friction_mu = kMu[rng.index(4)];
  spec.approach_sync = rng.uniform(-0.3, 0.3);
  spec.crossing_angle = kPi / 2.0 + rng.uniform(-0.35, 0.35);
  if (rng.chance(0.15)) {
    spec.opp_type = VehicleType::kBicycle;
    spec.opp_dims = {1.8, 0.6};
    spec.opp_speed = rng.uniform(3.0, 8.0);
  }
  if (rng.chance(0.25)) {
    spec.obstruction = CornerObstruction{rng.uniform(2.0, 15.0), rng.uniform(2.0, 15.0), 20.0};
  }
  const double r = rng.uniform(0.0, 1.0);
  if (r < 0.15) {
    spec.opp_behavior = Behavior::accelerate(rng.uniform(-2.0, 3.0), rng.uniform(1.0, 3.5));
  } else if (r < 0.25) {
    const double turn_time = rng.uniform(0.8, 2.0);
    spec.opp_behavior =
      Behavior::turn(rng.uniform(0.2, 0.6) * kPi / turn_time, spec.time_to_crossing - turn_time);
  }
  if (rng.chance(0.1)) {
    spec.ego_behavior = Behavior::accelerate(rng.uniform(0.5, 2.5), rng.uniform(0.0, 2.0));
  }
  return spec;
}

const std::vector<std::string> & pair_labels()
{
  static const std::vector<std::string> labels{"Ego a x2", "Fri & TTC", "Fri & Ste", "Det & TTC"};
  return labels;
}

}  // namespace

Scenario generate(const CrossingSpec & spec)
{
  if (spec.ego_speed < 0.0 || spec.opp_speed < 0.0) {
    throw ConfigError("speeds must be >= 0");
  }
  if (!(spec.duration > 0.0)) {
    throw ConfigError("duration must be > 0");
  }
  if (!(spec.friction_mu > 0.0) || spec.friction_mu > 1.5) {
    throw ConfigError("friction_mu must lie in (0, 1.5]");
  }
  const Motion ego{spec.ego_speed, 0.0, spec.time_to_crossing, spec.ego_behavior};
  Behavior opp_behavior = spec.opp_behavior;
  const Motion opp{spec.opp_speed, spec.crossing_angle, spec.time_to_crossing + spec.approach_sync,
                   opp_behavior};
  if (!ego.ever_moves(spec.duration) || !opp.ever_moves(spec.duration)) {
    throw ConfigError("infeasible crossing: a vehicle never moves, so it cannot reach the crossing point");
  }
  if (spec.ego_behavior.kind == Behavior::Kind::kTurn) {
    throw ConfigError("the ego keeps its heading; turn behaviors apply to the opponent only");
  }

  Scenario s;
  s.id = spec.id;
  s.friction_mu = spec.friction_mu;
  s.ego = make_track(ego, spec.ego_dims, VehicleType::kPassengerCar, spec.duration);
  s.opponent = make_track(opp, spec.opp_dims, spec.opp_type, spec.duration);
  if (spec.obstruction) {
    const double a = spec.obstruction->setback_opp;
    const double b = spec.obstruction->setback_ego;
    const double size = spec.obstruction->size;
    s.obstructions.push_back(
      {Polygon{{-a, -b}, {-a, -b - size}, {-a - size, -b - size}, {-a - size, -b}}});
  }
  s.meta["generator"] = "crossing";
  s.meta["seed"] = std::to_string(spec.seed);
  s.meta["ego_speed"] = fmt(spec.ego_speed);
  s.meta["opp_speed"] = fmt(spec.opp_speed);
  s.meta["approach_sync"] = fmt(spec.approach_sync);
  return s;
}

CrossingSpec targeted_spec(CrashCause cause, std::uint64_t seed)
{
  Rng rng(seed, static_cast<std::uint64_t>(cause) + 1);
  auto spec = cause_design(cause, rng).first;
  spec.seed = seed;
  return spec;
}

std::vector<std::string> corpus_profiles()
{
  std::vector<std::string> out{"mixed", "constant-velocity", "reduced-friction"};
  for (CrashCause c : kAllCauses) {
    if (c != CrashCause::kNotClassified) {
      out.push_back(std::string("cause:") + to_string(c));
    }
  }
  for (const auto & label : pair_labels()) {
    out.push_back("pair:" + label);
  }
  return out;
}

std::vector<Scenario> generate_corpus(std::size_t n, const std::string & profile,
                                      std::uint64_t seed)
{
  if (n == 0) {
    throw ConfigError("corpus size must be > 0");
  }
  enum class Kind { kMixed, kConstant, kReduced, kCause, kPair } kind;
  CrashCause cause = CrashCause::kNotClassified;
  std::string pair;
  std::string tag_name = profile;
  if (profile == "mixed") {
    kind = Kind::kMixed;
  } else if (profile == "constant-velocity") {
    kind = Kind::kConstant;
  } else if (profile == "reduced-friction") {
    kind = Kind::kReduced;
  } else if (profile.rfind("cause:", 0) == 0) {
    kind = Kind::kCause;
    cause = crash_cause_from_string(profile.substr(6));
    if (cause == CrashCause::kNotClassified) {
      throw ConfigError("NotClassified cannot be targeted");
    }
    tag_name = std::string("cause-") + to_string(cause);
  } else if (profile.rfind("pair:", 0) == 0) {
    kind = Kind::kPair;
    pair = profile.substr(5);
    if (std::find(pair_labels().begin(), pair_labels().end(), pair) == pair_labels().end()) {
      throw ConfigError("unknown cause pair '" + pair + "'");
    }
    tag_name = "pair-" + pair;
    std::replace(tag_name.begin(), tag_name.end(), ' ', '_');
    tag_name.erase(std::remove(tag_name.begin(), tag_name.end(), '&'), tag_name.end());
  } else {
    throw ConfigError("unknown corpus profile '" + profile + "'");
  }

  std::vector<Scenario> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(seed, i);
    CrossingSpec spec;
    std::optional<Target> target;
    switch (kind) {
      case Kind::kMixed:
        spec = mixed_spec(rng);
        break;
      case Kind::kConstant:
        spec = constant_velocity_spec(rng);
        break;
      case Kind::kReduced:
        spec.ego_speed = rng.uniform(7.0, 14.0);
        spec.opp_speed = rng.uniform(3.0, 10.0);
        spec.friction_mu = rng.uniform(0.3, 0.7);
        break;
      case Kind::kCause: {
        auto design = cause_design(cause, rng);
        spec = design.first;
        target = design.second;
        break;
      }
      case Kind::kPair: {
        auto design = pair_design(pair, rng);
        spec = design.first;
        target = design.second;
        break;
      }
    }
    spec.seed = seed;
    std::ostringstream id;
    id << tag_name << '-' << seed << '-' << std::setw(4) << std::setfill('0') << i;
    spec.id = id.str();
    Scenario s = generate(spec);
    s.meta["profile"] = profile;
    if (target) {
      tag(s, kind == Kind::kPair ? pair : to_string(cause), *target);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace pcsim
