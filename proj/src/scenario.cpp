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

#include "pcsim/scenario.hpp"

#include "pcsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pcsim
{

namespace
{

constexpr double kTimeEps = 1e-9;

TrajectorySample lerp(const TrajectorySample & a, const TrajectorySample & b, double t)
{
  const double r = (t - a.t) / (b.t - a.t);
  TrajectorySample s;
  s.t = t;
  s.x = a.x + (b.x - a.x) * r;
  s.y = a.y + (b.y - a.y) * r;
  s.heading = interpolate_heading(a.heading, b.heading, r);
  s.speed = a.speed + (b.speed - a.speed) * r;
  s.accel = a.accel + (b.accel - a.accel) * r;
  return s;
}

std::string sample_path(const std::string & track, std::size_t i, const char * field)
{
  std::ostringstream os;
  os << track << ".samples[" << i << "]" << (field[0] ? "." : "") << field;
  return os.str();
}

void validate_track(const VehicleTrack & track, const std::string & name,
                    std::vector<std::string> & warnings)
{
  if (!(track.length > 0.0) || !std::isfinite(track.length)) {
    throw ValidationError(name + ".length", "must be > 0");
  }
  if (!(track.width > 0.0) || !std::isfinite(track.width)) {
    throw ValidationError(name + ".width", "must be > 0");
  }
  if (track.samples.size() < 2) {
    throw ValidationError(name + ".samples", "at least 2 samples required");
  }
  for (std::size_t i = 0; i < track.samples.size(); ++i) {
    const auto & s = track.samples[i];
    if (!std::isfinite(s.t)) {
      throw ValidationError(sample_path(name, i, "t"), "not finite");
    }
    if (!std::isfinite(s.x) || !std::isfinite(s.y)) {
      throw ValidationError(sample_path(name, i, "x"), "position not finite");
    }
    if (!std::isfinite(s.heading)) {
      throw ValidationError(sample_path(name, i, "heading"), "not finite");
    }
    if (!std::isfinite(s.speed) || s.speed < 0.0) {
      throw ValidationError(sample_path(name, i, "speed"), "must be finite and >= 0");
    }
    if (!std::isfinite(s.accel)) {
      throw ValidationError(sample_path(name, i, "accel"), "not finite");
    }
    if (i > 0) {
      const auto & p = track.samples[i - 1];
      if (!(s.t > p.t)) {
        throw ValidationError(sample_path(name, i, "t"), "times must be strictly increasing");
      }
      const double travelled = (s.position() - p.position()).norm();
      const double expected = 0.5 * (s.speed + p.speed) * (s.t - p.t);
      if (std::abs(travelled - expected) > 0.5) {
        warnings.push_back(sample_path(name, i, "") + ": displacement " +
                           std::to_string(travelled) + " m inconsistent with speed (" +
                           std::to_string(expected) + " m)");
      }
    }
  }
  const auto first = static_cast<std::int64_t>(std::ceil(track.start_time() * kTicksPerSecond - 1e-6));
  const auto last = static_cast<std::int64_t>(std::floor(track.end_time() * kTicksPerSecond + 1e-6));
  if (last - first < 1) {
    throw ValidationError(name + ".samples", "track spans less than one simulation step");
  }
}

}  // namespace

std::int64_t nearest_tick(double t)
{
  return static_cast<std::int64_t>(std::llround(t * kTicksPerSecond));
}

const char * to_string(VehicleType type)
{
  return type == VehicleType::kBicycle ? "bicycle" : "passenger_car";
}

VehicleType vehicle_type_from_string(const std::string & name)
{
  if (name == "passenger_car") {
    return VehicleType::kPassengerCar;
  }
  if (name == "bicycle") {
    return VehicleType::kBicycle;
  }
  throw ValidationError("vehicle_type", "unknown vehicle type '" + name + "'");
}

TrajectorySample VehicleTrack::sample_at(double t) const
{
  if (t < start_time() - kTimeEps || t > end_time() + kTimeEps) {
    throw Error("time " + std::to_string(t) + " s outside track [" +
                std::to_string(start_time()) + ", " + std::to_string(end_time()) + "]");
  }
  auto it = std::upper_bound(samples.begin(), samples.end(), t,
                             [](double v, const TrajectorySample & s) { return v < s.t; });
  if (it == samples.begin()) {
    return samples.front();
  }
  const auto & a = *(it - 1);
  if (it == samples.end() || std::abs(t - a.t) <= kTimeEps) {
    auto s = (it == samples.end()) ? samples.back() : a;
    s.t = t;
    return s;
  }
  return lerp(a, *it, t);
}

TrajectorySample VehicleTrack::extrapolated_at(double t) const
{
  if (t <= end_time() + kTimeEps) {
    return sample_at(t);
  }
  TrajectorySample s = samples.back();
  const double dt = t - s.t;
  s.x += std::cos(s.heading) * s.speed * dt;
  s.y += std::sin(s.heading) * s.speed * dt;
  s.accel = 0.0;
  s.t = t;
  return s;
}

VehicleTrack resample(const VehicleTrack & track)
{
  VehicleTrack out = track;
  out.samples.clear();
  const auto first = static_cast<std::int64_t>(std::ceil(track.start_time() * kTicksPerSecond - 1e-6));
  const auto last = static_cast<std::int64_t>(std::floor(track.end_time() * kTicksPerSecond + 1e-6));
  out.samples.reserve(static_cast<std::size_t>(std::max<std::int64_t>(0, last - first + 1)));
  std::size_t seg = 0;
  for (std::int64_t k = first; k <= last; ++k) {
    const double t = tick_time(k);
    while (seg + 1 < track.samples.size() && track.samples[seg + 1].t <= t + kTimeEps) {
      ++seg;
    }
    const auto & a = track.samples[seg];
    TrajectorySample s;
    if (std::abs(a.t - t) <= kTimeEps || seg + 1 == track.samples.size()) {
      s = a;
    } else {
      s = lerp(a, track.samples[seg + 1], t);
    }
    s.t = t;
    out.samples.push_back(s);
  }
  return out;
}

OrientedBox footprint(const TrajectorySample & s, const Dimensions & dims)
{
  return OrientedBox{s.position(), s.heading, dims.length, dims.width};
}

OrientedBox footprint(const VehicleTrack & track, double t)
{
  return footprint(track.sample_at(t), track.dims());
}

double Scenario::start_time() const { return std::max(ego.start_time(), opponent.start_time()); }
double Scenario::end_time() const { return std::min(ego.end_time(), opponent.end_time()); }

std::vector<std::string> validate(const Scenario & scenario)
{
  std::vector<std::string> warnings;
  if (!(scenario.friction_mu > 0.0) || !(scenario.friction_mu <= 1.5)) {
    throw ValidationError("friction_mu", "must lie in (0, 1.5]");
  }
  validate_track(scenario.ego, "ego", warnings);
  validate_track(scenario.opponent, "opponent", warnings);
  for (std::size_t i = 0; i < scenario.obstructions.size(); ++i) {
    const auto & poly = scenario.obstructions[i].polygon;
    const std::string path = "obstructions[" + std::to_string(i) + "]";
    if (poly.size() < 3) {
      throw ValidationError(path, "polygon needs at least 3 vertices");
    }
    for (const auto & v : poly) {
      if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
        throw ValidationError(path, "vertex not finite");
      }
    }
    if (!polygon_is_simple(poly)) {
      throw ValidationError(path, "polygon is not simple");
    }
  }
  if (!(scenario.start_time() + kSimulationStep <= scenario.end_time() + kTimeEps)) {
    throw ValidationError("opponent.samples", "ego and opponent tracks share no common interval");
  }
  return warnings;
}

Scenario prepare(const Scenario & scenario, std::vector<std::string> * warnings)
{
  auto w = validate(scenario);
  if (warnings != nullptr) {
    warnings->insert(warnings->end(), w.begin(), w.end());
  }
  Scenario out = scenario;
  out.ego = resample(scenario.ego);
  out.opponent = resample(scenario.opponent);
  return out;
}

TrackPath::TrackPath(const VehicleTrack & track)
{
  points_.reserve(track.samples.size());
  headings_.reserve(track.samples.size());
  arc_.reserve(track.samples.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < track.samples.size(); ++i) {
    const auto & s = track.samples[i];
    if (i > 0) {
      acc += (s.position() - points_.back()).norm();
    }
    points_.push_back(s.position());
    headings_.push_back(s.heading);
    arc_.push_back(acc);
  }
}

TrackPath::Pose TrackPath::pose_at(double arc) const
{
  if (arc <= 0.0) {
    return {points_.front() + unit_from_heading(headings_.front()) * arc, headings_.front()};
  }
  if (arc >= arc_.back()) {
    return {points_.back() + unit_from_heading(headings_.back()) * (arc - arc_.back()),
            headings_.back()};
  }
  // first index with arc_[i] > arc; segment is [i-1, i] and has positive length
  const auto it = std::upper_bound(arc_.begin(), arc_.end(), arc);
  const auto i = static_cast<std::size_t>(it - arc_.begin());
  const double a0 = arc_[i - 1];
  const double r = (arc - a0) / (arc_[i] - a0);
  return {points_[i - 1] + (points_[i] - points_[i - 1]) * r,
          interpolate_heading(headings_[i - 1], headings_[i], r)};
}

}  // namespace pcsim
