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

#include "pcsim/scenario_io.hpp"

#include "pcsim/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace pcsim
{

namespace
{

using nlohmann::json;

void check_keys(const json & obj, const std::set<std::string> & allowed, const std::string & where,
                const LoadOptions & options, std::vector<std::string> & warnings)
{
  for (const auto & item : obj.items()) {
    if (allowed.count(item.key()) == 0) {
      const std::string path = where.empty() ? item.key() : where + "." + item.key();
      if (!options.lenient) {
        throw ValidationError(path, "unknown key");
      }
      warnings.push_back(path + ": unknown key ignored");
    }
  }
}

double number_at(const json & obj, const char * key, const std::string & where)
{
  const std::string path = where.empty() ? key : where + "." + key;
  if (!obj.contains(key)) {
    throw ValidationError(path, "missing");
  }
  const auto & v = obj.at(key);
  if (!v.is_number()) {
    throw ValidationError(path, "expected a number");
  }
  return v.get<double>();
}

VehicleTrack parse_track(const json & obj, const std::string & where, const LoadOptions & options,
                         std::vector<std::string> & warnings)
{
  if (!obj.is_object()) {
    throw ValidationError(where, "expected an object");
  }
  check_keys(obj, {"vehicle_type", "length", "width", "samples"}, where, options, warnings);
  VehicleTrack track;
  if (!obj.contains("vehicle_type") || !obj.at("vehicle_type").is_string()) {
    throw ValidationError(where + ".vehicle_type", "expected a string");
  }
  try {
    track.vehicle_type = vehicle_type_from_string(obj.at("vehicle_type").get<std::string>());
  } catch (const ValidationError & e) {
    throw ValidationError(where + ".vehicle_type", e.what());
  }
  track.length = number_at(obj, "length", where);
  track.width = number_at(obj, "width", where);
  if (!obj.contains("samples") || !obj.at("samples").is_array()) {
    throw ValidationError(where + ".samples", "expected an array");
  }
  const auto & samples = obj.at("samples");
  track.samples.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto & row = samples[i];
    if (!row.is_array() || row.size() != 6) {
      throw ValidationError(where + ".samples[" + std::to_string(i) + "]",
                            "expected [t, x, y, heading, speed, accel]");
    }
    for (const auto & v : row) {
      if (!v.is_number()) {
        throw ValidationError(where + ".samples[" + std::to_string(i) + "]",
                              "non-numeric entry");
      }
    }
    track.samples.push_back({row[0].get<double>(), row[1].get<double>(), row[2].get<double>(),
                             row[3].get<double>(), row[4].get<double>(), row[5].get<double>()});
  }
  return track;
}

json track_to_json(const VehicleTrack & track)
{
  json samples = json::array();
  for (const auto & s : track.samples) {
    samples.push_back({s.t, s.x, s.y, s.heading, s.speed, s.accel});
  }
  return json{{"vehicle_type", to_string(track.vehicle_type)},
              {"length", track.length},
              {"width", track.width},
              {"samples", std::move(samples)}};
}

}  // namespace

Scenario parse_scenario(const std::string & text, const LoadOptions & options,
                        std::vector<std::string> * warnings)
{
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error & e) {
    throw ParseError(std::string("malformed scenario JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ParseError("scenario JSON must be an object");
  }
  std::vector<std::string> local;
  check_keys(doc, {"id", "friction_mu", "obstructions", "ego", "opponent", "meta"}, "", options,
             local);

  Scenario s;
  if (doc.contains("id")) {
    if (!doc.at("id").is_string()) {
      throw ValidationError("id", "expected a string");
    }
    s.id = doc.at("id").get<std::string>();
  }
  s.friction_mu = number_at(doc, "friction_mu", "");
  if (!doc.contains("ego")) {
    throw ValidationError("ego", "missing");
  }
  if (!doc.contains("opponent")) {
    throw ValidationError("opponent", "missing");
  }
  s.ego = parse_track(doc.at("ego"), "ego", options, local);
  s.opponent = parse_track(doc.at("opponent"), "opponent", options, local);
  if (doc.contains("obstructions")) {
    const auto & obs = doc.at("obstructions");
    if (!obs.is_array()) {
      throw ValidationError("obstructions", "expected an array");
    }
    for (std::size_t i = 0; i < obs.size(); ++i) {
      const std::string path = "obstructions[" + std::to_string(i) + "]";
      if (!obs[i].is_array()) {
        throw ValidationError(path, "expected an array of [x, y]");
      }
      Obstruction o;
      for (const auto & v : obs[i]) {
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
          throw ValidationError(path, "vertex must be [x, y]");
        }
        o.polygon.push_back({v[0].get<double>(), v[1].get<double>()});
      }
      s.obstructions.push_back(std::move(o));
    }
  }
  if (doc.contains("meta")) {
    const auto & meta = doc.at("meta");
    if (!meta.is_object()) {
      throw ValidationError("meta", "expected an object");
    }
    for (const auto & item : meta.items()) {
      if (!item.value().is_string()) {
        throw ValidationError("meta." + item.key(), "expected a string");
      }
      s.meta[item.key()] = item.value().get<std::string>();
    }
  }

  if (options.resample) {
    s = prepare(s, &local);
  } else {
    auto w = validate(s);
    local.insert(local.end(), w.begin(), w.end());
  }
  if (warnings != nullptr) {
    warnings->insert(warnings->end(), local.begin(), local.end());
  }
  return s;
}

Scenario load_scenario(const std::string & path, const LoadOptions & options,
                       std::vector<std::string> * warnings)
{
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open scenario file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), options, warnings);
}

std::string serialize_scenario(const Scenario & scenario)
{
  json obs = json::array();
  for (const auto & o : scenario.obstructions) {
    json poly = json::array();
    for (const auto & v : o.polygon) {
      poly.push_back({v.x, v.y});
    }
    obs.push_back(std::move(poly));
  }
  json meta = json::object();
  for (const auto & [k, v] : scenario.meta) {
    meta[k] = v;
  }
  json doc = json::object();
  doc["id"] = scenario.id;
  doc["friction_mu"] = scenario.friction_mu;
  doc["obstructions"] = std::move(obs);
  doc["ego"] = track_to_json(scenario.ego);
  doc["opponent"] = track_to_json(scenario.opponent);
  doc["meta"] = std::move(meta);
  return doc.dump();
}

void save_scenario(const Scenario & scenario, const std::string & path)
{
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write scenario file '" + path + "'");
  }
  out << serialize_scenario(scenario) << '\n';
  if (!out) {
    throw IoError("write failed for '" + path + "'");
  }
}

}  // namespace pcsim
