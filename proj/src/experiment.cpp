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

#include "pcsim/experiment.hpp"

#include "pcsim/errors.hpp"
#include "pcsim/generator.hpp"
#include "pcsim/perception.hpp"
#include "pcsim/scenario_io.hpp"
#include "pcsim/simulation.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <thread>

namespace pcsim
{

namespace
{

using nlohmann::json;

const std::vector<std::string> & stage_params()
{
  static const std::vector<std::string> params{
    "max_decel",     "jerk",      "application_delay", "ttc_threshold",
    "ego_accel_threshold", "safety_dist", "use_tte",  "mu_assumed",
    "a_lat_max",     "horizon",   "fuse_onboard"};
  return params;
}

void apply_param(BrakeStageConfig & stage, const std::string & param, double value)
{
  if (param == "max_decel") {
    stage.max_decel = value;
  } else if (param == "jerk") {
    stage.jerk = value;
  } else if (param == "application_delay") {
    stage.application_delay = value;
  } else if (param == "ttc_threshold") {
    stage.ttc_threshold = value;
  } else if (param == "ego_accel_threshold") {
    stage.ego_accel_threshold = value;
  } else if (param == "safety_dist") {
    stage.safety_dist = value;
  } else if (param == "use_tte") {
    stage.use_tte_condition = value != 0.0;
  } else if (param == "mu_assumed") {
    stage.mu_assumed = value;
  } else if (param == "a_lat_max") {
    stage.a_lat_max = value;
  } else if (param == "horizon") {
    stage.horizon = value;
  } else if (param == "fuse_onboard") {
    stage.fuse_onboard = value != 0.0;
  } else {
    throw ConfigError("unknown brake parameter '" + param + "'");
  }
}

std::string canonical_sensor_set(const std::string & name) { return sensor_set(name).name; }

std::string canonical_brake(const std::string & name) { return brake_preset(name).name; }

template <typename T>
std::vector<T> json_list(const json & v, const char * key)
{
  if (!v.is_array()) {
    throw ConfigError(std::string(key) + ": expected an array");
  }
  std::vector<T> out;
  for (const auto & item : v) {
    out.push_back(item.get<T>());
  }
  return out;
}

void add_counts(CauseCounts & into, const CauseCounts & from)
{
  for (std::size_t i = 0; i < into.size(); ++i) {
    into[i] += from[i];
  }
}

}  // namespace

bool Cell::operator<(const Cell & o) const
{
  const auto rank = [](const std::string & brake) {
    const auto & names = brake_preset_names();
    return std::find(names.begin(), names.end(), brake) - names.begin();
  };
  const auto srank = [](const std::string & set) {
    const auto & names = sensor_set_names();
    return std::find(names.begin(), names.end(), set) - names.begin();
  };
  if (rank(brake) != rank(o.brake)) {
    return rank(brake) < rank(o.brake);
  }
  if (srank(sensor_set) != srank(o.sensor_set)) {
    return srank(sensor_set) < srank(o.sensor_set);
  }
  return ttc_threshold > o.ttc_threshold;
}

ExperimentConfig parse_experiment_config(const std::string & text)
{
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error & e) {
    throw ParseError(std::string("malformed experiment config: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ParseError("experiment config must be a JSON object");
  }
  ExperimentConfig cfg;
  try {
    for (const auto & item : doc.items()) {
      const std::string & key = item.key();
      const json & v = item.value();
      if (key == "scenarios") {
        cfg.scenario_dir = v.get<std::string>();
      } else if (key == "generate") {
        GeneratorSource g;
        g.n = v.value("n", g.n);
        g.profile = v.value("profile", g.profile);
        g.seed = v.value("seed", g.seed);
        cfg.generator = g;
      } else if (key == "brakes") {
        cfg.brake_types = json_list<std::string>(v, "brakes");
      } else if (key == "sensor_sets") {
        cfg.sensor_sets = json_list<std::string>(v, "sensor_sets");
      } else if (key == "ttc") {
        cfg.ttc_thresholds = json_list<double>(v, "ttc");
      } else if (key == "friction_known") {
        cfg.friction_known = v.get<bool>();
      } else if (key == "overrides") {
        for (const auto & o : v.items()) {
          cfg.overrides[o.key()] = o.value().is_boolean() ? (o.value().get<bool>() ? 1.0 : 0.0)
                                                          : o.value().get<double>();
        }
      } else if (key == "jobs") {
        cfg.jobs = v.get<unsigned>();
      } else if (key == "seed") {
        cfg.seed = v.get<std::uint64_t>();
      } else if (key == "lenient") {
        cfg.lenient = v.get<bool>();
      } else {
        throw ConfigError("unknown experiment config key '" + key + "'");
      }
    }
  } catch (const json::exception & e) {
    throw ConfigError(std::string("experiment config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string & path)
{
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open experiment config '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_experiment_config(buf.str());
}

std::vector<Cell> expand_cells(const ExperimentConfig & cfg)
{
  std::vector<Cell> cells;
  for (const auto & b : cfg.brake_types) {
    const std::string brake = canonical_brake(b);
    for (const auto & s : cfg.sensor_sets) {
      const std::string set = canonical_sensor_set(s);
      if (brake == "aeb") {
        cells.push_back({brake, set, aeb_stage().ttc_threshold});
        continue;
      }
      for (double thr : cfg.ttc_thresholds) {
        if (!(thr > 0.0)) {
          throw ConfigError("TTC thresholds must be > 0");
        }
        cells.push_back({brake, set, thr});
      }
    }
  }
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  if (cells.empty()) {
    throw ConfigError("the experiment has no (brake, sensor set, threshold) cell");
  }
  return cells;
}

std::vector<std::string> override_keys()
{
  std::vector<std::string> keys;
  for (const char * prefix : {"aeb.", "v2x.", "brake."}) {
    for (const auto & p : stage_params()) {
      if (std::string(prefix) == "v2x." && p == "ttc_threshold") {
        continue;
      }
      keys.push_back(prefix + p);
    }
  }
  keys.push_back("classifier.steering_deg");
  keys.push_back("classifier.opp_accel");
  return keys;
}

CascadeConfig cell_cascade(const Cell & cell, const std::map<std::string, double> & overrides)
{
  CascadeConfig c = brake_preset(cell.brake, cell.ttc_threshold);
  for (const auto & [key, value] : overrides) {
    const auto dot = key.find('.');
    if (dot == std::string::npos) {
      throw ConfigError("invalid override '" + key + "'");
    }
    const std::string scope = key.substr(0, dot);
    const std::string param = key.substr(dot + 1);
    if (scope == "classifier") {
      if (param != "steering_deg" && param != "opp_accel") {
        throw ConfigError("invalid override '" + key + "'");
      }
      continue;
    }
    if (scope != "aeb" && scope != "v2x" && scope != "brake") {
      throw ConfigError("invalid override '" + key + "'");
    }
    if (std::find(stage_params().begin(), stage_params().end(), param) == stage_params().end()) {
      throw ConfigError("invalid override '" + key + "'");
    }
    if (scope == "v2x" && param == "ttc_threshold") {
      throw ConfigError("the V2X threshold is swept; use the ttc list instead of '" + key + "'");
    }
    for (auto & stage : c.stages) {
      const bool match = scope == "brake" || (scope == "aeb" && stage.name == StageName::kAeb) ||
                         (scope == "v2x" && stage.name == StageName::kV2xPartial);
      if (match) {
        apply_param(stage, param, value);
      }
    }
  }
  for (const auto & stage : c.stages) {
    check(stage);
  }
  return c;
}

ClassifierConfig classifier_config(const std::map<std::string, double> & overrides)
{
  ClassifierConfig c;
  if (auto it = overrides.find("classifier.steering_deg"); it != overrides.end()) {
    c.steering_threshold = it->second * std::numbers::pi / 180.0;
  }
  if (auto it = overrides.find("classifier.opp_accel"); it != overrides.end()) {
    c.opp_accel_threshold = it->second;
  }
  return c;
}

const CellReport * AggregateReport::find(const Cell & cell) const
{
  for (const auto & c : cells) {
    if (c.cell == cell) {
      return &c;
    }
  }
  return nullptr;
}

AggregateReport merge(const AggregateReport & a, const AggregateReport & b)
{
  if (a.cells.empty() && a.skipped.empty()) {
    return b;
  }
  if (b.cells.empty() && b.skipped.empty()) {
    return a;
  }
  if (a.friction_known != b.friction_known) {
    throw ConfigError("cannot merge reports with different friction knowledge");
  }
  AggregateReport out;
  out.friction_known = a.friction_known;
  std::map<Cell, CellReport> cells;
  for (const auto * part : {&a, &b}) {
    for (const auto & c : part->cells) {
      auto [it, fresh] = cells.try_emplace(c.cell, c);
      if (fresh) {
        continue;
      }
      CellReport & m = it->second;
      m.n += c.n;
      m.avoided += c.avoided;
      add_counts(m.causes, c.causes);
      for (std::size_t i = 0; i < m.stage_causes.size() && i < c.stage_causes.size(); ++i) {
        add_counts(m.stage_causes[i], c.stage_causes[i]);
      }
      for (const auto & [label, count] : c.pairs) {
        m.pairs[label] += count;
      }
      m.records.insert(m.records.end(), c.records.begin(), c.records.end());
      std::stable_sort(m.records.begin(), m.records.end(),
                       [](const ScenarioRecord & x, const ScenarioRecord & y) {
                         return x.scenario_id < y.scenario_id;
                       });
    }
  }
  for (auto & [cell, report] : cells) {
    out.cells.push_back(std::move(report));
  }
  out.skipped = a.skipped;
  out.skipped.insert(out.skipped.end(), b.skipped.begin(), b.skipped.end());
  std::stable_sort(out.skipped.begin(), out.skipped.end(),
                   [](const SkippedScenario & x, const SkippedScenario & y) {
                     return x.source < y.source;
                   });
  return out;
}

AggregateReport run_experiment(const ExperimentConfig & cfg, const std::vector<Scenario> & corpus)
{
  if (corpus.empty()) {
    throw ConfigError("empty scenario corpus");
  }
  const std::vector<Cell> cells = expand_cells(cfg);
  std::vector<CascadeConfig> cascades;
  for (const auto & cell : cells) {
    cascades.push_back(cell_cascade(cell, cfg.overrides));
  }
  const ClassifierConfig classifier = classifier_config(cfg.overrides);
  std::vector<SensorSet> sets;
  for (const auto & name : sensor_set_names()) {
    sets.push_back(sensor_set(name));
  }
  const auto set_index = [](const std::string & name) {
    const auto & names = sensor_set_names();
    return static_cast<std::size_t>(std::find(names.begin(), names.end(), name) - names.begin());
  };

  // Every (scenario, cell) result lands in its own slot; merging is then order independent.
  std::vector<std::vector<ScenarioRecord>> slots(corpus.size(),
                                                 std::vector<ScenarioRecord>(cells.size()));
  std::vector<std::string> failures(corpus.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < corpus.size(); i = next.fetch_add(1)) {
      const Scenario & s = corpus[i];
      try {
        std::vector<std::optional<GroundTruth>> truths(sets.size());
        for (std::size_t c = 0; c < cells.size(); ++c) {
          const std::size_t si = set_index(cells[c].sensor_set);
          RunOptions options;
          options.friction_known = cfg.friction_known;
          const auto outcome = run(s, cascades[c], sets[si], options);
          ScenarioRecord & r = slots[i][c];
          r.scenario_id = s.id;
          r.result = outcome.result;
          r.impact_speed_ego = outcome.impact_speed_ego;
          if (outcome.result == RunResult::kCrash) {
            if (!truths[si]) {
              truths[si].emplace(s, sets[si]);
            }
            const auto report =
              classify(outcome, *truths[si], cascades[c], cfg.friction_known, classifier);
            for (const auto & st : report.stages) {
              r.stage_causes.push_back(st.resolved_label);
            }
            r.resolved_pair = report.pair;
          }
        }
      } catch (const std::exception & e) {
        failures[i] = e.what();
      }
    }
  };
  const unsigned jobs = std::max(1u, cfg.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) {
      pool.emplace_back(worker);
    }
    for (auto & t : pool) {
      t.join();
    }
  }

  AggregateReport report;
  report.friction_known = cfg.friction_known;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    CellReport cr;
    cr.cell = cells[c];
    std::size_t aeb_stage = 0;
    for (std::size_t k = 0; k < cascades[c].stages.size(); ++k) {
      cr.stage_names.push_back(to_string(cascades[c].stages[k].name));
      if (cascades[c].stages[k].name == StageName::kAeb) {
        aeb_stage = k;
      }
    }
    cr.stage_causes.assign(cascades[c].stages.size(), CauseCounts{});
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      if (!failures[i].empty()) {
        continue;
      }
      const ScenarioRecord & r = slots[i][c];
      ++cr.n;
      if (r.result == RunResult::kAvoided) {
        ++cr.avoided;
      } else {
        for (std::size_t k = 0; k < r.stage_causes.size(); ++k) {
          ++cr.stage_causes[k][static_cast<std::size_t>(r.stage_causes[k])];
        }
        ++cr.causes[static_cast<std::size_t>(r.stage_causes[aeb_stage])];
        if (r.resolved_pair) {
          ++cr.pairs[pair_label(*r.resolved_pair)];
        }
      }
      cr.records.push_back(r);
    }
    std::stable_sort(cr.records.begin(), cr.records.end(),
                     [](const ScenarioRecord & x, const ScenarioRecord & y) {
                       return x.scenario_id < y.scenario_id;
                     });
    report.cells.push_back(std::move(cr));
  }
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!failures[i].empty()) {
      report.skipped.push_back({corpus[i].id, failures[i]});
    }
  }
  return report;
}

std::vector<Scenario> load_corpus(const std::string & dir, bool lenient,
                                  std::vector<SkippedScenario> & skipped)
{
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw IoError("scenario directory '" + dir + "' does not exist");
  }
  std::vector<fs::path> files;
  for (const auto & entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<Scenario> out;
  LoadOptions options;
  options.lenient = lenient;
  for (const auto & f : files) {
    try {
      Scenario s = load_scenario(f.string(), options);
      if (s.id.empty()) {
        s.id = f.stem().string();
      }
      out.push_back(std::move(s));
    } catch (const Error & e) {
      skipped.push_back({f.string(), e.what()});
    }
  }
  return out;
}

AggregateReport run_experiment(const ExperimentConfig & cfg)
{
  std::vector<SkippedScenario> skipped;
  std::vector<Scenario> corpus;
  if (!cfg.scenario_dir.empty()) {
    corpus = load_corpus(cfg.scenario_dir, cfg.lenient, skipped);
  } else if (cfg.generator) {
    corpus = generate_corpus(cfg.generator->n, cfg.generator->profile, cfg.generator->seed);
  } else {
    throw ConfigError("no scenario source: give a scenario directory or a generator");
  }
  if (corpus.empty()) {
    throw ConfigError("empty scenario corpus");
  }
  AggregateReport report = run_experiment(cfg, corpus);
  report.skipped.insert(report.skipped.begin(), skipped.begin(), skipped.end());
  return report;
}

}  // namespace pcsim
