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

#ifndef PCSIM__EXPERIMENT_HPP_
#define PCSIM__EXPERIMENT_HPP_

#include "pcsim/cause_analysis.hpp"
#include "pcsim/scenario.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pcsim
{

struct GeneratorSource
{
  std::size_t n{100};
  std::string profile{"mixed"};
  std::uint64_t seed{0};
};

struct ExperimentConfig
{
  std::string scenario_dir;                 // scenario files (*.json), used when set
  std::optional<GeneratorSource> generator;  // otherwise a generated corpus
  std::vector<std::string> brake_types{"aeb", "v2x", "two-stage"};
  std::vector<std::string> sensor_sets{"1V", "1R1V", "5R1V"};
  std::vector<double> ttc_thresholds{2.0, 1.5, 1.25};
  bool friction_known{false};
  std::map<std::string, double> overrides;
  unsigned jobs{1};
  std::uint64_t seed{0};
  bool lenient{false};
};

/// Reads the JSON dialect of the CLI flags. Throws ConfigError / ParseError / IoError.
ExperimentConfig parse_experiment_config(const std::string & text);
ExperimentConfig load_experiment_config(const std::string & path);

struct Cell
{
  std::string brake;
  std::string sensor_set;
  double ttc_threshold{1.25};

  bool operator==(const Cell & o) const = default;
  bool operator<(const Cell & o) const;
};

/// AEB contributes one cell per sensor set at its fixed 1.25 s; the V2X-based brakes
/// one per sensor set and threshold. Throws ConfigError for unknown names or no cells.
std::vector<Cell> expand_cells(const ExperimentConfig & cfg);

/// Brake configuration of a cell with overrides applied. Throws ConfigError for bad overrides.
CascadeConfig cell_cascade(const Cell & cell, const std::map<std::string, double> & overrides);
ClassifierConfig classifier_config(const std::map<std::string, double> & overrides);

/// Override keys understood by cell_cascade and classifier_config.
std::vector<std::string> override_keys();

using CauseCounts = std::array<std::size_t, kAllCauses.size()>;

struct ScenarioRecord
{
  std::string scenario_id;
  RunResult result{RunResult::kAvoided};
  double impact_speed_ego{0.0};
  std::vector<CrashCause> stage_causes;  // cascade order
  std::optional<std::pair<CrashCause, CrashCause>> resolved_pair;

  bool operator==(const ScenarioRecord & o) const = default;
};

struct CellReport
{
  Cell cell;
  std::vector<std::string> stage_names;
  std::size_t n{0};
  std::size_t avoided{0};
  CauseCounts causes{};                    // first AEB stage, else the only stage
  std::vector<CauseCounts> stage_causes;   // per stage
  std::map<std::string, std::size_t> pairs;  // cascades only, keyed by pair label
  std::vector<ScenarioRecord> records;       // sorted by scenario id

  double avoided_pct() const { return n == 0 ? 0.0 : 100.0 * static_cast<double>(avoided) / static_cast<double>(n); }
  double pct(std::size_t count) const { return n == 0 ? 0.0 : 100.0 * static_cast<double>(count) / static_cast<double>(n); }

  bool operator==(const CellReport & o) const = default;
};

struct SkippedScenario
{
  std::string source;
  std::string error;

  bool operator==(const SkippedScenario & o) const = default;
};

struct AggregateReport
{
  bool friction_known{false};
  std::vector<CellReport> cells;  // sorted by cell
  std::vector<SkippedScenario> skipped;

  const CellReport * find(const Cell & cell) const;

  bool operator==(const AggregateReport & o) const = default;
};

/// Combines partial reports over disjoint scenario sets; associative and commutative.
AggregateReport merge(const AggregateReport & a, const AggregateReport & b);

/// Simulates and classifies every scenario in every cell.
AggregateReport run_experiment(const ExperimentConfig & cfg, const std::vector<Scenario> & corpus);

/// Loads or generates the corpus first; invalid files are reported in `skipped`.
/// Throws ConfigError when no scenario remains.
AggregateReport run_experiment(const ExperimentConfig & cfg);

/// Scenario files in `dir`, sorted by file name. Failures are appended to `skipped`.
std::vector<Scenario> load_corpus(const std::string & dir, bool lenient,
                                  std::vector<SkippedScenario> & skipped);

}  // namespace pcsim

#endif  // PCSIM__EXPERIMENT_HPP_
