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

#ifndef PCSIM__REPORT_IO_HPP_
#define PCSIM__REPORT_IO_HPP_

#include "pcsim/cause_analysis.hpp"
#include "pcsim/experiment.hpp"
#include "pcsim/simulation.hpp"

#include <string>

namespace pcsim
{

enum class ReportFormat { kJson, kCsv, kMarkdown };

/// "json", "csv", "markdown" / "md". Throws ConfigError.
ReportFormat report_format_from_string(const std::string & name);

/// Format guessed from the file extension, JSON by default.
ReportFormat report_format_for_path(const std::string & path);

std::string report_to_json(const AggregateReport & report);

/// Header: brake,sensor_set,ttc_threshold,n,avoided_pct, one percentage column per cause, pairs.
std::string report_to_csv(const AggregateReport & report);

/// Avoidance grid (rows: sensor sets; columns: AEB, then each brake at each threshold),
/// followed by per-cell cause shares.
std::string report_to_markdown(const AggregateReport & report);

/// Inverse of report_to_json. Throws ParseError.
AggregateReport report_from_json(const std::string & text);

/// Throws IoError.
void emit_report(const AggregateReport & report, ReportFormat format, const std::string & path);

/// Single-run outcome with optional cause report.
std::string outcome_to_json(const SimulationOutcome & outcome, const std::string & scenario_id,
                            const CascadeConfig & cascade, const std::string & sensor_set,
                            bool friction_known, const CrashCauseReport * causes);

struct StoredOutcome
{
  std::string scenario_id;
  std::string brake;
  std::string sensor_set;
  double ttc_threshold{2.0};
  bool friction_known{false};
  SimulationOutcome outcome;  // result, t_end and impact speeds; no trace
};

/// Reads what outcome_to_json wrote. Throws ParseError.
StoredOutcome outcome_from_json(const std::string & text);

std::string cause_report_to_json(const CrashCauseReport & report);

/// Writes text to a file, throwing IoError on failure.
void write_text(const std::string & path, const std::string & text);
std::string read_text(const std::string & path);

}  // namespace pcsim

#endif  // PCSIM__REPORT_IO_HPP_
