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

#include "pcsim/report_io.hpp"

#include "pcsim/errors.hpp"
#include "pcsim/perception.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace pcsim
{

namespace
{

using nlohmann::json;

std::string fixed(double v, int digits)
{
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

std::string threshold_label(double thr)
{
  std::ostringstream os;
  os << thr;
  return os.str();
}

json counts_to_json(const CauseCounts & counts)
{
  json j = json::object();
  for (std::size_t i = 0; i < counts.size(); ++i) {
    j[to_string(kAllCauses[i])] = counts[i];
  }
  return j;
}

CauseCounts counts_from_json(const json & j)
{
  CauseCounts c{};
  for (const auto & item : j.items()) {
    c[static_cast<std::size_t>(crash_cause_from_string(item.key()))] = item.value().get<std::size_t>();
  }
  return c;
}

json record_to_json(const ScenarioRecord & r, const Cell & cell)
{
  json causes = json::array();
  for (CrashCause c : r.stage_causes) {
    causes.push_back(to_string(c));
  }
  json j = {{"scenario_id", r.scenario_id},
            {"brake", cell.brake},
            {"sensor_set", cell.sensor_set},
            {"ttc_threshold", cell.ttc_threshold},
            {"result", to_string(r.result)},
            {"impact_speed_ego", r.impact_speed_ego},
            {"stage_causes", std::move(causes)}};
  if (r.resolved_pair) {
    j["resolved_pair"] = pair_label(*r.resolved_pair);
    j["resolved_pair_causes"] = {to_string(r.resolved_pair->first),
                                 to_string(r.resolved_pair->second)};
  } else {
    j["resolved_pair"] = nullptr;
  }
  return j;
}

RunResult result_from_string(const std::string & s)
{
  if (s == "crash") {
    return RunResult::kCrash;
  }
  if (s == "avoided") {
    return RunResult::kAvoided;
  }
  throw ParseError("unknown result '" + s + "'");
}

std::string brake_column(const std::string & brake, double thr)
{
  if (brake == "aeb") {
    return "AEB";
  }
  return std::string(brake == "v2x" ? "V2X" : "2-stage") + " " + threshold_label(thr) + " s";
}

}  // namespace

ReportFormat report_format_from_string(const std::string & name)
{
  std::string key;
  for (char ch : name) {
    key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  if (key == "json") {
    return ReportFormat::kJson;
  }
  if (key == "csv") {
    return ReportFormat::kCsv;
  }
  if (key == "markdown" || key == "md") {
    return ReportFormat::kMarkdown;
  }
  throw ConfigError("unknown report format '" + name + "' (expected json, csv or markdown)");
}

ReportFormat report_format_for_path(const std::string & path)
{
  const auto dot = path.rfind('.');
  if (dot != std::string::npos) {
    const std::string ext = path.substr(dot + 1);
    if (ext == "csv") {
      return ReportFormat::kCsv;
    }
    if (ext == "md" || ext == "markdown") {
      return ReportFormat::kMarkdown;
    }
  }
  return ReportFormat::kJson;
}

std::string report_to_json(const AggregateReport & report)
{
  json cells = json::array();
  for (const auto & c : report.cells) {
    json stages = json::array();
    for (std::size_t i = 0; i < c.stage_causes.size(); ++i) {
      stages.push_back({{"stage", i < c.stage_names.size() ? c.stage_names[i] : ""},
                        {"causes", counts_to_json(c.stage_causes[i])}});
    }
    json records = json::array();
    for (const auto & r : c.records) {
      records.push_back(record_to_json(r, c.cell));
    }
    json pairs = json::object();
    for (const auto & [label, count] : c.pairs) {
      pairs[label] = count;
    }
    cells.push_back({{"brake", c.cell.brake},
                     {"sensor_set", c.cell.sensor_set},
                     {"ttc_threshold", c.cell.ttc_threshold},
                     {"n", c.n},
                     {"avoided", c.avoided},
                     {"avoided_pct", c.avoided_pct()},
                     {"causes", counts_to_json(c.causes)},
                     {"stage_causes", std::move(stages)},
                     {"pairs", std::move(pairs)},
                     {"records", std::move(records)}});
  }
  json skipped = json::array();
  for (const auto & s : report.skipped) {
    skipped.push_back({{"source", s.source}, {"error", s.error}});
  }
  json doc = {{"friction_known", report.friction_known},
              {"cells", std::move(cells)},
              {"skipped", std::move(skipped)}};
  return doc.dump(2);
}

AggregateReport report_from_json(const std::string & text)
{
  try {
    const json doc = json::parse(text);
    AggregateReport report;
    report.friction_known = doc.at("friction_known").get<bool>();
    for (const auto & jc : doc.at("cells")) {
      CellReport c;
      c.cell = {jc.at("brake").get<std::string>(), jc.at("sensor_set").get<std::string>(),
                jc.at("ttc_threshold").get<double>()};
      c.n = jc.at("n").get<std::size_t>();
      c.avoided = jc.at("avoided").get<std::size_t>();
      c.causes = counts_from_json(jc.at("causes"));
      for (const auto & js : jc.at("stage_causes")) {
        c.stage_names.push_back(js.at("stage").get<std::string>());
        c.stage_causes.push_back(counts_from_json(js.at("causes")));
      }
      for (const auto & p : jc.at("pairs").items()) {
        c.pairs[p.key()] = p.value().get<std::size_t>();
      }
      for (const auto & jr : jc.at("records")) {
        ScenarioRecord r;
        r.scenario_id = jr.at("scenario_id").get<std::string>();
        r.result = result_from_string(jr.at("result").get<std::string>());
        r.impact_speed_ego = jr.at("impact_speed_ego").get<double>();
        for (const auto & sc : jr.at("stage_causes")) {
          r.stage_causes.push_back(crash_cause_from_string(sc.get<std::string>()));
        }
        if (jr.contains("resolved_pair_causes")) {
          const auto & pc = jr.at("resolved_pair_causes");
          r.resolved_pair = std::make_pair(crash_cause_from_string(pc.at(0).get<std::string>()),
                                           crash_cause_from_string(pc.at(1).get<std::string>()));
        }
        c.records.push_back(std::move(r));
      }
      report.cells.push_back(std::move(c));
    }
    for (const auto & js : doc.at("skipped")) {
      report.skipped.push_back({js.at("source").get<std::string>(), js.at("error").get<std::string>()});
    }
    return report;
  } catch (const json::exception & e) {
    throw ParseError(std::string("malformed report JSON: ") + e.what());
  } catch (const ConfigError & e) {
    throw ParseError(std::string("malformed report JSON: ") + e.what());
  }
}

std::string report_to_csv(const AggregateReport & report)
{
  std::ostringstream os;
  os << "brake,sensor_set,ttc_threshold,n,avoided_pct";
  for (CrashCause c : kAllCauses) {
    os << ',' << to_string(c);
  }
  os << ",pairs\n";
  for (const auto & c : report.cells) {
    os << c.cell.brake << ',' << c.cell.sensor_set << ',' << threshold_label(c.cell.ttc_threshold)
       << ',' << c.n << ',' << fixed(c.avoided_pct(), 2);
    for (std::size_t i = 0; i < kAllCauses.size(); ++i) {
      os << ',' << fixed(c.pct(c.causes[i]), 2);
    }
    os << ',';
    bool first = true;
    for (const auto & [label, count] : c.pairs) {
      os << (first ? "" : ";") << label << ':' << count;
      first = false;
    }
    os << '\n';
  }
  return os.str();
}

std::string report_to_markdown(const AggregateReport & report)
{
  std::vector<std::string> sets;
  std::set<double, std::greater<>> thresholds;
  bool has_aeb = false;
  std::set<std::string> brakes;
  for (const auto & c : report.cells) {
    if (std::find(sets.begin(), sets.end(), c.cell.sensor_set) == sets.end()) {
      sets.push_back(c.cell.sensor_set);
    }
    if (c.cell.brake == "aeb") {
      has_aeb = true;
    } else {
      thresholds.insert(c.cell.ttc_threshold);
      brakes.insert(c.cell.brake);
    }
  }
  std::vector<std::pair<std::string, double>> columns;
  if (has_aeb) {
    columns.emplace_back("aeb", aeb_stage().ttc_threshold);
  }
  for (const char * b : {"v2x", "two-stage"}) {
    if (brakes.count(b) != 0) {
      for (double thr : thresholds) {
        columns.emplace_back(b, thr);
      }
    }
  }

  std::ostringstream os;
  os << "Avoided crashes in percent of " << (report.cells.empty() ? 0 : report.cells.front().n)
     << " scenarios" << (report.friction_known ? " (friction known)" : "") << "\n\n";
  os << "| Sensor set |";
  for (const auto & [b, thr] : columns) {
    os << ' ' << brake_column(b, thr) << " |";
  }
  os << "\n|---|";
  for (std::size_t i = 0; i < columns.size(); ++i) {
    os << "---:|";
  }
  os << '\n';
  for (const auto & set : sets) {
    os << "| " << set << " |";
    for (const auto & [b, thr] : columns) {
      const CellReport * c = report.find({b, set, thr});
      os << ' ' << (c != nullptr ? fixed(c->avoided_pct(), 1) + " %" : "-") << " |";
    }
    os << '\n';
  }

  os << "\nCrash causes in percent (per stage)\n\n| Cell | Stage |";
  for (CrashCause c : kAllCauses) {
    os << ' ' << short_label(c) << " |";
  }
  os << "\n|---|---|";
  for (std::size_t i = 0; i < kAllCauses.size(); ++i) {
    os << "---:|";
  }
  os << '\n';
  for (const auto & c : report.cells) {
    for (std::size_t k = 0; k < c.stage_causes.size(); ++k) {
      os << "| " << brake_column(c.cell.brake, c.cell.ttc_threshold) << ", " << c.cell.sensor_set
         << " | " << (k < c.stage_names.size() ? c.stage_names[k] : "") << " |";
      for (std::size_t i = 0; i < kAllCauses.size(); ++i) {
        os << ' ' << fixed(c.pct(c.stage_causes[k][i]), 1) << " |";
      }
      os << '\n';
    }
  }
  bool any_pairs = false;
  for (const auto & c : report.cells) {
    any_pairs = any_pairs || !c.pairs.empty();
  }
  if (any_pairs) {
    os << "\nCause pairs (AEB & V2X) in percent\n\n| Cell | Pair | Share |\n|---|---|---:|\n";
    for (const auto & c : report.cells) {
      for (const auto & [label, count] : c.pairs) {
        os << "| " << brake_column(c.cell.brake, c.cell.ttc_threshold) << ", "
           << c.cell.sensor_set << " | " << label << " | " << fixed(c.pct(count), 1) << " |\n";
      }
    }
  }
  return os.str();
}

void write_text(const std::string & path, const std::string & text)
{
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write '" + path + "'");
  }
  out << text;
  if (!out) {
    throw IoError("write failed for '" + path + "'");
  }
}

std::string read_text(const std::string & path)
{
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit_report(const AggregateReport & report, ReportFormat format, const std::string & path)
{
  switch (format) {
    case ReportFormat::kJson:
      write_text(path, report_to_json(report) + "\n");
      return;
    case ReportFormat::kCsv:
      write_text(path, report_to_csv(report));
      return;
    case ReportFormat::kMarkdown:
      write_text(path, report_to_markdown(report));
      return;
  }
}

std::string cause_report_to_json(const CrashCauseReport & report)
{
  json stages = json::array();
  for (const auto & st : report.stages) {
    json delays = json::object();
    static const char * kNames[] = {"Detection", "TTE", "TTC", "EgoAcceleration"};
    for (std::size_t i = 0; i < st.condition_delay.size(); ++i) {
      const double d = st.condition_delay[i];
      delays[kNames[i]] = std::isfinite(d) ? json(d) : json("inf");
    }
    stages.push_back({{"stage", to_string(st.stage)},
                      {"primary_trigger_cause", st.primary_trigger_cause
                                                  ? json(to_string(*st.primary_trigger_cause))
                                                  : json(nullptr)},
                      {"friction_flag", st.friction_flag},
                      {"steering_flag", st.steering_flag},
                      {"opp_accel_flag", st.opp_accel_flag},
                      {"resolved_label", to_string(st.resolved_label)},
                      {"t_star_true", st.t_star_true ? json(*st.t_star_true) : json(nullptr)},
                      {"t_star_assumed",
                       st.t_star_assumed ? json(*st.t_star_assumed) : json(nullptr)},
                      {"condition_delay", std::move(delays)}});
  }
  json j = {{"stage_causes", std::move(stages)}};
  j["resolved_pair"] = report.pair ? json(pair_label(*report.pair)) : json(nullptr);
  return j.dump(2);
}

std::string outcome_to_json(const SimulationOutcome & outcome, const std::string & scenario_id,
                            const CascadeConfig & cascade, const std::string & sensor_set,
                            bool friction_known, const CrashCauseReport * causes)
{
  double thr = aeb_stage().ttc_threshold;
  for (const auto & st : cascade.stages) {
    if (st.name == StageName::kV2xPartial) {
      thr = st.ttc_threshold;
    }
  }
  json events = json::array();
  for (const auto & e : outcome.trigger_events) {
    events.push_back({{"stage", to_string(e.stage)}, {"t", e.t}});
  }
  json j = {{"scenario_id", scenario_id},
            {"brake", cascade.name},
            {"sensor_set", sensor_set},
            {"ttc_threshold", thr},
            {"friction_known", friction_known},
            {"result", to_string(outcome.result)},
            {"t_end", outcome.t_end},
            {"impact_speed_ego", outcome.impact_speed_ego},
            {"impact_relative_speed", outcome.impact_relative_speed},
            {"trigger_events", std::move(events)}};
  if (causes != nullptr) {
    j["causes"] = json::parse(cause_report_to_json(*causes));
  }
  return j.dump(2);
}

StoredOutcome outcome_from_json(const std::string & text)
{
  try {
    const json j = json::parse(text);
    StoredOutcome s;
    s.scenario_id = j.at("scenario_id").get<std::string>();
    s.brake = j.at("brake").get<std::string>();
    s.sensor_set = j.at("sensor_set").get<std::string>();
    s.ttc_threshold = j.at("ttc_threshold").get<double>();
    s.friction_known = j.at("friction_known").get<bool>();
    s.outcome.result = result_from_string(j.at("result").get<std::string>());
    s.outcome.t_end = j.at("t_end").get<double>();
    s.outcome.impact_speed_ego = j.at("impact_speed_ego").get<double>();
    s.outcome.impact_relative_speed = j.at("impact_relative_speed").get<double>();
    for (const auto & e : j.at("trigger_events")) {
      const std::string stage = e.at("stage").get<std::string>();
      s.outcome.trigger_events.push_back(
        {0, stage == "AEB" ? StageName::kAeb : StageName::kV2xPartial, e.at("t").get<double>()});
    }
    return s;
  } catch (const json::exception & e) {
    throw ParseError(std::string("malformed outcome JSON: ") + e.what());
  }
}

}  // namespace pcsim
