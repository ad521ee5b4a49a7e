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
#include "pcsim/report_io.hpp"
#include "pcsim/scenario_io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <set>
#include <sstream>

namespace pcsim
{
namespace
{

ExperimentConfig small_config()
{
  ExperimentConfig cfg;
  cfg.generator = GeneratorSource{12, "mixed", 4};
  return cfg;
}

std::size_t count_lines(const std::string & text)
{
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

TEST(Config, ParseJson)
{
  const auto cfg = parse_experiment_config(R"({
    "generate": {"n": 5, "profile": "constant-velocity", "seed": 3},
    "brakes": ["two-stage"], "sensor_sets": ["1r1v"], "ttc": [2.0, 1.5],
    "friction_known": true, "overrides": {"aeb.max_decel": 8.0}, "jobs": 2
  })");
  ASSERT_TRUE(cfg.generator.has_value());
  EXPECT_EQ(cfg.generator->n, 5u);
  EXPECT_EQ(cfg.generator->profile, "constant-velocity");
  EXPECT_EQ(cfg.brake_types, std::vector<std::string>{"two-stage"});
  EXPECT_EQ(cfg.ttc_thresholds.size(), 2u);
  EXPECT_TRUE(cfg.friction_known);
  EXPECT_DOUBLE_EQ(cfg.overrides.at("aeb.max_decel"), 8.0);
  EXPECT_EQ(cfg.jobs, 2u);
}

TEST(Config, RejectsUnknownKeysAndBadJson)
{
  EXPECT_THROW(parse_experiment_config(R"({"brake": ["aeb"]})"), ConfigError);
  EXPECT_THROW(parse_experiment_config("[1, 2"), ParseError);
  EXPECT_THROW(parse_experiment_config("[]"), ParseError);
}

TEST(Cells, ExpansionFollowsTableLayout)
{
  ExperimentConfig cfg;
  const auto cells = expand_cells(cfg);
  // AEB once per sensor set, V2X and 2-stage per threshold
  EXPECT_EQ(cells.size(), 3u * (1 + 3 + 3));
  std::size_t aeb = 0;
  for (const auto & c : cells) {
    if (c.brake == "aeb") {
      ++aeb;
      EXPECT_DOUBLE_EQ(c.ttc_threshold, 1.25);
    }
  }
  EXPECT_EQ(aeb, 3u);
  EXPECT_TRUE(std::is_sorted(cells.begin(), cells.end()));
}

TEST(Cells, OneBrakeOneSetThreeThresholds)
{
  ExperimentConfig cfg;
  cfg.brake_types = {"two-stage"};
  cfg.sensor_sets = {"1r1v"};
  cfg.ttc_thresholds = {2.0, 1.5, 1.25};
  const auto cells = expand_cells(cfg);
  ASSERT_EQ(cells.size(), 3u);
  EXPECT_EQ(cells[0].sensor_set, "1R1V");
  EXPECT_DOUBLE_EQ(cells[0].ttc_threshold, 2.0);
}

TEST(Cells, Invalid)
{
  ExperimentConfig cfg;
  cfg.brake_types = {};
  EXPECT_THROW(expand_cells(cfg), ConfigError);
  cfg.brake_types = {"v2x"};
  cfg.ttc_thresholds = {0.0};
  EXPECT_THROW(expand_cells(cfg), ConfigError);
  cfg.ttc_thresholds = {1.0};
  cfg.sensor_sets = {"lidar"};
  EXPECT_THROW(expand_cells(cfg), ConfigError);
}

TEST(Overrides, ApplyToMatchingStages)
{
  const Cell cell{"two-stage", "5R1V", 1.5};
  const auto c = cell_cascade(cell, {{"aeb.max_decel", 8.0}, {"brake.jerk", 30.0},
                                     {"v2x.use_tte", 1.0}});
  ASSERT_EQ(c.stages.size(), 2u);
  EXPECT_DOUBLE_EQ(c.stages[0].max_decel, 4.0);
  EXPECT_DOUBLE_EQ(c.stages[1].max_decel, 8.0);
  EXPECT_DOUBLE_EQ(c.stages[0].jerk, 30.0);
  EXPECT_DOUBLE_EQ(c.stages[1].jerk, 30.0);
  EXPECT_TRUE(c.stages[0].use_tte_condition);
  EXPECT_DOUBLE_EQ(c.stages[0].ttc_threshold, 1.5);
  EXPECT_THROW(cell_cascade(cell, {{"aeb.colour", 1.0}}), ConfigError);
  EXPECT_THROW(cell_cascade(cell, {{"v2x.ttc_threshold", 1.0}}), ConfigError);
  EXPECT_THROW(cell_cascade(cell, {{"aeb.max_decel", -1.0}}), ConfigError);
  EXPECT_FALSE(override_keys().empty());
}

TEST(Overrides, ClassifierThresholds)
{
  const auto cfg = classifier_config({{"classifier.steering_deg", 20.0},
                                      {"classifier.opp_accel", 2.0}});
  EXPECT_NEAR(cfg.steering_threshold, 20.0 * std::numbers::pi / 180.0, 1e-12);
  EXPECT_DOUBLE_EQ(cfg.opp_accel_threshold, 2.0);
}

TEST(Experiment, CountsAddUp)
{
  const auto report = run_experiment(small_config());
  ASSERT_EQ(report.cells.size(), 21u);
  for (const auto & cell : report.cells) {
    EXPECT_EQ(cell.n, 12u);
    std::size_t crashes = 0;
    for (std::size_t c : cell.causes) {
      crashes += c;
    }
    EXPECT_EQ(cell.avoided + crashes, cell.n);
    for (const auto & stage : cell.stage_causes) {
      std::size_t sum = 0;
      for (std::size_t c : stage) {
        sum += c;
      }
      EXPECT_EQ(sum, crashes);
    }
    EXPECT_EQ(cell.records.size(), cell.n);
    EXPECT_TRUE(std::is_sorted(cell.records.begin(), cell.records.end(),
                               [](const auto & a, const auto & b) {
                                 return a.scenario_id < b.scenario_id;
                               }));
    if (cell.cell.brake == "two-stage") {
      std::size_t paired = 0;
      for (const auto & [label, count] : cell.pairs) {
        paired += count;
      }
      EXPECT_EQ(paired, crashes);
    }
  }
}

TEST(Experiment, PercentagesAgainstCorpusSize)
{
  CellReport c;
  c.n = 3;
  c.avoided = 2;
  c.causes[static_cast<std::size_t>(CrashCause::kFriction)] = 1;
  EXPECT_NEAR(c.avoided_pct(), 66.667, 1e-3);
  EXPECT_NEAR(c.pct(1), 33.333, 1e-3);
}

TEST(Experiment, JobsDoNotChangeReport)
{
  auto cfg = small_config();
  cfg.jobs = 1;
  const auto a = run_experiment(cfg);
  cfg.jobs = 4;
  const auto b = run_experiment(cfg);
  EXPECT_EQ(a, b);
  EXPECT_EQ(report_to_json(a), report_to_json(b));
}

TEST(Experiment, V2xIdenticalAcrossSensorSets)
{
  auto cfg = small_config();
  cfg.brake_types = {"v2x"};
  const auto report = run_experiment(cfg);
  for (double thr : cfg.ttc_thresholds) {
    const auto * ref = report.find({"v2x", "1V", thr});
    ASSERT_NE(ref, nullptr);
    for (const char * set : {"1R1V", "5R1V"}) {
      const auto * other = report.find({"v2x", set, thr});
      ASSERT_NE(other, nullptr);
      EXPECT_EQ(other->records, ref->records);
    }
  }
}

TEST(Experiment, MergeIsAMonoid)
{
  ExperimentConfig cfg;
  cfg.brake_types = {"aeb", "two-stage"};
  cfg.sensor_sets = {"1V"};
  cfg.ttc_thresholds = {2.0};
  const auto corpus = generate_corpus(9, "mixed", 21);
  const std::vector<Scenario> p1(corpus.begin(), corpus.begin() + 3);
  const std::vector<Scenario> p2(corpus.begin() + 3, corpus.begin() + 6);
  const std::vector<Scenario> p3(corpus.begin() + 6, corpus.end());
  const auto whole = run_experiment(cfg, corpus);
  const auto r1 = run_experiment(cfg, p1);
  const auto r2 = run_experiment(cfg, p2);
  const auto r3 = run_experiment(cfg, p3);
  EXPECT_EQ(merge(merge(r1, r2), r3), whole);
  EXPECT_EQ(merge(r1, merge(r2, r3)), whole);
  EXPECT_EQ(merge(r3, merge(r1, r2)), whole);
  EXPECT_EQ(merge(AggregateReport{}, whole), whole);
}

TEST(Experiment, EmptyCorpus)
{
  EXPECT_THROW(run_experiment(ExperimentConfig{}, {}), ConfigError);
  EXPECT_THROW(run_experiment(ExperimentConfig{}), ConfigError);
}

TEST(Experiment, DirectoryCorpusSkipsInvalidFiles)
{
  const auto dir = std::filesystem::temp_directory_path() / "pcsim_experiment_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  for (const auto & s : generate_corpus(3, "constant-velocity", 2)) {
    save_scenario(s, (dir / (s.id + ".json")).string());
  }
  write_text((dir / "broken.json").string(), "{\"id\": 1");
  ExperimentConfig cfg;
  cfg.scenario_dir = dir.string();
  cfg.brake_types = {"aeb"};
  cfg.sensor_sets = {"5R1V"};
  const auto report = run_experiment(cfg);
  ASSERT_EQ(report.cells.size(), 1u);
  EXPECT_EQ(report.cells[0].n, 3u);
  ASSERT_EQ(report.skipped.size(), 1u);
  EXPECT_NE(report.skipped[0].source.find("broken.json"), std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST(Report, JsonRoundTrip)
{
  const auto report = run_experiment(small_config());
  EXPECT_EQ(report_from_json(report_to_json(report)), report);
}

TEST(Report, CsvSchema)
{
  const auto report = run_experiment(small_config());
  const std::string csv = report_to_csv(report);
  std::istringstream in(csv);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header,
            "brake,sensor_set,ttc_threshold,n,avoided_pct,Detection,TTE,TTC,EgoAcceleration,"
            "Friction,Steering,OpponentAcceleration,NotClassified,pairs");
  EXPECT_EQ(count_lines(csv), report.cells.size() + 1);
}

TEST(Report, MarkdownGridShape)
{
  const auto report = run_experiment(small_config());
  const std::string md = report_to_markdown(report);
  std::istringstream in(md);
  std::string line;
  std::vector<std::string> grid;
  while (std::getline(in, line)) {
    if (line.rfind('|', 0) == 0) {
      grid.push_back(line);
    } else if (!grid.empty()) {
      break;
    }
  }
  // header, separator and 3 sensor-set rows
  ASSERT_EQ(grid.size(), 5u);
  for (const auto & row : grid) {
    EXPECT_EQ(std::count(row.begin(), row.end(), '|'), 9);
  }
  EXPECT_NE(grid[0].find("AEB"), std::string::npos);
  EXPECT_NE(grid[0].find("2-stage 1.25 s"), std::string::npos);
}

TEST(Report, FormatNames)
{
  EXPECT_EQ(report_format_from_string("CSV"), ReportFormat::kCsv);
  EXPECT_EQ(report_format_for_path("x/report.md"), ReportFormat::kMarkdown);
  EXPECT_EQ(report_format_for_path("report.json"), ReportFormat::kJson);
  EXPECT_THROW(report_format_from_string("xml"), ConfigError);
}

TEST(Report, EmitToUnwritablePath)
{
  EXPECT_THROW(emit_report(AggregateReport{}, ReportFormat::kCsv, "/nonexistent-dir/r.csv"),
               IoError);
}

}  // namespace
}  // namespace pcsim
