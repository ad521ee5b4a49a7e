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

#include "pcsim/errors.hpp"
#include "pcsim/experiment.hpp"
#include "pcsim/generator.hpp"
#include "pcsim/perception.hpp"
#include "pcsim/report_io.hpp"
#include "pcsim/scenario_io.hpp"
#include "pcsim/simulation.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace
{

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitUsage = 2;

constexpr const char * kConfigEnv = "PCSIM_CONFIG";

std::map<std::string, double> parse_overrides(const std::vector<std::string> & items)
{
  std::map<std::string, double> out;
  for (const auto & item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw pcsim::ConfigError("override '" + item + "' must look like key=value");
    }
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (value == "true" || value == "false") {
      out[key] = value == "true" ? 1.0 : 0.0;
      continue;
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception &) {
      used = 0;
    }
    if (used != value.size() || value.empty()) {
      throw pcsim::ConfigError("override '" + item + "' has a non-numeric value");
    }
    out[key] = v;
  }
  return out;
}

pcsim::CascadeConfig single_cascade(const std::string & brake, const std::string & sensor_set,
                                    double ttc, const std::map<std::string, double> & overrides,
                                    pcsim::Cell * cell_out)
{
  pcsim::ExperimentConfig cfg;
  cfg.brake_types = {brake};
  cfg.sensor_sets = {sensor_set};
  cfg.ttc_thresholds = {ttc};
  const auto cells = pcsim::expand_cells(cfg);
  if (cell_out != nullptr) {
    *cell_out = cells.front();
  }
  return pcsim::cell_cascade(cells.front(), overrides);
}

void emit(const std::string & text, const std::string & path)
{
  if (path.empty() || path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') {
      std::cout << '\n';
    }
  } else {
    pcsim::write_text(path, text.back() == '\n' ? text : text + "\n");
  }
}

struct GenerateArgs
{
  std::size_t n{100};
  std::string profile{"mixed"};
  std::uint64_t seed{0};
  std::string out;
};

int cmd_generate(const GenerateArgs & a)
{
  const auto corpus = pcsim::generate_corpus(a.n, a.profile, a.seed);
  std::filesystem::create_directories(a.out);
  for (const auto & s : corpus) {
    pcsim::save_scenario(s, (std::filesystem::path(a.out) / (s.id + ".json")).string());
  }
  std::cout << "wrote " << corpus.size() << " scenarios to " << a.out << '\n';
  return kExitOk;
}

struct SimulateArgs
{
  std::string scenario;
  std::string brake{"two-stage"};
  std::string sensor_set{"5R1V"};
  double ttc{2.0};
  bool friction_known{false};
  bool lenient{false};
  std::vector<std::string> overrides;
  std::string trace;
  std::string out;
};

int cmd_simulate(const SimulateArgs & a)
{
  const auto overrides = parse_overrides(a.overrides);
  pcsim::Cell cell;
  const auto cascade = single_cascade(a.brake, a.sensor_set, a.ttc, overrides, &cell);
  const auto sensors = pcsim::sensor_set(cell.sensor_set);
  pcsim::LoadOptions opts;
  opts.lenient = a.lenient;
  std::vector<std::string> warnings;
  const auto scenario = pcsim::load_scenario(a.scenario, opts, &warnings);
  for (const auto & w : warnings) {
    std::cerr << "warning: " << w << '\n';
  }
  pcsim::RunOptions run_opts;
  run_opts.friction_known = a.friction_known;
  run_opts.record_trace = !a.trace.empty();
  const auto outcome = pcsim::run(scenario, cascade, sensors, run_opts);
  std::optional<pcsim::CrashCauseReport> causes;
  if (outcome.result == pcsim::RunResult::kCrash) {
    causes = pcsim::classify(outcome, scenario, cascade, sensors, a.friction_known,
                             pcsim::classifier_config(overrides));
  }
  if (!a.trace.empty()) {
    pcsim::write_text(a.trace, pcsim::trace_csv(outcome));
  }
  emit(pcsim::outcome_to_json(outcome, scenario.id, cascade, cell.sensor_set, a.friction_known,
                              causes ? &*causes : nullptr),
       a.out);
  return kExitOk;
}

struct SweepArgs
{
  std::string config;
  std::string scenarios;
  std::size_t n{100};
  std::string profile{"mixed"};
  std::uint64_t seed{0};
  std::vector<std::string> brakes;
  std::vector<std::string> sensor_sets;
  std::vector<double> ttc;
  bool friction_known{false};
  bool lenient{false};
  std::vector<std::string> overrides;
  unsigned jobs{1};
  std::string out;
  std::string format;
};

int cmd_sweep(const SweepArgs & a, const CLI::App & sub)
{
  std::string config_path = a.config;
  if (config_path.empty()) {
    if (const char * env = std::getenv(kConfigEnv); env != nullptr && *env != '\0') {
      config_path = env;
    }
  }
  pcsim::ExperimentConfig cfg =
    config_path.empty() ? pcsim::ExperimentConfig{} : pcsim::load_experiment_config(config_path);

  if (sub.count("--scenarios") > 0) {
    cfg.scenario_dir = a.scenarios;
    cfg.generator.reset();
  }
  if (sub.count("--n") > 0 || sub.count("--profile") > 0 || sub.count("--seed") > 0) {
    pcsim::GeneratorSource g = cfg.generator.value_or(pcsim::GeneratorSource{});
    if (sub.count("--n") > 0) {
      g.n = a.n;
    }
    if (sub.count("--profile") > 0) {
      g.profile = a.profile;
    }
    if (sub.count("--seed") > 0) {
      g.seed = a.seed;
    }
    cfg.generator = g;
    if (sub.count("--scenarios") == 0) {
      cfg.scenario_dir.clear();
    }
  }
  if (sub.count("--brakes") > 0) {
    cfg.brake_types = a.brakes;
  }
  if (sub.count("--sensor-sets") > 0) {
    cfg.sensor_sets = a.sensor_sets;
  }
  if (sub.count("--ttc") > 0) {
    cfg.ttc_thresholds = a.ttc;
  }
  if (a.friction_known) {
    cfg.friction_known = true;
  }
  if (a.lenient) {
    cfg.lenient = true;
  }
  if (sub.count("--jobs") > 0) {
    cfg.jobs = a.jobs;
  }
  for (const auto & [k, v] : parse_overrides(a.overrides)) {
    cfg.overrides[k] = v;
  }
  if (cfg.jobs == 0) {
    throw pcsim::ConfigError("--jobs must be >= 1");
  }

  const auto t0 = std::chrono::steady_clock::now();
  const auto report = pcsim::run_experiment(cfg);
  const double secs =
    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  for (const auto & s : report.skipped) {
    std::cerr << "skipped " << s.source << ": " << s.error << '\n';
  }
  const bool to_stdout = a.out.empty() || a.out == "-";
  pcsim::ReportFormat format = pcsim::ReportFormat::kMarkdown;
  if (!a.format.empty()) {
    format = pcsim::report_format_from_string(a.format);
  } else if (!to_stdout) {
    format = pcsim::report_format_for_path(a.out);
  }
  if (to_stdout) {
    switch (format) {
      case pcsim::ReportFormat::kJson:
        emit(pcsim::report_to_json(report), "");
        break;
      case pcsim::ReportFormat::kCsv:
        emit(pcsim::report_to_csv(report), "");
        break;
      case pcsim::ReportFormat::kMarkdown:
        emit(pcsim::report_to_markdown(report), "");
        break;
    }
  } else {
    pcsim::emit_report(report, format, a.out);
    std::cerr << report.cells.size() << " cells, "
              << (report.cells.empty() ? 0 : report.cells.front().n) << " scenarios, " << secs
              << " s -> " << a.out << '\n';
  }
  return kExitOk;
}

struct ClassifyArgs
{
  std::string outcome;
  std::string scenario;
  bool lenient{false};
  std::vector<std::string> overrides;
  std::string out;
};

int cmd_classify(const ClassifyArgs & a)
{
  const auto stored = pcsim::outcome_from_json(pcsim::read_text(a.outcome));
  if (stored.outcome.result != pcsim::RunResult::kCrash) {
    std::cerr << "error: outcome '" << a.outcome << "' is not a crash; nothing to classify\n";
    return kExitInvalid;
  }
  const auto overrides = parse_overrides(a.overrides);
  pcsim::Cell cell;
  const auto cascade =
    single_cascade(stored.brake, stored.sensor_set, stored.ttc_threshold, overrides, &cell);
  pcsim::LoadOptions opts;
  opts.lenient = a.lenient;
  const auto scenario = pcsim::load_scenario(a.scenario, opts);
  if (!stored.scenario_id.empty() && stored.scenario_id != scenario.id) {
    std::cerr << "warning: outcome belongs to '" << stored.scenario_id << "', scenario is '"
              << scenario.id << "'\n";
  }
  const auto report =
    pcsim::classify(stored.outcome, scenario, cascade, pcsim::sensor_set(cell.sensor_set),
                    stored.friction_known, pcsim::classifier_config(overrides));
  emit(pcsim::cause_report_to_json(report), a.out);
  return kExitOk;
}

struct ValidateArgs
{
  std::vector<std::string> files;
  bool lenient{false};
};

int cmd_validate(const ValidateArgs & a)
{
  int status = kExitOk;
  pcsim::LoadOptions opts;
  opts.lenient = a.lenient;
  for (const auto & path : a.files) {
    std::vector<std::string> warnings;
    try {
      const auto s = pcsim::load_scenario(path, opts, &warnings);
      std::cout << "ok      " << path << " (" << s.id << ")\n";
    } catch (const pcsim::ValidationError & e) {
      std::cout << "invalid " << path << ": " << e.what() << '\n';
      status = kExitInvalid;
    } catch (const pcsim::Error & e) {
      std::cout << "error   " << path << ": " << e.what() << '\n';
      status = kExitInvalid;
    }
    for (const auto & w : warnings) {
      std::cout << "        warning: " << w << '\n';
    }
  }
  return status;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Counterfactual pre-crash brake simulation"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto * generate = app.add_subcommand("generate", "Generate a scenario corpus");
  generate->add_option("--n", gen.n, "Number of scenarios")->capture_default_str();
  generate->add_option("--profile", gen.profile, "Corpus profile")->capture_default_str();
  generate->add_option("--seed", gen.seed, "Corpus seed")->capture_default_str();
  generate->add_option("--out", gen.out, "Output directory")->required();

  SimulateArgs sim;
  auto * simulate = app.add_subcommand("simulate", "Simulate one scenario");
  simulate->add_option("--scenario", sim.scenario, "Scenario file")->required();
  simulate->add_option("--brake", sim.brake, "aeb, v2x or two-stage")->capture_default_str();
  simulate->add_option("--sensor-set", sim.sensor_set, "1V, 1R1V or 5R1V")->capture_default_str();
  simulate->add_option("--ttc", sim.ttc, "V2X TTC threshold [s]")->capture_default_str();
  simulate->add_flag("--friction-known", sim.friction_known, "Brake knows the road friction");
  simulate->add_flag("--lenient", sim.lenient, "Unknown scenario keys are warnings");
  simulate->add_option("--override", sim.overrides, "Parameter override key=value");
  simulate->add_option("--trace", sim.trace, "Write a per-tick CSV trace");
  simulate->add_option("--out", sim.out, "Outcome JSON file (default stdout)");

  SweepArgs sw;
  auto * sweep = app.add_subcommand("sweep", "Run a parameter sweep");
  sweep->add_option("--config", sw.config,
                    std::string("Experiment config JSON (default $") + kConfigEnv + ")");
  sweep->add_option("--scenarios", sw.scenarios, "Scenario directory");
  sweep->add_option("--n", sw.n, "Generated corpus size");
  sweep->add_option("--profile", sw.profile, "Generated corpus profile");
  sweep->add_option("--seed", sw.seed, "Generated corpus seed");
  sweep->add_option("--brakes", sw.brakes, "Brake types")->delimiter(',');
  sweep->add_option("--sensor-sets", sw.sensor_sets, "Sensor sets")->delimiter(',');
  sweep->add_option("--ttc", sw.ttc, "V2X TTC thresholds [s]")->delimiter(',');
  sweep->add_flag("--friction-known", sw.friction_known, "Brakes know the road friction");
  sweep->add_flag("--lenient", sw.lenient, "Unknown scenario keys are warnings");
  sweep->add_option("--override", sw.overrides, "Parameter override key=value");
  sweep->add_option("--jobs", sw.jobs, "Worker threads");
  sweep->add_option("--out", sw.out, "Report file (default stdout)");
  sweep->add_option("--format", sw.format, "json, csv or markdown (default from --out)");

  ClassifyArgs cls;
  auto * classify = app.add_subcommand("classify", "Classify a stored crash outcome");
  classify->add_option("--outcome", cls.outcome, "Outcome JSON from simulate")->required();
  classify->add_option("--scenario", cls.scenario, "Scenario file")->required();
  classify->add_flag("--lenient", cls.lenient, "Unknown scenario keys are warnings");
  classify->add_option("--override", cls.overrides, "Parameter override key=value");
  classify->add_option("--out", cls.out, "Cause JSON file (default stdout)");

  ValidateArgs val;
  auto * validate = app.add_subcommand("validate", "Validate scenario files");
  validate->add_option("files", val.files, "Scenario files")->required();
  validate->add_flag("--lenient", val.lenient, "Unknown keys are warnings");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*generate) {
      return cmd_generate(gen);
    }
    if (*simulate) {
      return cmd_simulate(sim);
    }
    if (*sweep) {
      return cmd_sweep(sw, *sweep);
    }
    if (*classify) {
      return cmd_classify(cls);
    }
    return cmd_validate(val);
  } catch (const pcsim::ConfigError & e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const pcsim::Error & e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::filesystem::filesystem_error & e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}
