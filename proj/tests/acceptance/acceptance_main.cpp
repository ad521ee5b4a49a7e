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

// Acceptance suite: one PASS/FAIL line per criterion, exit code 1 if any fails.

#include "pcsim/cause_analysis.hpp"
#include "pcsim/experiment.hpp"
#include "pcsim/generator.hpp"
#include "pcsim/prediction.hpp"
#include "pcsim/report_io.hpp"
#include "pcsim/simulation.hpp"
#include "test_support.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace
{

using namespace pcsim;
using Clock = std::chrono::steady_clock;

struct Verdict
{
  bool pass{false};
  std::string detail;
};

double seconds_since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char * f, auto... args)
{
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

using IdSet = std::set<std::string>;

IdSet avoided_ids(const std::vector<Scenario> & corpus, const CascadeConfig & cascade,
                  const SensorSet & sensors, bool friction_known = false)
{
  IdSet out;
  RunOptions opts;
  opts.friction_known = friction_known;
  for (const auto & s : corpus) {
    if (run(s, cascade, sensors, opts).result == RunResult::kAvoided) {
      out.insert(s.id);
    }
  }
  return out;
}

// Distance the ego front still has to travel along its heading before touching the strip of
// half the opponent width around the opponent's straight path.
double gap_to_opponent_path(const Scenario & s, const TrajectorySample & ego)
{
  const auto & o0 = s.opponent.samples.front();
  const auto & o1 = s.opponent.samples.back();
  const Vec2 dir = (o1.position() - o0.position()) * (1.0 / (o1.position() - o0.position()).norm());
  const Vec2 normal{-dir.y, dir.x};
  const Vec2 h = unit_from_heading(ego.heading);
  const Vec2 side{-h.y, h.x};
  const double k = dot(h, normal);
  const double half = 0.5 * s.opponent.width;
  double gap = kInfinity;
  for (double sgn : {-1.0, 1.0}) {
    const Vec2 corner = ego.position() + h * (0.5 * s.ego.length) + side * (sgn * 0.5 * s.ego.width);
    const double d = dot(corner - o0.position(), normal);
    gap = std::min(gap, (k > 0.0 ? -half - d : half - d) / k);
  }
  return gap;
}

Verdict stopping_distance_grid()
{
  const auto t0 = Clock::now();
  double worst = 0.0;
  int cases = 0;
  for (int v = 1; v <= 30; ++v) {
    for (double decel : {4.0, 9.0}) {
      for (int m = 2; m <= 10; ++m) {
        const double mu = m / 10.0;
        for (double delay : {0.0, 0.12}) {
          const double closed = stopping_distance(v, decel, 45.0, delay, mu).distance;
          const double oracle = test::integrated_stopping_distance(v, decel, 45.0, delay, mu);
          worst = std::max(worst, std::abs(closed - oracle) / oracle);
          ++cases;
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-3 && secs < 5.0,
          fmt("%d cases, max relative error %.2e (< 1e-3), %.2f s (< 5 s)", cases, worst, secs)};
}

Verdict ttb_fidelity(const std::vector<Scenario> & cv)
{
  struct Arm
  {
    const char * label;
    CascadeConfig cascade;
    const char * sensors;
  };
  const std::vector<Arm> arms{{"V2X 2 s", brake_preset("v2x", 2.0), "1V"},
                              {"AEB", brake_preset("aeb"), "5R1V"}};
  bool pass = true;
  std::string detail;
  for (const auto & arm : arms) {
    int avoided = 0;
    int outside = 0;
    double worst = 0.0;
    for (const auto & s : cv) {
      const auto out = run(s, arm.cascade, sensor_set(arm.sensors));
      if (out.result != RunResult::kAvoided || out.trigger_events.empty()) {
        continue;
      }
      ++avoided;
      const double v_trigger = s.ego.sample_at(out.trigger_events.front().t).speed;
      const double tol = v_trigger * 0.01 + 0.05;
      const double dev = std::abs(gap_to_opponent_path(s, out.final_ego) - 0.5);
      worst = std::max(worst, dev / tol);
      outside += dev > tol;
    }
    pass = pass && avoided > 0 && outside == 0;
    detail += fmt("%s: %d/%zu avoided, %d outside band, worst |gap-0.5|/tol %.2f; ", arm.label,
                  avoided, cv.size(), outside, worst);
  }
  detail.resize(detail.size() - 2);
  return {pass, detail};
}

Verdict two_stage_gap_info(const std::vector<Scenario> & cv)
{
  int avoided = 0;
  double lo = kInfinity;
  double hi = -kInfinity;
  for (const auto & s : cv) {
    const auto out = run(s, brake_preset("two-stage", 2.0), sensor_set("1V"));
    if (out.result == RunResult::kAvoided) {
      ++avoided;
      const double gap = gap_to_opponent_path(s, out.final_ego);
      lo = std::min(lo, gap);
      hi = std::max(hi, gap);
    }
  }
  return {true, fmt("2-stage 2 s stop gaps on the same corpus: %d avoided, gap range [%.3f, %.3f] m",
                    avoided, lo, hi)};
}

Verdict v2x_sensor_invariance(const std::vector<Scenario> & mixed, const std::vector<Scenario> & cv)
{
  bool pass = true;
  std::string detail;
  for (const auto * corpus : {&mixed, &cv}) {
    for (double thr : {2.0, 1.5, 1.25}) {
      const IdSet ref = avoided_ids(*corpus, brake_preset("v2x", thr), sensor_set("1V"));
      for (const char * set : {"1R1V", "5R1V"}) {
        pass = pass && avoided_ids(*corpus, brake_preset("v2x", thr), sensor_set(set)) == ref;
      }
      if (corpus == &mixed) {
        detail += fmt("mixed@%.3g s %zu/%zu; ", thr, ref.size(), corpus->size());
      }
    }
  }
  detail += "constant-velocity checked too; sets identical across 1V, 1R1V, 5R1V";
  return {pass, detail};
}

Verdict ttc_monotonicity(const std::vector<Scenario> & cv)
{
  const auto sensors = sensor_set("1V");
  const IdSet a125 = avoided_ids(cv, brake_preset("v2x", 1.25), sensors);
  const IdSet a15 = avoided_ids(cv, brake_preset("v2x", 1.5), sensors);
  const IdSet a2 = avoided_ids(cv, brake_preset("v2x", 2.0), sensors);
  const bool sub1 = std::includes(a15.begin(), a15.end(), a125.begin(), a125.end());
  const bool sub2 = std::includes(a2.begin(), a2.end(), a15.begin(), a15.end());
  return {sub1 && sub2 && a125.size() < a2.size(),
          fmt("avoided 1.25 s: %zu, 1.5 s: %zu, 2.0 s: %zu (nested: %s)", a125.size(), a15.size(),
              a2.size(), sub1 && sub2 ? "yes" : "no")};
}

Verdict two_stage_baseline(const std::vector<Scenario> & cv)
{
  // precondition: the V2X channel sees the opponent before the partial brake's TTB elapses
  std::vector<Scenario> eligible;
  for (const auto & s : cv) {
    const GroundTruth truth(s, sensor_set("1V"));
    const auto ttb = theoretical_ttb_time(truth, v2x_stage(2.0), 1.0);
    std::optional<double> seen;
    for (std::size_t i = 0; i < truth.size() && !seen; ++i) {
      if (truth.tick(i).det_v2x) {
        seen = truth.tick(i).t;
      }
    }
    if (ttb && seen && *seen <= *ttb + 1e-9) {
      eligible.push_back(s);
    }
  }
  bool pass = !eligible.empty();
  std::string detail = fmt("%zu/%zu scenarios with V2X detection before TTB; avoided", eligible.size(), cv.size());
  for (const char * set : {"1V", "1R1V", "5R1V"}) {
    const auto avoided = avoided_ids(eligible, brake_preset("two-stage", 2.0), sensor_set(set));
    pass = pass && avoided.size() == eligible.size();
    detail += fmt(" %s %.1f%%", set, 100.0 * static_cast<double>(avoided.size()) /
                                       static_cast<double>(eligible.size()));
  }
  return {pass, detail};
}

Verdict known_friction(const std::vector<Scenario> & reduced)
{
  ExperimentConfig cfg;
  cfg.brake_types = {"aeb"};
  cfg.sensor_sets = {"5R1V"};
  const auto friction = static_cast<std::size_t>(CrashCause::kFriction);
  cfg.friction_known = false;
  const auto unknown = run_experiment(cfg, reduced).cells.front();
  cfg.friction_known = true;
  const auto known = run_experiment(cfg, reduced).cells.front();
  return {known.avoided > unknown.avoided && known.causes[friction] == 0,
          fmt("AEB avoided %zu -> %zu of %zu, Friction crashes %zu -> %zu", unknown.avoided,
              known.avoided, reduced.size(), unknown.causes[friction], known.causes[friction])};
}

std::string designed_label(const Scenario & s)
{
  const auto cascade =
    brake_preset(s.meta.at("target_brake"), std::stod(s.meta.at("target_ttc")));
  const auto sensors = sensor_set(s.meta.at("target_sensor_set"));
  const auto out = run(s, cascade, sensors);
  if (out.result == RunResult::kAvoided) {
    return "avoided";
  }
  const auto rep = classify(out, s, cascade, sensors, false);
  return rep.pair ? pair_label(*rep.pair) : to_string(rep.stages.front().resolved_label);
}

Verdict cause_oracle()
{
  constexpr std::size_t kPerCause = 25;
  constexpr std::size_t kPerPair = 20;
  constexpr std::uint64_t kSeed = 11;
  bool pass = true;
  std::string detail;
  for (CrashCause c : kAllCauses) {
    if (c == CrashCause::kNotClassified) {
      continue;
    }
    std::size_t hit = 0;
    for (const auto & s : generate_corpus(kPerCause, std::string("cause:") + to_string(c), kSeed)) {
      hit += designed_label(s) == to_string(c);
    }
    pass = pass && hit == kPerCause;
    detail += fmt("%s %zu/%zu, ", short_label(c), hit, kPerCause);
  }
  for (const char * label : {"Ego a x2", "Fri & TTC", "Fri & Ste", "Det & TTC"}) {
    std::size_t hit = 0;
    for (const auto & s : generate_corpus(kPerPair, std::string("pair:") + label, kSeed)) {
      hit += designed_label(s) == label;
    }
    pass = pass && hit == kPerPair;
    detail += fmt("%s %zu/%zu, ", label, hit, kPerPair);
  }
  detail.resize(detail.size() - 2);
  return {pass, detail};
}

Verdict collision_predicate()
{
  test::SplitMix rng(8080);
  int checked = 0;
  int overlapping = 0;
  int mismatches = 0;
  int pairs = 0;
  while (checked < 1000) {
    const auto a = test::random_box(rng, 3.0);
    const auto b = test::random_box(rng, 3.0);
    ++pairs;
    if (test::corner_edge_gap(a, b) < 1e-6) {
      continue;
    }
    ++checked;
    const bool oracle = test::sampled_overlap(a, b);
    overlapping += oracle;
    mismatches += obb_overlap(a, b) != oracle;
  }
  return {mismatches == 0 && overlapping > 100 && overlapping < 900,
          fmt("%d pairs (%d excluded near contact), %d overlapping, %d disagreements", checked,
              pairs - checked, overlapping, mismatches)};
}

Verdict sweep_determinism()
{
  ExperimentConfig cfg;
  cfg.generator = GeneratorSource{1000, "mixed", 2026};
  cfg.brake_types = {"aeb", "v2x", "two-stage"};
  cfg.sensor_sets = {"5R1V"};
  cfg.ttc_thresholds = {2.0};
  cfg.jobs = 1;
  auto t0 = Clock::now();
  const auto serial = run_experiment(cfg);
  const double t_serial = seconds_since(t0);
  cfg.jobs = 8;
  t0 = Clock::now();
  const auto parallel = run_experiment(cfg);
  const double t_parallel = seconds_since(t0);
  const bool same = serial == parallel && report_to_json(serial) == report_to_json(parallel);
  const std::size_t n = serial.cells.empty() ? 0 : serial.cells.front().n;
  return {same && n == 1000 && t_serial < 60.0 && t_parallel < 60.0,
          fmt("%zu cells x %zu scenarios; jobs 1: %.1f s, jobs 8: %.1f s (< 60 s); reports %s",
              serial.cells.size(), n, t_serial, t_parallel, same ? "identical" : "DIFFER")};
}

}  // namespace

int main()
{
  const auto cv = generate_corpus(200, "constant-velocity", 1);
  const auto mixed = generate_corpus(200, "mixed", 5);
  const auto reduced = generate_corpus(200, "reduced-friction", 3);

  struct Criterion
  {
    const char * name;
    std::function<Verdict()> check;
    bool informational;
  };
  const std::vector<Criterion> criteria{
    {"1 stopping distance vs 1 ms integration", stopping_distance_grid, false},
    {"2 stop gap at the safety distance", [&] { return ttb_fidelity(cv); }, false},
    {"  (info) 2-stage stop gaps", [&] { return two_stage_gap_info(cv); }, true},
    {"3 V2X avoided set independent of sensor set", [&] { return v2x_sensor_invariance(mixed, cv); }, false},
    {"4 V2X TTC threshold monotonicity", [&] { return ttc_monotonicity(cv); }, false},
    {"5 2-stage 2 s avoids all constant-velocity crossings", [&] { return two_stage_baseline(cv); }, false},
    {"6 known friction helps AEB and removes Friction", [&] { return known_friction(reduced); }, false},
    {"7 cause classifier on targeted scenarios", cause_oracle, false},
    {"8 box overlap vs point sampling", collision_predicate, false},
    {"9 sweep determinism and runtime", sweep_determinism, false},
  };

  int failed = 0;
  for (const auto & c : criteria) {
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception & e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const char * tag = c.informational ? "INFO" : (v.pass ? "PASS" : "FAIL");
    std::printf("%s  %-52s %s [%.1f s]\n", tag, c.name, v.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
    failed += !c.informational && !v.pass;
  }
  std::printf("%s: %d criteria failed\n", failed == 0 ? "ALL PASS" : "FAILURES", failed);
  return failed == 0 ? 0 : 1;
}
