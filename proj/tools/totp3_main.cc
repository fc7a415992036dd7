// Copyright 2026 The TOTP3 Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     https://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: plan, compare and oracle subcommands.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "log.h"
#include "totp3/io.h"
#include "totp3/oracle.h"
#include "totp3/slp_planner.h"

namespace totp3 {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitMaxIters = 3;

struct CommonArgs {
  std::string path_file;
  std::string robot_file;
  std::string out_prefix = "totp3";
  std::optional<int> n_segments;
};

struct PlanArgs {
  std::optional<std::string> jerk_limit;
  std::optional<double> epsilon;
  std::optional<int> max_iters;
  std::optional<std::string> trust_region;
};

struct Loaded {
  Problem problem;
  SlpConfig config;
};

bool OnOff(const std::string& value) { return value == "on"; }

Loaded Load(const CommonArgs& common, const PlanArgs& plan) {
  const PathSpec path =
      ParsePath(ReadTextFile(common.path_file), common.path_file);
  const RobotConfig robot = ParseRobot(ReadTextFile(common.robot_file),
                                       path.num_joints, common.robot_file);
  Loaded loaded;
  SlpConfig& c = loaded.config;
  const PlannerOverrides& o = robot.planner;
  int n_segments = kDefaultSegments;
  if (o.n_segments) n_segments = *o.n_segments;
  if (o.epsilon) c.epsilon = *o.epsilon;
  if (o.max_iters) c.max_iters = *o.max_iters;
  if (o.trust_region) c.trust_region.enabled = *o.trust_region;
  if (o.jerk_limit) c.jerk_limits = *o.jerk_limit;
  if (o.x_start) c.x_start = *o.x_start;
  if (o.x_end) c.x_end = *o.x_end;

  if (common.n_segments) n_segments = *common.n_segments;
  if (plan.epsilon) c.epsilon = *plan.epsilon;
  if (plan.max_iters) c.max_iters = *plan.max_iters;
  if (plan.trust_region) c.trust_region.enabled = OnOff(*plan.trust_region);
  if (plan.jerk_limit) c.jerk_limits = OnOff(*plan.jerk_limit);

  if (path.samples && common.n_segments) {
    Log(LogLevel::kInfo, "sampled path defines its own grid; --n-segments ignored");
  }
  try {
    ValidateSlpConfig(c);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  loaded.problem = BuildProblem(path, robot, n_segments);
  return loaded;
}

void WriteFile(const std::string& name, const std::string& content) {
  std::ofstream out(name, std::ios::binary);
  if (!out) throw InputError(name + ": cannot write file");
  out << content;
}

std::string TrajectoryCsv(const TrajectoryResult& trajectory) {
  std::ostringstream out;
  WriteTrajectoryCsv(out, trajectory);
  return out.str();
}

int ExitCodeFor(SlpStatus status) {
  switch (status) {
    case SlpStatus::kConverged:
      return kExitOk;
    case SlpStatus::kInfeasible:
      return kExitInfeasible;
    case SlpStatus::kMaxIters:
      return kExitMaxIters;
  }
  return kExitInput;
}

PlanResult RunPlan(const Problem& p, const SlpConfig& config) {
  return Plan(p.samples, p.coeffs, p.grid, p.limits, config);
}

int CmdPlan(const CommonArgs& common, const PlanArgs& args) {
  const Loaded loaded = Load(common, args);
  const Problem& p = loaded.problem;
  Log(LogLevel::kDebug, "planning with N=" +
                            std::to_string(p.grid.num_segments()) +
                            " joints=" + std::to_string(p.samples.num_joints()));
  const PlanResult plan = RunPlan(p, loaded.config);
  TrajectoryMetrics metrics;
  metrics.duration = std::numeric_limits<double>::quiet_NaN();
  if (plan.trajectory) {
    metrics = plan.trajectory->metrics;
    WriteFile(common.out_prefix + ".traj.csv",
              TrajectoryCsv(*plan.trajectory));
  }
  WriteFile(common.out_prefix + ".metrics.json",
            MetricsJson(metrics, p.limits, plan, loaded.config, p.grid));
  WriteFile(common.out_prefix + ".iters.log", IterationLog(plan.slp.report));
  for (const StaticViolation& v : plan.slp.report.diagnostics) {
    Log(LogLevel::kError, Describe(v));
  }
  if (!plan.slp.report.message.empty()) {
    Log(plan.status == SlpStatus::kConverged ? LogLevel::kDebug
                                             : LogLevel::kError,
        plan.slp.report.message);
  }
  std::cout << "status=" << ToString(plan.status);
  if (plan.trajectory) {
    std::cout << " duration_s=" << FormatDouble(metrics.duration);
  }
  std::cout << " iterations=" << plan.slp.report.iterations << '\n';
  return ExitCodeFor(plan.status);
}

struct CompareRun {
  std::string label;
  std::optional<double> jerk_max;
  SlpConfig config;
  Limits limits;
  PlanResult plan;
};

// Empty items are skipped so that an empty list means baseline only.
std::vector<double> ParseSweep(const std::vector<std::string>& items) {
  std::vector<double> values;
  for (const std::string& item : items) {
    if (item.empty()) continue;
    double value = 0.0;
    const char* end = item.data() + item.size();
    const auto [ptr, ec] = std::from_chars(item.data(), end, value);
    if (ec != std::errc() || ptr != end || !(value > 0.0) ||
        !std::isfinite(value)) {
      throw InputError("jerk sweep value '" + item +
                       "' is not a positive number");
    }
    values.push_back(value);
  }
  return values;
}

int CmdCompare(const CommonArgs& common, const PlanArgs& args,
               const std::vector<std::string>& sweep_items, int threads) {
  const std::vector<double> sweep = ParseSweep(sweep_items);
  const Loaded loaded = Load(common, args);
  const Problem& p = loaded.problem;

  std::vector<CompareRun> runs(sweep.size() + 1);
  runs[0].label = "baseline";
  runs[0].config = loaded.config;
  runs[0].config.jerk_limits = false;
  runs[0].limits = p.limits;
  for (size_t i = 0; i < sweep.size(); ++i) {
    CompareRun& run = runs[i + 1];
    run.label = "jerk_" + std::to_string(i);
    run.jerk_max = sweep[i];
    run.config = loaded.config;
    run.config.jerk_limits = true;
    run.limits = p.limits;
    run.limits.jerk_max.setConstant(sweep[i]);
  }

  auto solve = [&](size_t i) {
    Problem local = p;
    local.limits = runs[i].limits;
    runs[i].plan = RunPlan(local, runs[i].config);
  };
  const size_t workers =
      std::clamp<size_t>(static_cast<size_t>(std::max(threads, 1)), 1,
                         runs.size());
  if (workers == 1) {
    for (size_t i = 0; i < runs.size(); ++i) solve(i);
  } else {
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (size_t i = w; i < runs.size(); i += workers) solve(i);
      });
    }
    for (auto& t : pool) t.join();
  }

  const int joints = p.samples.num_joints();
  const bool dynamic = !p.coeffs.empty();
  const double baseline =
      runs[0].plan.trajectory ? runs[0].plan.trajectory->metrics.duration
                              : std::numeric_limits<double>::quiet_NaN();

  nlohmann::json doc;
  doc["runs"] = nlohmann::json::array();
  std::ostringstream csv;
  csv << "label,jerk_max,status,duration_s,duration_ratio";
  if (dynamic) {
    for (int j = 0; j < joints; ++j) {
      csv << ",rms_torque_" << j << ",peak_power_" << j;
    }
  }
  csv << '\n';

  int exit_code = kExitOk;
  for (const CompareRun& run : runs) {
    const PlanResult& plan = run.plan;
    const bool ok = plan.trajectory.has_value();
    const double duration = ok ? plan.trajectory->metrics.duration
                               : std::numeric_limits<double>::quiet_NaN();
    const double ratio = duration / baseline;
    nlohmann::json entry;
    entry["label"] = run.label;
    entry["jerk_max"] = run.jerk_max ? nlohmann::json(*run.jerk_max)
                                     : nlohmann::json(nullptr);
    entry["status"] = ToString(plan.status);
    entry["duration_s"] = duration;
    entry["duration_ratio"] = ratio;
    entry["iterations"] = plan.slp.report.iterations;
    entry["per_joint"] = nlohmann::json::array();
    csv << run.label << ','
        << (run.jerk_max ? FormatDouble(*run.jerk_max) : std::string()) << ','
        << ToString(plan.status) << ',' << FormatDouble(duration) << ','
        << FormatDouble(ratio);
    if (dynamic) {
      for (int j = 0; j < joints; ++j) {
        const double rms =
            ok ? plan.trajectory->metrics.per_joint[j].rms_torque
               : std::numeric_limits<double>::quiet_NaN();
        const double peak =
            ok ? plan.trajectory->metrics.per_joint[j].peak_power
               : std::numeric_limits<double>::quiet_NaN();
        entry["per_joint"].push_back(
            {{"rms_torque", rms}, {"peak_power", peak}});
        csv << ',' << FormatDouble(rms) << ',' << FormatDouble(peak);
      }
    }
    csv << '\n';
    doc["runs"].push_back(entry);
    if (ok) {
      WriteFile(common.out_prefix + "." + run.label + ".traj.csv",
                TrajectoryCsv(*plan.trajectory));
    }
    if (plan.status == SlpStatus::kInfeasible) {
      exit_code = kExitInfeasible;
    } else if (plan.status == SlpStatus::kMaxIters &&
               exit_code == kExitOk) {
      exit_code = kExitMaxIters;
    }
    std::cout << run.label << " status=" << ToString(plan.status)
              << " duration_s=" << FormatDouble(duration)
              << " ratio=" << FormatDouble(ratio) << '\n';
  }
  WriteFile(common.out_prefix + ".compare.json", doc.dump(2) + "\n");
  WriteFile(common.out_prefix + ".compare.csv", csv.str());
  return exit_code;
}

int CmdOracle(const CommonArgs& common, int levels, const std::string& jerk) {
  const Loaded loaded = Load(common, PlanArgs{});
  const Problem& p = loaded.problem;
  DpOptions options;
  options.levels = levels;
  options.jerk = OnOff(jerk);
  options.x_start = loaded.config.x_start;
  options.x_end = loaded.config.x_end;
  DpResult dp;
  try {
    dp = DpOptimalTime(p.samples, p.coeffs, p.grid, p.limits, options);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  if (!dp.feasible) {
    std::cout << "status=infeasible_on_lattice\n";
    return kExitInfeasible;
  }
  const TrajectoryResult traj =
      BuildTrajectory(dp.x, p.samples, p.coeffs, p.grid);
  WriteFile(common.out_prefix + ".oracle.csv", TrajectoryCsv(traj));
  std::cout << "T*=" << FormatDouble(traj.metrics.duration) << '\n';
  return kExitOk;
}

void AddCommon(CLI::App* cmd, CommonArgs& common) {
  cmd->add_option("path_file", common.path_file, "Path JSON file")->required();
  cmd->add_option("robot_file", common.robot_file, "Robot JSON file")
      ->required();
  cmd->add_option("--out-prefix", common.out_prefix, "Output file prefix");
  cmd->add_option("--n-segments", common.n_segments,
                  "Grid segments for waypoint paths");
}

void AddPlanFlags(CLI::App* cmd, PlanArgs& args) {
  const auto on_off = CLI::IsMember({"on", "off"});
  cmd->add_option("--jerk-limit", args.jerk_limit, "Jerk rows on|off")
      ->check(on_off);
  cmd->add_option("--epsilon", args.epsilon, "Step-norm convergence tolerance");
  cmd->add_option("--max-iters", args.max_iters, "SLP iteration limit");
  cmd->add_option("--trust-region", args.trust_region, "Trust region on|off")
      ->check(on_off);
}

int Main(int argc, char** argv) {
  SetLogLevel(LogLevelFromEnv());
  CLI::App app{"Jerk-constrained time-optimal path parameterization"};
  app.require_subcommand(1);

  CommonArgs plan_common;
  PlanArgs plan_args;
  CLI::App* plan = app.add_subcommand("plan", "Plan one trajectory");
  AddCommon(plan, plan_common);
  AddPlanFlags(plan, plan_args);

  CommonArgs compare_common;
  PlanArgs compare_args;
  std::vector<std::string> sweep;
  int threads = 1;
  CLI::App* compare =
      app.add_subcommand("compare", "Baseline versus a jerk-limit sweep");
  AddCommon(compare, compare_common);
  AddPlanFlags(compare, compare_args);
  compare->add_option("--jerk-sweep", sweep, "Jerk limits (rad/s^3), comma separated")
      ->delimiter(',');
  compare->add_option("--threads", threads, "Worker threads");

  CommonArgs oracle_common;
  int levels = 200;
  std::string jerk = "on";
  CLI::App* oracle =
      app.add_subcommand("oracle", "Dynamic-programming reference optimum");
  AddCommon(oracle, oracle_common);
  oracle->add_option("--levels", levels, "Squared-speed levels per stage");
  oracle->add_option("--jerk", jerk, "Jerk limits on|off")
      ->check(CLI::IsMember({"on", "off"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (plan->parsed()) return CmdPlan(plan_common, plan_args);
    if (compare->parsed()) {
      return CmdCompare(compare_common, compare_args, sweep, threads);
    }
    if (oracle->parsed()) return CmdOracle(oracle_common, levels, jerk);
  } catch (const InputError& e) {
    Log(LogLevel::kError, e.what());
    return kExitInput;
  } catch (const std::exception& e) {
    Log(LogLevel::kError, e.what());
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace
}  // namespace totp3

int main(int argc, char** argv) { return totp3::Main(argc, argv); }
