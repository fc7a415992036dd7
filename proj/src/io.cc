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

#include "totp3/io.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace totp3 {
namespace {

using nlohmann::json;

[[noreturn]] void Fail(std::string_view source, std::string_view where,
                       std::string_view what) {
  std::string msg(source);
  if (!where.empty()) msg += ": " + std::string(where);
  msg += ": " + std::string(what);
  throw InputError(msg);
}

json ParseText(std::string_view text, std::string_view source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // The library message carries "at line L, column C".
    Fail(source, "", e.what());
  }
}

const json& Require(const json& obj, const char* key, std::string_view source) {
  if (!obj.is_object()) Fail(source, "/", "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) Fail(source, std::string("/") + key, "missing field");
  return *it;
}

double ToDouble(const json& v, std::string_view source, std::string_view where) {
  if (!v.is_number()) Fail(source, where, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) Fail(source, where, "expected a finite number");
  return d;
}

int ToInt(const json& v, std::string_view source, std::string_view where) {
  if (!v.is_number_integer()) Fail(source, where, "expected an integer");
  return v.get<int>();
}

bool ToBool(const json& v, std::string_view source, std::string_view where) {
  if (!v.is_boolean()) Fail(source, where, "expected true or false");
  return v.get<bool>();
}

Vector ToVector(const json& v, std::string_view source, std::string where,
                int size) {
  if (!v.is_array()) Fail(source, where, "expected an array of numbers");
  if (size >= 0 && static_cast<int>(v.size()) != size) {
    Fail(source, where,
         "expected " + std::to_string(size) + " entries, got " +
             std::to_string(v.size()));
  }
  Vector out(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    out[i] = ToDouble(v[i], source, where + "/" + std::to_string(i));
  }
  return out;
}

// Either an array of `size` numbers or one number repeated.
Vector ToLimit(const json& v, std::string_view source, std::string where,
               int size) {
  Vector out = v.is_number()
                   ? Vector::Constant(size, ToDouble(v, source, where))
                   : ToVector(v, source, where, size);
  for (int i = 0; i < out.size(); ++i) {
    if (!(out[i] > 0.0)) Fail(source, where, "limits must be positive");
  }
  return out;
}

std::vector<Vector> ToRows(const json& v, std::string_view source,
                           const std::string& where, int width) {
  if (!v.is_array()) Fail(source, where, "expected an array of arrays");
  std::vector<Vector> rows;
  rows.reserve(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    rows.push_back(ToVector(v[i], source, where + "/" + std::to_string(i),
                            width));
  }
  return rows;
}

Eigen::Vector2d ToPair(const json& obj, const char* key,
                       const Eigen::Vector2d& fallback,
                       std::string_view source) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  return ToVector(*it, source, std::string("/") + key, 2);
}

void AppendRow(std::ostream& out, const std::vector<std::string>& cells) {
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out << ',';
    out << cells[i];
  }
  out << '\n';
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream stream(line);
  while (std::getline(stream, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double ParseCell(const std::string& cell) {
  double value = 0.0;
  const char* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw InputError("bad numeric CSV cell '" + cell + "'");
  }
  return value;
}

json VectorJson(const Vector& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

}  // namespace

PathSpec ParsePath(std::string_view text, std::string_view source) {
  const json doc = ParseText(text, source);
  PathSpec spec;
  spec.num_joints = ToInt(Require(doc, "n", source), source, "/n");
  if (spec.num_joints < 1) Fail(source, "/n", "must be at least 1");
  const int n = spec.num_joints;

  if (doc.contains("waypoints")) {
    spec.waypoints = ToRows(doc["waypoints"], source, "/waypoints", n);
    if (spec.waypoints.size() < 2) {
      Fail(source, "/waypoints", "need at least 2 waypoints");
    }
    if (doc.contains("parameterization")) {
      const json& p = doc["parameterization"];
      if (p == "uniform") {
        spec.parameterization = KnotParameterization::kUniform;
      } else if (p == "chord_length") {
        spec.parameterization = KnotParameterization::kChordLength;
      } else {
        Fail(source, "/parameterization",
             "expected \"uniform\" or \"chord_length\"");
      }
    }
    return spec;
  }

  const Vector s = ToVector(Require(doc, "s", source), source, "/s", -1);
  const int points = static_cast<int>(s.size());
  auto q = ToRows(Require(doc, "q", source), source, "/q", n);
  auto dq = ToRows(Require(doc, "dq", source), source, "/dq", n);
  auto ddq = ToRows(Require(doc, "ddq", source), source, "/ddq", n);
  for (const auto* rows : {&q, &dq, &ddq}) {
    if (static_cast<int>(rows->size()) != points) {
      Fail(source, "", "q, dq and ddq need one row per entry of s");
    }
  }
  try {
    spec.grid = MakeCustomGrid(std::vector<double>(s.begin(), s.end()));
    spec.samples = MakeSamples(std::move(q), std::move(dq), std::move(ddq));
  } catch (const std::invalid_argument& e) {
    Fail(source, "", e.what());
  }
  return spec;
}

RobotConfig ParseRobot(std::string_view text, int num_joints,
                       std::string_view source) {
  const json doc = ParseText(text, source);
  RobotConfig robot;
  const json& model = Require(doc, "model", source);
  if (model == "kinematic") {
    robot.model = KinematicOnly{};
  } else if (model == "two_link") {
    if (num_joints != 2) {
      Fail(source, "/model", "two_link needs a 2-joint path");
    }
    TwoLinkParams p;
    p.masses = ToPair(doc, "masses", p.masses, source);
    p.lengths = ToPair(doc, "lengths", p.lengths, source);
    p.com = ToPair(doc, "com", p.com, source);
    p.inertias = ToPair(doc, "inertias", p.inertias, source);
    if (doc.contains("gravity")) {
      p.gravity = ToDouble(doc["gravity"], source, "/gravity");
    }
    try {
      ValidateTwoLinkParams(p);
    } catch (const std::invalid_argument& e) {
      Fail(source, "", e.what());
    }
    robot.model = p;
  } else if (model == "tabulated") {
    TabulatedCoefficients t;
    t.m = ToRows(Require(doc, "m", source), source, "/m", num_joints);
    t.c = ToRows(Require(doc, "c", source), source, "/c", num_joints);
    t.g = ToRows(Require(doc, "g", source), source, "/g", num_joints);
    robot.model = std::move(t);
  } else {
    Fail(source, "/model",
         "expected \"kinematic\", \"two_link\" or \"tabulated\"");
  }

  const json& limits = Require(doc, "limits", source);
  robot.limits.qd_max = ToLimit(Require(limits, "qd_max", source), source,
                                "/limits/qd_max", num_joints);
  robot.limits.qdd_max = ToLimit(Require(limits, "qdd_max", source), source,
                                 "/limits/qdd_max", num_joints);
  robot.limits.jerk_max = ToLimit(Require(limits, "jerk_max", source), source,
                                  "/limits/jerk_max", num_joints);
  if (limits.contains("tau_max")) {
    robot.limits.tau_max =
        ToLimit(limits["tau_max"], source, "/limits/tau_max", num_joints);
  }
  const bool dynamic = !IsKinematic(robot.model);
  if (dynamic && !robot.limits.tau_max) {
    Fail(source, "/limits/tau_max", "required for a dynamic model");
  }
  if (!dynamic && robot.limits.tau_max) {
    Fail(source, "/limits/tau_max", "not allowed for a kinematic model");
  }

  if (doc.contains("planner")) {
    const json& p = doc["planner"];
    if (!p.is_object()) Fail(source, "/planner", "expected an object");
    PlannerOverrides& o = robot.planner;
    if (p.contains("n_segments")) {
      o.n_segments = ToInt(p["n_segments"], source, "/planner/n_segments");
    }
    if (p.contains("epsilon")) {
      o.epsilon = ToDouble(p["epsilon"], source, "/planner/epsilon");
    }
    if (p.contains("max_iters")) {
      o.max_iters = ToInt(p["max_iters"], source, "/planner/max_iters");
    }
    if (p.contains("trust_region")) {
      o.trust_region = ToBool(p["trust_region"], source, "/planner/trust_region");
    }
    if (p.contains("jerk_limit")) {
      o.jerk_limit = ToBool(p["jerk_limit"], source, "/planner/jerk_limit");
    }
    if (p.contains("x_start")) {
      o.x_start = ToDouble(p["x_start"], source, "/planner/x_start");
    }
    if (p.contains("x_end")) {
      o.x_end = ToDouble(p["x_end"], source, "/planner/x_end");
    }
  }
  return robot;
}

std::string ReadTextFile(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw InputError(file.string() + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Problem BuildProblem(const PathSpec& path, const RobotConfig& robot,
                     int n_segments) {
  Problem problem;
  try {
    if (path.samples) {
      problem.grid = *path.grid;
      problem.samples = *path.samples;
    } else {
      problem.grid = MakeUniformGrid(n_segments);
      problem.samples = SamplePath(
          FitSpline(path.waypoints, path.parameterization), problem.grid);
    }
    problem.coeffs = ComputeDynamicsCoeffs(robot.model, problem.samples);
    problem.limits = robot.limits;
    ValidateLimits(problem.limits, problem.samples.num_joints(),
                   !problem.coeffs.empty());
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  return problem;
}

std::string FormatDouble(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void WriteTrajectoryCsv(std::ostream& out, const TrajectoryResult& traj) {
  const int points = traj.num_points();
  const int joints = points > 0 ? static_cast<int>(traj.q.front().size()) : 0;
  const bool has_tau = !traj.tau.empty();
  std::vector<std::string> header = {"k", "s", "t", "x"};
  for (int j = 0; j < joints; ++j) {
    const std::string suffix = "_" + std::to_string(j);
    for (const char* name : {"q", "qd", "qdd", "jerk"}) {
      header.push_back(name + suffix);
    }
    if (has_tau) header.push_back("tau" + suffix);
  }
  AppendRow(out, header);
  std::vector<std::string> row;
  for (int k = 0; k < points; ++k) {
    row.clear();
    row.push_back(std::to_string(k));
    row.push_back(FormatDouble(traj.s[k]));
    row.push_back(FormatDouble(traj.t[k]));
    row.push_back(FormatDouble(traj.x[k]));
    const bool has_jerk = k < static_cast<int>(traj.jerk.size());
    for (int j = 0; j < joints; ++j) {
      row.push_back(FormatDouble(traj.q[k][j]));
      row.push_back(FormatDouble(traj.qd[k][j]));
      row.push_back(FormatDouble(traj.qdd[k][j]));
      row.push_back(has_jerk ? FormatDouble(traj.jerk[k][j]) : "");
      if (has_tau) row.push_back(FormatDouble(traj.tau[k][j]));
    }
    AppendRow(out, row);
  }
}

TrajectoryTable ReadTrajectoryCsv(std::istream& in) {
  TrajectoryTable table;
  std::string line;
  if (!std::getline(in, line)) throw InputError("empty trajectory CSV");
  table.header = SplitCsvLine(line);
  auto column = [&](const std::string& name) {
    for (size_t i = 0; i < table.header.size(); ++i) {
      if (table.header[i] == name) return static_cast<int>(i);
    }
    throw InputError("trajectory CSV lacks column '" + name + "'");
  };
  const int s_col = column("s");
  const int t_col = column("t");
  const int x_col = column("x");
  std::vector<int> q_cols;
  for (int j = 0;; ++j) {
    const std::string name = "q_" + std::to_string(j);
    bool found = false;
    for (const auto& h : table.header) found = found || h == name;
    if (!found) break;
    q_cols.push_back(column(name));
  }
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = SplitCsvLine(line);
    if (cells.size() != table.header.size()) {
      throw InputError("trajectory CSV line " + std::to_string(line_no) +
                       ": expected " + std::to_string(table.header.size()) +
                       " cells");
    }
    table.s.push_back(ParseCell(cells[s_col]));
    table.t.push_back(ParseCell(cells[t_col]));
    table.x.push_back(ParseCell(cells[x_col]));
    Vector q(q_cols.size());
    for (size_t j = 0; j < q_cols.size(); ++j) q[j] = ParseCell(cells[q_cols[j]]);
    table.q.push_back(std::move(q));
  }
  return table;
}

std::string MetricsJson(const TrajectoryMetrics& metrics, const Limits& limits,
                        const PlanResult& plan, const SlpConfig& config,
                        const PathGrid& grid) {
  json doc;
  doc["duration_s"] = metrics.duration;
  doc["per_joint"] = json::array();
  for (const JointMetrics& m : metrics.per_joint) {
    doc["per_joint"].push_back(
        {{"rms_torque", m.rms_torque}, {"peak_power", m.peak_power}});
  }
  json lim;
  lim["qd_max"] = VectorJson(limits.qd_max);
  lim["qdd_max"] = VectorJson(limits.qdd_max);
  lim["jerk_max"] = VectorJson(limits.jerk_max);
  if (limits.tau_max) lim["tau_max"] = VectorJson(*limits.tau_max);
  doc["limits"] = lim;

  const SlpReport& report = plan.slp.report;
  json solver;
  solver["status"] = ToString(plan.status);
  solver["iterations"] = report.iterations;
  solver["accepted_steps"] = report.accepted_costs.size();
  solver["jerk_limit"] = config.jerk_limits;
  solver["trust_region"] = config.trust_region.enabled;
  solver["epsilon"] = config.epsilon;
  solver["max_iters"] = config.max_iters;
  solver["warm_start_status"] = ToString(plan.warm_start.status);
  if (plan.warm_start.status != WarmStartStatus::kInfeasible) {
    solver["warm_start_duration_s"] =
        2.0 * TrueCost(plan.warm_start.x, grid);
  }
  if (!report.history.empty()) {
    solver["final_step_norm"] = report.history.back().step_norm;
  }
  solver["message"] = report.message;
  doc["solver"] = solver;
  return doc.dump(2) + "\n";
}

std::string IterationLog(const SlpReport& report) {
  std::ostringstream out;
  for (const SlpIteration& it : report.history) {
    out << "iter=" << it.iter << " f=" << FormatDouble(it.cost)
        << " T=" << FormatDouble(it.duration)
        << " step_norm=" << FormatDouble(it.step_norm)
        << " rho=" << FormatDouble(it.radius)
        << " lp_status=" << ToString(it.lp_status)
        << " accepted=" << (it.accepted ? 1 : 0)
        << " restoration=" << (it.restoration ? 1 : 0) << '\n';
  }
  return out.str();
}

}  // namespace totp3
