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

#ifndef TOTP3_IO_H_
#define TOTP3_IO_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "totp3/constraints.h"
#include "totp3/dynamics.h"
#include "totp3/path_model.h"
#include "totp3/slp_planner.h"
#include "totp3/trajectory.h"

namespace totp3 {

// Unreadable, malformed or inconsistent input. The message names the source
// and, for syntax errors, the line and column.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Either waypoints to be splined or directly sampled q, q', q'' on a grid.
struct PathSpec {
  int num_joints = 0;
  std::vector<Vector> waypoints;
  KnotParameterization parameterization = KnotParameterization::kUniform;
  std::optional<PathGrid> grid;
  std::optional<PathSamples> samples;
};

// Planner settings that a robot file may override.
struct PlannerOverrides {
  std::optional<int> n_segments;
  std::optional<double> epsilon;
  std::optional<int> max_iters;
  std::optional<bool> trust_region;
  std::optional<bool> jerk_limit;
  std::optional<double> x_start;
  std::optional<double> x_end;
};

struct RobotConfig {
  DynamicsModel model;
  Limits limits;
  PlannerOverrides planner;
};

// `source` labels error messages.
PathSpec ParsePath(std::string_view text, std::string_view source = "path");
// Limits given as a single number apply to every joint.
RobotConfig ParseRobot(std::string_view text, int num_joints,
                       std::string_view source = "robot");

std::string ReadTextFile(const std::filesystem::path& file);

// Grid, samples, dynamics coefficients and limits ready for planning.
struct Problem {
  PathGrid grid;
  PathSamples samples;
  PathDynamicsCoefficients coeffs;
  Limits limits;
};

// A sampled path brings its own grid; a waypoint path is splined and sampled
// on a uniform grid with `n_segments` segments.
// Throws InputError if the pieces do not fit together.
Problem BuildProblem(const PathSpec& path, const RobotConfig& robot,
                     int n_segments);

// Shortest representation that reads back to the same double.
std::string FormatDouble(double value);

// Columns k, s, t, x, then q_j, qd_j, qdd_j, jerk_j[, tau_j] for each joint
// j. Jerk cells are empty where the series is undefined (k >= N - 1).
void WriteTrajectoryCsv(std::ostream& out, const TrajectoryResult& trajectory);

struct TrajectoryTable {
  std::vector<std::string> header;
  std::vector<double> s;
  std::vector<double> t;
  std::vector<double> x;
  std::vector<Vector> q;
};

// Reads back the columns needed to re-verify a profile.
TrajectoryTable ReadTrajectoryCsv(std::istream& in);

// {duration_s, per_joint: [{rms_torque, peak_power}], limits, solver}.
std::string MetricsJson(const TrajectoryMetrics& metrics, const Limits& limits,
                        const PlanResult& plan, const SlpConfig& config,
                        const PathGrid& grid);

// One line per SLP iteration.
std::string IterationLog(const SlpReport& report);

}  // namespace totp3

#endif  // TOTP3_IO_H_
