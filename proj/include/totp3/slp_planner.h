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

#ifndef TOTP3_SLP_PLANNER_H_
#define TOTP3_SLP_PLANNER_H_

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "totp3/constraints.h"
#include "totp3/dynamics.h"
#include "totp3/lp.h"
#include "totp3/path_model.h"
#include "totp3/trajectory.h"
#include "totp3/warm_start.h"

namespace totp3 {

// f(x) = sum_i delta_i / (sqrt(x_i) + sqrt(x_{i+1})). Traversal time is 2 f.
// Throws std::domain_error on negative entries or an adjacent zero pair.
double TrueCost(std::span<const double> x, const PathGrid& grid);

// Gradient of TrueCost with respect to the free variables x_1 .. x_{N-1}
// (N - 1 entries). Interior entries of `nominal` must be strictly positive.
std::vector<double> LinearizeCost(std::span<const double> nominal,
                                  const PathGrid& grid);

struct TrustRegionConfig {
  bool enabled = true;
  // Infinity-norm box radius in units of x. Non-positive selects a quarter
  // of the largest entry of the first feasible iterate.
  double initial_radius = 0.0;
  double shrink = 0.5;
  double expand = 1.5;
  double min_radius = 1e-8;
};

struct SlpConfig {
  double epsilon = 1e-4;  // on |x - x_nominal|_inf
  int max_iters = 100;
  double x_floor = kDefaultXFloor;
  TrustRegionConfig trust_region;
  bool jerk_limits = true;
  double x_start = 0.0;
  double x_end = 0.0;
  double max_squared_speed = kDefaultMaxSquaredSpeed;
  // Keep every accepted iterate in the report.
  bool record_iterates = false;
  LpOptions lp;
};

// Throws std::invalid_argument on nonsensical settings.
void ValidateSlpConfig(const SlpConfig& config);

enum class SlpStatus { kConverged, kMaxIters, kInfeasible };

const char* ToString(SlpStatus status);

struct SlpIteration {
  int iter = 0;
  double cost = 0.0;        // f at the LP solution
  double duration = 0.0;    // 2 f
  double step_norm = 0.0;
  double radius = 0.0;      // trust radius used for this LP (inf if none)
  LpStatus lp_status = LpStatus::kOptimal;
  bool accepted = false;
  bool restoration = false;  // solved without the box to reach feasibility
};

struct SlpReport {
  SlpStatus status = SlpStatus::kInfeasible;
  int iterations = 0;
  std::vector<SlpIteration> history;
  // True cost of the feasible starting point (if any) and of every accepted
  // iterate, in order.
  std::vector<double> accepted_costs;
  std::vector<std::vector<double>> accepted_profiles;
  std::vector<StaticViolation> diagnostics;
  std::string message;
};

struct SlpResult {
  std::vector<double> x;
  SlpReport report;
};

// Sequential LP over x_1 .. x_{N-1}: at every iteration the cost and the
// conservative jerk rows are relinearized at the nominal profile and the LP
// is solved. With the trust region enabled a step is accepted only if the
// true cost decreases; otherwise the box shrinks. A nominal that violates
// the true constraints is first replaced by an unboxed LP solution, which is
// feasible because the linearized jerk rows are conservative. With the trust
// region disabled every LP solution becomes the next nominal.
SlpResult SlpSolve(const PathSamples& samples,
                   const PathDynamicsCoefficients& coeffs,
                   const PathGrid& grid, const Limits& limits,
                   std::span<const double> warm_start, const SlpConfig& config,
                   const LpSolverFn& solver = SolveLp);

struct Violation {
  ConstraintOrder order = ConstraintOrder::kVelocity;
  int k = 0;
  int joint = 0;
  double value = 0.0;
  double limit = 0.0;
};

struct VerifyOptions {
  bool check_jerk = true;
  // A value counts as violating when |value| > limit + tol * max(1, limit).
  double tol = 1e-8;
};

struct ViolationReport {
  std::vector<Violation> violations;
  // Largest |value| - limit per order (velocity, acceleration, torque, jerk);
  // negative when every row has slack.
  std::array<double, 4> max_excess{};

  bool ok() const { return violations.empty(); }
};

// Recomputes joint velocity (k = 0..N), acceleration and torque (forward
// difference, k = 0..N-1) and jerk (k = 0..N-2, with the exact nonlinear
// time denominator) and compares them with the limits.
// Throws std::domain_error for negative entries.
ViolationReport VerifyProfile(std::span<const double> x,
                              const PathSamples& samples,
                              const PathDynamicsCoefficients& coeffs,
                              const PathGrid& grid, const Limits& limits,
                              const VerifyOptions& options = {});

std::string Describe(const Violation& violation);

// Warm start followed by the SLP and trajectory construction.
struct PlanResult {
  SlpStatus status = SlpStatus::kInfeasible;
  WarmStartResult warm_start;
  SlpResult slp;
  std::optional<TrajectoryResult> trajectory;
};

PlanResult Plan(const PathSamples& samples,
                const PathDynamicsCoefficients& coeffs, const PathGrid& grid,
                const Limits& limits, const SlpConfig& config,
                const LpSolverFn& solver = SolveLp);

}  // namespace totp3

#endif  // TOTP3_SLP_PLANNER_H_
