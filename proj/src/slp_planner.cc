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

#include "totp3/slp_planner.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace totp3 {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Relative cost decreases below this are rounding noise, not progress.
constexpr double kCostNoise = 8 * std::numeric_limits<double>::epsilon();

void CheckProfileSize(std::span<const double> x, const PathGrid& grid) {
  if (static_cast<int>(x.size()) != grid.num_segments() + 1) {
    throw std::invalid_argument("profile size does not match the grid");
  }
}

// Vertically concatenates two stacked systems with the same columns.
StackedSystem Concatenate(const StackedSystem& top,
                          const StackedSystem& bottom) {
  StackedSystem out;
  const Eigen::Index cols = std::max(top.A.cols(), bottom.A.cols());
  out.A.resize(top.A.rows() + bottom.A.rows(), cols);
  if (top.A.rows() > 0) out.A.topRows(top.A.rows()) = top.A;
  if (bottom.A.rows() > 0) out.A.bottomRows(bottom.A.rows()) = bottom.A;
  out.b.resize(top.b.size() + bottom.b.size());
  out.b << top.b, bottom.b;
  out.tags = top.tags;
  out.tags.insert(out.tags.end(), bottom.tags.begin(), bottom.tags.end());
  return out;
}

double InteriorStepNorm(std::span<const double> a, std::span<const double> b) {
  double norm = 0.0;
  for (size_t k = 1; k + 1 < a.size(); ++k) {
    norm = std::max(norm, std::abs(a[k] - b[k]));
  }
  return norm;
}

}  // namespace

double TrueCost(std::span<const double> x, const PathGrid& grid) {
  CheckProfileSize(x, grid);
  double f = 0.0;
  for (int i = 0; i < grid.num_segments(); ++i) {
    if (x[i] < 0.0 || x[i + 1] < 0.0) {
      throw std::domain_error("negative squared speed");
    }
    const double denom = std::sqrt(x[i]) + std::sqrt(x[i + 1]);
    if (denom == 0.0) {
      throw std::domain_error("profile stops on segment " + std::to_string(i));
    }
    f += grid.delta[i] / denom;
  }
  return f;
}

std::vector<double> LinearizeCost(std::span<const double> nominal,
                                  const PathGrid& grid) {
  CheckProfileSize(nominal, grid);
  const int n = grid.num_segments();
  if (nominal[0] < 0.0 || nominal[n] < 0.0) {
    throw std::domain_error("negative boundary squared speed");
  }
  std::vector<double> grad(n - 1);
  for (int k = 1; k < n; ++k) {
    if (!(nominal[k] > 0.0)) {
      throw std::domain_error("cost linearization needs x_" +
                              std::to_string(k) + " > 0");
    }
    const double r = std::sqrt(nominal[k]);
    const double left = r + std::sqrt(nominal[k - 1]);
    const double right = r + std::sqrt(nominal[k + 1]);
    grad[k - 1] = -grid.delta[k - 1] / (2.0 * r * left * left) -
                  grid.delta[k] / (2.0 * r * right * right);
  }
  return grad;
}

void ValidateSlpConfig(const SlpConfig& config) {
  if (!(config.epsilon > 0.0)) {
    throw std::invalid_argument("epsilon must be positive");
  }
  if (config.max_iters < 1) {
    throw std::invalid_argument("max_iters must be at least 1");
  }
  if (!(config.x_floor > 0.0)) {
    throw std::invalid_argument("x_floor must be positive");
  }
  if (!(config.x_start >= 0.0) || !(config.x_end >= 0.0) ||
      !std::isfinite(config.x_start) || !std::isfinite(config.x_end)) {
    throw std::invalid_argument("boundary squared speeds must be >= 0");
  }
  if (!(config.max_squared_speed > config.x_floor)) {
    throw std::invalid_argument("max_squared_speed must exceed x_floor");
  }
  const TrustRegionConfig& tr = config.trust_region;
  if (!(tr.shrink > 0.0 && tr.shrink < 1.0)) {
    throw std::invalid_argument("trust region shrink must be in (0, 1)");
  }
  if (!(tr.expand >= 1.0)) {
    throw std::invalid_argument("trust region expand must be >= 1");
  }
  if (!(tr.min_radius > 0.0)) {
    throw std::invalid_argument("trust region min_radius must be positive");
  }
}

const char* ToString(SlpStatus status) {
  switch (status) {
    case SlpStatus::kConverged:
      return "converged";
    case SlpStatus::kMaxIters:
      return "max_iters";
    case SlpStatus::kInfeasible:
      return "infeasible";
  }
  return "unknown";
}

SlpResult SlpSolve(const PathSamples& samples,
                   const PathDynamicsCoefficients& coeffs,
                   const PathGrid& grid, const Limits& limits,
                   std::span<const double> warm_start, const SlpConfig& config,
                   const LpSolverFn& solver) {
  ValidateSlpConfig(config);
  CheckProfileSize(warm_start, grid);
  if (samples.num_points() != grid.num_segments() + 1) {
    throw std::invalid_argument("samples do not match the grid");
  }
  const int n_seg = grid.num_segments();
  const int vars = n_seg - 1;

  SlpResult result;
  SlpReport& report = result.report;

  ConstraintBlocks static_blocks;
  static_blocks.first_order = VelocityRows(samples, limits);
  static_blocks.second_order = SecondOrderRows(samples, coeffs, grid, limits);
  const StackedSystem static_system =
      StackBlocks(static_blocks, n_seg, config.x_start, config.x_end);
  report.diagnostics = FindStaticInfeasibilities(static_system);
  if (!report.diagnostics.empty()) {
    report.status = SlpStatus::kInfeasible;
    report.message = "statically infeasible: " + Describe(report.diagnostics[0]);
    return result;
  }

  const std::vector<double> caps =
      VelocityCaps(samples, limits, config.max_squared_speed);

  std::vector<double> nominal(warm_start.begin(), warm_start.end());
  nominal.front() = config.x_start;
  nominal.back() = config.x_end;
  for (int k = 1; k < n_seg; ++k) {
    nominal[k] = std::clamp(nominal[k], config.x_floor,
                            std::max(config.x_floor, caps[k]));
  }

  VerifyOptions verify;
  verify.check_jerk = config.jerk_limits;
  bool feasible = VerifyProfile(nominal, samples, coeffs, grid, limits, verify)
                      .ok();
  double cost = kInf;
  const TrustRegionConfig& tr = config.trust_region;
  double radius = kInf;

  auto start_trust_region = [&]() {
    if (!tr.enabled) return;
    if (tr.initial_radius > 0.0) {
      radius = tr.initial_radius;
      return;
    }
    double largest = 0.0;
    for (int k = 1; k < n_seg; ++k) largest = std::max(largest, nominal[k]);
    radius = std::max(0.25 * largest, 1e3 * tr.min_radius);
  };
  auto record_accepted = [&]() {
    report.accepted_costs.push_back(cost);
    if (config.record_iterates) report.accepted_profiles.push_back(nominal);
  };

  if (feasible) {
    cost = TrueCost(nominal, grid);
    record_accepted();
    start_trust_region();
  }

  LpProblem lp;
  lp.lb.resize(vars);
  lp.ub.resize(vars);
  lp.c.resize(vars);

  report.status = SlpStatus::kMaxIters;
  for (int iter = 1; iter <= config.max_iters; ++iter) {
    report.iterations = iter;
    if (config.jerk_limits) {
      ConstraintBlocks jerk_blocks;
      jerk_blocks.third_order =
          JerkRows(samples, grid, limits, nominal, config.x_floor);
      const StackedSystem jerk_system =
          StackBlocks(jerk_blocks, n_seg, config.x_start, config.x_end);
      const StackedSystem full = Concatenate(static_system, jerk_system);
      lp.A = full.A;
      lp.b = full.b;
    } else {
      lp.A = static_system.A;
      lp.b = static_system.b;
    }
    const std::vector<double> grad = LinearizeCost(nominal, grid);
    const bool restoration = !feasible && tr.enabled;
    const bool boxed = tr.enabled && feasible;
    for (int j = 0; j < vars; ++j) {
      const int k = j + 1;
      lp.c[j] = grad[j];
      double lo = config.x_floor;
      double hi = std::max(config.x_floor, caps[k]);
      if (boxed) {
        lo = std::max(lo, nominal[k] - radius);
        hi = std::min(hi, nominal[k] + radius);
      }
      lp.lb[j] = lo;
      lp.ub[j] = std::max(lo, hi);
    }

    SlpIteration record;
    record.iter = iter;
    record.radius = boxed ? radius : kInf;
    record.restoration = restoration;
    const LpSolution sol = solver(lp, config.lp);
    record.lp_status = sol.status;
    if (sol.status != LpStatus::kOptimal) {
      record.cost = cost;
      record.duration = 2.0 * cost;
      report.history.push_back(record);
      if (boxed) {
        // The nominal itself is feasible for this LP, so this is numerical
        // trouble; retreat as for a rejected step.
        radius *= tr.shrink;
        if (radius < tr.min_radius) {
          report.status = SlpStatus::kConverged;
          report.message = std::string("LP ") + ToString(sol.status) +
                           " inside the trust region; kept the last "
                           "accepted iterate";
          break;
        }
        continue;
      }
      report.status = SlpStatus::kInfeasible;
      std::ostringstream msg;
      msg << "LP " << ToString(sol.status) << " at iteration " << iter;
      report.message = msg.str();
      break;
    }

    std::vector<double> candidate(nominal.size());
    candidate.front() = config.x_start;
    candidate.back() = config.x_end;
    for (int j = 0; j < vars; ++j) {
      candidate[j + 1] = std::max(config.x_floor, sol.x[j]);
    }
    const double step = InteriorStepNorm(candidate, nominal);
    const double candidate_cost = TrueCost(candidate, grid);
    record.step_norm = step;
    record.cost = candidate_cost;
    record.duration = 2.0 * candidate_cost;

    if (!tr.enabled) {
      nominal = std::move(candidate);
      cost = candidate_cost;
      feasible = true;
      record.accepted = true;
      report.history.push_back(record);
      record_accepted();
      if (step < config.epsilon) {
        report.status = SlpStatus::kConverged;
        break;
      }
      continue;
    }

    if (restoration) {
      nominal = std::move(candidate);
      cost = candidate_cost;
      feasible = true;
      record.accepted = true;
      report.history.push_back(record);
      record_accepted();
      start_trust_region();
      continue;
    }

    if (candidate_cost < cost * (1.0 - kCostNoise)) {
      const bool at_boundary = step >= 0.99 * radius;
      nominal = std::move(candidate);
      cost = candidate_cost;
      record.accepted = true;
      report.history.push_back(record);
      record_accepted();
      if (step < config.epsilon) {
        report.status = SlpStatus::kConverged;
        break;
      }
      if (at_boundary) radius *= tr.expand;
      continue;
    }
    report.history.push_back(record);
    if (step < config.epsilon) {
      report.status = SlpStatus::kConverged;
      break;
    }
    radius = std::min(radius, step) * tr.shrink;
    if (radius < tr.min_radius) {
      report.status = SlpStatus::kConverged;
      break;
    }
  }

  if (report.status != SlpStatus::kInfeasible && !feasible) {
    report.status = SlpStatus::kInfeasible;
    report.message = "no feasible iterate found";
  }
  if (report.status == SlpStatus::kMaxIters) {
    report.message = "iteration limit reached";
  }
  result.x = std::move(nominal);
  return result;
}

ViolationReport VerifyProfile(std::span<const double> x,
                              const PathSamples& samples,
                              const PathDynamicsCoefficients& coeffs,
                              const PathGrid& grid, const Limits& limits,
                              const VerifyOptions& options) {
  CheckProfileSize(x, grid);
  for (double v : x) {
    if (v < 0.0 || !std::isfinite(v)) {
      throw std::domain_error("profile entries must be finite and >= 0");
    }
  }
  const int n_seg = grid.num_segments();
  const int joints = samples.num_joints();
  ViolationReport report;
  report.max_excess.fill(-kInf);

  auto check = [&](ConstraintOrder order, int k, const Vector& values,
                   const Vector& limit) {
    for (int j = 0; j < joints; ++j) {
      const double excess = std::abs(values[j]) - limit[j];
      double& worst = report.max_excess[static_cast<int>(order)];
      worst = std::max(worst, excess);
      if (excess > options.tol * std::max(1.0, limit[j]) ||
          std::isnan(values[j])) {
        report.violations.push_back({order, k, j, values[j], limit[j]});
      }
    }
  };

  for (int k = 0; k <= n_seg; ++k) {
    check(ConstraintOrder::kVelocity, k, JointVelocity(samples, x, k),
          limits.qd_max);
  }
  for (int k = 0; k < n_seg; ++k) {
    check(ConstraintOrder::kAcceleration, k,
          JointAcceleration(samples, grid, x, k), limits.qdd_max);
  }
  if (!coeffs.empty() && limits.tau_max.has_value()) {
    for (int k = 0; k < n_seg; ++k) {
      check(ConstraintOrder::kTorque, k, JointTorque(coeffs, grid, x, k),
            *limits.tau_max);
    }
  }
  if (options.check_jerk) {
    for (int k = 0; k + 1 < n_seg; ++k) {
      check(ConstraintOrder::kJerk, k, JointJerk(samples, grid, x, k),
            limits.jerk_max);
    }
  }
  return report;
}

std::string Describe(const Violation& violation) {
  std::ostringstream out;
  out << ToString(violation.order) << " limit exceeded at k=" << violation.k
      << " joint=" << violation.joint << ": |" << violation.value << "| > "
      << violation.limit;
  return out.str();
}

PlanResult Plan(const PathSamples& samples,
                const PathDynamicsCoefficients& coeffs, const PathGrid& grid,
                const Limits& limits, const SlpConfig& config,
                const LpSolverFn& solver) {
  ValidateSlpConfig(config);
  ValidateLimits(limits, samples.num_joints(), !coeffs.empty());
  PlanResult plan;
  WarmStartOptions ws;
  ws.x_start = config.x_start;
  ws.x_end = config.x_end;
  ws.x_floor = config.x_floor;
  ws.max_squared_speed = config.max_squared_speed;
  plan.warm_start = WarmStart(samples, coeffs, grid, limits, ws);
  if (plan.warm_start.status == WarmStartStatus::kInfeasible) {
    plan.status = SlpStatus::kInfeasible;
    plan.slp.report.status = SlpStatus::kInfeasible;
    plan.slp.report.diagnostics = plan.warm_start.diagnostics;
    plan.slp.report.message =
        plan.warm_start.diagnostics.empty()
            ? "second-order constraints are infeasible"
            : "statically infeasible: " +
                  Describe(plan.warm_start.diagnostics[0]);
    return plan;
  }
  plan.slp = SlpSolve(samples, coeffs, grid, limits, plan.warm_start.x, config,
                      solver);
  plan.status = plan.slp.report.status;
  if (plan.status != SlpStatus::kInfeasible) {
    plan.trajectory = BuildTrajectory(plan.slp.x, samples, coeffs, grid);
  }
  return plan;
}

}  // namespace totp3
