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

#include "totp3/constraints.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace totp3 {
namespace {

void CheckPositive(const Vector& v, int num_joints, const char* name) {
  if (v.size() != num_joints) {
    throw std::invalid_argument(std::string(name) + " must have " +
                                std::to_string(num_joints) + " entries");
  }
  if (!v.allFinite() || !(v.array() > 0.0).all()) {
    throw std::invalid_argument(std::string(name) +
                                " must be finite and strictly positive");
  }
}

// Appends both sides of |coef0 x_k + coef1 x_{k+1} + offset| <= limit.
void AppendTwoSided(const Vector& coef0, const Vector& coef1,
                    const Vector& offset, const Vector& limit,
                    ConstraintOrder order, int k, int row, SecondOrderBlock& b) {
  const Eigen::Index n = coef0.size();
  for (Eigen::Index j = 0; j < n; ++j) {
    b.alpha0[row + j] = coef0[j];
    b.alpha1[row + j] = coef1[j];
    b.beta[row + j] = limit[j] - offset[j];
    b.tags[row + j] = {order, k, static_cast<int>(j), +1};

    b.alpha0[row + n + j] = -coef0[j];
    b.alpha1[row + n + j] = -coef1[j];
    b.beta[row + n + j] = limit[j] + offset[j];
    b.tags[row + n + j] = {order, k, static_cast<int>(j), -1};
  }
}

SecondOrderBlock MakeSecondOrderBlock(int k, Eigen::Index rows) {
  SecondOrderBlock block;
  block.k = k;
  block.alpha0 = Vector::Zero(rows);
  block.alpha1 = Vector::Zero(rows);
  block.beta = Vector::Zero(rows);
  block.tags.resize(rows);
  return block;
}

}  // namespace

void ValidateLimits(const Limits& limits, int num_joints, bool needs_torque) {
  CheckPositive(limits.qd_max, num_joints, "qd_max");
  CheckPositive(limits.qdd_max, num_joints, "qdd_max");
  CheckPositive(limits.jerk_max, num_joints, "jerk_max");
  if (needs_torque && !limits.tau_max) {
    throw std::invalid_argument("tau_max is required for dynamic models");
  }
  if (!needs_torque && limits.tau_max) {
    throw std::invalid_argument("tau_max given for a kinematic-only model");
  }
  if (limits.tau_max) CheckPositive(*limits.tau_max, num_joints, "tau_max");
}

const char* ToString(ConstraintOrder order) {
  switch (order) {
    case ConstraintOrder::kVelocity:
      return "velocity";
    case ConstraintOrder::kAcceleration:
      return "acceleration";
    case ConstraintOrder::kTorque:
      return "torque";
    case ConstraintOrder::kJerk:
      return "jerk";
  }
  return "invalid";
}

std::vector<FirstOrderBlock> VelocityRows(const PathSamples& samples,
                                          const Limits& limits) {
  const int points = samples.num_points();
  std::vector<FirstOrderBlock> rows;
  rows.reserve(std::max(points - 2, 0));
  const Vector nu = limits.qd_max.cwiseProduct(limits.qd_max);
  for (int k = 1; k + 1 < points; ++k) {
    rows.push_back({k, samples.dq[k].cwiseProduct(samples.dq[k]), nu});
  }
  return rows;
}

std::vector<SecondOrderBlock> AccelerationRows(const PathSamples& samples,
                                               const PathGrid& grid,
                                               const Limits& limits) {
  const int n = samples.num_joints();
  const Vector zero = Vector::Zero(n);
  std::vector<SecondOrderBlock> rows;
  rows.reserve(grid.num_segments());
  for (int k = 0; k < grid.num_segments(); ++k) {
    const Vector forward = samples.dq[k] / (2.0 * grid.delta[k]);
    SecondOrderBlock block = MakeSecondOrderBlock(k, 2 * n);
    AppendTwoSided(samples.ddq[k] - forward, forward, zero, limits.qdd_max,
                   ConstraintOrder::kAcceleration, k, 0, block);
    rows.push_back(std::move(block));
  }
  return rows;
}

std::vector<SecondOrderBlock> TorqueRows(const PathDynamicsCoefficients& coeffs,
                                         const PathGrid& grid,
                                         const Limits& limits) {
  if (!limits.tau_max) {
    throw std::invalid_argument("torque rows need tau_max");
  }
  std::vector<SecondOrderBlock> rows;
  if (coeffs.empty()) return rows;
  const Eigen::Index n = coeffs.m.front().size();
  rows.reserve(grid.num_segments());
  for (int k = 0; k < grid.num_segments(); ++k) {
    const Vector forward = coeffs.m[k] / (2.0 * grid.delta[k]);
    SecondOrderBlock block = MakeSecondOrderBlock(k, 2 * n);
    AppendTwoSided(coeffs.c[k] - forward, forward, coeffs.g[k],
                   *limits.tau_max, ConstraintOrder::kTorque, k, 0, block);
    rows.push_back(std::move(block));
  }
  return rows;
}

std::vector<SecondOrderBlock> SecondOrderRows(
    const PathSamples& samples, const PathDynamicsCoefficients& coeffs,
    const PathGrid& grid, const Limits& limits) {
  std::vector<SecondOrderBlock> acc = AccelerationRows(samples, grid, limits);
  if (coeffs.empty()) return acc;
  const std::vector<SecondOrderBlock> torque = TorqueRows(coeffs, grid, limits);
  for (size_t i = 0; i < acc.size(); ++i) {
    SecondOrderBlock& a = acc[i];
    const SecondOrderBlock& t = torque[i];
    const Eigen::Index na = a.beta.size(), nt = t.beta.size();
    a.alpha0.conservativeResize(na + nt);
    a.alpha1.conservativeResize(na + nt);
    a.beta.conservativeResize(na + nt);
    a.alpha0.tail(nt) = t.alpha0;
    a.alpha1.tail(nt) = t.alpha1;
    a.beta.tail(nt) = t.beta;
    a.tags.insert(a.tags.end(), t.tags.begin(), t.tags.end());
  }
  return acc;
}

std::vector<JerkNumerator> JerkNumeratorCoeffs(const PathSamples& samples,
                                               const PathGrid& grid) {
  std::vector<JerkNumerator> out;
  const int windows = grid.num_segments() - 1;
  out.reserve(std::max(windows, 0));
  for (int k = 0; k < windows; ++k) {
    const Vector here = samples.dq[k] / (2.0 * grid.delta[k]);
    const Vector next = samples.dq[k + 1] / (2.0 * grid.delta[k + 1]);
    out.push_back({-samples.ddq[k] + here, samples.ddq[k + 1] - next - here,
                   next});
  }
  return out;
}

double EvaluateH(const std::array<double, 3>& x, double delta0,
                 double delta1) {
  if (x[0] < 0.0 || x[1] < 0.0 || x[2] < 0.0) {
    throw std::domain_error("h is undefined for negative squared speed");
  }
  const double r0 = std::sqrt(x[0]), r1 = std::sqrt(x[1]),
               r2 = std::sqrt(x[2]);
  if (r0 + r1 == 0.0 || r1 + r2 == 0.0) {
    throw std::domain_error("h is undefined for an adjacent zero pair");
  }
  return delta1 / (r2 + r1) + delta0 / (r1 + r0);
}

std::array<double, 3> GradientH(const std::array<double, 3>& x, double delta0,
                                double delta1) {
  if (!(x[0] > 0.0 && x[1] > 0.0 && x[2] > 0.0)) {
    throw std::domain_error("gradient of h needs strictly positive entries");
  }
  const double r0 = std::sqrt(x[0]), r1 = std::sqrt(x[1]),
               r2 = std::sqrt(x[2]);
  const double s01 = r0 + r1, s12 = r1 + r2;
  const double left = delta0 / (2.0 * s01 * s01);
  const double right = delta1 / (2.0 * s12 * s12);
  return {-left / r0, -(left + right) / r1, -right / r2};
}

HLinearization LinearizeH(const std::array<double, 3>& nominal, double delta0,
                          double delta1, const std::array<bool, 3>& fixed) {
  for (int i = 0; i < 3; ++i) {
    if (!fixed[i] && !(nominal[i] > 0.0)) {
      throw std::domain_error("linearization point must be strictly positive");
    }
  }
  const double value = EvaluateH(nominal, delta0, delta1);
  const double r0 = std::sqrt(nominal[0]), r1 = std::sqrt(nominal[1]),
               r2 = std::sqrt(nominal[2]);
  const double s01 = r0 + r1, s12 = r1 + r2;
  const double left = delta0 / (2.0 * s01 * s01);
  const double right = delta1 / (2.0 * s12 * s12);

  HLinearization lin;
  lin.slope[0] = fixed[0] ? 0.0 : -left / r0;
  lin.slope[1] = fixed[1] ? 0.0 : -(left + right) / r1;
  lin.slope[2] = fixed[2] ? 0.0 : -right / r2;
  lin.constant = value - lin.slope[0] * nominal[0] -
                 lin.slope[1] * nominal[1] - lin.slope[2] * nominal[2];
  return lin;
}

std::vector<ThirdOrderBlock> JerkRows(const PathSamples& samples,
                                      const PathGrid& grid,
                                      const Limits& limits,
                                      std::span<const double> nominal,
                                      double x_floor) {
  const int segments = grid.num_segments();
  if (static_cast<int>(nominal.size()) != segments + 1) {
    throw std::invalid_argument("nominal profile must have N + 1 entries");
  }
  const int n = samples.num_joints();
  const std::vector<JerkNumerator> numerators =
      JerkNumeratorCoeffs(samples, grid);

  std::vector<ThirdOrderBlock> rows;
  rows.reserve(numerators.size());
  for (int k = 0; k + 1 < segments; ++k) {
    std::array<double, 3> window;
    std::array<bool, 3> fixed;
    for (int i = 0; i < 3; ++i) {
      const int idx = k + i;
      fixed[i] = idx == 0 || idx == segments;
      window[i] = fixed[i] ? nominal[idx] : std::max(nominal[idx], x_floor);
    }
    const HLinearization lin =
        LinearizeH(window, grid.delta[k], grid.delta[k + 1], fixed);
    const JerkNumerator& num = numerators[k];

    ThirdOrderBlock block;
    block.k = k;
    block.gamma0.resize(2 * n);
    block.gamma1.resize(2 * n);
    block.gamma2.resize(2 * n);
    block.eta.resize(2 * n);
    block.tags.resize(2 * n);
    for (int side = 0; side < 2; ++side) {
      const double sign = side == 0 ? 1.0 : -1.0;
      for (int j = 0; j < n; ++j) {
        const int r = side * n + j;
        const double jmax = limits.jerk_max[j];
        block.gamma0[r] = sign * num.j0[j] - jmax * lin.slope[0];
        block.gamma1[r] = sign * num.j1[j] - jmax * lin.slope[1];
        block.gamma2[r] = sign * num.j2[j] - jmax * lin.slope[2];
        block.eta[r] = jmax * lin.constant;
        block.tags[r] = {ConstraintOrder::kJerk, k, j, side == 0 ? 1 : -1};
      }
    }
    rows.push_back(std::move(block));
  }
  return rows;
}

StackedSystem StackBlocks(const ConstraintBlocks& blocks, int num_segments,
                          double x_start, double x_end) {
  if (num_segments < 2) {
    throw std::invalid_argument("stacking needs at least one free variable");
  }
  Eigen::Index total = 0;
  for (const auto& b : blocks.first_order) total += b.omega.size();
  for (const auto& b : blocks.second_order) total += b.beta.size();
  for (const auto& b : blocks.third_order) total += b.eta.size();

  const int vars = num_segments - 1;
  StackedSystem sys;
  sys.A.setZero(total, vars);
  sys.b = Vector::Zero(total);
  sys.tags.reserve(total);

  Eigen::Index row = 0;
  // Adds coefficient `a` on x_index to `row`, folding fixed variables into b.
  auto put = [&](Eigen::Index r, int index, double a) {
    if (a == 0.0) return;
    if (index == 0) {
      sys.b[r] -= a * x_start;
    } else if (index == num_segments) {
      sys.b[r] -= a * x_end;
    } else if (index > 0 && index < num_segments) {
      sys.A(r, index - 1) += a;
    } else {
      throw std::invalid_argument("row references x_" + std::to_string(index) +
                                  " outside the grid");
    }
  };

  for (const auto& b : blocks.first_order) {
    if (b.omega.size() != b.nu.size()) {
      throw std::invalid_argument("first-order block size mismatch");
    }
    for (Eigen::Index j = 0; j < b.omega.size(); ++j, ++row) {
      sys.b[row] = b.nu[j];
      put(row, b.k, b.omega[j]);
      sys.tags.push_back({ConstraintOrder::kVelocity, b.k,
                          static_cast<int>(j), +1});
    }
  }
  for (const auto& b : blocks.second_order) {
    if (b.alpha0.size() != b.beta.size() || b.alpha1.size() != b.beta.size() ||
        static_cast<Eigen::Index>(b.tags.size()) != b.beta.size()) {
      throw std::invalid_argument("second-order block size mismatch");
    }
    for (Eigen::Index j = 0; j < b.beta.size(); ++j, ++row) {
      sys.b[row] = b.beta[j];
      put(row, b.k, b.alpha0[j]);
      put(row, b.k + 1, b.alpha1[j]);
      sys.tags.push_back(b.tags[j]);
    }
  }
  for (const auto& b : blocks.third_order) {
    if (b.gamma0.size() != b.eta.size() || b.gamma1.size() != b.eta.size() ||
        b.gamma2.size() != b.eta.size() ||
        static_cast<Eigen::Index>(b.tags.size()) != b.eta.size()) {
      throw std::invalid_argument("third-order block size mismatch");
    }
    for (Eigen::Index j = 0; j < b.eta.size(); ++j, ++row) {
      sys.b[row] = b.eta[j];
      put(row, b.k, b.gamma0[j]);
      put(row, b.k + 1, b.gamma1[j]);
      put(row, b.k + 2, b.gamma2[j]);
      sys.tags.push_back(b.tags[j]);
    }
  }
  return sys;
}

std::vector<StaticViolation> FindStaticInfeasibilities(
    const StackedSystem& system, double tol) {
  std::vector<StaticViolation> out;
  for (Eigen::Index r = 0; r < system.A.rows(); ++r) {
    if (system.b[r] < -tol && system.A.row(r).cwiseAbs().maxCoeff() == 0.0) {
      out.push_back({system.tags[r], system.b[r]});
    }
  }
  return out;
}

std::string Describe(const StaticViolation& violation) {
  std::ostringstream os;
  os << ToString(violation.tag.order) << " row at k=" << violation.tag.k
     << " joint=" << violation.tag.joint
     << (violation.tag.sign > 0 ? " (+)" : " (-)")
     << " cannot be satisfied: 0 <= " << violation.bound;
  return os.str();
}

}  // namespace totp3
