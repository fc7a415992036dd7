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

#ifndef TOTP3_CONSTRAINTS_H_
#define TOTP3_CONSTRAINTS_H_

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "totp3/dynamics.h"
#include "totp3/path_model.h"

namespace totp3 {

// Symmetric joint limits. Units: rad/s, rad/s^2, rad/s^3, N m.
struct Limits {
  Vector qd_max;
  Vector qdd_max;
  Vector jerk_max;
  std::optional<Vector> tau_max;
};

// Throws std::invalid_argument unless every present limit has `num_joints`
// strictly positive entries and tau_max is present exactly when
// `needs_torque`.
void ValidateLimits(const Limits& limits, int num_joints, bool needs_torque);

enum class ConstraintOrder { kVelocity, kAcceleration, kTorque, kJerk };

const char* ToString(ConstraintOrder order);

// Identifies the origin of one scalar inequality row.
struct RowTag {
  ConstraintOrder order = ConstraintOrder::kVelocity;
  int k = 0;
  int joint = 0;
  int sign = 1;
};

// omega x_k <= nu, one entry per joint.
struct FirstOrderBlock {
  int k = 0;
  Vector omega;
  Vector nu;
};

// alpha0 x_k + alpha1 x_{k+1} <= beta. Rows are two-sided, so each block holds
// 2n acceleration rows and, for dynamic models, 2n torque rows.
struct SecondOrderBlock {
  int k = 0;
  Vector alpha0;
  Vector alpha1;
  Vector beta;
  std::vector<RowTag> tags;
};

// gamma0 x_k + gamma1 x_{k+1} + gamma2 x_{k+2} <= eta, 2n rows per block.
struct ThirdOrderBlock {
  int k = 0;
  Vector gamma0;
  Vector gamma1;
  Vector gamma2;
  Vector eta;
  std::vector<RowTag> tags;
};

struct ConstraintBlocks {
  std::vector<FirstOrderBlock> first_order;    // k = 1 .. N-1
  std::vector<SecondOrderBlock> second_order;  // k = 0 .. N-1
  std::vector<ThirdOrderBlock> third_order;    // k = 0 .. N-2
};

// omega_k = q'_k o q'_k, nu_k = qd_max o qd_max.
std::vector<FirstOrderBlock> VelocityRows(const PathSamples& samples,
                                          const Limits& limits);

// Forward-difference acceleration rows for k = 0 .. N-1.
std::vector<SecondOrderBlock> AccelerationRows(const PathSamples& samples,
                                               const PathGrid& grid,
                                               const Limits& limits);

// Forward-difference torque rows for k = 0 .. N-1, with g_k folded into the
// bound. Throws std::invalid_argument if tau_max is missing.
std::vector<SecondOrderBlock> TorqueRows(const PathDynamicsCoefficients& coeffs,
                                         const PathGrid& grid,
                                         const Limits& limits);

// Acceleration rows followed by torque rows (if any) for every k.
std::vector<SecondOrderBlock> SecondOrderRows(
    const PathSamples& samples, const PathDynamicsCoefficients& coeffs,
    const PathGrid& grid, const Limits& limits);

// Coefficients of qdd_{k+1} - qdd_k = j2 x_{k+2} + j1 x_{k+1} + j0 x_k.
struct JerkNumerator {
  Vector j0;
  Vector j1;
  Vector j2;
};

// One entry per k = 0 .. N-2.
std::vector<JerkNumerator> JerkNumeratorCoeffs(const PathSamples& samples,
                                               const PathGrid& grid);

// Half the time spent on segments k and k+1:
//   delta1 / (sqrt(x2) + sqrt(x1)) + delta0 / (sqrt(x1) + sqrt(x0)),
// where x = (x_k, x_{k+1}, x_{k+2}), delta0 = delta_k, delta1 = delta_{k+1}.
// Throws std::domain_error on negative entries or an adjacent zero pair.
double EvaluateH(const std::array<double, 3>& x, double delta0, double delta1);

// Analytic gradient of EvaluateH. All entries must be strictly positive.
std::array<double, 3> GradientH(const std::array<double, 3>& x, double delta0,
                                double delta1);

// Tangent plane of h at a nominal window:
//   h(x) >= constant + slope . x   for every admissible x,
// with equality at the nominal point. h is convex on the positive orthant, so
// the plane is a global under-estimator.
struct HLinearization {
  double constant = 0.0;
  std::array<double, 3> slope{};

  double Evaluate(const std::array<double, 3>& x) const {
    return constant + slope[0] * x[0] + slope[1] * x[1] + slope[2] * x[2];
  }
};

// Entries flagged in `fixed` are treated as constants: their slope is zero and
// their contribution is absorbed into `constant`. Fixed entries may be zero
// (rest boundaries); free entries must be strictly positive, otherwise
// std::domain_error is thrown.
HLinearization LinearizeH(const std::array<double, 3>& nominal, double delta0,
                          double delta1,
                          const std::array<bool, 3>& fixed = {false, false,
                                                              false});

inline constexpr double kDefaultXFloor = 1e-9;

// Conservative jerk rows linearized at `nominal` (N + 1 entries). x_0 and x_N
// are fixed boundary values and never linearization variables; interior
// nominal entries are clamped to at least `x_floor`.
std::vector<ThirdOrderBlock> JerkRows(const PathSamples& samples,
                                      const PathGrid& grid,
                                      const Limits& limits,
                                      std::span<const double> nominal,
                                      double x_floor = kDefaultXFloor);

// A x <= b over the free variables x_1 .. x_{N-1}; column j is x_{j+1}.
struct StackedSystem {
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> A;
  Vector b;
  std::vector<RowTag> tags;

  int num_rows() const { return static_cast<int>(A.rows()); }
};

// Stacks the blocks in first/second/third order. Coefficients on the fixed
// boundary variables x_0 and x_N are moved to the right-hand side.
StackedSystem StackBlocks(const ConstraintBlocks& blocks, int num_segments,
                          double x_start, double x_end);

// A row with no free-variable coefficient and a negative bound can never be
// satisfied.
struct StaticViolation {
  RowTag tag;
  double bound = 0.0;
};

std::vector<StaticViolation> FindStaticInfeasibilities(
    const StackedSystem& system, double tol = 1e-12);

std::string Describe(const StaticViolation& violation);

}  // namespace totp3

#endif  // TOTP3_CONSTRAINTS_H_
