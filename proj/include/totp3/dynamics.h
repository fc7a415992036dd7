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

#ifndef TOTP3_DYNAMICS_H_
#define TOTP3_DYNAMICS_H_

#include <variant>
#include <vector>

#include <Eigen/Core>

#include "totp3/path_model.h"

namespace totp3 {

// Pure kinematic planning: no torque rows.
struct KinematicOnly {};

// Planar two-link arm with revolute joints moving in a vertical plane.
// Link i has mass masses[i], length lengths[i], center of mass at distance
// com[i] from its proximal joint and inertia inertias[i] about the center of
// mass. Gravity acts along -y; q = 0 points the arm along +x.
struct TwoLinkParams {
  Eigen::Vector2d masses{1.0, 1.0};
  Eigen::Vector2d lengths{1.0, 1.0};
  Eigen::Vector2d com{0.5, 0.5};
  Eigen::Vector2d inertias{1.0 / 12.0, 1.0 / 12.0};
  double gravity = 9.81;
};

// Externally computed path coefficients, one n-vector per grid point.
struct TabulatedCoefficients {
  std::vector<Vector> m;
  std::vector<Vector> c;
  std::vector<Vector> g;
};

using DynamicsModel =
    std::variant<KinematicOnly, TwoLinkParams, TabulatedCoefficients>;

bool IsKinematic(const DynamicsModel& model);

// Throws std::invalid_argument if any mass, length, center-of-mass offset or
// inertia is not strictly positive and finite.
void ValidateTwoLinkParams(const TwoLinkParams& params);

// tau = m(s) sdd + c(s) sd^2 + g(s) at every grid point. Empty for kinematic
// models.
struct PathDynamicsCoefficients {
  std::vector<Vector> m;
  std::vector<Vector> c;
  std::vector<Vector> g;

  bool empty() const { return m.empty(); }
};

Eigen::Matrix2d TwoLinkMassMatrix(const Eigen::Vector2d& q,
                                  const TwoLinkParams& params);
// Coriolis/centrifugal matrix, linear in qd.
Eigen::Matrix2d TwoLinkCoriolisMatrix(const Eigen::Vector2d& q,
                                      const Eigen::Vector2d& qd,
                                      const TwoLinkParams& params);
Eigen::Vector2d TwoLinkGravity(const Eigen::Vector2d& q,
                               const TwoLinkParams& params);

// M(q) qdd + C(q, qd) qd + g(q).
Eigen::Vector2d TwoLinkInverseDynamics(const Eigen::Vector2d& q,
                                       const Eigen::Vector2d& qd,
                                       const Eigen::Vector2d& qdd,
                                       const TwoLinkParams& params);

// m_k = M q'_k, c_k = M q''_k + C(q_k, q'_k) q'_k, g_k = g(q_k).
// Throws std::invalid_argument on joint-dimension or table-length mismatch.
PathDynamicsCoefficients ComputeDynamicsCoeffs(const DynamicsModel& model,
                                               const PathSamples& samples);

}  // namespace totp3

#endif  // TOTP3_DYNAMICS_H_
