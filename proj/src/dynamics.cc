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

#include "totp3/dynamics.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace totp3 {

bool IsKinematic(const DynamicsModel& model) {
  return std::holds_alternative<KinematicOnly>(model);
}

void ValidateTwoLinkParams(const TwoLinkParams& p) {
  auto positive = [](const Eigen::Vector2d& v) {
    return v.allFinite() && (v.array() > 0.0).all();
  };
  if (!positive(p.masses) || !positive(p.lengths) || !positive(p.com) ||
      !positive(p.inertias) || !std::isfinite(p.gravity)) {
    throw std::invalid_argument(
        "two-link masses, lengths, com offsets and inertias must be positive");
  }
}

Eigen::Matrix2d TwoLinkMassMatrix(const Eigen::Vector2d& q,
                                  const TwoLinkParams& p) {
  const double m1 = p.masses[0], m2 = p.masses[1];
  const double l1 = p.lengths[0];
  const double r1 = p.com[0], r2 = p.com[1];
  const double i1 = p.inertias[0], i2 = p.inertias[1];
  const double c2 = std::cos(q[1]);

  Eigen::Matrix2d mass;
  mass(0, 0) = i1 + i2 + m1 * r1 * r1 + m2 * (l1 * l1 + r2 * r2 + 2 * l1 * r2 * c2);
  mass(0, 1) = i2 + m2 * (r2 * r2 + l1 * r2 * c2);
  mass(1, 0) = mass(0, 1);
  mass(1, 1) = i2 + m2 * r2 * r2;
  return mass;
}

Eigen::Matrix2d TwoLinkCoriolisMatrix(const Eigen::Vector2d& q,
                                      const Eigen::Vector2d& qd,
                                      const TwoLinkParams& p) {
  const double h = p.masses[1] * p.lengths[0] * p.com[1] * std::sin(q[1]);
  Eigen::Matrix2d coriolis;
  coriolis << -h * qd[1], -h * (qd[0] + qd[1]),  //
      h * qd[0], 0.0;
  return coriolis;
}

Eigen::Vector2d TwoLinkGravity(const Eigen::Vector2d& q,
                               const TwoLinkParams& p) {
  const double m1 = p.masses[0], m2 = p.masses[1];
  const double c1 = std::cos(q[0]);
  const double c12 = std::cos(q[0] + q[1]);
  return {(m1 * p.com[0] + m2 * p.lengths[0]) * p.gravity * c1 +
              m2 * p.com[1] * p.gravity * c12,
          m2 * p.com[1] * p.gravity * c12};
}

Eigen::Vector2d TwoLinkInverseDynamics(const Eigen::Vector2d& q,
                                       const Eigen::Vector2d& qd,
                                       const Eigen::Vector2d& qdd,
                                       const TwoLinkParams& params) {
  return TwoLinkMassMatrix(q, params) * qdd +
         TwoLinkCoriolisMatrix(q, qd, params) * qd + TwoLinkGravity(q, params);
}

namespace {

struct CoeffVisitor {
  const PathSamples& samples;

  PathDynamicsCoefficients operator()(const KinematicOnly&) const { return {}; }

  PathDynamicsCoefficients operator()(const TwoLinkParams& params) const {
    ValidateTwoLinkParams(params);
    if (samples.num_joints() != 2) {
      throw std::invalid_argument("two-link model needs a 2-joint path, got " +
                                  std::to_string(samples.num_joints()));
    }
    PathDynamicsCoefficients out;
    const int points = samples.num_points();
    out.m.reserve(points);
    out.c.reserve(points);
    out.g.reserve(points);
    for (int k = 0; k < points; ++k) {
      const Eigen::Vector2d q = samples.q[k];
      const Eigen::Vector2d dq = samples.dq[k];
      const Eigen::Vector2d ddq = samples.ddq[k];
      const Eigen::Matrix2d mass = TwoLinkMassMatrix(q, params);
      out.m.emplace_back(mass * dq);
      out.c.emplace_back(mass * ddq + TwoLinkCoriolisMatrix(q, dq, params) * dq);
      out.g.emplace_back(TwoLinkGravity(q, params));
    }
    return out;
  }

  PathDynamicsCoefficients operator()(const TabulatedCoefficients& t) const {
    const size_t points = static_cast<size_t>(samples.num_points());
    if (t.m.size() != points || t.c.size() != points || t.g.size() != points) {
      throw std::invalid_argument(
          "tabulated coefficients must have one entry per grid point (" +
          std::to_string(points) + ")");
    }
    for (size_t k = 0; k < points; ++k) {
      const Eigen::Index n = samples.num_joints();
      if (t.m[k].size() != n || t.c[k].size() != n || t.g[k].size() != n) {
        throw std::invalid_argument("tabulated coefficient " +
                                    std::to_string(k) +
                                    " has wrong joint dimension");
      }
      if (!t.m[k].allFinite() || !t.c[k].allFinite() || !t.g[k].allFinite()) {
        throw std::invalid_argument("tabulated coefficients must be finite");
      }
    }
    return {t.m, t.c, t.g};
  }
};

}  // namespace

PathDynamicsCoefficients ComputeDynamicsCoeffs(const DynamicsModel& model,
                                               const PathSamples& samples) {
  return std::visit(CoeffVisitor{samples}, model);
}

}  // namespace totp3
