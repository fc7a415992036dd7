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
#include <random>
#include <stdexcept>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "totp3/path_model.h"

namespace totp3 {
namespace {

// Lagrangian reference for the planar two-link arm. Link kinematics and
// energies are written out directly; Jacobians, Christoffel symbols and the
// gravity gradient come from central finite differences.
class LagrangianOracle {
 public:
  explicit LagrangianOracle(const TwoLinkParams& p) : p_(p) {}

  Eigen::Matrix2d Mass(const Eigen::Vector2d& q) const {
    Eigen::Matrix2d mass = Eigen::Matrix2d::Zero();
    for (int link = 0; link < 2; ++link) {
      Eigen::Matrix2d jac;
      for (int i = 0; i < 2; ++i) {
        Eigen::Vector2d up = q, down = q;
        up[i] += kStep;
        down[i] -= kStep;
        jac.col(i) = (Com(up, link) - Com(down, link)) / (2 * kStep);
      }
      Eigen::RowVector2d spin(1.0, link == 1 ? 1.0 : 0.0);
      mass += p_.masses[link] * jac.transpose() * jac +
              p_.inertias[link] * spin.transpose() * spin;
    }
    return mass;
  }

  Eigen::Vector2d CoriolisTimesVelocity(const Eigen::Vector2d& q,
                                        const Eigen::Vector2d& qd) const {
    std::array<Eigen::Matrix2d, 2> dmass;
    for (int k = 0; k < 2; ++k) {
      Eigen::Vector2d up = q, down = q;
      up[k] += kStep;
      down[k] -= kStep;
      dmass[k] = (Mass(up) - Mass(down)) / (2 * kStep);
    }
    Eigen::Vector2d out = Eigen::Vector2d::Zero();
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 2; ++k) {
          out[i] += 0.5 *
                    (dmass[k](i, j) + dmass[j](i, k) - dmass[i](j, k)) *
                    qd[j] * qd[k];
        }
      }
    }
    return out;
  }

  Eigen::Vector2d Gravity(const Eigen::Vector2d& q) const {
    Eigen::Vector2d out;
    for (int i = 0; i < 2; ++i) {
      Eigen::Vector2d up = q, down = q;
      up[i] += kStep;
      down[i] -= kStep;
      out[i] = (Potential(up) - Potential(down)) / (2 * kStep);
    }
    return out;
  }

  Eigen::Vector2d Torque(const Eigen::Vector2d& q, const Eigen::Vector2d& qd,
                         const Eigen::Vector2d& qdd) const {
    return Mass(q) * qdd + CoriolisTimesVelocity(q, qd) + Gravity(q);
  }

 private:
  static constexpr double kStep = 1e-5;

  Eigen::Vector2d Com(const Eigen::Vector2d& q, int link) const {
    const Eigen::Vector2d e1(std::cos(q[0]), std::sin(q[0]));
    const Eigen::Vector2d e12(std::cos(q[0] + q[1]), std::sin(q[0] + q[1]));
    if (link == 0) return p_.com[0] * e1;
    return p_.lengths[0] * e1 + p_.com[1] * e12;
  }

  double Potential(const Eigen::Vector2d& q) const {
    return p_.gravity *
           (p_.masses[0] * Com(q, 0)[1] + p_.masses[1] * Com(q, 1)[1]);
  }

  TwoLinkParams p_;
};

TwoLinkParams SomeParams() {
  TwoLinkParams p;
  p.masses = {2.5, 1.2};
  p.lengths = {0.7, 0.5};
  p.com = {0.3, 0.22};
  p.inertias = {0.11, 0.04};
  p.gravity = 9.81;
  return p;
}

PathSamples StraightPath(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                         const PathGrid& grid) {
  std::vector<Vector> q, dq, ddq;
  for (double s : grid.s) {
    q.push_back(a + s * (b - a));
    dq.push_back(b - a);
    ddq.push_back(Vector::Zero(2));
  }
  return MakeSamples(q, dq, ddq);
}

TEST(DynamicsTest, KinematicModelHasNoCoefficients) {
  const PathGrid grid = MakeUniformGrid(4);
  const PathSamples samples = StraightPath({0, 0}, {1, 1}, grid);
  EXPECT_TRUE(ComputeDynamicsCoeffs(KinematicOnly{}, samples).empty());
  EXPECT_TRUE(IsKinematic(KinematicOnly{}));
  EXPECT_FALSE(IsKinematic(SomeParams()));
}

TEST(DynamicsTest, FrozenPathWithoutGravityIsZero) {
  TwoLinkParams p = SomeParams();
  p.gravity = 0.0;
  const PathGrid grid = MakeUniformGrid(5);
  const PathSamples samples = StraightPath({0.3, -0.4}, {0.3, -0.4}, grid);
  const PathDynamicsCoefficients c = ComputeDynamicsCoeffs(p, samples);
  ASSERT_EQ(c.m.size(), 6u);
  for (int k = 0; k < 6; ++k) {
    EXPECT_EQ(c.m[k].norm(), 0.0);
    EXPECT_EQ(c.c[k].norm(), 0.0);
    EXPECT_EQ(c.g[k].norm(), 0.0);
  }
}

TEST(DynamicsTest, StraightPathMatchesLagrangian) {
  const TwoLinkParams p = SomeParams();
  const LagrangianOracle oracle(p);
  const PathGrid grid = MakeUniformGrid(10);
  const Eigen::Vector2d a(-0.3, 0.2), b(0.9, 1.4);
  const PathSamples samples = StraightPath(a, b, grid);
  const PathDynamicsCoefficients c = ComputeDynamicsCoeffs(p, samples);
  for (int k = 0; k <= 10; ++k) {
    const Eigen::Vector2d q = samples.q[k];
    const Eigen::Vector2d dq = samples.dq[k];
    const Eigen::Vector2d m = oracle.Mass(q) * dq;
    const Eigen::Vector2d cc = oracle.CoriolisTimesVelocity(q, dq);
    EXPECT_LT((c.m[k] - m).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_LT((c.c[k] - cc).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_LT((c.g[k] - oracle.Gravity(q)).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(DynamicsTest, InverseDynamicsMatchesLagrangian) {
  const TwoLinkParams p = SomeParams();
  const LagrangianOracle oracle(p);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const Eigen::Vector2d q(u(rng), u(rng)), qd(u(rng), u(rng)),
        qdd(u(rng), u(rng));
    const Eigen::Vector2d tau = TwoLinkInverseDynamics(q, qd, qdd, p);
    // The Christoffel terms nest two finite differences.
    EXPECT_LT((tau - oracle.Torque(q, qd, qdd)).cwiseAbs().maxCoeff(), 1e-5);
  }
}

TEST(DynamicsTest, AtRestWithoutGravityTorqueIsZero) {
  TwoLinkParams p = SomeParams();
  p.gravity = 0.0;
  const Eigen::Vector2d tau = TwoLinkInverseDynamics(
      {0.4, 1.1}, Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero(), p);
  EXPECT_EQ(tau.norm(), 0.0);
}

TEST(DynamicsTest, StaticGravityTorque) {
  // Both links horizontal: each link's weight acts at its lever arm.
  const TwoLinkParams p = SomeParams();
  const Eigen::Vector2d tau = TwoLinkInverseDynamics(
      {0.0, 0.0}, Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero(), p);
  const double w1 = p.masses[0] * p.gravity;
  const double w2 = p.masses[1] * p.gravity;
  EXPECT_NEAR(tau[0], w1 * 0.3 + w2 * (0.7 + 0.22), 1e-12);
  EXPECT_NEAR(tau[1], w2 * 0.22, 1e-12);
  // Arm hanging straight down carries no static torque.
  const Eigen::Vector2d hang = TwoLinkInverseDynamics(
      {-M_PI / 2, 0.0}, Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero(), p);
  EXPECT_NEAR(hang.norm(), 0.0, 1e-12);
}

TEST(DynamicsTest, ProjectionIdentity) {
  const TwoLinkParams p = SomeParams();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  std::uniform_real_distribution<double> speed(0.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Vector> q = {Vector(2)}, dq = {Vector(2)}, ddq = {Vector(2)};
    q[0] << u(rng), u(rng);
    dq[0] << u(rng), u(rng);
    ddq[0] << u(rng), u(rng);
    const PathSamples samples = MakeSamples(q, dq, ddq);
    const PathDynamicsCoefficients c = ComputeDynamicsCoeffs(p, samples);
    const double sd = speed(rng);
    const double sdd = u(rng);
    const Eigen::Vector2d joint_vel = dq[0] * sd;
    const Eigen::Vector2d joint_acc = ddq[0] * sd * sd + dq[0] * sdd;
    const Eigen::Vector2d direct =
        TwoLinkInverseDynamics(q[0], joint_vel, joint_acc, p);
    const Vector projected = c.m[0] * sdd + c.c[0] * sd * sd + c.g[0];
    EXPECT_LT((direct - projected).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(DynamicsTest, MassMatrixSymmetricPositiveDefinite) {
  const TwoLinkParams p = SomeParams();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-M_PI, M_PI);
  for (int i = 0; i < 1000; ++i) {
    const Eigen::Matrix2d mass = TwoLinkMassMatrix({u(rng), u(rng)}, p);
    EXPECT_EQ(mass(0, 1), mass(1, 0));
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(mass);
    EXPECT_GT(eig.eigenvalues().minCoeff(), 0.0);
  }
}

TEST(DynamicsTest, TabulatedPassesThrough) {
  const PathGrid grid = MakeUniformGrid(3);
  const PathSamples samples = StraightPath({0, 0}, {1, 1}, grid);
  TabulatedCoefficients t;
  for (int k = 0; k < 4; ++k) {
    t.m.push_back(Vector::Constant(2, k));
    t.c.push_back(Vector::Constant(2, 2.0 * k));
    t.g.push_back(Vector::Constant(2, -1.0));
  }
  const PathDynamicsCoefficients c = ComputeDynamicsCoeffs(t, samples);
  EXPECT_EQ(c.m[3][1], 3.0);
  EXPECT_EQ(c.c[2][0], 4.0);
  EXPECT_EQ(c.g[0][0], -1.0);
}

TEST(DynamicsTest, RejectsInconsistentModels) {
  const PathGrid grid = MakeUniformGrid(3);
  const PathSamples two = StraightPath({0, 0}, {1, 1}, grid);
  TabulatedCoefficients short_table;
  short_table.m = short_table.c = short_table.g =
      std::vector<Vector>(3, Vector::Zero(2));
  EXPECT_THROW(ComputeDynamicsCoeffs(short_table, two), std::invalid_argument);
  TabulatedCoefficients narrow;
  narrow.m = narrow.c = narrow.g = std::vector<Vector>(4, Vector::Zero(1));
  EXPECT_THROW(ComputeDynamicsCoeffs(narrow, two), std::invalid_argument);

  std::vector<Vector> q(4, Vector::Zero(3));
  const PathSamples three = MakeSamples(q, q, q);
  EXPECT_THROW(ComputeDynamicsCoeffs(SomeParams(), three),
               std::invalid_argument);

  TwoLinkParams bad = SomeParams();
  bad.masses[1] = 0.0;
  EXPECT_THROW(ValidateTwoLinkParams(bad), std::invalid_argument);
  bad = SomeParams();
  bad.gravity = -9.81;
  EXPECT_NO_THROW(ValidateTwoLinkParams(bad));
}

}  // namespace
}  // namespace totp3
