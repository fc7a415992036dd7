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

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "test_corpus.h"
#include "totp3/dynamics.h"
#include "totp3/lp.h"
#include "totp3/path_model.h"

namespace totp3 {
namespace {

PathSamples ConstantSamples(int points, const Vector& dq, const Vector& ddq) {
  std::vector<Vector> q(points, Vector::Zero(dq.size()));
  return MakeSamples(q, std::vector<Vector>(points, dq),
                     std::vector<Vector>(points, ddq));
}

Limits UniformLimits(int n, double qd, double qdd, double jerk) {
  Limits l;
  l.qd_max = Vector::Constant(n, qd);
  l.qdd_max = Vector::Constant(n, qdd);
  l.jerk_max = Vector::Constant(n, jerk);
  return l;
}

// Directly computed joint acceleration with the forward difference of sddot.
Vector DirectAcceleration(const PathSamples& s, const PathGrid& g,
                          const std::vector<double>& x, int k) {
  const double sdd = (x[k + 1] - x[k]) / (2.0 * g.delta[k]);
  return s.ddq[k] * x[k] + s.dq[k] * sdd;
}

TEST(LimitsTest, Validation) {
  Limits l = UniformLimits(2, 1, 1, 1);
  EXPECT_NO_THROW(ValidateLimits(l, 2, false));
  EXPECT_THROW(ValidateLimits(l, 3, false), std::invalid_argument);
  EXPECT_THROW(ValidateLimits(l, 2, true), std::invalid_argument);
  l.tau_max = Vector::Constant(2, 5.0);
  EXPECT_NO_THROW(ValidateLimits(l, 2, true));
  EXPECT_THROW(ValidateLimits(l, 2, false), std::invalid_argument);
  l = UniformLimits(2, 1, 0, 1);
  EXPECT_THROW(ValidateLimits(l, 2, false), std::invalid_argument);
}

TEST(VelocityRowsTest, HadamardSquares) {
  Vector dq(2);
  dq << 2.0, -1.0;
  const PathSamples s = ConstantSamples(5, dq, Vector::Zero(2));
  const auto rows = VelocityRows(s, UniformLimits(2, 2.0, 1, 1));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows.front().k, 1);
  EXPECT_EQ(rows.back().k, 3);
  EXPECT_EQ(rows[0].omega[0], 4.0);
  EXPECT_EQ(rows[0].omega[1], 1.0);
  EXPECT_EQ(rows[0].nu[0], 4.0);
  EXPECT_EQ(rows[0].nu[1], 4.0);
}

TEST(VelocityRowsTest, ZeroDerivativeGivesVacuousRow) {
  const PathSamples s = ConstantSamples(4, Vector::Zero(1), Vector::Zero(1));
  const auto rows = VelocityRows(s, UniformLimits(1, 1.5, 1, 1));
  for (const auto& r : rows) {
    EXPECT_EQ(r.omega[0], 0.0);
    EXPECT_GT(r.nu[0], 0.0);
  }
}

TEST(VelocityRowsTest, BoundaryProfileSaturatesJointSpeed) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3, 3), pos(0.5, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    Vector dq(3), qd(3);
    for (int j = 0; j < 3; ++j) {
      dq[j] = u(rng);
      qd[j] = pos(rng);
    }
    Limits l = UniformLimits(3, 1, 1, 1);
    l.qd_max = qd;
    const auto rows = VelocityRows(ConstantSamples(4, dq, Vector::Zero(3)), l);
    double cap = INFINITY;
    for (int j = 0; j < 3; ++j) cap = std::min(cap, rows[0].nu[j] / rows[0].omega[j]);
    const Vector joint_speed = (dq * std::sqrt(cap)).cwiseAbs();
    EXPECT_NEAR((joint_speed - qd).maxCoeff(), 0.0, 1e-12);
    EXPECT_LE((joint_speed - qd).maxCoeff(), 1e-12);
  }
}

TEST(AccelerationRowsTest, UnitDerivative) {
  PathGrid grid;
  grid.s = {0.0, 0.5, 1.0};
  grid.delta = {0.5, 0.5};
  const PathSamples s = ConstantSamples(3, Vector::Ones(1), Vector::Zero(1));
  const auto rows = AccelerationRows(s, grid, UniformLimits(1, 1, 2.0, 1));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].alpha0[0], -1.0);
  EXPECT_EQ(rows[0].alpha1[0], 1.0);
  EXPECT_EQ(rows[0].beta[0], 2.0);
  EXPECT_EQ(rows[0].alpha0[1], 1.0);
  EXPECT_EQ(rows[0].alpha1[1], -1.0);
  EXPECT_EQ(rows[0].beta[1], 2.0);
  EXPECT_EQ(rows[0].tags[1].sign, -1);
}

TEST(AccelerationRowsTest, CurvatureOnly) {
  const PathGrid grid = MakeUniformGrid(3);
  const PathSamples s = ConstantSamples(4, Vector::Zero(1), Vector::Ones(1));
  const auto rows = AccelerationRows(s, grid, UniformLimits(1, 1, 3.0, 1));
  EXPECT_EQ(rows[1].alpha0[0], 1.0);
  EXPECT_EQ(rows[1].alpha1[0], 0.0);
  EXPECT_EQ(rows[1].beta[0], 3.0);
}

TEST(AccelerationRowsTest, RowsMatchDirectAcceleration) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-2, 2), xs(0, 3);
  const PathGrid grid = MakeCustomGrid({0.0, 0.2, 0.45, 0.8, 1.0});
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Vector> q(5, Vector::Zero(2)), dq(5, Vector(2)),
        ddq(5, Vector(2));
    for (int k = 0; k < 5; ++k) dq[k] << u(rng), u(rng);
    for (int k = 0; k < 5; ++k) ddq[k] << u(rng), u(rng);
    const PathSamples s = MakeSamples(q, dq, ddq);
    const Limits l = UniformLimits(2, 1, 1.5, 1);
    const auto rows = AccelerationRows(s, grid, l);
    std::vector<double> x(5);
    for (double& v : x) v = xs(rng);
    for (int k = 0; k < 4; ++k) {
      const Vector acc = DirectAcceleration(s, grid, x, k);
      for (int j = 0; j < 2; ++j) {
        // Row value minus bound equals +-acc minus the limit.
        const double plus = rows[k].alpha0[j] * x[k] +
                            rows[k].alpha1[j] * x[k + 1] - rows[k].beta[j];
        const double minus = rows[k].alpha0[2 + j] * x[k] +
                             rows[k].alpha1[2 + j] * x[k + 1] -
                             rows[k].beta[2 + j];
        EXPECT_NEAR(plus, acc[j] - 1.5, 1e-12);
        EXPECT_NEAR(minus, -acc[j] - 1.5, 1e-12);
      }
    }
  }
}

TEST(TorqueRowsTest, StaticTorqueBeyondLimitIsFlagged) {
  const PathGrid grid = MakeUniformGrid(3);
  PathDynamicsCoefficients c;
  c.m = c.c = std::vector<Vector>(4, Vector::Zero(1));
  c.g = std::vector<Vector>(4, Vector::Constant(1, 7.0));
  c.g[2][0] = -9.0;
  Limits l = UniformLimits(1, 1, 1, 1);
  l.tau_max = Vector::Constant(1, 5.0);
  const PathSamples s = ConstantSamples(4, Vector::Ones(1), Vector::Zero(1));
  ConstraintBlocks blocks;
  blocks.second_order = SecondOrderRows(s, c, grid, l);
  const auto violations =
      FindStaticInfeasibilities(StackBlocks(blocks, 3, 0.0, 0.0));
  ASSERT_EQ(violations.size(), 3u);
  EXPECT_EQ(violations[0].tag.order, ConstraintOrder::kTorque);
  EXPECT_EQ(violations[0].tag.k, 0);
  EXPECT_EQ(violations[0].tag.sign, 1);
  EXPECT_EQ(violations[2].tag.k, 2);
  EXPECT_EQ(violations[2].tag.sign, -1);
  const std::string text = Describe(violations[2]);
  EXPECT_NE(text.find("torque"), std::string::npos);
  EXPECT_NE(text.find("k=2"), std::string::npos);
  EXPECT_NE(text.find("joint=0"), std::string::npos);
}

TEST(TorqueRowsTest, UnitInertia) {
  PathGrid grid;
  grid.s = {0.0, 0.5, 1.0};
  grid.delta = {0.5, 0.5};
  PathDynamicsCoefficients c;
  c.m = std::vector<Vector>(3, Vector::Ones(1));
  c.c = c.g = std::vector<Vector>(3, Vector::Zero(1));
  Limits l = UniformLimits(1, 1, 1, 1);
  l.tau_max = Vector::Constant(1, 4.0);
  const auto rows = TorqueRows(c, grid, l);
  EXPECT_EQ(rows[0].alpha0[0], -1.0);
  EXPECT_EQ(rows[0].alpha1[0], 1.0);
  EXPECT_EQ(rows[0].beta[0], 4.0);
  EXPECT_EQ(rows[0].beta[1], 4.0);
}

TEST(TorqueRowsTest, RequiresTauMax) {
  const PathGrid grid = MakeUniformGrid(3);
  PathDynamicsCoefficients c;
  c.m = c.c = c.g = std::vector<Vector>(4, Vector::Zero(1));
  EXPECT_THROW(TorqueRows(c, grid, UniformLimits(1, 1, 1, 1)),
               std::invalid_argument);
}

TEST(TorqueRowsTest, ActiveRowReproducesTorqueLimit) {
  std::mt19937_64 rng(12);
  const testing::Instance inst = testing::RandomTwoLink(rng, 12);
  const auto& params = std::get<TwoLinkParams>(inst.model);
  const auto rows = TorqueRows(inst.coeffs, inst.grid, inst.limits);
  for (int k = 0; k < inst.grid.num_segments(); ++k) {
    for (int r = 0; r < rows[k].beta.size(); ++r) {
      if (rows[k].alpha1[r] == 0.0) continue;
      // Pick x_k and solve the row for x_{k+1} at equality.
      const double xk = 0.3;
      const double xn = (rows[k].beta[r] - rows[k].alpha0[r] * xk) /
                        rows[k].alpha1[r];
      const double sdd = (xn - xk) / (2.0 * inst.grid.delta[k]);
      const Eigen::Vector2d q = inst.samples.q[k];
      const Eigen::Vector2d qd = inst.samples.dq[k] * std::sqrt(xk);
      const Eigen::Vector2d qdd =
          inst.samples.ddq[k] * xk + inst.samples.dq[k] * sdd;
      const Eigen::Vector2d tau = TwoLinkInverseDynamics(q, qd, qdd, params);
      const int j = rows[k].tags[r].joint;
      EXPECT_NEAR(rows[k].tags[r].sign * tau[j], (*inst.limits.tau_max)[j],
                  1e-9);
    }
  }
}

TEST(JerkNumeratorTest, UnitDerivativeHalfSpacing) {
  PathGrid grid;
  grid.s = {0.0, 0.5, 1.0};
  grid.delta = {0.5, 0.5};
  const PathSamples s = ConstantSamples(3, Vector::Ones(1), Vector::Zero(1));
  const auto nums = JerkNumeratorCoeffs(s, grid);
  ASSERT_EQ(nums.size(), 1u);
  EXPECT_EQ(nums[0].j0[0], 1.0);
  EXPECT_EQ(nums[0].j1[0], -2.0);
  EXPECT_EQ(nums[0].j2[0], 1.0);
}

TEST(JerkNumeratorTest, ConstantDerivative) {
  const PathGrid grid = MakeUniformGrid(5);
  const double c = 1.7;
  const PathSamples s =
      ConstantSamples(6, Vector::Constant(1, c), Vector::Zero(1));
  const double scale = c / (2 * 0.2);
  for (const auto& n : JerkNumeratorCoeffs(s, grid)) {
    EXPECT_NEAR(n.j0[0], scale, 1e-14);
    EXPECT_NEAR(n.j1[0], -2 * scale, 1e-14);
    EXPECT_NEAR(n.j2[0], scale, 1e-14);
  }
}

TEST(JerkNumeratorTest, EqualsAccelerationDifference) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-2, 2), xs(0, 4);
  const PathGrid grid = MakeCustomGrid({0.0, 0.15, 0.4, 0.5, 0.85, 1.0});
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Vector> q(6, Vector::Zero(2)), dq(6, Vector(2)),
        ddq(6, Vector(2));
    for (int k = 0; k < 6; ++k) {
      dq[k] << u(rng), u(rng);
      ddq[k] << u(rng), u(rng);
    }
    const PathSamples s = MakeSamples(q, dq, ddq);
    std::vector<double> x(6);
    for (double& v : x) v = xs(rng);
    const auto nums = JerkNumeratorCoeffs(s, grid);
    ASSERT_EQ(nums.size(), 4u);
    for (int k = 0; k < 4; ++k) {
      const Vector lhs =
          nums[k].j0 * x[k] + nums[k].j1 * x[k + 1] + nums[k].j2 * x[k + 2];
      const Vector rhs = DirectAcceleration(s, grid, x, k + 1) -
                         DirectAcceleration(s, grid, x, k);
      EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(HTest, Values) {
  EXPECT_NEAR(EvaluateH({1, 1, 1}, 0.1, 0.1), 0.1, 1e-15);
  EXPECT_NEAR(EvaluateH({4, 4, 4}, 0.2, 0.2), 0.1, 1e-15);
  EXPECT_NEAR(EvaluateH({0, 1, 1}, 0.1, 0.1), 0.15, 1e-15);
  EXPECT_THROW(EvaluateH({0, 0, 1}, 0.1, 0.1), std::domain_error);
  EXPECT_THROW(EvaluateH({1, 0, 0}, 0.1, 0.1), std::domain_error);
  EXPECT_THROW(EvaluateH({1, -1, 1}, 0.1, 0.1), std::domain_error);
}

TEST(HTest, GradientAtUnitPoint) {
  const auto g = GradientH({1, 1, 1}, 0.1, 0.1);
  EXPECT_NEAR(g[0], -0.0125, 1e-15);
  EXPECT_NEAR(g[1], -0.025, 1e-15);
  EXPECT_NEAR(g[2], -0.0125, 1e-15);
  constexpr double kStep = 1e-6;
  for (int i = 0; i < 3; ++i) {
    std::array<double, 3> up = {1, 1, 1}, down = {1, 1, 1};
    up[i] += kStep;
    down[i] -= kStep;
    const double fd =
        (EvaluateH(up, 0.1, 0.1) - EvaluateH(down, 0.1, 0.1)) / (2 * kStep);
    EXPECT_NEAR(fd, g[i], 1e-6 * std::abs(g[i]));
  }
  const HLinearization lin = LinearizeH({1, 1, 1}, 0.1, 0.1);
  EXPECT_NEAR(lin.Evaluate({1, 1, 1}), 0.1, 1e-15);
  // 0.1 - 0.05 * 3 = -0.05 at (4, 4, 4), below h = 0.1 there.
  EXPECT_NEAR(lin.Evaluate({4, 4, 4}), -0.05, 1e-15);
  EXPECT_LE(lin.Evaluate({4, 4, 4}), EvaluateH({4, 4, 4}, 0.1, 0.1));
}

TEST(HTest, LinearizationExactAtNominalWithNonpositiveSlopes) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> lx(std::log(1e-4), std::log(1e2));
  std::uniform_real_distribution<double> ld(std::log(1e-3), std::log(1.0));
  for (int i = 0; i < 1000; ++i) {
    const std::array<double, 3> x = {std::exp(lx(rng)), std::exp(lx(rng)),
                                     std::exp(lx(rng))};
    const double d0 = std::exp(ld(rng)), d1 = std::exp(ld(rng));
    const HLinearization lin = LinearizeH(x, d0, d1);
    const double h = EvaluateH(x, d0, d1);
    EXPECT_NEAR(lin.Evaluate(x), h, 1e-12 * std::max(1.0, h));
    for (double s : lin.slope) EXPECT_LE(s, 0.0);
  }
}

TEST(HTest, TangentPlaneNeverExceedsH) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> l(std::log(1e-6), std::log(1e3));
  for (int i = 0; i < 10000; ++i) {
    std::array<double, 3> nominal, x;
    for (double& v : nominal) v = std::exp(l(rng));
    for (double& v : x) v = std::exp(l(rng));
    const double d0 = std::exp(l(rng)), d1 = std::exp(l(rng));
    EXPECT_LE(LinearizeH(nominal, d0, d1).Evaluate(x),
              EvaluateH(x, d0, d1) + 1e-12);
  }
}

TEST(HTest, FixedEntriesHaveZeroSlope) {
  const HLinearization lin = LinearizeH({0.0, 2.0, 3.0}, 0.1, 0.2,
                                        {true, false, false});
  EXPECT_EQ(lin.slope[0], 0.0);
  EXPECT_NEAR(lin.Evaluate({0.0, 2.0, 3.0}), EvaluateH({0.0, 2.0, 3.0}, 0.1, 0.2),
              1e-15);
  EXPECT_THROW(LinearizeH({0.0, 2.0, 3.0}, 0.1, 0.2), std::domain_error);
}

TEST(JerkRowsTest, ConstantNominalHandAssembly) {
  const int n_seg = 5;
  const PathGrid grid = MakeUniformGrid(n_seg);
  const double delta = 0.2;
  const double c = 2.0;
  const double jmax = 3.0;
  const PathSamples s = ConstantSamples(6, Vector::Ones(1), Vector::Zero(1));
  const std::vector<double> nominal(6, c);
  // Interior windows only (k = 1, 2): no fixed boundary entry.
  const auto rows = JerkRows(s, grid, UniformLimits(1, 1, 1, jmax), nominal);
  ASSERT_EQ(rows.size(), 4u);
  const double edge = -delta / (8 * std::pow(c, 1.5));
  const double constant = 1.5 * delta / std::sqrt(c);
  const double num = 1.0 / (2 * delta);
  for (int k : {1, 2}) {
    const ThirdOrderBlock& b = rows[k];
    for (int side = 0; side < 2; ++side) {
      const double sign = side == 0 ? 1.0 : -1.0;
      EXPECT_NEAR(b.gamma0[side], sign * num - jmax * edge, 1e-12);
      EXPECT_NEAR(b.gamma1[side], sign * (-2 * num) - jmax * 2 * edge, 1e-12);
      EXPECT_NEAR(b.gamma2[side], sign * num - jmax * edge, 1e-12);
      EXPECT_NEAR(b.eta[side], jmax * constant, 1e-12);
      EXPECT_NEAR(b.gamma0[side], b.gamma2[side], 1e-12);
    }
  }
}

TEST(JerkRowsTest, LpSolutionsSatisfyTrueJerkBound) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> cost(-1.0, 0.2);
  for (int trial = 0; trial < 20; ++trial) {
    const testing::Instance inst = testing::RandomThreeJoint(rng, 12);
    const int n_seg = inst.grid.num_segments();
    std::vector<double> nominal(n_seg + 1, 0.05);
    nominal.front() = nominal.back() = 0.0;
    ConstraintBlocks blocks;
    blocks.first_order = VelocityRows(inst.samples, inst.limits);
    blocks.second_order =
        SecondOrderRows(inst.samples, inst.coeffs, inst.grid, inst.limits);
    blocks.third_order = JerkRows(inst.samples, inst.grid, inst.limits, nominal);
    const StackedSystem sys = StackBlocks(blocks, n_seg, 0.0, 0.0);
    LpProblem lp;
    lp.A = sys.A;
    lp.b = sys.b;
    lp.c = Vector(n_seg - 1);
    for (int j = 0; j < n_seg - 1; ++j) lp.c[j] = cost(rng);
    lp.lb = Vector::Constant(n_seg - 1, kDefaultXFloor);
    lp.ub = Vector::Constant(n_seg - 1, 100.0);
    const LpSolution sol = SolveLp(lp);
    ASSERT_EQ(sol.status, LpStatus::kOptimal);
    std::vector<double> x(n_seg + 1, 0.0);
    for (int j = 0; j < n_seg - 1; ++j) x[j + 1] = sol.x[j];
    const auto nums = JerkNumeratorCoeffs(inst.samples, inst.grid);
    for (int k = 0; k + 1 < n_seg; ++k) {
      const double h = EvaluateH({x[k], x[k + 1], x[k + 2]}, inst.grid.delta[k],
                                 inst.grid.delta[k + 1]);
      const Vector numerator =
          nums[k].j0 * x[k] + nums[k].j1 * x[k + 1] + nums[k].j2 * x[k + 2];
      for (int j = 0; j < 3; ++j) {
        EXPECT_LE(std::abs(numerator[j]),
                  inst.limits.jerk_max[j] * h * (1 + 1e-8) + 1e-12);
      }
      const Vector acc = DirectAcceleration(inst.samples, inst.grid, x, k);
      EXPECT_LE((acc.cwiseAbs() - inst.limits.qdd_max).maxCoeff(), 1e-8);
    }
  }
}

TEST(JerkRowsTest, HugeLimitNeverBinds) {
  const PathGrid grid = MakeUniformGrid(6);
  const PathSamples s = ConstantSamples(7, Vector::Ones(1), Vector::Ones(1));
  std::vector<double> nominal(7, 1.0);
  nominal.front() = nominal.back() = 0.0;
  const auto rows = JerkRows(s, grid, UniformLimits(1, 1, 1, 1e12), nominal);
  for (const auto& b : rows) {
    // Every point of [0, 2]^3 satisfies both sides. The tangent plane of a
    // degree -1/2 homogeneous h drops to zero at three times the nominal,
    // so the box must stay well inside that.
    for (int side = 0; side < 2; ++side) {
      const double worst = 2 * (std::max(b.gamma0[side], 0.0) +
                                std::max(b.gamma1[side], 0.0) +
                                std::max(b.gamma2[side], 0.0));
      EXPECT_LT(worst, b.eta[side]);
    }
  }
}

TEST(StackBlocksTest, BandStructureAndFolding) {
  const PathGrid grid = MakeUniformGrid(4);
  std::vector<Vector> q(5, Vector::Zero(1)), dq, ddq;
  for (int k = 0; k < 5; ++k) {
    dq.push_back(Vector::Constant(1, 1.0 + 0.1 * k));
    ddq.push_back(Vector::Constant(1, 0.3 - 0.2 * k));
  }
  const PathSamples s = MakeSamples(q, dq, ddq);
  const Limits l = UniformLimits(1, 1, 2, 5);
  ConstraintBlocks blocks;
  blocks.first_order = VelocityRows(s, l);
  blocks.second_order = SecondOrderRows(s, {}, grid, l);
  blocks.third_order = JerkRows(s, grid, l, std::vector<double>(5, 0.5));

  const StackedSystem zero = StackBlocks(blocks, 4, 0.0, 0.0);
  ASSERT_EQ(zero.A.cols(), 3);
  ASSERT_EQ(zero.num_rows(), 3 + 8 + 6);
  for (int r = 0; r < zero.num_rows(); ++r) {
    int first = -1, last = -1;
    for (int c = 0; c < 3; ++c) {
      if (zero.A(r, c) != 0.0) {
        if (first < 0) first = c;
        last = c;
      }
    }
    if (first >= 0) EXPECT_LE(last - first + 1, 3);
  }
  // Raw stack: nu, then beta, then eta.
  EXPECT_EQ(zero.b[0], 1.0);
  EXPECT_EQ(zero.b[3], blocks.second_order[0].beta[0]);
  EXPECT_EQ(zero.b[11], blocks.third_order[0].eta[0]);

  const double x0 = 0.4, xn = 0.7;
  // Jerk rows depend on the nominal boundary values, so rebuild them.
  std::vector<double> nominal(5, 0.5);
  nominal.front() = x0;
  nominal.back() = xn;
  blocks.third_order = JerkRows(s, grid, l, nominal);
  const StackedSystem folded = StackBlocks(blocks, 4, x0, xn);
  const SecondOrderBlock& b0 = blocks.second_order[0];
  EXPECT_NEAR(folded.b[3], b0.beta[0] - b0.alpha0[0] * x0, 1e-15);
  EXPECT_NEAR(folded.b[4], b0.beta[1] - b0.alpha0[1] * x0, 1e-15);
  const SecondOrderBlock& b3 = blocks.second_order[3];
  EXPECT_NEAR(folded.b[9], b3.beta[0] - b3.alpha1[0] * xn, 1e-15);
  EXPECT_EQ(folded.A(9, 2), b3.alpha0[0]);
  const ThirdOrderBlock& j0 = blocks.third_order[0];
  EXPECT_NEAR(folded.b[11], j0.eta[0] - j0.gamma0[0] * x0, 1e-15);
  EXPECT_EQ(folded.A(11, 0), j0.gamma1[0]);
  EXPECT_EQ(folded.A(11, 1), j0.gamma2[0]);
  const ThirdOrderBlock& j2 = blocks.third_order[2];
  EXPECT_NEAR(folded.b[15], j2.eta[0] - j2.gamma2[0] * xn, 1e-15);
  EXPECT_EQ(folded.tags[15].order, ConstraintOrder::kJerk);
  EXPECT_EQ(folded.tags[15].k, 2);
}

}  // namespace
}  // namespace totp3
