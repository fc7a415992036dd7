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

#ifndef TOTP3_PATH_MODEL_H_
#define TOTP3_PATH_MODEL_H_

#include <vector>

#include <Eigen/Core>

namespace totp3 {

using Vector = Eigen::VectorXd;

enum class KnotParameterization { kUniform, kChordLength };

// Only natural splines are implemented; the enum keeps the choice explicit in
// configuration files.
enum class SplineType { kNatural };

// Joint-space path q(s), s in [0, 1], stored as one C2 cubic spline per joint.
class JointPath {
 public:
  // Fits a spline through `waypoints`. Knot parameters are normalized so the
  // first waypoint sits at s = 0 and the last at s = 1.
  // Throws std::invalid_argument on fewer than 2 waypoints, mismatched joint
  // dimensions, or (chord length) repeated consecutive waypoints.
  static JointPath Fit(const std::vector<Vector>& waypoints,
                       KnotParameterization parameterization,
                       SplineType type = SplineType::kNatural);

  int num_joints() const { return num_joints_; }
  const std::vector<double>& knots() const { return knots_; }
  const std::vector<Vector>& waypoints() const { return waypoints_; }

  Vector Position(double s) const { return Evaluate(s, 0); }
  Vector FirstDerivative(double s) const { return Evaluate(s, 1); }
  Vector SecondDerivative(double s) const { return Evaluate(s, 2); }

 private:
  JointPath() = default;

  // order-th derivative with respect to s; s is clamped to [0, 1].
  Vector Evaluate(double s, int order) const;

  int num_joints_ = 0;
  std::vector<double> knots_;
  std::vector<Vector> waypoints_;
  // Per segment i and joint j, q_j(s) = a + b t + c t^2 + d t^3 with
  // t = s - knots_[i]. Each matrix is (segments x joints).
  Eigen::MatrixXd a_, b_, c_, d_;
};

JointPath FitSpline(const std::vector<Vector>& waypoints,
                    KnotParameterization parameterization);

// Discretization 0 = s_0 < s_1 < ... < s_N = 1.
struct PathGrid {
  std::vector<double> s;
  std::vector<double> delta;  // delta[k] = s[k + 1] - s[k]

  int num_segments() const { return static_cast<int>(delta.size()); }
};

inline constexpr int kMinSegments = 3;
inline constexpr int kDefaultSegments = 50;

PathGrid MakeUniformGrid(int num_segments);
// Throws std::invalid_argument unless `s` is strictly increasing from exactly
// 0 to exactly 1 with at least kMinSegments segments.
PathGrid MakeCustomGrid(std::vector<double> s);

// q, q' and q'' at every grid point.
struct PathSamples {
  std::vector<Vector> q;
  std::vector<Vector> dq;
  std::vector<Vector> ddq;

  int num_points() const { return static_cast<int>(q.size()); }
  int num_joints() const {
    return q.empty() ? 0 : static_cast<int>(q.front().size());
  }
};

// Validates shapes and finiteness of directly supplied samples.
PathSamples MakeSamples(std::vector<Vector> q, std::vector<Vector> dq,
                        std::vector<Vector> ddq);

// Analytic spline derivatives at each s_k.
PathSamples SamplePath(const JointPath& path, const PathGrid& grid);

}  // namespace totp3

#endif  // TOTP3_PATH_MODEL_H_
