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

#ifndef TOTP3_TRAJECTORY_H_
#define TOTP3_TRAJECTORY_H_

#include <span>
#include <vector>

#include "totp3/dynamics.h"
#include "totp3/path_model.h"

namespace totp3 {

// Pointwise kinematics of a squared-speed profile x (x_k = sdot_k^2). These
// are the formulas behind both the constraint rows and profile verification.

// 2 delta_k / (sqrt(x_k) + sqrt(x_{k+1})); +inf when both are zero.
double SegmentDuration(std::span<const double> x, const PathGrid& grid, int k);

// sddot_k = (x_{k+1} - x_k) / (2 delta_k) for k < N; the backward difference
// at k = N.
double PathAcceleration(std::span<const double> x, const PathGrid& grid,
                        int k);

// q'_k sqrt(x_k).
Vector JointVelocity(const PathSamples& samples, std::span<const double> x,
                     int k);

// q''_k x_k + q'_k sddot_k.
Vector JointAcceleration(const PathSamples& samples, const PathGrid& grid,
                         std::span<const double> x, int k);

// Change in acceleration between adjacent points divided by the mean of the
// two adjacent segment durations, for k = 0 .. N-2. Zero when that time is
// infinite (the profile stops on both sides).
Vector JointJerk(const PathSamples& samples, const PathGrid& grid,
                 std::span<const double> x, int k);

// m_k sddot_k + c_k x_k + g_k.
Vector JointTorque(const PathDynamicsCoefficients& coeffs,
                   const PathGrid& grid, std::span<const double> x, int k);

// Cumulative segment durations, t_0 = 0. Throws std::domain_error if two
// adjacent entries of x are zero (infinite traversal time).
std::vector<double> Timestamps(std::span<const double> x, const PathGrid& grid);

struct KinematicSeries {
  std::vector<Vector> qd;    // k = 0 .. N
  std::vector<Vector> qdd;   // k = 0 .. N
  std::vector<Vector> jerk;  // k = 0 .. N-2
};

KinematicSeries ComputeKinematicSeries(std::span<const double> x,
                                       const PathSamples& samples,
                                       const PathGrid& grid);

struct JointMetrics {
  double rms_torque = 0.0;  // N m
  double peak_power = 0.0;  // W, max_k |tau_k qd_k|
};

struct TrajectoryMetrics {
  double duration = 0.0;
  std::vector<JointMetrics> per_joint;  // empty for kinematic models
};

struct TrajectoryResult {
  std::vector<double> s;
  std::vector<double> t;
  std::vector<double> x;
  std::vector<Vector> q;
  std::vector<Vector> qd;
  std::vector<Vector> qdd;
  std::vector<Vector> jerk;
  std::vector<Vector> tau;  // empty for kinematic models
  TrajectoryMetrics metrics;

  int num_points() const { return static_cast<int>(t.size()); }
};

TrajectoryMetrics ComputeMetrics(const TrajectoryResult& trajectory);

// Timestamps, joint series, torques (when `coeffs` is not empty) and metrics.
TrajectoryResult BuildTrajectory(std::span<const double> x,
                                 const PathSamples& samples,
                                 const PathDynamicsCoefficients& coeffs,
                                 const PathGrid& grid);

// Experimental: dense resampling assuming constant sddot on each segment.
// Jerk between knots is not constrained by the planner.
struct PhaseSample {
  double t = 0.0;
  double s = 0.0;
  double sd = 0.0;
  double sdd = 0.0;
};

std::vector<PhaseSample> ResampleConstantAcceleration(
    std::span<const double> x, const PathGrid& grid, double dt);

}  // namespace totp3

#endif  // TOTP3_TRAJECTORY_H_
