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

#include "totp3/trajectory.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace totp3 {

double SegmentDuration(std::span<const double> x, const PathGrid& grid,
                       int k) {
  const double denom = std::sqrt(x[k]) + std::sqrt(x[k + 1]);
  if (denom == 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 * grid.delta[k] / denom;
}

double PathAcceleration(std::span<const double> x, const PathGrid& grid,
                        int k) {
  const int segments = grid.num_segments();
  if (k < segments) return (x[k + 1] - x[k]) / (2.0 * grid.delta[k]);
  return (x[k] - x[k - 1]) / (2.0 * grid.delta[k - 1]);
}

Vector JointVelocity(const PathSamples& samples, std::span<const double> x,
                     int k) {
  return samples.dq[k] * std::sqrt(x[k]);
}

Vector JointAcceleration(const PathSamples& samples, const PathGrid& grid,
                         std::span<const double> x, int k) {
  return samples.ddq[k] * x[k] +
         samples.dq[k] * PathAcceleration(x, grid, k);
}

Vector JointJerk(const PathSamples& samples, const PathGrid& grid,
                 std::span<const double> x, int k) {
  const double mean_dt =
      0.5 * (SegmentDuration(x, grid, k) + SegmentDuration(x, grid, k + 1));
  const Vector change = JointAcceleration(samples, grid, x, k + 1) -
                        JointAcceleration(samples, grid, x, k);
  if (std::isinf(mean_dt)) return Vector::Zero(change.size());
  return change / mean_dt;
}

Vector JointTorque(const PathDynamicsCoefficients& coeffs,
                   const PathGrid& grid, std::span<const double> x, int k) {
  return coeffs.m[k] * PathAcceleration(x, grid, k) + coeffs.c[k] * x[k] +
         coeffs.g[k];
}

std::vector<double> Timestamps(std::span<const double> x,
                               const PathGrid& grid) {
  if (static_cast<int>(x.size()) != grid.num_segments() + 1) {
    throw std::invalid_argument("profile must have N + 1 entries");
  }
  std::vector<double> t(x.size(), 0.0);
  for (int k = 0; k < grid.num_segments(); ++k) {
    if (x[k] < 0.0 || x[k + 1] < 0.0) {
      throw std::domain_error("negative squared speed at k=" +
                              std::to_string(x[k] < 0.0 ? k : k + 1));
    }
    const double dt = SegmentDuration(x, grid, k);
    if (std::isinf(dt)) {
      throw std::domain_error("profile stops on segment " + std::to_string(k));
    }
    t[k + 1] = t[k] + dt;
  }
  return t;
}

KinematicSeries ComputeKinematicSeries(std::span<const double> x,
                                       const PathSamples& samples,
                                       const PathGrid& grid) {
  const int points = grid.num_segments() + 1;
  KinematicSeries series;
  series.qd.reserve(points);
  series.qdd.reserve(points);
  for (int k = 0; k < points; ++k) {
    series.qd.push_back(JointVelocity(samples, x, k));
    series.qdd.push_back(JointAcceleration(samples, grid, x, k));
  }
  for (int k = 0; k + 2 < points; ++k) {
    series.jerk.push_back(JointJerk(samples, grid, x, k));
  }
  return series;
}

TrajectoryMetrics ComputeMetrics(const TrajectoryResult& trajectory) {
  TrajectoryMetrics metrics;
  metrics.duration = trajectory.t.empty() ? 0.0 : trajectory.t.back();
  if (trajectory.tau.empty()) return metrics;

  const Eigen::Index n = trajectory.tau.front().size();
  metrics.per_joint.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double sum_sq = 0.0, peak = 0.0;
    for (size_t k = 0; k < trajectory.tau.size(); ++k) {
      const double tau = trajectory.tau[k][j];
      sum_sq += tau * tau;
      peak = std::max(peak, std::abs(tau * trajectory.qd[k][j]));
    }
    metrics.per_joint[j].rms_torque =
        std::sqrt(sum_sq / static_cast<double>(trajectory.tau.size()));
    metrics.per_joint[j].peak_power = peak;
  }
  return metrics;
}

TrajectoryResult BuildTrajectory(std::span<const double> x,
                                 const PathSamples& samples,
                                 const PathDynamicsCoefficients& coeffs,
                                 const PathGrid& grid) {
  TrajectoryResult out;
  out.t = Timestamps(x, grid);
  out.s = grid.s;
  out.x.assign(x.begin(), x.end());
  out.q = samples.q;
  KinematicSeries series = ComputeKinematicSeries(x, samples, grid);
  out.qd = std::move(series.qd);
  out.qdd = std::move(series.qdd);
  out.jerk = std::move(series.jerk);
  if (!coeffs.empty()) {
    for (int k = 0; k <= grid.num_segments(); ++k) {
      out.tau.push_back(JointTorque(coeffs, grid, x, k));
    }
  }
  out.metrics = ComputeMetrics(out);
  return out;
}

std::vector<PhaseSample> ResampleConstantAcceleration(
    std::span<const double> x, const PathGrid& grid, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const std::vector<double> t = Timestamps(x, grid);
  std::vector<PhaseSample> out;
  int k = 0;
  for (double now = 0.0; now < t.back(); now += dt) {
    while (k + 1 < grid.num_segments() && now >= t[k + 1]) ++k;
    const double tau = now - t[k];
    const double sd0 = std::sqrt(x[k]);
    const double sdd = PathAcceleration(x, grid, k);
    out.push_back({now, grid.s[k] + sd0 * tau + 0.5 * sdd * tau * tau,
                   sd0 + sdd * tau, sdd});
  }
  out.push_back({t.back(), 1.0, std::sqrt(x.back()),
                 PathAcceleration(x, grid, grid.num_segments())});
  return out;
}

}  // namespace totp3
