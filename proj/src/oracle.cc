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

#include "totp3/oracle.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace totp3 {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRelTol = 1e-12;

bool WithinLimit(double value, double limit) {
  return std::abs(value) <= limit + kRelTol * std::max(1.0, limit);
}

// Physical quantities of one segment for one pair of lattice values.
struct SegmentTable {
  int rows = 0;  // levels at stage k
  int cols = 0;  // levels at stage k + 1
  std::vector<char> ok;
  std::vector<double> dt;
  std::vector<double> qdd;  // rows * cols * joints

  int Index(int a, int b) const { return a * cols + b; }
};

SegmentTable BuildSegment(const PathSamples& samples,
                          const PathDynamicsCoefficients& coeffs,
                          const PathGrid& grid, const Limits& limits, int k,
                          const std::vector<double>& from,
                          const std::vector<double>& to) {
  const int joints = samples.num_joints();
  const double delta = grid.delta[k];
  SegmentTable table;
  table.rows = static_cast<int>(from.size());
  table.cols = static_cast<int>(to.size());
  const size_t cells = static_cast<size_t>(table.rows) * table.cols;
  table.ok.assign(cells, 0);
  table.dt.assign(cells, kInf);
  table.qdd.assign(cells * joints, 0.0);
  const bool dynamic = !coeffs.empty() && limits.tau_max.has_value();
  for (int a = 0; a < table.rows; ++a) {
    for (int b = 0; b < table.cols; ++b) {
      const int idx = table.Index(a, b);
      const double xa = from[a];
      const double xb = to[b];
      const double speed_sum = std::sqrt(xa) + std::sqrt(xb);
      if (speed_sum == 0.0) continue;
      const double sdd = (xb - xa) / (2.0 * delta);
      bool ok = true;
      for (int j = 0; j < joints && ok; ++j) {
        const double qdd =
            samples.ddq[k][j] * xa + samples.dq[k][j] * sdd;
        table.qdd[static_cast<size_t>(idx) * joints + j] = qdd;
        ok = WithinLimit(qdd, limits.qdd_max[j]);
        if (ok && dynamic) {
          const double tau =
              coeffs.m[k][j] * sdd + coeffs.c[k][j] * xa + coeffs.g[k][j];
          ok = WithinLimit(tau, (*limits.tau_max)[j]);
        }
      }
      if (!ok) continue;
      table.ok[idx] = 1;
      table.dt[idx] = 2.0 * delta / speed_sum;
    }
  }
  return table;
}

bool JerkOk(const SegmentTable& first, const SegmentTable& second, int a,
            int b, int c, const Limits& limits, int joints) {
  const int i0 = first.Index(a, b);
  const int i1 = second.Index(b, c);
  const double mean_dt = 0.5 * (first.dt[i0] + second.dt[i1]);
  for (int j = 0; j < joints; ++j) {
    const double jerk =
        (second.qdd[static_cast<size_t>(i1) * joints + j] -
         first.qdd[static_cast<size_t>(i0) * joints + j]) /
        mean_dt;
    if (!WithinLimit(jerk, limits.jerk_max[j])) return false;
  }
  return true;
}

}  // namespace

std::vector<double> GeometricLevels(double floor, double cap, int count) {
  if (count < 1) throw std::invalid_argument("level count must be positive");
  if (!(floor > 0.0)) throw std::invalid_argument("floor must be positive");
  if (cap <= floor || count == 1) return {std::max(0.0, cap)};
  std::vector<double> levels(count);
  const double log_floor = std::log(floor);
  const double log_span = std::log(cap) - log_floor;
  for (int i = 0; i < count; ++i) {
    levels[i] = std::exp(log_floor + log_span * i / (count - 1));
  }
  levels.front() = floor;
  levels.back() = cap;
  return levels;
}

DpResult DpOptimalTime(const PathSamples& samples,
                       const PathDynamicsCoefficients& coeffs,
                       const PathGrid& grid, const Limits& limits,
                       const DpOptions& options) {
  const int n_seg = grid.num_segments();
  if (n_seg > kDpMaxSegments) {
    throw std::invalid_argument("oracle supports at most " +
                                std::to_string(kDpMaxSegments) + " segments");
  }
  if (n_seg < 2) throw std::invalid_argument("oracle needs N >= 2");
  if (!(options.relative_floor >= 0.0 && options.relative_floor < 1.0)) {
    throw std::invalid_argument("relative_floor must be in [0, 1)");
  }
  if (options.levels < 2 || options.levels > kDpMaxLevels) {
    throw std::invalid_argument("oracle levels must be in [2, " +
                                std::to_string(kDpMaxLevels) + "]");
  }
  if (samples.num_points() != n_seg + 1) {
    throw std::invalid_argument("samples do not match the grid");
  }
  const int joints = samples.num_joints();
  ValidateLimits(limits, joints, !coeffs.empty());

  DpResult result;
  result.lattice.resize(n_seg + 1);
  for (int k = 0; k <= n_seg; ++k) {
    double cap = options.max_squared_speed;
    for (int j = 0; j < joints; ++j) {
      const double dq = std::abs(samples.dq[k][j]);
      if (dq > 0.0) cap = std::min(cap, std::pow(limits.qd_max[j] / dq, 2));
    }
    if (k == 0 || k == n_seg) {
      const double fixed = k == 0 ? options.x_start : options.x_end;
      if (fixed > cap * (1.0 + kRelTol)) return result;
      result.lattice[k] = {fixed};
    } else {
      const double floor =
          std::max(options.x_floor, options.relative_floor * cap);
      result.lattice[k] = GeometricLevels(floor, cap, options.levels);
    }
  }

  std::vector<SegmentTable> tables;
  tables.reserve(n_seg);
  for (int k = 0; k < n_seg; ++k) {
    tables.push_back(BuildSegment(samples, coeffs, grid, limits, k,
                                  result.lattice[k], result.lattice[k + 1]));
  }

  std::vector<int> choice(n_seg + 1, 0);
  double best = kInf;
  if (!options.jerk) {
    // value[k][a]: least time from stage 0 to level a of stage k.
    std::vector<std::vector<double>> value(n_seg + 1);
    std::vector<std::vector<int>> parent(n_seg + 1);
    value[0].assign(1, 0.0);
    for (int k = 0; k < n_seg; ++k) {
      const SegmentTable& t = tables[k];
      value[k + 1].assign(t.cols, kInf);
      parent[k + 1].assign(t.cols, -1);
      for (int a = 0; a < t.rows; ++a) {
        if (value[k][a] == kInf) continue;
        for (int b = 0; b < t.cols; ++b) {
          const int idx = t.Index(a, b);
          if (!t.ok[idx]) continue;
          const double v = value[k][a] + t.dt[idx];
          if (v < value[k + 1][b]) {
            value[k + 1][b] = v;
            parent[k + 1][b] = a;
          }
        }
      }
    }
    best = value[n_seg][0];
    if (best == kInf) return result;
    for (int k = n_seg; k > 0; --k) choice[k - 1] = parent[k][choice[k]];
  } else {
    // value[k][(a, b)]: least time to reach level a at stage k and level b
    // at stage k + 1 with every limit up to segment k satisfied.
    std::vector<std::vector<double>> value(n_seg);
    std::vector<std::vector<int>> parent(n_seg);
    value[0] = tables[0].dt;
    for (size_t i = 0; i < value[0].size(); ++i) {
      if (!tables[0].ok[i]) value[0][i] = kInf;
    }
    parent[0].assign(value[0].size(), -1);
    for (int k = 0; k + 1 < n_seg; ++k) {
      const SegmentTable& t0 = tables[k];
      const SegmentTable& t1 = tables[k + 1];
      value[k + 1].assign(static_cast<size_t>(t1.rows) * t1.cols, kInf);
      parent[k + 1].assign(value[k + 1].size(), -1);
      for (int a = 0; a < t0.rows; ++a) {
        for (int b = 0; b < t0.cols; ++b) {
          const double base = value[k][t0.Index(a, b)];
          if (base == kInf) continue;
          for (int c = 0; c < t1.cols; ++c) {
            const int idx = t1.Index(b, c);
            if (!t1.ok[idx]) continue;
            const double v = base + t1.dt[idx];
            if (v >= value[k + 1][idx]) continue;
            if (!JerkOk(t0, t1, a, b, c, limits, joints)) continue;
            value[k + 1][idx] = v;
            parent[k + 1][idx] = a;
          }
        }
      }
    }
    const SegmentTable& last = tables[n_seg - 1];
    int best_a = -1;
    for (int a = 0; a < last.rows; ++a) {
      const double v = value[n_seg - 1][last.Index(a, 0)];
      if (v < best) {
        best = v;
        best_a = a;
      }
    }
    if (best_a < 0) return result;
    choice[n_seg] = 0;
    choice[n_seg - 1] = best_a;
    for (int k = n_seg - 1; k > 0; --k) {
      const SegmentTable& t = tables[k];
      choice[k - 1] = parent[k][t.Index(choice[k], choice[k + 1])];
    }
  }

  result.feasible = true;
  result.x.resize(n_seg + 1);
  for (int k = 0; k <= n_seg; ++k) result.x[k] = result.lattice[k][choice[k]];
  result.duration = best;
  return result;
}

}  // namespace totp3
