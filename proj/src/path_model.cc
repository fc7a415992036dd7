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

#include "totp3/path_model.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace totp3 {
namespace {

bool AllFinite(const std::vector<Vector>& values) {
  return std::all_of(values.begin(), values.end(),
                     [](const Vector& v) { return v.allFinite(); });
}

// Second derivatives M_i of the natural spline through (t_i, y_i), obtained
// from the tridiagonal moment equations with M_0 = M_n = 0.
std::vector<double> NaturalMoments(const std::vector<double>& t,
                                   const std::vector<double>& y) {
  const size_t n = t.size();
  std::vector<double> moments(n, 0.0);
  if (n < 3) return moments;

  const size_t m = n - 2;
  std::vector<double> diag(m), upper(m), rhs(m);
  for (size_t i = 1; i + 1 < n; ++i) {
    const double h0 = t[i] - t[i - 1];
    const double h1 = t[i + 1] - t[i];
    diag[i - 1] = 2.0 * (h0 + h1);
    upper[i - 1] = h1;
    rhs[i - 1] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
  }
  // Thomas algorithm; the sub-diagonal entry of row r is h_{r} = upper[r-1].
  for (size_t r = 1; r < m; ++r) {
    const double w = upper[r - 1] / diag[r - 1];
    diag[r] -= w * upper[r - 1];
    rhs[r] -= w * rhs[r - 1];
  }
  moments[m] = rhs[m - 1] / diag[m - 1];
  for (size_t r = m - 1; r-- > 0;) {
    moments[r + 1] = (rhs[r] - upper[r] * moments[r + 2]) / diag[r];
  }
  return moments;
}

}  // namespace

JointPath JointPath::Fit(const std::vector<Vector>& waypoints,
                         KnotParameterization parameterization,
                         SplineType type) {
  if (type != SplineType::kNatural) {
    throw std::invalid_argument("unsupported spline type");
  }
  if (waypoints.size() < 2) {
    throw std::invalid_argument("a path needs at least 2 waypoints");
  }
  const Eigen::Index n = waypoints.front().size();
  if (n < 1) throw std::invalid_argument("waypoints must have dimension >= 1");
  for (size_t i = 0; i < waypoints.size(); ++i) {
    if (waypoints[i].size() != n) {
      throw std::invalid_argument("waypoint " + std::to_string(i) +
                                  " has dimension " +
                                  std::to_string(waypoints[i].size()) +
                                  ", expected " + std::to_string(n));
    }
  }
  if (!AllFinite(waypoints)) {
    throw std::invalid_argument("waypoints must be finite");
  }

  const size_t count = waypoints.size();
  std::vector<double> knots(count, 0.0);
  if (parameterization == KnotParameterization::kUniform) {
    for (size_t i = 0; i < count; ++i) {
      knots[i] = static_cast<double>(i) / static_cast<double>(count - 1);
    }
  } else {
    for (size_t i = 1; i < count; ++i) {
      const double chord = (waypoints[i] - waypoints[i - 1]).norm();
      if (!(chord > 0.0)) {
        throw std::invalid_argument(
            "chord-length parameterization needs distinct consecutive "
            "waypoints (repeat at index " + std::to_string(i) + ")");
      }
      knots[i] = knots[i - 1] + chord;
    }
    const double total = knots.back();
    for (double& k : knots) k /= total;
  }
  knots.back() = 1.0;

  JointPath path;
  path.num_joints_ = static_cast<int>(n);
  path.knots_ = knots;
  path.waypoints_ = waypoints;
  const Eigen::Index segments = static_cast<Eigen::Index>(count - 1);
  path.a_.resize(segments, n);
  path.b_.resize(segments, n);
  path.c_.resize(segments, n);
  path.d_.resize(segments, n);

  std::vector<double> y(count);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (size_t i = 0; i < count; ++i) y[i] = waypoints[i][j];
    const std::vector<double> moments = NaturalMoments(knots, y);
    for (Eigen::Index i = 0; i < segments; ++i) {
      const double h = knots[i + 1] - knots[i];
      path.a_(i, j) = y[i];
      path.b_(i, j) =
          (y[i + 1] - y[i]) / h - h * (2.0 * moments[i] + moments[i + 1]) / 6.0;
      path.c_(i, j) = 0.5 * moments[i];
      path.d_(i, j) = (moments[i + 1] - moments[i]) / (6.0 * h);
    }
  }
  return path;
}

Vector JointPath::Evaluate(double s, int order) const {
  s = std::clamp(s, 0.0, 1.0);
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), s);
  Eigen::Index seg = static_cast<Eigen::Index>(it - knots_.begin()) - 1;
  seg = std::clamp<Eigen::Index>(seg, 0, a_.rows() - 1);
  const double t = s - knots_[seg];

  Vector out(num_joints_);
  for (int j = 0; j < num_joints_; ++j) {
    const double a = a_(seg, j), b = b_(seg, j), c = c_(seg, j),
                 d = d_(seg, j);
    switch (order) {
      case 0:
        out[j] = a + t * (b + t * (c + t * d));
        break;
      case 1:
        out[j] = b + t * (2.0 * c + 3.0 * d * t);
        break;
      default:
        out[j] = 2.0 * c + 6.0 * d * t;
        break;
    }
  }
  return out;
}

JointPath FitSpline(const std::vector<Vector>& waypoints,
                    KnotParameterization parameterization) {
  return JointPath::Fit(waypoints, parameterization);
}

PathGrid MakeUniformGrid(int num_segments) {
  if (num_segments < kMinSegments) {
    throw std::invalid_argument("grid needs at least " +
                                std::to_string(kMinSegments) + " segments");
  }
  std::vector<double> s(num_segments + 1);
  for (int k = 0; k <= num_segments; ++k) {
    s[k] = static_cast<double>(k) / num_segments;
  }
  return MakeCustomGrid(std::move(s));
}

PathGrid MakeCustomGrid(std::vector<double> s) {
  if (s.size() < kMinSegments + 1) {
    throw std::invalid_argument("grid needs at least " +
                                std::to_string(kMinSegments) + " segments");
  }
  if (s.front() != 0.0 || s.back() != 1.0) {
    throw std::invalid_argument("grid must start at 0 and end at 1");
  }
  PathGrid grid;
  grid.delta.resize(s.size() - 1);
  for (size_t k = 0; k + 1 < s.size(); ++k) {
    grid.delta[k] = s[k + 1] - s[k];
    if (!(grid.delta[k] > 0.0)) {
      throw std::invalid_argument("grid must be strictly increasing (index " +
                                  std::to_string(k + 1) + ")");
    }
  }
  grid.s = std::move(s);
  return grid;
}

PathSamples MakeSamples(std::vector<Vector> q, std::vector<Vector> dq,
                        std::vector<Vector> ddq) {
  if (q.empty() || q.size() != dq.size() || q.size() != ddq.size()) {
    throw std::invalid_argument("q, dq and ddq must have equal nonzero length");
  }
  const Eigen::Index n = q.front().size();
  if (n < 1) throw std::invalid_argument("samples must have dimension >= 1");
  for (size_t k = 0; k < q.size(); ++k) {
    if (q[k].size() != n || dq[k].size() != n || ddq[k].size() != n) {
      throw std::invalid_argument("sample " + std::to_string(k) +
                                  " has inconsistent joint dimension");
    }
  }
  if (!AllFinite(q) || !AllFinite(dq) || !AllFinite(ddq)) {
    throw std::invalid_argument("samples must be finite");
  }
  return PathSamples{std::move(q), std::move(dq), std::move(ddq)};
}

PathSamples SamplePath(const JointPath& path, const PathGrid& grid) {
  std::vector<Vector> q, dq, ddq;
  q.reserve(grid.s.size());
  dq.reserve(grid.s.size());
  ddq.reserve(grid.s.size());
  for (double s : grid.s) {
    q.push_back(path.Position(s));
    dq.push_back(path.FirstDerivative(s));
    ddq.push_back(path.SecondDerivative(s));
  }
  return MakeSamples(std::move(q), std::move(dq), std::move(ddq));
}

}  // namespace totp3
