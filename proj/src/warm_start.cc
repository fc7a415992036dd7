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

#include "totp3/warm_start.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace totp3 {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Stand-in for an infinite target bound during vertex enumeration.
constexpr double kBig = 1e15;
constexpr double kRelTol = 1e-11;

struct HalfPlane {
  double a;  // coefficient on the given variable
  double b;  // coefficient on the target variable
  double c;
};

bool Satisfies(const HalfPlane& h, double u, double v) {
  const double lhs = h.a * u + h.b * v;
  const double scale =
      std::abs(h.a * u) + std::abs(h.b * v) + std::abs(h.c) + 1e-300;
  return lhs <= h.c + kRelTol * scale;
}

}  // namespace

std::vector<PairRow> PairRows(const SecondOrderBlock& block) {
  std::vector<PairRow> rows(block.beta.size());
  for (Eigen::Index i = 0; i < block.beta.size(); ++i) {
    rows[i] = {block.alpha0[i], block.alpha1[i], block.beta[i]};
  }
  return rows;
}

std::optional<ReachableInterval> StepInterval(std::span<const PairRow> rows,
                                              ReachableInterval given,
                                              ReachableInterval target,
                                              Propagation direction) {
  if (given.lo > given.hi || target.lo > target.hi) return std::nullopt;
  const bool forward = direction == Propagation::kForward;

  if (given.lo == given.hi) {
    // The given variable is a point: every row is a half-line in the target.
    const double u = given.lo;
    double lo = target.lo, hi = target.hi;
    // Rounding allowance on the bounds, from the magnitude of the rows.
    double slack = 0.0;
    for (const PairRow& r : rows) {
      const double a = forward ? r.coef_k : r.coef_next;
      const double b = forward ? r.coef_next : r.coef_k;
      const double rest = r.bound - a * u;
      const double noise = kRelTol * (std::abs(r.bound) + std::abs(a * u));
      if (b > 0.0) {
        hi = std::min(hi, rest / b);
        slack = std::max(slack, noise / b);
      } else if (b < 0.0) {
        lo = std::max(lo, rest / b);
        slack = std::max(slack, -noise / b);
      } else if (rest < -noise) {
        return std::nullopt;
      }
    }
    if (lo > hi) {
      if (lo - hi > slack) return std::nullopt;
      lo = hi = std::clamp(0.5 * (lo + hi), target.lo, target.hi);
    }
    return ReachableInterval{lo, hi};
  }

  // Project the polygon {rows, u in given, v in target} onto v by
  // enumerating its vertices.
  std::vector<HalfPlane> planes;
  planes.reserve(rows.size() + 4);
  for (const PairRow& r : rows) {
    planes.push_back(forward ? HalfPlane{r.coef_k, r.coef_next, r.bound}
                             : HalfPlane{r.coef_next, r.coef_k, r.bound});
  }
  const double target_hi = std::isinf(target.hi) ? kBig : target.hi;
  planes.push_back({-1.0, 0.0, -given.lo});
  planes.push_back({1.0, 0.0, given.hi});
  planes.push_back({0.0, -1.0, -target.lo});
  planes.push_back({0.0, 1.0, target_hi});

  double lo = kInf, hi = -kInf;
  for (size_t i = 0; i < planes.size(); ++i) {
    for (size_t j = i + 1; j < planes.size(); ++j) {
      const HalfPlane& p = planes[i];
      const HalfPlane& q = planes[j];
      const double det = p.a * q.b - p.b * q.a;
      const double scale = (std::abs(p.a) + std::abs(p.b)) *
                           (std::abs(q.a) + std::abs(q.b));
      if (std::abs(det) <= 1e-14 * scale) continue;
      const double u = (p.c * q.b - p.b * q.c) / det;
      const double v = (p.a * q.c - p.c * q.a) / det;
      bool ok = true;
      for (const HalfPlane& h : planes) {
        if (!Satisfies(h, u, v)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (lo > hi) return std::nullopt;
  lo = std::clamp(lo, target.lo, target_hi);
  hi = std::clamp(hi, target.lo, target_hi);
  if (std::isinf(target.hi) && hi >= kBig * (1.0 - 1e-9)) hi = kInf;
  return ReachableInterval{lo, hi};
}

std::vector<double> VelocityCaps(const PathSamples& samples,
                                 const Limits& limits, double fallback) {
  std::vector<double> caps(samples.num_points(), fallback);
  for (int k = 0; k < samples.num_points(); ++k) {
    for (int j = 0; j < samples.num_joints(); ++j) {
      const double dq = std::abs(samples.dq[k][j]);
      if (dq == 0.0) continue;
      const double v = limits.qd_max[j] / dq;
      caps[k] = std::min(caps[k], v * v);
    }
  }
  return caps;
}

const char* ToString(WarmStartStatus status) {
  switch (status) {
    case WarmStartStatus::kOk:
      return "ok";
    case WarmStartStatus::kFallback:
      return "fallback";
    case WarmStartStatus::kInfeasible:
      return "infeasible";
  }
  return "invalid";
}

WarmStartResult WarmStart(const PathSamples& samples,
                          const PathDynamicsCoefficients& coeffs,
                          const PathGrid& grid, const Limits& limits,
                          const WarmStartOptions& options) {
  const int segments = grid.num_segments();
  const std::vector<SecondOrderBlock> blocks =
      SecondOrderRows(samples, coeffs, grid, limits);
  std::vector<std::vector<PairRow>> rows(segments);
  for (int k = 0; k < segments; ++k) rows[k] = PairRows(blocks[k]);

  std::vector<ReachableInterval> caps(segments + 1);
  const std::vector<double> vcaps =
      VelocityCaps(samples, limits, options.max_squared_speed);
  for (int k = 1; k < segments; ++k) caps[k] = {0.0, vcaps[k]};
  caps[0] = {options.x_start, options.x_start};
  caps[segments] = {options.x_end, options.x_end};

  WarmStartResult result;
  // Pairwise rows make backward propagation exact, so an empty controllable
  // interval proves infeasibility. A forward collapse after a successful
  // backward pass can only come from rounding and gets the fallback.
  auto fail = [&](int index, bool proven) {
    ConstraintBlocks second_only;
    second_only.second_order = blocks;
    result.diagnostics = FindStaticInfeasibilities(
        StackBlocks(second_only, segments, options.x_start, options.x_end));
    if (proven || !result.diagnostics.empty()) {
      result.status = WarmStartStatus::kInfeasible;
      result.failed_index = result.diagnostics.empty()
                                ? index
                                : result.diagnostics.front().tag.k;
      result.x.clear();
      return result;
    }
    result.status = WarmStartStatus::kFallback;
    result.failed_index = index;
    result.x.assign(segments + 1, 0.0);
    result.x.front() = options.x_start;
    result.x.back() = options.x_end;
    const double level = options.x_floor * 1e6;
    for (int k = 1; k < segments; ++k) {
      result.x[k] = std::min(level, caps[k].hi);
    }
    return result;
  };

  std::vector<ReachableInterval>& controllable = result.controllable;
  controllable.assign(segments + 1, {});
  controllable[segments] = caps[segments];
  for (int k = segments - 1; k >= 0; --k) {
    const auto interval = StepInterval(rows[k], controllable[k + 1], caps[k],
                                       Propagation::kBackward);
    if (!interval) return fail(k, true);
    controllable[k] = *interval;
  }

  result.x.assign(segments + 1, 0.0);
  result.x[0] = options.x_start;
  for (int k = 0; k < segments; ++k) {
    const ReachableInterval here{result.x[k], result.x[k]};
    const auto next = StepInterval(rows[k], here, controllable[k + 1],
                                   Propagation::kForward);
    if (!next) return fail(k + 1, false);
    result.x[k + 1] = next->hi;
  }
  result.x[segments] = options.x_end;
  result.status = WarmStartStatus::kOk;
  return result;
}

}  // namespace totp3
