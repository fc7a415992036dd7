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

#ifndef TOTP3_WARM_START_H_
#define TOTP3_WARM_START_H_

#include <optional>
#include <span>
#include <vector>

#include "totp3/constraints.h"
#include "totp3/dynamics.h"
#include "totp3/path_model.h"

namespace totp3 {

// Admissible range of one squared speed x_k.
struct ReachableInterval {
  double lo = 0.0;
  double hi = 0.0;
};

// coef_k x_k + coef_next x_{k+1} <= bound.
struct PairRow {
  double coef_k = 0.0;
  double coef_next = 0.0;
  double bound = 0.0;
};

std::vector<PairRow> PairRows(const SecondOrderBlock& block);

enum class Propagation { kForward, kBackward };

// Exact image of `given` through the pair rows, intersected with `target`.
// Forward: `given` bounds x_k and the result bounds x_{k+1}; backward the
// other way round. `target.hi` may be +inf. Returns nullopt when empty.
std::optional<ReachableInterval> StepInterval(std::span<const PairRow> rows,
                                              ReachableInterval given,
                                              ReachableInterval target,
                                              Propagation direction);

// Upper bound on x_k from the velocity rows: min_j (qd_max_j / |q'_kj|)^2,
// or `fallback` when no joint moves at k.
std::vector<double> VelocityCaps(const PathSamples& samples,
                                 const Limits& limits, double fallback);

inline constexpr double kDefaultMaxSquaredSpeed = 1e6;

struct WarmStartOptions {
  double x_start = 0.0;
  double x_end = 0.0;
  double x_floor = kDefaultXFloor;
  double max_squared_speed = kDefaultMaxSquaredSpeed;
};

enum class WarmStartStatus { kOk, kFallback, kInfeasible };

const char* ToString(WarmStartStatus status);

struct WarmStartResult {
  WarmStartStatus status = WarmStartStatus::kInfeasible;
  std::vector<double> x;  // N + 1 entries
  int failed_index = -1;
  std::vector<StaticViolation> diagnostics;
  std::vector<ReachableInterval> controllable;
};

// Second-order time-optimal profile without jerk rows. A backward pass builds
// the controllable interval of every x_k from x_N; a forward pass then takes
// the largest x_{k+1} reachable from x_k inside its controllable interval.
// An empty controllable interval means no second-order-feasible profile
// exists (status kInfeasible, failed_index set, static row violations listed
// in diagnostics). If only the forward pass collapses, which takes rounding
// trouble, the result is a small constant fallback profile (kFallback).
WarmStartResult WarmStart(const PathSamples& samples,
                          const PathDynamicsCoefficients& coeffs,
                          const PathGrid& grid, const Limits& limits,
                          const WarmStartOptions& options = {});

}  // namespace totp3

#endif  // TOTP3_WARM_START_H_
