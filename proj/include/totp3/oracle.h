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

#ifndef TOTP3_ORACLE_H_
#define TOTP3_ORACLE_H_

#include <vector>

#include "totp3/constraints.h"
#include "totp3/dynamics.h"
#include "totp3/path_model.h"
#include "totp3/warm_start.h"

namespace totp3 {

inline constexpr int kDpMaxSegments = 20;
inline constexpr int kDpMaxLevels = 400;

// `count` values from `floor` to `cap`, geometrically spaced. A cap at or
// below the floor yields the single value `cap`.
std::vector<double> GeometricLevels(double floor, double cap, int count);

struct DpOptions {
  int levels = 200;
  bool jerk = true;
  double x_start = 0.0;
  double x_end = 0.0;
  double x_floor = kDefaultXFloor;
  // Lowest interior level as a fraction of the stage's velocity cap. Levels
  // far below the cap cost resolution where optimal profiles live; 0 spans
  // the full range down to x_floor.
  double relative_floor = 1e-3;
  double max_squared_speed = kDefaultMaxSquaredSpeed;
};

struct DpResult {
  bool feasible = false;
  double duration = 0.0;  // traversal time of `x`
  std::vector<double> x;  // N + 1 entries when feasible
  // Lattice used at every stage.
  std::vector<std::vector<double>> lattice;
};

// Exact minimum-time profile over a lattice of squared speeds. Every interior
// stage takes `levels` geometric values between the floor (the larger of
// x_floor and relative_floor times the cap) and its velocity cap; the end points are fixed. Transitions are checked against the joint
// velocity, acceleration, torque and (optionally) jerk limits evaluated
// directly from the path samples and dynamics coefficients, using the exact
// nonlinear jerk time denominator. Cost is O(N L^2) without jerk and
// O(N L^3) with it.
// Throws std::invalid_argument when N > kDpMaxSegments, levels > kDpMaxLevels
// or levels < 2. An infeasible lattice is reported through `feasible`.
DpResult DpOptimalTime(const PathSamples& samples,
                       const PathDynamicsCoefficients& coeffs,
                       const PathGrid& grid, const Limits& limits,
                       const DpOptions& options = {});

}  // namespace totp3

#endif  // TOTP3_ORACLE_H_
