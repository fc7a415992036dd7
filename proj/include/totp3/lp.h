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

#ifndef TOTP3_LP_H_
#define TOTP3_LP_H_

#include <functional>

#include <Eigen/Core>

namespace totp3 {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

//   minimize    c' x
//   subject to  A x <= b,  lb <= x <= ub
// Infinite entries of lb / ub are allowed.
struct LpProblem {
  Eigen::VectorXd c;
  RowMatrix A;
  Eigen::VectorXd b;
  Eigen::VectorXd lb;
  Eigen::VectorXd ub;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

const char* ToString(LpStatus status);

struct LpOptions {
  // Absolute tolerances, applied after each row of A is scaled to unit
  // infinity norm and c is scaled to unit infinity norm.
  double feas_tol = 1e-9;
  double opt_tol = 1e-9;
  int max_iters = 100000;
  // Consecutive degenerate pivots before switching to Bland's rule.
  int bland_after = 50;
  // Pivots between basis refactorizations.
  int refactor_every = 64;
};

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
  int iterations = 0;
};

// Throws std::invalid_argument on inconsistent dimensions, non-finite c, A or
// b, or lb > ub.
void ValidateLpProblem(const LpProblem& problem);

// Built-in solver: primal simplex over vertices of {A x <= b, lb <= x <= ub}
// (one active constraint per variable), Dantzig pricing with a fallback to
// Bland's rule after `bland_after` consecutive degenerate pivots, and a
// single-auxiliary-variable phase 1. Deterministic for a given input. Returns
// a status instead of throwing for infeasible or unbounded problems.
LpSolution SolveLp(const LpProblem& problem, const LpOptions& options = {});

// Seam for swapping in a different LP backend.
using LpSolverFn =
    std::function<LpSolution(const LpProblem&, const LpOptions&)>;

}  // namespace totp3

#endif  // TOTP3_LP_H_
