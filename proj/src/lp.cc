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

#include "totp3/lp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/LU>

namespace totp3 {
namespace {

using Vector = Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();
// Minimum |a . d| (relative to |d|_inf) for a constraint to block a step.
constexpr double kPivotTol = 1e-9;
// Relative window in which two ratio-test steps count as tied.
constexpr double kTieTol = 1e-12;

// Rows with two or more nonzeros, each scaled to unit infinity norm.
// Singleton rows are folded into the variable bounds.
struct Presolved {
  RowMatrix rows;
  Vector rhs;
  Vector lb;
  Vector ub;
  bool infeasible = false;
};

Presolved Presolve(const LpProblem& p, double feas_tol) {
  const Eigen::Index n = p.c.size();
  Presolved out;
  out.lb = p.lb;
  out.ub = p.ub;

  std::vector<Eigen::Index> keep;
  std::vector<double> scale;
  for (Eigen::Index i = 0; i < p.A.rows(); ++i) {
    double norm = 0.0;
    Eigen::Index nonzeros = 0, last = -1;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double a = p.A(i, j);
      if (a != 0.0) {
        ++nonzeros;
        last = j;
        norm = std::max(norm, std::abs(a));
      }
    }
    if (nonzeros == 0) {
      if (p.b[i] < -feas_tol) out.infeasible = true;
      continue;
    }
    if (nonzeros == 1) {
      const double a = p.A(i, last);
      const double bound = p.b[i] / a;
      if (a > 0.0) {
        out.ub[last] = std::min(out.ub[last], bound);
      } else {
        out.lb[last] = std::max(out.lb[last], bound);
      }
      continue;
    }
    keep.push_back(i);
    scale.push_back(norm);
  }

  for (Eigen::Index j = 0; j < n; ++j) {
    if (out.lb[j] > out.ub[j]) {
      const double gap = out.lb[j] - out.ub[j];
      if (gap > feas_tol * std::max(1.0, std::abs(out.lb[j]))) {
        out.infeasible = true;
      }
      out.ub[j] = out.lb[j];
    }
  }

  out.rows.resize(static_cast<Eigen::Index>(keep.size()), n);
  out.rhs.resize(static_cast<Eigen::Index>(keep.size()));
  for (size_t r = 0; r < keep.size(); ++r) {
    out.rows.row(r) = p.A.row(keep[r]) / scale[r];
    out.rhs[r] = p.b[keep[r]] / scale[r];
  }
  return out;
}

// Constraint numbering shared by both phases:
//   [0, m)          rows          a_i . x (- t) <= rhs_i
//   [m, m+n)        lower bounds  -x_j <= -lb_j
//   [m+n, m+2n)     upper bounds   x_j <= ub_j
//   m+2n            auxiliary     -t <= 0          (phase 1 only)
//   m+2n+1+j        placeholder    x_j = 0 for a free variable; it may only
//                                 leave the active set.
class VertexSimplex {
 public:
  enum class Result { kOptimal, kUnbounded, kIterationLimit, kSingular };

  VertexSimplex(const Presolved& ps, const LpOptions& options, bool phase1)
      : ps_(ps),
        options_(options),
        m_(static_cast<int>(ps.rows.rows())),
        n_(static_cast<int>(ps.lb.size())),
        phase1_(phase1),
        dim_(n_ + (phase1 ? 1 : 0)) {}

  int dim() const { return dim_; }
  int LowerIndex(int j) const { return m_ + j; }
  int UpperIndex(int j) const { return m_ + n_ + j; }
  int AuxIndex() const { return m_ + 2 * n_; }
  int FreeIndex(int j) const { return m_ + 2 * n_ + 1 + j; }
  int NumBlocking() const { return m_ + 2 * n_ + (phase1_ ? 1 : 0); }

  bool IsFree(int c) const { return c > AuxIndex(); }

  bool Valid(int c) const {
    if (c < m_) return true;
    if (c < m_ + n_) return std::isfinite(ps_.lb[c - m_]);
    if (c < m_ + 2 * n_) return std::isfinite(ps_.ub[c - m_ - n_]);
    return c == AuxIndex() ? phase1_ : true;
  }

  double Dot(int c, const Vector& v) const {
    if (c < m_) {
      double s = ps_.rows.row(c).dot(v.head(n_));
      return phase1_ ? s - v[n_] : s;
    }
    if (c < m_ + n_) return -v[c - m_];
    if (c < m_ + 2 * n_) return v[c - m_ - n_];
    if (c == AuxIndex()) return -v[n_];
    return v[c - AuxIndex() - 1];
  }

  double Rhs(int c) const {
    if (c < m_) return ps_.rhs[c];
    if (c < m_ + n_) return -ps_.lb[c - m_];
    if (c < m_ + 2 * n_) return ps_.ub[c - m_ - n_];
    return 0.0;
  }

  void Row(int c, Vector& out) const {
    out.setZero(dim_);
    if (c < m_) {
      out.head(n_) = ps_.rows.row(c).transpose();
      if (phase1_) out[n_] = -1.0;
    } else if (c < m_ + n_) {
      out[c - m_] = -1.0;
    } else if (c < m_ + 2 * n_) {
      out[c - m_ - n_] = 1.0;
    } else if (c == AuxIndex()) {
      out[n_] = -1.0;
    } else {
      out[c - AuxIndex() - 1] = 1.0;
    }
  }

  // Rebuilds the basis inverse and snaps x onto the vertex defined by
  // `active`.
  bool Refactor(const std::vector<int>& active, Eigen::MatrixXd& binv,
                Vector& x) const {
    Eigen::MatrixXd basis(dim_, dim_);
    Vector rhs(dim_);
    Vector row;
    for (int p = 0; p < dim_; ++p) {
      Row(active[p], row);
      basis.row(p) = row.transpose();
      rhs[p] = Rhs(active[p]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(basis);
    if (!lu.isInvertible()) return false;
    binv = lu.inverse();
    x = binv * rhs;
    return true;
  }

  Result Run(const Vector& cost, std::vector<int>& active, Vector& x,
             int& iterations) const {
    Eigen::MatrixXd binv;
    if (!Refactor(active, binv, x)) return Result::kSingular;

    const int blocking = NumBlocking();
    std::vector<char> is_active(blocking, 0);
    for (int c : active) {
      if (c < blocking) is_active[c] = 1;
    }

    Vector direction(dim_), row(dim_), w(dim_), column(dim_);
    std::vector<double> gains(blocking, 0.0);
    int degenerate = 0;
    int since_refactor = 0;
    bool bland = false;

    while (true) {
      // KKT: cost + sum_p lambda_p a_p = 0.
      const Vector lambda = -(binv.transpose() * cost);
      int leave = -1;
      double best = 0.0, sign = 1.0;
      for (int p = 0; p < dim_; ++p) {
        double score, s;
        if (IsFree(active[p])) {
          score = -std::abs(lambda[p]);
          s = lambda[p] > 0.0 ? -1.0 : 1.0;
        } else {
          score = lambda[p];
          s = 1.0;
        }
        if (score >= -options_.opt_tol) continue;
        const bool take = leave < 0 ||
                          (bland ? active[p] < active[leave] : score < best);
        if (take) {
          leave = p;
          best = score;
          sign = s;
        }
      }
      if (leave < 0) return Result::kOptimal;
      if (iterations >= options_.max_iters) return Result::kIterationLimit;

      // Moving along `direction` relaxes active[leave] and keeps the rest.
      direction = -sign * binv.col(leave);
      const double threshold =
          kPivotTol * std::max(direction.lpNorm<Eigen::Infinity>(), 1e-300);

      double step = kInf;
      for (int c = 0; c < blocking; ++c) {
        gains[c] = 0.0;
        if (is_active[c] || !Valid(c)) continue;
        const double g = Dot(c, direction);
        if (g <= threshold) continue;
        gains[c] = g;
        const double slack = std::max(Rhs(c) - Dot(c, x), 0.0);
        step = std::min(step, slack / g);
      }
      if (!std::isfinite(step)) return Result::kUnbounded;

      const double window = step + kTieTol * (1.0 + step);
      int enter = -1;
      for (int c = 0; c < blocking; ++c) {
        if (gains[c] <= 0.0) continue;
        const double slack = std::max(Rhs(c) - Dot(c, x), 0.0);
        if (slack / gains[c] > window) continue;
        // Bland: smallest index, which is the first hit. Otherwise prefer
        // the largest pivot for stability.
        if (enter < 0 || (!bland && gains[c] > gains[enter])) enter = c;
      }

      x += step * direction;
      Row(enter, row);
      w = binv.transpose() * row;
      const double pivot = w[leave];
      column = binv.col(leave);
      w[leave] -= 1.0;
      binv.noalias() -= column * (w.transpose() / pivot);

      if (active[leave] < blocking) is_active[active[leave]] = 0;
      active[leave] = enter;
      is_active[enter] = 1;
      ++iterations;

      if (step * direction.lpNorm<Eigen::Infinity>() <= 1e-12) {
        if (++degenerate >= options_.bland_after) bland = true;
      } else {
        degenerate = 0;
        bland = false;
      }
      if (++since_refactor >= options_.refactor_every) {
        if (!Refactor(active, binv, x)) return Result::kSingular;
        since_refactor = 0;
      }
    }
  }

 private:
  const Presolved& ps_;
  const LpOptions& options_;
  const int m_;
  const int n_;
  const bool phase1_;
  const int dim_;
};

LpStatus FromResult(VertexSimplex::Result r) {
  switch (r) {
    case VertexSimplex::Result::kOptimal:
      return LpStatus::kOptimal;
    case VertexSimplex::Result::kUnbounded:
      return LpStatus::kUnbounded;
    default:
      return LpStatus::kIterationLimit;
  }
}

}  // namespace

const char* ToString(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
    case LpStatus::kIterationLimit:
      return "iteration_limit";
  }
  return "invalid";
}

void ValidateLpProblem(const LpProblem& p) {
  const Eigen::Index n = p.c.size();
  if (p.A.rows() > 0 && p.A.cols() != n) {
    throw std::invalid_argument("A must have one column per variable");
  }
  if (p.b.size() != p.A.rows()) {
    throw std::invalid_argument("b must have one entry per row of A");
  }
  if (p.lb.size() != n || p.ub.size() != n) {
    throw std::invalid_argument("lb and ub must have one entry per variable");
  }
  if (!p.c.allFinite() || !p.A.allFinite() || !p.b.allFinite()) {
    throw std::invalid_argument("c, A and b must be finite");
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::isnan(p.lb[j]) || std::isnan(p.ub[j]) || p.lb[j] == kInf ||
        p.ub[j] == -kInf || p.lb[j] > p.ub[j]) {
      throw std::invalid_argument("invalid bounds on variable " +
                                  std::to_string(j));
    }
  }
}

LpSolution SolveLp(const LpProblem& problem, const LpOptions& options) {
  ValidateLpProblem(problem);
  const int n = static_cast<int>(problem.c.size());

  LpSolution solution;
  solution.x = Vector::Zero(n);
  const Presolved ps = Presolve(problem, options.feas_tol);
  if (ps.infeasible) {
    solution.status = LpStatus::kInfeasible;
    return solution;
  }
  if (n == 0) {
    solution.status = LpStatus::kOptimal;
    return solution;
  }

  const double cost_scale = problem.c.lpNorm<Eigen::Infinity>();
  const Vector cost = cost_scale > 0.0 ? Vector(problem.c / cost_scale)
                                       : Vector(problem.c);

  // Start from the vertex where each variable sits on a finite bound (or on
  // a removable x_j = 0 placeholder when it has none).
  VertexSimplex phase2(ps, options, /*phase1=*/false);
  VertexSimplex phase1(ps, options, /*phase1=*/true);
  std::vector<int> active(n);
  Vector x(n);
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(ps.lb[j])) {
      x[j] = ps.lb[j];
      active[j] = phase2.LowerIndex(j);
    } else if (std::isfinite(ps.ub[j])) {
      x[j] = ps.ub[j];
      active[j] = phase2.UpperIndex(j);
    } else {
      x[j] = 0.0;
      active[j] = phase2.FreeIndex(j);
    }
  }

  int worst = -1;
  double violation = 0.0;
  for (Eigen::Index i = 0; i < ps.rows.rows(); ++i) {
    const double v = ps.rows.row(i).dot(x) - ps.rhs[i];
    if (v > violation) {
      violation = v;
      worst = static_cast<int>(i);
    }
  }

  int iterations = 0;
  if (violation > options.feas_tol) {
    // Phase 1: minimize t subject to A x - t <= b over the bounds.
    Vector x1(n + 1);
    x1 << x, violation;
    std::vector<int> active1 = active;
    active1.push_back(worst);
    Vector cost1 = Vector::Zero(n + 1);
    cost1[n] = 1.0;

    const VertexSimplex::Result r =
        phase1.Run(cost1, active1, x1, iterations);
    if (r != VertexSimplex::Result::kOptimal) {
      solution.status = LpStatus::kIterationLimit;
      solution.iterations = iterations;
      return solution;
    }
    if (x1[n] > options.feas_tol) {
      solution.status = LpStatus::kInfeasible;
      solution.iterations = iterations;
      return solution;
    }

    // Bring -t <= 0 into the active set, then drop it; the remaining n
    // constraints define a vertex of the original polytope.
    const int aux = phase1.AuxIndex();
    auto it = std::find(active1.begin(), active1.end(), aux);
    if (it == active1.end()) {
      Eigen::MatrixXd binv;
      Vector scratch;
      if (!phase1.Refactor(active1, binv, scratch)) {
        solution.status = LpStatus::kIterationLimit;
        solution.iterations = iterations;
        return solution;
      }
      Eigen::Index slot = 0;
      binv.row(n).cwiseAbs().maxCoeff(&slot);
      active1[slot] = aux;
      it = active1.begin() + slot;
    }
    active1.erase(it);
    active = active1;
  }

  const VertexSimplex::Result r = phase2.Run(cost, active, x, iterations);
  solution.iterations = iterations;
  solution.status = FromResult(r);
  if (solution.status != LpStatus::kOptimal) return solution;

  for (int j = 0; j < n; ++j) {
    x[j] = std::clamp(x[j], ps.lb[j], ps.ub[j]);
  }
  solution.x = x;
  solution.objective = problem.c.dot(x);
  return solution;
}

}  // namespace totp3
