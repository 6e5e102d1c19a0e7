// Copyright 2026 The PlusDC Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "core/lp.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "core/error.h"

namespace plusdc {
namespace {

// Pivots between reinversions, which rebuild the tableau from the original
// rows so rounding does not accumulate.
constexpr int kReinvertEvery = 50;

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class Tableau {
 public:
  Tableau(int rows, int cols) : t_(rows + 1, cols + 1) { t_.setZero(); }

  int rows() const { return static_cast<int>(t_.rows()) - 1; }
  int cols() const { return static_cast<int>(t_.cols()) - 1; }
  double& at(int i, int j) { return t_(i, j); }
  double rhs(int i) const { return t_(i, cols()); }
  double& rhs(int i) { return t_(i, cols()); }
  // Objective row (reduced costs) lives in the last row.
  double& cost(int j) { return t_(rows(), j); }
  double value() const { return t_(rows(), cols()); }

  // Snapshot of the constraint rows, taken once they are filled in.
  void Freeze() { original_ = t_.topRows(rows()); }

  void Pivot(int r, int c) {
    t_.row(r) /= t_(r, c);
    for (int i = 0; i <= rows(); ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
  }

  // Sets the objective row to c_B^T T - c for the current basis.
  void SetObjective(const Eigen::VectorXd& c, const std::vector<int>& basis) {
    t_.row(rows()).setZero();
    t_.row(rows()).head(cols()) = -c.transpose();
    for (int i = 0; i < rows(); ++i) {
      const double cb = c[basis[i]];
      if (cb != 0.0) t_.row(rows()) += cb * t_.row(i);
    }
  }

  // Recomputes B^{-1} [A | b] and the objective row. False if the basis
  // matrix is numerically singular.
  bool Reinvert(const Eigen::VectorXd& c, const std::vector<int>& basis) {
    const int m = rows();
    Eigen::MatrixXd b(m, m);
    for (int i = 0; i < m; ++i) b.col(i) = original_.col(basis[i]);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(b);
    if (!(lu.rcond() > 1e-13)) return false;
    const Eigen::MatrixXd fresh = lu.solve(Eigen::MatrixXd(original_));
    if (!fresh.allFinite()) return false;
    t_.topRows(m) = fresh;
    for (int i = 0; i < m; ++i) {
      t_.row(i).head(cols()).array() *=
          (t_.row(i).head(cols()).array().abs() > 1e-13).cast<double>();
    }
    SetObjective(c, basis);
    return true;
  }

 private:
  RowMatrix t_;
  RowMatrix original_;
};

// Maximizes c over the tableau. Returns kOptimal, kUnbounded,
// kIterationLimit or kNumerical.
LpStatus Iterate(Tableau* t, std::vector<int>* basis, const Eigen::VectorXd& c,
                 int entering_limit, double tol, int* pivots_left) {
  int since_reinvert = 0;
  for (;;) {
    if (since_reinvert >= kReinvertEvery) {
      if (!t->Reinvert(c, *basis)) return LpStatus::kNumerical;
      since_reinvert = 0;
    }
    int enter = -1;
    for (int j = 0; j < entering_limit; ++j) {
      if (t->cost(j) < -tol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return LpStatus::kOptimal;
    int leave = -1;
    double best = 0.0;
    for (int i = 0; i < t->rows(); ++i) {
      const double a = t->at(i, enter);
      if (a <= tol) continue;
      const double ratio = t->rhs(i) / a;
      if (leave < 0 || ratio < best - tol ||
          (ratio <= best + tol && (*basis)[i] < (*basis)[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave < 0) return LpStatus::kUnbounded;
    if ((*pivots_left)-- <= 0) return LpStatus::kIterationLimit;
    t->Pivot(leave, enter);
    (*basis)[leave] = enter;
    ++since_reinvert;
  }
}

}  // namespace

LpSolution SolveLp(const LpProblem& problem, double tolerance,
                   int max_pivots) {
  const int nx = static_cast<int>(problem.c.size());
  const int mu = static_cast<int>(problem.a_ub.rows());
  const int me = static_cast<int>(problem.a_eq.rows());
  Require(mu == 0 || problem.a_ub.cols() == nx, ErrorCode::kInput,
          "inequality matrix width mismatch");
  Require(me == 0 || problem.a_eq.cols() == nx, ErrorCode::kInput,
          "equality matrix width mismatch");
  Require(problem.b_ub.size() == mu && problem.b_eq.size() == me,
          ErrorCode::kInput, "right-hand side length mismatch");

  const int rows = mu + me;
  // Columns: x, one slack per inequality, one artificial per row.
  const int slack0 = nx;
  const int art0 = nx + mu;
  const int cols = nx + mu + rows;
  Tableau t(rows, cols);
  std::vector<int> basis(rows);
  for (int i = 0; i < rows; ++i) {
    const bool ub = i < mu;
    const double b = ub ? problem.b_ub[i] : problem.b_eq[i - mu];
    const double sign = b < 0 ? -1.0 : 1.0;
    for (int j = 0; j < nx; ++j) {
      t.at(i, j) = sign * (ub ? problem.a_ub(i, j) : problem.a_eq(i - mu, j));
    }
    if (ub) t.at(i, slack0 + i) = sign;
    t.rhs(i) = sign * b;
    if (ub && sign > 0) {
      basis[i] = slack0 + i;
    } else {
      t.at(i, art0 + i) = 1.0;
      basis[i] = art0 + i;
    }
  }

  t.Freeze();

  int pivots_left = max_pivots;
  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(cols);
  for (int i = 0; i < rows; ++i) {
    if (basis[i] >= art0) phase1[basis[i]] = -1.0;
  }
  t.SetObjective(phase1, basis);
  LpSolution solution;
  auto status = Iterate(&t, &basis, phase1, cols, tolerance, &pivots_left);
  if (status != LpStatus::kOptimal) {
    solution.status = status;
    return solution;
  }
  if (t.value() < -tolerance) {
    solution.status = LpStatus::kInfeasible;
    return solution;
  }
  // Drive remaining artificials out of the basis where possible, on a freshly
  // reinverted tableau and the largest available pivot.
  if (!t.Reinvert(phase1, basis)) {
    solution.status = LpStatus::kNumerical;
    return solution;
  }
  for (int i = 0; i < rows; ++i) {
    if (basis[i] < art0) continue;
    int best = -1;
    for (int j = 0; j < art0; ++j) {
      if (std::abs(t.at(i, j)) > tolerance &&
          (best < 0 || std::abs(t.at(i, j)) > std::abs(t.at(i, best)))) {
        best = j;
      }
    }
    if (best >= 0) {
      t.Pivot(i, best);
      basis[i] = best;
    }
  }

  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(cols);
  phase2.head(nx) = problem.c;
  if (!t.Reinvert(phase2, basis)) {
    solution.status = LpStatus::kNumerical;
    return solution;
  }
  status = Iterate(&t, &basis, phase2, art0, tolerance, &pivots_left);
  if (status == LpStatus::kOptimal && !t.Reinvert(phase2, basis)) {
    status = LpStatus::kNumerical;
  }
  solution.status = status;
  if (status != LpStatus::kOptimal) return solution;
  solution.x = Eigen::VectorXd::Zero(nx);
  for (int i = 0; i < rows; ++i) {
    if (basis[i] < nx) solution.x[basis[i]] = t.rhs(i);
  }
  solution.objective = problem.c.dot(solution.x);

  // Accept only a point that satisfies the original constraints.
  double scale = 1.0;
  if (mu > 0) scale = std::max(scale, problem.b_ub.cwiseAbs().maxCoeff());
  if (me > 0) scale = std::max(scale, problem.b_eq.cwiseAbs().maxCoeff());
  const double feas = 1e-7 * scale;
  bool ok = nx == 0 || solution.x.minCoeff() >= -feas;
  if (mu > 0) {
    ok = ok && (problem.a_ub * solution.x - problem.b_ub).maxCoeff() <= feas;
  }
  if (me > 0) {
    const Eigen::VectorXd residual = problem.a_eq * solution.x - problem.b_eq;
    ok = ok && residual.cwiseAbs().maxCoeff() <= feas;
  }
  if (!ok) solution.status = LpStatus::kNumerical;
  return solution;
}

}  // namespace plusdc
