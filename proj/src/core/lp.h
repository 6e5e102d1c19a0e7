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

// Dense two-phase tableau simplex with Bland's anti-cycling rule. Sized for
// the small cone programs of the existence check, not for general use.

#ifndef PLUSDC_CORE_LP_H_
#define PLUSDC_CORE_LP_H_

#include <Eigen/Dense>

namespace plusdc {

// maximize c^T x  subject to  a_ub x <= b_ub,  a_eq x = b_eq,  x >= 0.
struct LpProblem {
  Eigen::VectorXd c;
  Eigen::MatrixXd a_ub;
  Eigen::VectorXd b_ub;
  Eigen::MatrixXd a_eq;
  Eigen::VectorXd b_eq;
};

// kNumerical: the final point failed verification against the original
// constraints.
enum class LpStatus {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kIterationLimit,
  kNumerical
};

struct LpSolution {
  LpStatus status = LpStatus::kIterationLimit;
  double objective = 0.0;
  Eigen::VectorXd x;
};

LpSolution SolveLp(const LpProblem& problem, double tolerance = 1e-9,
                   int max_pivots = 100000);

}  // namespace plusdc

#endif  // PLUSDC_CORE_LP_H_
