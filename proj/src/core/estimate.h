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

// Joint maximum likelihood by alternating maximization: MM sweeps for u,
// Newton steps for v, and an outer stop on the per-comparison likelihood
// gain. Also the exact cone test for existence of the MLE and normalized
// information criteria.

#ifndef PLUSDC_CORE_ESTIMATE_H_
#define PLUSDC_CORE_ESTIMATE_H_

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "core/model.h"

namespace plusdc {

enum class ExistenceCheck { kOff, kDivergence, kLp };
enum class Existence { kExists, kNonexistent, kUndetermined };

std::optional<ExistenceCheck> ParseExistenceCheck(const std::string& name);
std::string ExistenceCheckName(ExistenceCheck check);
std::string ExistenceName(Existence existence);

struct FitConfig {
  double epsilon = 1e-10;
  int max_outer = 5000;
  double inner_u_tol = 1e-8;
  int inner_u_max = 100;
  double inner_v_tol = 1e-10;  // on ||grad_v l||_inf / N
  int inner_v_max = 50;
  double step_size = 1.0;
  std::optional<Params> init;
  ExistenceCheck existence_check = ExistenceCheck::kDivergence;
  // Keep the likelihood after every MM step and Newton step.
  bool record_inner_trace = false;
};

void ValidateFitConfig(const FitConfig& config);

struct ExistenceReport {
  Existence status = Existence::kUndetermined;
  // Nonzero theta_0 = (u_0, v_0) with 1^T u_0 = 0 and Z theta_0 <= 0.
  std::optional<Eigen::VectorXd> witness;
  std::string reason;
};

struct FitResult {
  Params theta;
  std::vector<double> loglik_trace;  // normalized, one per outer iteration
  std::vector<double> inner_trace;   // normalized, when recorded
  int outer_iters = 0;
  int mm_steps = 0;
  int newton_steps = 0;
  int step_halvings = 0;
  // Joint Newton steps taken after convergence when the MLE exists.
  int polish_steps = 0;
  bool converged = false;
  bool monotone = true;
  ExistenceReport existence;
  double gradient_norm = 0.0;  // ||grad l||_inf / N at exit
  int num_comparisons = 0;
};

// One MM step for u followed by centering. When `loglik` is given it receives
// l(theta) at the input point, which the sweep computes anyway.
Eigen::VectorXd MmUpdateU(const Params& theta, const Dataset& data,
                          double* loglik = nullptr);
// The uncentered update.
Eigen::VectorXd MmUpdateURaw(const Params& theta, const Dataset& data,
                             double* loglik = nullptr);

// Q(u | u_ref, v): tangent minorizer of l(., v) at u_ref.
double MinorizerQ(const Eigen::VectorXd& u, const Eigen::VectorXd& u_ref,
                  const Eigen::VectorXd& v, const Dataset& data);

// v - nu * H_v^{-1} grad_v at theta. A ridge of 1e-8 tr(-H_v)/d is added when
// -H_v is not numerically positive definite.
Eigen::VectorXd NewtonUpdateV(const Params& theta, const Dataset& data,
                              double nu);

FitResult Fit(const Dataset& data, const FitConfig& config = {});

// Decides whether {theta : 1^T u = 0, Z theta <= 0} = {0}: one LP maximizes
// the total slack -1^T Z theta over the cone intersected with the unit box,
// and a rank test on [Z; (1, 0)] covers directions with Z theta = 0.
ExistenceReport CheckMleExistence(const Dataset& data);

// max over consecutive-rank rows of (s_loser - s_winner) evaluated at the
// direction theta.
double MaxConeViolation(const Eigen::VectorXd& theta, const Dataset& data);

struct InformationCriteria {
  double loglik_norm = 0.0;
  double aic_norm = 0.0;
  double bic_norm = 0.0;
  int num_params = 0;
};

// p = (n - 1) + d.
InformationCriteria AicBic(double loglik_norm, int n, int d,
                           std::int64_t num_comparisons);
InformationCriteria AicBic(const FitResult& fit, const Dataset& data);

}  // namespace plusdc

#endif  // PLUSDC_CORE_ESTIMATE_H_
