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

#include "core/estimate.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "core/error.h"
#include "core/logsumexp.h"
#include "core/lp.h"

namespace plusdc {
namespace {

// Relative slack for the monotonicity assertion.
constexpr double kMonotoneSlack = 1e-12;
// Drift-based nonexistence test.
constexpr double kMinDrift = 1e-3;
constexpr double kConeSlack = 1e-4;
constexpr int kFirstDriftCheck = 32;
// Above this many unknowns the flat-direction check and the final joint
// Newton polish are skipped.
constexpr int kFlatCheckLimit = 2000;
constexpr int kMaxPolishSteps = 10;
constexpr double kPolishTolerance = 1e-12;
// Dense LP tableau size cap (entries).
constexpr double kLpEntryLimit = 5e7;

bool IsPowerOfTwo(int x) { return x > 0 && (x & (x - 1)) == 0; }

bool Decreased(double before, double after) {
  return after < before - kMonotoneSlack * std::max(1.0, std::abs(before));
}

void Center(Eigen::VectorXd* u) { u->array() -= u->mean(); }

// Consecutive-rank rows of Z: (e_loser - e_winner, x_loser - x_winner).
struct ConeRows {
  std::vector<std::pair<int, int>> objects;  // (winner, loser)
  Eigen::MatrixXd covariates;                // x_loser - x_winner
};

ConeRows BuildConeRows(const Dataset& data) {
  ConeRows rows;
  int total = 0;
  for (const auto& c : data.comparisons) total += c.size() - 1;
  rows.objects.reserve(total);
  rows.covariates.resize(total, data.num_covariates);
  int r = 0;
  for (const auto& c : data.comparisons) {
    for (int j = 0; j + 1 < c.size(); ++j, ++r) {
      const int w = c.ranking[j], l = c.ranking[j + 1];
      rows.objects.emplace_back(c.edge[w], c.edge[l]);
      rows.covariates.row(r) = c.covariates.row(l) - c.covariates.row(w);
    }
  }
  return rows;
}

Eigen::VectorXd ConeValues(const ConeRows& rows, const Eigen::VectorXd& theta,
                           int n) {
  const int d = static_cast<int>(theta.size()) - n;
  Eigen::VectorXd values(static_cast<Eigen::Index>(rows.objects.size()));
  for (std::size_t r = 0; r < rows.objects.size(); ++r) {
    const auto [w, l] = rows.objects[r];
    values[static_cast<Eigen::Index>(r)] = theta[l] - theta[w];
  }
  if (d > 0) values.noalias() += rows.covariates * theta.tail(d);
  return values;
}

// Projects a near-recession direction onto the face where its nearly active
// rows are exactly zero, so the witness satisfies Z theta <= 0 tightly.
Eigen::VectorXd RefineWitness(const Eigen::VectorXd& direction,
                              const Dataset& data) {
  const int n = data.num_objects;
  const int p = static_cast<int>(direction.size());
  const ConeRows rows = BuildConeRows(data);
  const Eigen::VectorXd values = ConeValues(rows, direction, n);
  std::vector<int> active;
  for (Eigen::Index r = 0; r < values.size(); ++r) {
    if (values[r] > -kMinDrift) active.push_back(static_cast<int>(r));
  }
  if (p > kFlatCheckLimit ||
      static_cast<double>(active.size() + 1) * p > kLpEntryLimit) {
    return direction;
  }
  const int d = p - n;
  Eigen::MatrixXd bt = Eigen::MatrixXd::Zero(p, active.size() + 1);
  for (std::size_t a = 0; a < active.size(); ++a) {
    const auto [w, l] = rows.objects[active[a]];
    bt(l, a) += 1.0;
    bt(w, a) -= 1.0;
    if (d > 0) bt.col(a).tail(d) = rows.covariates.row(active[a]).transpose();
  }
  bt.col(active.size()).head(n).setOnes();
  const Eigen::VectorXd y =
      bt.completeOrthogonalDecomposition().solve(direction);
  Eigen::VectorXd refined = direction - bt * y;
  const double scale = refined.cwiseAbs().maxCoeff();
  if (scale < kMinDrift) return direction;
  refined /= scale;
  if (ConeValues(rows, refined, n).maxCoeff() > 1e-9) return direction;
  return refined;
}

// Nonexistence certificate from the drift between two iterates.
std::optional<Eigen::VectorXd> DriftCertificate(const Eigen::VectorXd& now,
                                                const Eigen::VectorXd& anchor,
                                                const Dataset& data) {
  const int n = data.num_objects;
  Eigen::VectorXd delta = now - anchor;
  Eigen::VectorXd u = delta.head(n);
  Center(&u);
  delta.head(n) = u;
  const double scale = delta.cwiseAbs().maxCoeff();
  if (scale < kMinDrift) return std::nullopt;
  delta /= scale;
  if (MaxConeViolation(delta, data) > kConeSlack) return std::nullopt;
  return RefineWitness(delta, data);
}

// Nonzero direction with Z theta = 0 when the Hessian is singular on the
// centered subspace.
std::optional<Eigen::VectorXd> FlatDirection(const Params& theta,
                                             const Dataset& data) {
  const int n = data.num_objects;
  const int p = theta.size();
  if (p > kFlatCheckLimit) return std::nullopt;
  Eigen::MatrixXd m = -Hessian(theta, data) / data.size();
  const double scale = std::max(m.diagonal().maxCoeff(), 1e-300);
  const double inv_n = 1.0 / n;
  m.topLeftCorner(n, n).array() += scale * inv_n;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  if (eig.info() != Eigen::Success) return std::nullopt;
  if (eig.eigenvalues()[0] > 1e-9 * scale) return std::nullopt;
  Eigen::VectorXd w = eig.eigenvectors().col(0);
  Eigen::VectorXd u = w.head(n);
  Center(&u);
  w.head(n) = u;
  return w / w.cwiseAbs().maxCoeff();
}

// Joint Newton steps on the centered subspace, each halved until l does not
// decrease. The gauge direction e = (1, 0) / sqrt(n) is a null vector of H,
// so adding c e e' makes the system definite without moving the solution off
// 1'u = 0. Returns the number of accepted steps.
int PolishJoint(const Dataset& data, Params* theta, double* loglik,
                const std::function<void(double)>& record) {
  const int n = data.num_objects;
  const int p = theta->size();
  if (p > kFlatCheckLimit) return 0;
  const double count = static_cast<double>(data.size());
  int steps = 0;
  for (; steps < kMaxPolishSteps; ++steps) {
    const Eigen::VectorXd g = Gradient(*theta, data) / count;
    if (g.cwiseAbs().maxCoeff() <= kPolishTolerance) break;
    Eigen::MatrixXd a = -Hessian(*theta, data) / count;
    const double c = std::max(a.trace() / p, 1e-300);
    a.topLeftCorner(n, n).array() += c / n;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) break;
    Eigen::VectorXd step = ldlt.solve(g);
    step.head(n).array() -= step.head(n).mean();
    const Eigen::VectorXd x = theta->Stacked();
    bool accepted = false;
    double nu = 1.0;
    for (int halving = 0; halving <= 40; ++halving, nu *= 0.5) {
      const Params trial = Params::FromStacked(x + nu * step, n);
      const double value = LogLikelihood(trial, data, true);
      if (value >= *loglik) {
        *theta = trial;
        *loglik = value;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    record(*loglik);
  }
  return steps;
}

}  // namespace

std::optional<ExistenceCheck> ParseExistenceCheck(const std::string& name) {
  if (name == "off") return ExistenceCheck::kOff;
  if (name == "divergence") return ExistenceCheck::kDivergence;
  if (name == "lp") return ExistenceCheck::kLp;
  return std::nullopt;
}

std::string ExistenceCheckName(ExistenceCheck check) {
  switch (check) {
    case ExistenceCheck::kOff:
      return "off";
    case ExistenceCheck::kDivergence:
      return "divergence";
    case ExistenceCheck::kLp:
      return "lp";
  }
  return "off";
}

std::string ExistenceName(Existence existence) {
  switch (existence) {
    case Existence::kExists:
      return "exists";
    case Existence::kNonexistent:
      return "nonexistent";
    case Existence::kUndetermined:
      return "undetermined";
  }
  return "undetermined";
}

void ValidateFitConfig(const FitConfig& config) {
  Require(config.epsilon > 0 && config.inner_u_tol > 0 &&
              config.inner_v_tol > 0,
          ErrorCode::kInput, "tolerances must be positive");
  Require(config.max_outer >= 1 && config.inner_u_max >= 1 &&
              config.inner_v_max >= 1,
          ErrorCode::kInput, "iteration caps must be positive");
  Require(config.step_size > 0 && config.step_size <= 1, ErrorCode::kInput,
          "step size must lie in (0, 1]");
}

Eigen::VectorXd MmUpdateURaw(const Params& theta, const Dataset& data,
                             double* loglik) {
  const int n = static_cast<int>(theta.u.size());
  Eigen::VectorXd denom = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd degree = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd ranked, tail;
  double total = 0.0;
  for (const auto& c : data.comparisons) {
    RankedSuffix(Scores(theta, c), c.ranking, &ranked, &tail);
    const int m = c.size();
    double acc = kNegInf;
    for (int r = 0; r < m; ++r) {
      acc = LogAddExp(acc, -tail[r]);
      const int k = c.edge[c.ranking[r]];
      // exp(s_r) sum_{j <= r} 1 / D_j; the factor exp(u_k) is restored below.
      denom[k] += std::exp(ranked[r] + acc);
      degree[k] += 1.0;
      if (r + 1 < m) total += ranked[r] - tail[r];
    }
  }
  if (loglik != nullptr) *loglik = total;
  Eigen::VectorXd out(n);
  for (int k = 0; k < n; ++k) {
    Require(degree[k] > 0, ErrorCode::kDomain,
            "object " + std::to_string(k + 1) + " appears in no comparison");
    out[k] = theta.u[k] + std::log(degree[k]) - std::log(denom[k]);
  }
  return out;
}

Eigen::VectorXd MmUpdateU(const Params& theta, const Dataset& data,
                          double* loglik) {
  Eigen::VectorXd u = MmUpdateURaw(theta, data, loglik);
  Center(&u);
  return u;
}

double MinorizerQ(const Eigen::VectorXd& u, const Eigen::VectorXd& u_ref,
                  const Eigen::VectorXd& v, const Dataset& data) {
  const Params at{u, v};
  const Params ref{u_ref, v};
  Eigen::VectorXd ranked, tail, ranked_ref, tail_ref;
  double total = 0.0;
  for (const auto& c : data.comparisons) {
    RankedSuffix(Scores(at, c), c.ranking, &ranked, &tail);
    RankedSuffix(Scores(ref, c), c.ranking, &ranked_ref, &tail_ref);
    for (int j = 0; j < c.size(); ++j) {
      total += ranked[j] - tail_ref[j] + 1.0 - std::exp(tail[j] - tail_ref[j]);
    }
  }
  return total;
}

Eigen::VectorXd NewtonUpdateV(const Params& theta, const Dataset& data,
                              double nu) {
  const int d = static_cast<int>(theta.v.size());
  if (d == 0) return theta.v;
  Eigen::VectorXd g;
  Eigen::MatrixXd h;
  VBlockDerivatives(theta, data, &g, &h);
  Eigen::MatrixXd neg = -h;
  Eigen::LLT<Eigen::MatrixXd> llt(neg);
  const double trace = neg.trace();
  const double smallest =
      neg.selfadjointView<Eigen::Lower>().eigenvalues().minCoeff();
  if (llt.info() != Eigen::Success ||
      smallest <= 1e-12 * std::max(trace, 1e-300)) {
    neg.diagonal().array() += 1e-8 * std::max(trace, 1e-300) / d;
    llt.compute(neg);
    Require(llt.info() == Eigen::Success, ErrorCode::kNumeric,
            "v-block Hessian is singular after regularization (trace " +
                std::to_string(trace) + ")");
  }
  return theta.v + nu * llt.solve(g);
}

double MaxConeViolation(const Eigen::VectorXd& theta, const Dataset& data) {
  const ConeRows rows = BuildConeRows(data);
  if (rows.objects.empty()) return 0.0;
  return ConeValues(rows, theta, data.num_objects).maxCoeff();
}

FitResult Fit(const Dataset& data, const FitConfig& config) {
  ValidateDataset(data, true);
  ValidateFitConfig(config);
  Require(data.size() >= 1, ErrorCode::kInput, "no comparisons to fit");
  const int n = data.num_objects;
  const int d = data.num_covariates;
  const double count = static_cast<double>(data.size());
  {
    const auto degrees = GraphOf(data).Degrees();
    for (int k = 0; k < n; ++k) {
      Require(degrees[k] > 0, ErrorCode::kDomain,
              "object " + std::to_string(k + 1) +
                  " appears in no comparison; its utility is not estimable");
    }
  }

  FitResult result;
  result.num_comparisons = data.size();
  Params theta = Params::Zero(n, d);
  if (config.init) {
    Require(config.init->u.size() == n && config.init->v.size() == d,
            ErrorCode::kInput, "initial parameters have the wrong shape");
    theta = *config.init;
    Center(&theta.u);
  }

  std::optional<ExistenceReport> lp_report;
  bool watch_divergence = config.existence_check == ExistenceCheck::kDivergence;
  if (config.existence_check == ExistenceCheck::kLp) {
    lp_report = CheckMleExistence(data);
    // Still stop early on divergence so the iterate is reported quickly.
    watch_divergence = lp_report->status != Existence::kExists;
  }

  const double norm_cap = 30.0 + 10.0 * std::log(static_cast<double>(n));
  std::map<int, Eigen::VectorXd> checkpoints;
  checkpoints[0] = theta.Stacked();
  double loglik = LogLikelihood(theta, data, true);
  result.loglik_trace.push_back(loglik);
  double last_recorded = loglik;
  auto record = [&](double value) {
    if (Decreased(last_recorded, value)) result.monotone = false;
    last_recorded = value;
    if (config.record_inner_trace) result.inner_trace.push_back(value);
  };
  if (config.record_inner_trace) result.inner_trace.push_back(loglik);

  std::optional<ExistenceReport> divergence;
  auto check_drift = [&](int iteration) {
    if (iteration < 2) return;
    int anchor = 1;
    while (anchor * 2 <= iteration / 2) anchor *= 2;
    const auto witness =
        DriftCertificate(theta.Stacked(), checkpoints[anchor], data);
    if (witness) {
      divergence = ExistenceReport{
          Existence::kNonexistent, *witness,
          "iterates drift along a recession direction of the likelihood "
          "(outer iterations " +
              std::to_string(anchor) + " to " + std::to_string(iteration) +
              ")"};
    }
  };

  for (int outer = 1; outer <= config.max_outer; ++outer) {
    for (int it = 0; it < config.inner_u_max; ++it) {
      double at_input = 0.0;
      Eigen::VectorXd u_next = MmUpdateU(theta, data, &at_input);
      if (it > 0) record(at_input / count);
      const double change = (u_next - theta.u).cwiseAbs().maxCoeff();
      theta.u = std::move(u_next);
      ++result.mm_steps;
      if (change <= config.inner_u_tol) break;
    }
    double current = LogLikelihood(theta, data, true);
    record(current);

    if (d > 0) {
      for (int it = 0; it < config.inner_v_max; ++it) {
        Eigen::VectorXd g;
        Eigen::MatrixXd h;
        VBlockDerivatives(theta, data, &g, &h);
        if (g.cwiseAbs().maxCoeff() / count <= config.inner_v_tol) break;
        const Eigen::VectorXd target = NewtonUpdateV(theta, data, 1.0);
        const Eigen::VectorXd step = target - theta.v;
        double nu = config.step_size;
        bool accepted = false;
        for (int halving = 0; halving <= 40; ++halving) {
          Params trial{theta.u, theta.v + nu * step};
          const double value = LogLikelihood(trial, data, true);
          if (!Decreased(current, value)) {
            theta.v = trial.v;
            current = value;
            accepted = true;
            break;
          }
          nu *= 0.5;
          ++result.step_halvings;
        }
        ++result.newton_steps;
        if (!accepted) break;
        record(current);
      }
    }

    result.loglik_trace.push_back(current);
    const double gain = current - loglik;
    loglik = current;
    result.outer_iters = outer;
    if (IsPowerOfTwo(outer)) checkpoints[outer] = theta.Stacked();

    if (watch_divergence) {
      if (theta.Stacked().cwiseAbs().maxCoeff() > norm_cap) {
        check_drift(outer);
        if (!divergence) {
          Eigen::VectorXd direction = theta.Stacked();
          direction /= direction.cwiseAbs().maxCoeff();
          divergence = ExistenceReport{
              Existence::kNonexistent, RefineWitness(direction, data),
              "||theta||_inf exceeded " + std::to_string(norm_cap)};
        }
      } else if (outer >= kFirstDriftCheck && IsPowerOfTwo(outer)) {
        check_drift(outer);
      }
      if (divergence) break;
    }
    if (gain <= config.epsilon) {
      result.converged = true;
      break;
    }
  }

  if (watch_divergence && !divergence && result.converged &&
      result.outer_iters >= 4) {
    check_drift(result.outer_iters);
  }
  // Early convergence can hide a divergence that Newton on v already
  // followed to a flat region; test the drift from the initial point.
  if (watch_divergence && !divergence && result.converged) {
    const auto witness =
        DriftCertificate(theta.Stacked(), checkpoints[0], data);
    if (witness && MaxConeViolation(*witness, data) <= 1e-9) {
      divergence = ExistenceReport{
          Existence::kNonexistent, *witness,
          "iterates drift along a recession direction of the likelihood "
          "(from the initial point)"};
    }
  }

  if (lp_report) {
    result.existence = *lp_report;
  } else if (divergence) {
    result.existence = *divergence;
  } else if (config.existence_check == ExistenceCheck::kOff) {
    result.existence = {Existence::kUndetermined, std::nullopt,
                        "existence check disabled"};
  } else if (result.converged) {
    if (const auto flat = FlatDirection(theta, data)) {
      result.existence = {Existence::kNonexistent, *flat,
                          "likelihood is flat along a nonzero centered "
                          "direction (model not identifiable)"};
    } else {
      result.existence = {Existence::kExists, std::nullopt,
                          "converged with no recession direction detected"};
    }
  } else {
    result.existence = {Existence::kUndetermined, std::nullopt,
                        "no convergence within max_outer"};
  }
  if (result.existence.status == Existence::kNonexistent) {
    result.converged = false;
  }
  if (result.converged && result.existence.status == Existence::kExists) {
    double value = LogLikelihood(theta, data, true);
    result.polish_steps = PolishJoint(data, &theta, &value, record);
    if (result.polish_steps > 0) result.loglik_trace.push_back(value);
  }

  result.theta = theta;
  result.gradient_norm =
      Gradient(theta, data).cwiseAbs().maxCoeff() / count;
  return result;
}

ExistenceReport CheckMleExistence(const Dataset& data) {
  ValidateDataset(data, true);
  const int n = data.num_objects;
  const int d = data.num_covariates;
  const int p = n + d;
  const ConeRows rows = BuildConeRows(data);

  // Deduplicate cone rows.
  std::set<std::vector<double>> seen;
  std::vector<Eigen::VectorXd> unique;
  for (std::size_t r = 0; r < rows.objects.size(); ++r) {
    Eigen::VectorXd z = Eigen::VectorXd::Zero(p);
    z[rows.objects[r].second] += 1.0;
    z[rows.objects[r].first] -= 1.0;
    if (d > 0) {
      z.tail(d) = rows.covariates.row(static_cast<Eigen::Index>(r)).transpose();
    }
    if (seen.insert(std::vector<double>(z.data(), z.data() + p)).second) {
      unique.push_back(z);
    }
  }
  const int m_ub = static_cast<int>(unique.size()) + p;
  if (static_cast<double>(m_ub + 1) * (p + 2.0 * m_ub + 1) > kLpEntryLimit) {
    return {Existence::kUndetermined, std::nullopt,
            "cone program too large for the dense LP solver"};
  }

  // theta = y - 1 with 0 <= y <= 2.
  LpProblem lp;
  lp.a_ub = Eigen::MatrixXd::Zero(m_ub, p);
  lp.b_ub = Eigen::VectorXd::Zero(m_ub);
  for (std::size_t r = 0; r < unique.size(); ++r) {
    lp.a_ub.row(static_cast<Eigen::Index>(r)) = unique[r].transpose();
    lp.b_ub[static_cast<Eigen::Index>(r)] = unique[r].sum();
  }
  for (int k = 0; k < p; ++k) {
    lp.a_ub(static_cast<Eigen::Index>(unique.size()) + k, k) = 1.0;
    lp.b_ub[static_cast<Eigen::Index>(unique.size()) + k] = 2.0;
  }
  lp.a_eq = Eigen::MatrixXd::Zero(1, p);
  lp.a_eq.row(0).head(n).setOnes();
  lp.b_eq = Eigen::VectorXd::Constant(1, n);

  // Maximize the total slack -1'Z theta over the boxed cone. A positive
  // optimum is a strict recession direction; a zero optimum leaves only
  // directions with Z theta = 0, settled by a rank check.
  Eigen::MatrixXd z(static_cast<Eigen::Index>(unique.size()), p);
  for (std::size_t r = 0; r < unique.size(); ++r) {
    z.row(static_cast<Eigen::Index>(r)) = unique[r].transpose();
  }
  lp.c = -z.colwise().sum().transpose();
  const LpSolution sol = SolveLp(lp);
  if (sol.status != LpStatus::kOptimal) {
    return {Existence::kUndetermined, std::nullopt,
            "LP solver did not reach an optimum"};
  }
  // Objective is c'(theta + 1).
  const double optimum = sol.objective - lp.c.sum();
  if (optimum > 1e-9) {
    const Eigen::VectorXd theta = sol.x.array() - 1.0;
    return {Existence::kNonexistent, RefineWitness(theta, data),
            "cone contains a direction with total slack " +
                std::to_string(optimum)};
  }
  Eigen::MatrixXd constraint(z.rows() + 1, p);
  constraint.topRows(z.rows()) = z;
  constraint.bottomRows(1) = lp.a_eq;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(constraint, Eigen::ComputeFullV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double threshold =
      std::max<double>(constraint.rows(), p) * sigma[0] *
      std::numeric_limits<double>::epsilon() * 1e3;
  if (sigma.size() < p || sigma[p - 1] <= threshold) {
    Eigen::VectorXd theta = svd.matrixV().col(p - 1);
    return {Existence::kNonexistent, theta,
            "likelihood is flat along a nonzero direction"};
  }
  return {Existence::kExists, std::nullopt, "cone is {0}"};
}

InformationCriteria AicBic(double loglik_norm, int n, int d,
                           std::int64_t num_comparisons) {
  Require(num_comparisons >= 1, ErrorCode::kInput,
          "information criteria need N >= 1");
  InformationCriteria ic;
  ic.loglik_norm = loglik_norm;
  ic.num_params = (n - 1) + d;
  const double big_n = static_cast<double>(num_comparisons);
  ic.aic_norm = -2.0 * loglik_norm + 2.0 * ic.num_params / big_n;
  ic.bic_norm = -2.0 * loglik_norm + ic.num_params * std::log(big_n) / big_n;
  return ic;
}

InformationCriteria AicBic(const FitResult& fit, const Dataset& data) {
  return AicBic(LogLikelihood(fit.theta, data, true), data.num_objects,
                data.num_covariates, data.size());
}

}  // namespace plusdc
