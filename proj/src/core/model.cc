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

#include "core/model.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "core/error.h"
#include "core/logsumexp.h"

namespace plusdc {
namespace {

void CheckParams(const Params& theta, const Comparison& c) {
  Require(theta.v.size() == c.covariates.cols(), ErrorCode::kInput,
          "v has length " + std::to_string(theta.v.size()) +
              " but covariates have dimension " +
              std::to_string(c.covariates.cols()));
  for (int k : c.edge) {
    Require(k >= 0 && k < theta.u.size(), ErrorCode::kInput,
            "object " + std::to_string(k + 1) + " has no utility");
  }
}

void CheckPermutation(std::span<const int> ranking, int m, bool full) {
  Require(!full || static_cast<int>(ranking.size()) == m, ErrorCode::kInput,
          "ranking must list all " + std::to_string(m) + " objects");
  Require(static_cast<int>(ranking.size()) <= m, ErrorCode::kInput,
          "ranking is longer than the comparison");
  std::vector<char> seen(m, 0);
  for (int r : ranking) {
    Require(r >= 0 && r < m, ErrorCode::kInput,
            "ranking refers to a non-member of the comparison");
    Require(!seen[r], ErrorCode::kInput, "ranking repeats an object");
    seen[r] = 1;
  }
}

// Accumulates one comparison's log-likelihood, psi values (local order) and
// score Hessian (local order, optional).
double ComparisonTerms(const Eigen::VectorXd& s, std::span<const int> ranking,
                       Eigen::VectorXd* psi, Eigen::MatrixXd* score_hessian) {
  const int m = static_cast<int>(ranking.size());
  Eigen::VectorXd ranked, tail;
  RankedSuffix(s, ranking, &ranked, &tail);
  double loglik = 0.0;
  for (int j = 0; j + 1 < m; ++j) loglik += ranked[j] - tail[j];
  if (psi != nullptr) {
    psi->setZero(m);
    double acc = kNegInf;
    for (int r = 0; r < m; ++r) {
      acc = LogAddExp(acc, -tail[r]);
      (*psi)[ranking[r]] = 1.0 - std::exp(ranked[r] + acc);
    }
  }
  if (score_hessian != nullptr) {
    score_hessian->setZero(m, m);
    Eigen::VectorXd p(m);
    for (int j = 0; j + 1 < m; ++j) {
      p.setZero();
      for (int t = j; t < m; ++t) p[ranking[t]] = std::exp(ranked[t] - tail[j]);
      score_hessian->diagonal() -= p;
      score_hessian->noalias() += p * p.transpose();
    }
  }
  return loglik;
}

}  // namespace

Eigen::VectorXd Params::Stacked() const {
  Eigen::VectorXd theta(u.size() + v.size());
  theta << u, v;
  return theta;
}

Params Params::FromStacked(const Eigen::VectorXd& theta, int n) {
  return {theta.head(n), theta.tail(theta.size() - n)};
}

void ValidateDataset(const Dataset& data, bool require_outcomes) {
  Require(data.num_objects >= 1, ErrorCode::kInput,
          "dataset needs at least one object");
  Require(data.num_covariates >= 0, ErrorCode::kInput,
          "covariate dimension must be nonnegative");
  for (int i = 0; i < data.size(); ++i) {
    const auto& c = data.comparisons[i];
    const std::string where = "comparison " + std::to_string(i + 1) + ": ";
    Require(c.size() >= 2, ErrorCode::kInput,
            where + "needs at least 2 objects");
    for (int t = 0; t < c.size(); ++t) {
      Require(c.edge[t] >= 0 && c.edge[t] < data.num_objects,
              ErrorCode::kInput,
              where + "object " + std::to_string(c.edge[t] + 1) +
                  " out of range");
      Require(t == 0 || c.edge[t] > c.edge[t - 1], ErrorCode::kInput,
              where + "objects must be distinct and sorted");
    }
    Require(c.covariates.rows() == c.size() &&
                c.covariates.cols() == data.num_covariates,
            ErrorCode::kInput,
            where + "covariate block must be " + std::to_string(c.size()) +
                " x " + std::to_string(data.num_covariates));
    Require(c.covariates.allFinite(), ErrorCode::kInput,
            where + "covariates must be finite");
    if (require_outcomes) {
      Require(c.observed(), ErrorCode::kInput, where + "outcome missing");
    }
    if (c.observed()) CheckPermutation(c.ranking, c.size(), true);
  }
}

double MaxCovariateL1(const Dataset& data) {
  double worst = 0.0;
  for (const auto& c : data.comparisons) {
    if (c.covariates.size() == 0) continue;
    worst = std::max(worst, c.covariates.rowwise().lpNorm<1>().maxCoeff());
  }
  return worst;
}

Hypergraph GraphOf(const Dataset& data) {
  std::vector<std::vector<int>> edges;
  edges.reserve(data.comparisons.size());
  for (const auto& c : data.comparisons) edges.push_back(c.edge);
  return Hypergraph(data.num_objects, std::move(edges));
}

void CanonicalizeComparison(Comparison* c) {
  const int m = c->size();
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return c->edge[a] < c->edge[b]; });
  std::vector<int> where(m);
  for (int t = 0; t < m; ++t) where[order[t]] = t;
  std::vector<int> edge(m);
  Eigen::MatrixXd covariates(m, c->covariates.cols());
  for (int t = 0; t < m; ++t) {
    edge[t] = c->edge[order[t]];
    covariates.row(t) = c->covariates.row(order[t]);
  }
  for (int& r : c->ranking) r = where[r];
  c->edge = std::move(edge);
  c->covariates = std::move(covariates);
}

double Score(const Params& theta, const Comparison& c, int j) {
  CheckParams(theta, c);
  Require(j >= 0 && j < c.size(), ErrorCode::kInput,
          "local index out of range");
  return theta.u[c.edge[j]] + c.covariates.row(j).dot(theta.v);
}

Eigen::VectorXd Scores(const Params& theta, const Comparison& c) {
  CheckParams(theta, c);
  Eigen::VectorXd s = c.covariates * theta.v;
  for (int t = 0; t < c.size(); ++t) s[t] += theta.u[c.edge[t]];
  return s;
}

double LogOutcomeProb(const Params& theta, const Comparison& c,
                      std::span<const int> ranking) {
  CheckPermutation(ranking, c.size(), true);
  return ComparisonTerms(Scores(theta, c), ranking, nullptr, nullptr);
}

double OutcomeProb(const Params& theta, const Comparison& c,
                   std::span<const int> ranking) {
  return std::exp(LogOutcomeProb(theta, c, ranking));
}

double LogTopKProb(const Params& theta, const Comparison& c,
                   std::span<const int> prefix) {
  CheckPermutation(prefix, c.size(), false);
  const Eigen::VectorXd s = Scores(theta, c);
  std::vector<char> taken(c.size(), 0);
  double total = 0.0;
  for (int j : prefix) {
    double lse = kNegInf;
    for (int t = 0; t < c.size(); ++t) {
      if (!taken[t]) lse = LogAddExp(lse, s[t]);
    }
    total += s[j] - lse;
    taken[j] = 1;
  }
  return total;
}

double TopKProb(const Params& theta, const Comparison& c,
                std::span<const int> prefix) {
  return std::exp(LogTopKProb(theta, c, prefix));
}

std::vector<int> SampleOutcome(const Params& theta, const Comparison& c,
                               Philox& rng) {
  const Eigen::VectorXd s = Scores(theta, c);
  std::vector<int> remaining(c.size());
  std::iota(remaining.begin(), remaining.end(), 0);
  std::vector<int> ranking;
  ranking.reserve(c.size());
  std::vector<double> weights;
  while (remaining.size() > 1) {
    double top = kNegInf;
    for (int t : remaining) top = std::max(top, s[t]);
    weights.clear();
    double total = 0.0;
    for (int t : remaining) {
      weights.push_back(std::exp(s[t] - top));
      total += weights.back();
    }
    const double draw = rng.Uniform() * total;
    std::size_t pick = 0;
    double acc = weights[0];
    while (pick + 1 < remaining.size() && draw >= acc) acc += weights[++pick];
    ranking.push_back(remaining[pick]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  ranking.push_back(remaining[0]);
  return ranking;
}

double LogLikelihood(const Params& theta, const Dataset& data,
                     bool normalized) {
  double total = 0.0;
  for (const auto& c : data.comparisons) {
    Require(c.observed(), ErrorCode::kInput,
            "log-likelihood needs observed outcomes");
    total += ComparisonTerms(Scores(theta, c), c.ranking, nullptr, nullptr);
  }
  if (normalized && data.size() > 0) total /= data.size();
  return total;
}

Eigen::VectorXd ScoreGradient(const Params& theta, const Comparison& c) {
  Require(c.observed(), ErrorCode::kInput, "gradient needs an outcome");
  Eigen::VectorXd psi;
  ComparisonTerms(Scores(theta, c), c.ranking, &psi, nullptr);
  return psi;
}

Eigen::VectorXd Gradient(const Params& theta, const Dataset& data) {
  const int n = static_cast<int>(theta.u.size());
  const int d = static_cast<int>(theta.v.size());
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n + d);
  Eigen::VectorXd psi;
  for (const auto& c : data.comparisons) {
    Require(c.observed(), ErrorCode::kInput, "gradient needs outcomes");
    ComparisonTerms(Scores(theta, c), c.ranking, &psi, nullptr);
    for (int t = 0; t < c.size(); ++t) g[c.edge[t]] += psi[t];
    if (d > 0) g.tail(d).noalias() += c.covariates.transpose() * psi;
  }
  return g;
}

Eigen::MatrixXd Hessian(const Params& theta, const Dataset& data) {
  const int n = static_cast<int>(theta.u.size());
  const int d = static_cast<int>(theta.v.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n + d, n + d);
  Eigen::MatrixXd hs;
  for (const auto& c : data.comparisons) {
    Require(c.observed(), ErrorCode::kInput, "Hessian needs outcomes");
    ComparisonTerms(Scores(theta, c), c.ranking, nullptr, &hs);
    const int m = c.size();
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) h(c.edge[a], c.edge[b]) += hs(a, b);
    }
    if (d > 0) {
      const Eigen::MatrixXd cross = hs * c.covariates;  // m x d
      for (int a = 0; a < m; ++a) {
        h.block(c.edge[a], n, 1, d) += cross.row(a);
        h.block(n, c.edge[a], d, 1) += cross.row(a).transpose();
      }
      h.bottomRightCorner(d, d).noalias() +=
          c.covariates.transpose() * cross;
    }
  }
  return h;
}

void VBlockDerivatives(const Params& theta, const Dataset& data,
                       Eigen::VectorXd* gradient, Eigen::MatrixXd* hessian) {
  const int d = static_cast<int>(theta.v.size());
  gradient->setZero(d);
  hessian->setZero(d, d);
  Eigen::VectorXd psi;
  Eigen::MatrixXd hs;
  for (const auto& c : data.comparisons) {
    ComparisonTerms(Scores(theta, c), c.ranking, &psi, &hs);
    gradient->noalias() += c.covariates.transpose() * psi;
    hessian->noalias() += c.covariates.transpose() * hs * c.covariates;
  }
}

}  // namespace plusdc
