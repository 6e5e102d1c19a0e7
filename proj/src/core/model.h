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

// Plackett-Luce model with dynamic covariates.
//
// The log score of object k in comparison e is u_k + X_{e,k}^T v. An observed
// ranking has probability
//
//   prod_j exp(s_{pi(j)}) / sum_{t >= j} exp(s_{pi(t)}),
//
// and every suffix sum is evaluated by one reverse log-sum-exp sweep.

#ifndef PLUSDC_CORE_MODEL_H_
#define PLUSDC_CORE_MODEL_H_

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "core/hypergraph.h"
#include "core/rng.h"

namespace plusdc {

// One multiway comparison. `edge` is strictly increasing (0-based object
// ids); row t of `covariates` belongs to edge[t]. `ranking` lists local
// indices into `edge`, winner first, and is empty when unobserved.
struct Comparison {
  std::vector<int> edge;
  Eigen::MatrixXd covariates;
  std::vector<int> ranking;

  int size() const { return static_cast<int>(edge.size()); }
  bool observed() const { return !ranking.empty(); }
};

struct Params {
  Eigen::VectorXd u;
  Eigen::VectorXd v;

  static Params Zero(int n, int d) {
    return {Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(d)};
  }
  int size() const { return static_cast<int>(u.size() + v.size()); }
  // Stacked (u, v).
  Eigen::VectorXd Stacked() const;
  static Params FromStacked(const Eigen::VectorXd& theta, int n);
};

struct Dataset {
  int num_objects = 0;
  int num_covariates = 0;
  std::vector<Comparison> comparisons;

  int size() const { return static_cast<int>(comparisons.size()); }
};

inline constexpr double kDefaultCovariateBound = 50.0;

// Throws kInput on out-of-range or repeated objects, unsorted edges, edges of
// size < 2, covariate shape mismatches, non-finite covariates, or rankings
// that are not permutations. With `require_outcomes`, every comparison must
// be observed.
void ValidateDataset(const Dataset& data, bool require_outcomes);

// Largest ||X_{e,j}||_1 over all rows; compared against the bound R only to
// warn.
double MaxCovariateL1(const Dataset& data);

Hypergraph GraphOf(const Dataset& data);

// Sorts `edge` ascending and permutes covariate rows and ranking to match.
void CanonicalizeComparison(Comparison* c);

double Score(const Params& theta, const Comparison& c, int j);
Eigen::VectorXd Scores(const Params& theta, const Comparison& c);

// log P(ranking) for a full ranking given as local indices.
double LogOutcomeProb(const Params& theta, const Comparison& c,
                      std::span<const int> ranking);
double OutcomeProb(const Params& theta, const Comparison& c,
                   std::span<const int> ranking);

// Probability that `prefix` (distinct local indices) occupies the top
// positions in order. Equals OutcomeProb when the prefix is full.
double LogTopKProb(const Params& theta, const Comparison& c,
                   std::span<const int> prefix);
double TopKProb(const Params& theta, const Comparison& c,
                std::span<const int> prefix);

// Sequential choice: the next object is drawn with probability proportional
// to exp(score) among those remaining.
std::vector<int> SampleOutcome(const Params& theta, const Comparison& c,
                               Philox& rng);

// Sum over comparisons of log P(observed ranking); divided by N when
// `normalized`.
double LogLikelihood(const Params& theta, const Dataset& data,
                     bool normalized = false);

// Gradient and Hessian of the unnormalized log-likelihood in the stacked
// (u, v) coordinates.
Eigen::VectorXd Gradient(const Params& theta, const Dataset& data);
Eigen::MatrixXd Hessian(const Params& theta, const Dataset& data);

// v-block only, given the current u.
void VBlockDerivatives(const Params& theta, const Dataset& data,
                       Eigen::VectorXd* gradient, Eigen::MatrixXd* hessian);

// Per-comparison psi values in local edge order; they sum to zero.
Eigen::VectorXd ScoreGradient(const Params& theta, const Comparison& c);

}  // namespace plusdc

#endif  // PLUSDC_CORE_MODEL_H_
