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

// Simulation studies: data generation, the uniform-consistency experiment,
// k-fold cross-entropy and covariate-subset selection.
//
// Replicates and folds run on a small thread pool. Each task owns a derived
// Philox sub-stream and writes to its own slot, so results do not depend on
// the thread count.

#ifndef PLUSDC_CORE_EXPERIMENTS_H_
#define PLUSDC_CORE_EXPERIMENTS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "core/estimate.h"
#include "core/hypergraph.h"
#include "core/model.h"
#include "core/randgraph.h"
#include "core/rng.h"

namespace plusdc {

// f(t; a, lambda) = exp(-lambda (t - a)^2).
double RbfCovariate(double t, double a, double lambda);

// Runs fn(i) for i in [0, count) on up to `threads` workers (0 = hardware).
void ParallelFor(int count, int threads, const std::function<void(int)>& fn);
int ResolveThreads(int threads);

struct SimulationSpec {
  int num_covariates = 3;
  Eigen::VectorXd v_star;  // length num_covariates
  // Uniform[-half_width, half_width], then centered.
  double u_half_width = 0.5;
};

struct SimulatedData {
  Dataset data;
  Params truth;
};

// Covariates i.i.d. N(0, 1) per object per comparison, outcomes sampled from
// the model.
SimulatedData SimulateData(const Hypergraph& graph, const SimulationSpec& spec,
                           Philox& rng);

struct ConsistencySpec {
  DesignKind design = DesignKind::kNurhm6;
  std::vector<int> n_list;
  int reps = 1;
  Eigen::VectorXd v_star = (Eigen::VectorXd(3) << 1.0, -0.5, 0.0).finished();
  std::uint64_t seed = 0;
  int threads = 0;
  FitConfig fit;
};

struct ConsistencyRow {
  int n = 0;
  int rep = 0;
  std::int64_t num_edges = 0;
  bool ok = false;
  std::string status;  // exists / nonexistent / undetermined / error text
  double err_u_inf = 0.0;
  double err_v_inf = 0.0;
  int outer_iters = 0;
  double seconds = 0.0;
};

struct ConsistencySummary {
  int n = 0;
  std::int64_t num_edges = 0;
  int ok = 0;
  int failed = 0;
  double mean_err_u = 0.0;
  double sd_err_u = 0.0;  // sample standard deviation (reps - 1)
  double mean_err_v = 0.0;
  double sd_err_v = 0.0;
};

struct ConsistencyReport {
  std::vector<ConsistencyRow> rows;
  std::vector<ConsistencySummary> summary;
};

void ValidateConsistencySpec(const ConsistencySpec& spec);
ConsistencyReport RunConsistency(const ConsistencySpec& spec);

// Replicate stream: Philox(seed, 0).Substream(MixSeed(n, rep)).
Philox ReplicateStream(std::uint64_t seed, int n, int rep);

enum class CvMode { kTop1, kTop3, kFull };
std::string CvModeName(CvMode mode);
std::optional<CvMode> ParseCvMode(const std::string& name);

// Mean of -log P over the comparisons: the top observation, the top three,
// or the full ranking.
double CrossEntropy(const Params& theta, const Dataset& data,
                    std::span<const int> indices, CvMode mode);

struct CvSpec {
  int k = 10;
  std::vector<CvMode> modes{CvMode::kTop1, CvMode::kTop3, CvMode::kFull};
  std::uint64_t seed = 0;
  bool include_pl = true;  // also fit the covariate-free model per fold
  int max_retries = 20;
  int threads = 0;
  FitConfig fit;
};

struct CvRow {
  std::string model;  // "plusdc" or "pl"
  int fold = 0;
  std::string mode;
  double cross_entropy = 0.0;
  int num_test = 0;
  std::string existence;
};

struct CvReport {
  std::vector<CvRow> rows;
  std::vector<std::vector<int>> folds;  // comparison indices per fold
  int attempts = 0;
};

// Random partition into k folds of size floor(N / k), the last one taking
// the remainder. Partitions whose training part misses an object are redrawn
// up to max_retries times.
std::vector<std::vector<int>> MakeFolds(const Dataset& data, int k,
                                        int max_retries, Philox& rng,
                                        int* attempts);
CvReport RunKfoldCv(const Dataset& data, const CvSpec& spec);

// Keeps only the listed covariate columns.
Dataset SelectCovariates(const Dataset& data, const std::vector<int>& columns);
Dataset Subset(const Dataset& data, std::span<const int> indices);

struct SelectionRow {
  std::vector<int> subset;  // 0-based covariate indices
  InformationCriteria criteria;
  std::string existence;
  bool converged = false;
  bool ranked = false;
  int rank = 0;  // 1-based position by BIC among ranked rows
};

// All 2^d subsets for d <= 12.
std::vector<std::vector<int>> AllSubsets(int d);
// Rows come back ranked rows first, sorted by BIC.
std::vector<SelectionRow> ModelSelection(
    const Dataset& data, const std::vector<std::vector<int>>& subsets,
    const FitConfig& fit, int threads = 0);

}  // namespace plusdc

#endif  // PLUSDC_CORE_EXPERIMENTS_H_
