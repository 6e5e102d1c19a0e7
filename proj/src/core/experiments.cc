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

#include "core/experiments.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "core/error.h"

namespace plusdc {
namespace {

double SampleSd(const std::vector<double>& x, double mean) {
  if (x.size() < 2) return 0.0;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

double Mean(const std::vector<double>& x) {
  if (x.empty()) return std::nan("");
  return std::accumulate(x.begin(), x.end(), 0.0) / x.size();
}

void Shuffle(std::vector<int>* items, Philox& rng) {
  for (std::size_t i = items->size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.UniformInt(i));
    std::swap((*items)[i - 1], (*items)[j]);
  }
}

}  // namespace

double RbfCovariate(double t, double a, double lambda) {
  Require(lambda >= 0, ErrorCode::kInput, "RBF rate must be nonnegative");
  return std::exp(-lambda * (t - a) * (t - a));
}

int ResolveThreads(int threads) {
  if (threads > 0) return threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

void ParallelFor(int count, int threads, const std::function<void(int)>& fn) {
  const int workers = std::min(ResolveThreads(threads), std::max(count, 1));
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

SimulatedData SimulateData(const Hypergraph& graph, const SimulationSpec& spec,
                           Philox& rng) {
  const int n = graph.num_vertices();
  const int d = spec.num_covariates;
  Require(d >= 0, ErrorCode::kInput, "d must be nonnegative");
  Require(spec.v_star.size() == d, ErrorCode::kInput,
          "v_star must have length d");
  Require(spec.u_half_width >= 0, ErrorCode::kInput,
          "utility half-width must be nonnegative");
  SimulatedData out;
  out.truth.u.resize(n);
  for (int k = 0; k < n; ++k) {
    out.truth.u[k] = (2.0 * rng.Uniform() - 1.0) * spec.u_half_width;
  }
  out.truth.u.array() -= out.truth.u.mean();
  out.truth.v = spec.v_star;
  out.data.num_objects = n;
  out.data.num_covariates = d;
  out.data.comparisons.reserve(graph.num_edges());
  for (const auto& e : graph.edges()) {
    Comparison c;
    c.edge = e;
    c.covariates.resize(static_cast<Eigen::Index>(e.size()), d);
    for (Eigen::Index t = 0; t < c.covariates.rows(); ++t) {
      for (int j = 0; j < d; ++j) c.covariates(t, j) = rng.Normal();
    }
    c.ranking = SampleOutcome(out.truth, c, rng);
    out.data.comparisons.push_back(std::move(c));
  }
  return out;
}

Philox ReplicateStream(std::uint64_t seed, int n, int rep) {
  return Philox(seed, 0).Substream(
      MixSeed(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(rep)));
}

void ValidateConsistencySpec(const ConsistencySpec& spec) {
  Require(!spec.n_list.empty(), ErrorCode::kInput, "n list is empty");
  Require(spec.reps >= 1, ErrorCode::kInput, "reps must be >= 1");
  for (int n : spec.n_list) {
    Require(n >= 2, ErrorCode::kInput, "every n must be >= 2");
  }
  ValidateFitConfig(spec.fit);
}

ConsistencyReport RunConsistency(const ConsistencySpec& spec) {
  ValidateConsistencySpec(spec);
  const int reps = spec.reps;
  const int tasks = static_cast<int>(spec.n_list.size()) * reps;
  ConsistencyReport report;
  report.rows.resize(tasks);
  ParallelFor(tasks, spec.threads, [&](int task) {
    const int n = spec.n_list[task / reps];
    const int rep = task % reps;
    ConsistencyRow& row = report.rows[task];
    row.n = n;
    row.rep = rep;
    const auto start = std::chrono::steady_clock::now();
    Philox rng = ReplicateStream(spec.seed, n, rep);
    row.num_edges = ExperimentEdgeCount(spec.design, n);
    const Hypergraph graph =
        SampleExperimentDesign(spec.design, n, row.num_edges, rng);
    SimulationSpec sim;
    sim.num_covariates = static_cast<int>(spec.v_star.size());
    sim.v_star = spec.v_star;
    const SimulatedData simulated = SimulateData(graph, sim, rng);
    try {
      const FitResult fit = Fit(simulated.data, spec.fit);
      row.status = ExistenceName(fit.existence.status);
      row.ok = fit.converged && fit.existence.status == Existence::kExists;
      row.outer_iters = fit.outer_iters;
      row.err_u_inf =
          (fit.theta.u - simulated.truth.u).cwiseAbs().maxCoeff();
      row.err_v_inf =
          spec.v_star.size() == 0
              ? 0.0
              : (fit.theta.v - simulated.truth.v).cwiseAbs().maxCoeff();
      if (!fit.converged && fit.existence.status == Existence::kExists) {
        row.status = "nonconverged";
      }
    } catch (const Error& e) {
      row.ok = false;
      row.status = std::string("error: ") + e.what();
    }
    row.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  });

  for (std::size_t i = 0; i < spec.n_list.size(); ++i) {
    ConsistencySummary s;
    s.n = spec.n_list[i];
    std::vector<double> eu, ev;
    for (int rep = 0; rep < reps; ++rep) {
      const auto& row = report.rows[i * reps + rep];
      s.num_edges = row.num_edges;
      if (!row.ok) {
        ++s.failed;
        continue;
      }
      ++s.ok;
      eu.push_back(row.err_u_inf);
      ev.push_back(row.err_v_inf);
    }
    s.mean_err_u = Mean(eu);
    s.mean_err_v = Mean(ev);
    s.sd_err_u = SampleSd(eu, s.mean_err_u);
    s.sd_err_v = SampleSd(ev, s.mean_err_v);
    report.summary.push_back(s);
  }
  return report;
}

std::string CvModeName(CvMode mode) {
  switch (mode) {
    case CvMode::kTop1:
      return "top1";
    case CvMode::kTop3:
      return "top3";
    case CvMode::kFull:
      return "full";
  }
  return "full";
}

std::optional<CvMode> ParseCvMode(const std::string& name) {
  if (name == "top1") return CvMode::kTop1;
  if (name == "top3") return CvMode::kTop3;
  if (name == "full") return CvMode::kFull;
  return std::nullopt;
}

double CrossEntropy(const Params& theta, const Dataset& data,
                    std::span<const int> indices, CvMode mode) {
  Require(!indices.empty(), ErrorCode::kInput,
          "cross-entropy needs at least one comparison");
  double total = 0.0;
  for (int i : indices) {
    const auto& c = data.comparisons[i];
    Require(c.observed(), ErrorCode::kInput,
            "cross-entropy needs observed outcomes");
    switch (mode) {
      case CvMode::kTop1:
        total -=
            LogTopKProb(theta, c, std::span<const int>(c.ranking).first(1));
        break;
      case CvMode::kTop3:
        total -= LogTopKProb(
            theta, c,
            std::span<const int>(c.ranking)
                .first(std::min<std::size_t>(3, c.ranking.size())));
        break;
      case CvMode::kFull:
        total -= LogOutcomeProb(theta, c, c.ranking);
        break;
    }
  }
  return total / static_cast<double>(indices.size());
}

std::vector<std::vector<int>> MakeFolds(const Dataset& data, int k,
                                        int max_retries, Philox& rng,
                                        int* attempts) {
  const int total = data.size();
  Require(k >= 2, ErrorCode::kInput, "k must be >= 2");
  Require(total >= k, ErrorCode::kInput,
          "k = " + std::to_string(k) + " exceeds the " +
              std::to_string(total) + " comparisons");
  const int base = total / k;
  for (int attempt = 1; attempt <= max_retries; ++attempt) {
    if (attempts) *attempts = attempt;
    std::vector<int> order(total);
    std::iota(order.begin(), order.end(), 0);
    Shuffle(&order, rng);
    std::vector<std::vector<int>> folds(k);
    for (int f = 0; f < k; ++f) {
      const int begin = f * base;
      const int end = f + 1 == k ? total : begin + base;
      folds[f].assign(order.begin() + begin, order.begin() + end);
      std::sort(folds[f].begin(), folds[f].end());
    }
    bool covered = true;
    for (int f = 0; f < k && covered; ++f) {
      std::vector<int> degree(data.num_objects, 0);
      std::vector<char> held(total, 0);
      for (int i : folds[f]) held[i] = 1;
      for (int i = 0; i < total; ++i) {
        if (held[i]) continue;
        for (int v : data.comparisons[i].edge) ++degree[v];
      }
      covered = std::all_of(degree.begin(), degree.end(),
                            [](int x) { return x > 0; });
    }
    if (covered) return folds;
  }
  Fail(ErrorCode::kInput,
       "could not draw " + std::to_string(k) +
           " folds whose training parts cover every object after " +
           std::to_string(max_retries) + " attempts; try a smaller k");
}

Dataset Subset(const Dataset& data, std::span<const int> indices) {
  Dataset out;
  out.num_objects = data.num_objects;
  out.num_covariates = data.num_covariates;
  out.comparisons.reserve(indices.size());
  for (int i : indices) out.comparisons.push_back(data.comparisons[i]);
  return out;
}

Dataset SelectCovariates(const Dataset& data, const std::vector<int>& columns) {
  for (int c : columns) {
    Require(c >= 0 && c < data.num_covariates, ErrorCode::kInput,
            "covariate index " + std::to_string(c + 1) + " out of range");
  }
  Dataset out;
  out.num_objects = data.num_objects;
  out.num_covariates = static_cast<int>(columns.size());
  out.comparisons.reserve(data.comparisons.size());
  for (const auto& c : data.comparisons) {
    Comparison sel;
    sel.edge = c.edge;
    sel.ranking = c.ranking;
    sel.covariates.resize(c.size(), out.num_covariates);
    for (int j = 0; j < out.num_covariates; ++j) {
      sel.covariates.col(j) = c.covariates.col(columns[j]);
    }
    out.comparisons.push_back(std::move(sel));
  }
  return out;
}

CvReport RunKfoldCv(const Dataset& data, const CvSpec& spec) {
  ValidateDataset(data, true);
  ValidateFitConfig(spec.fit);
  Require(!spec.modes.empty(), ErrorCode::kInput, "no CV modes requested");
  CvReport report;
  Philox rng(spec.seed, 0);
  report.folds = MakeFolds(data, spec.k, spec.max_retries, rng,
                           &report.attempts);
  std::vector<std::string> models{"plusdc"};
  if (spec.include_pl && data.num_covariates > 0) models.push_back("pl");
  const int tasks = spec.k * static_cast<int>(models.size());
  std::vector<std::vector<CvRow>> per_task(tasks);
  ParallelFor(tasks, spec.threads, [&](int task) {
    const int fold = task / static_cast<int>(models.size());
    const std::string& model = models[task % models.size()];
    std::vector<int> train;
    std::vector<char> held(data.size(), 0);
    for (int i : report.folds[fold]) held[i] = 1;
    for (int i = 0; i < data.size(); ++i) {
      if (!held[i]) train.push_back(i);
    }
    Dataset source = model == "pl" ? SelectCovariates(data, {}) : data;
    const FitResult fit = Fit(Subset(source, train), spec.fit);
    for (CvMode mode : spec.modes) {
      CvRow row;
      row.model = model;
      row.fold = fold;
      row.mode = CvModeName(mode);
      row.num_test = static_cast<int>(report.folds[fold].size());
      row.cross_entropy =
          CrossEntropy(fit.theta, source, report.folds[fold], mode);
      row.existence = ExistenceName(fit.existence.status);
      per_task[task].push_back(row);
    }
  });
  for (auto& rows : per_task) {
    for (auto& row : rows) report.rows.push_back(std::move(row));
  }
  return report;
}

std::vector<std::vector<int>> AllSubsets(int d) {
  Require(d >= 0 && d <= 12, ErrorCode::kCapability,
          "exhaustive subset search is limited to d <= 12");
  std::vector<std::vector<int>> out;
  for (int mask = 0; mask < (1 << d); ++mask) {
    std::vector<int> subset;
    for (int j = 0; j < d; ++j) {
      if (mask & (1 << j)) subset.push_back(j);
    }
    out.push_back(std::move(subset));
  }
  return out;
}

std::vector<SelectionRow> ModelSelection(
    const Dataset& data, const std::vector<std::vector<int>>& subsets,
    const FitConfig& fit, int threads) {
  ValidateDataset(data, true);
  std::vector<SelectionRow> rows(subsets.size());
  ParallelFor(static_cast<int>(subsets.size()), threads, [&](int i) {
    const Dataset sub = SelectCovariates(data, subsets[i]);
    const FitResult result = Fit(sub, fit);
    rows[i].subset = subsets[i];
    rows[i].criteria = AicBic(result, sub);
    rows[i].existence = ExistenceName(result.existence.status);
    rows[i].converged = result.converged;
    rows[i].ranked =
        result.converged && result.existence.status == Existence::kExists;
  });
  std::stable_sort(rows.begin(), rows.end(),
                   [](const SelectionRow& a, const SelectionRow& b) {
                     if (a.ranked != b.ranked) return a.ranked;
                     return a.criteria.bic_norm < b.criteria.bic_norm;
                   });
  int rank = 0;
  for (auto& row : rows) {
    if (row.ranked) row.rank = ++rank;
  }
  return rows;
}

}  // namespace plusdc
