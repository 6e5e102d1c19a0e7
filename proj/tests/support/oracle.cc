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

#include "support/oracle.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace oracle {
namespace {

long double ScoreOf(const plusdc::Params& theta, const plusdc::Comparison& c,
                    int t) {
  long double s = theta.u[c.edge[t]];
  for (int j = 0; j < theta.v.size(); ++j) {
    s += static_cast<long double>(c.covariates(t, j)) * theta.v[j];
  }
  return s;
}

Eigen::VectorXd Project(Eigen::VectorXd g, int n) {
  g.head(n).array() -= g.head(n).mean();
  return g;
}

}  // namespace

double LogLik(const plusdc::Params& theta, const plusdc::Dataset& data) {
  long double total = 0.0L;
  for (const auto& c : data.comparisons) {
    const int m = c.size();
    std::vector<long double> s(m);
    for (int t = 0; t < m; ++t) s[t] = ScoreOf(theta, c, t);
    for (int stage = 0; stage + 1 < m; ++stage) {
      long double top = -INFINITY;
      for (int q = stage; q < m; ++q) top = std::max(top, s[c.ranking[q]]);
      long double sum = 0.0L;
      for (int q = stage; q < m; ++q) sum += std::exp(s[c.ranking[q]] - top);
      total += s[c.ranking[stage]] - top - std::log(sum);
    }
  }
  return static_cast<double>(total);
}

Eigen::VectorXd Grad(const plusdc::Params& theta, const plusdc::Dataset& data) {
  const int n = static_cast<int>(theta.u.size());
  const int d = static_cast<int>(theta.v.size());
  std::vector<long double> g(n + d, 0.0L);
  for (const auto& c : data.comparisons) {
    const int m = c.size();
    std::vector<long double> s(m);
    for (int t = 0; t < m; ++t) s[t] = ScoreOf(theta, c, t);
    for (int stage = 0; stage + 1 < m; ++stage) {
      long double top = -INFINITY;
      for (int q = stage; q < m; ++q) top = std::max(top, s[c.ranking[q]]);
      long double sum = 0.0L;
      for (int q = stage; q < m; ++q) sum += std::exp(s[c.ranking[q]] - top);
      for (int q = stage; q < m; ++q) {
        const int t = c.ranking[q];
        const long double weight =
            (q == stage ? 1.0L : 0.0L) - std::exp(s[t] - top) / sum;
        g[c.edge[t]] += weight;
        for (int j = 0; j < d; ++j) g[n + j] += weight * c.covariates(t, j);
      }
    }
  }
  Eigen::VectorXd out(n + d);
  for (int k = 0; k < n + d; ++k) out[k] = static_cast<double>(g[k]);
  return out;
}

double RankingProb(const plusdc::Params& theta, const plusdc::Comparison& c,
                   const std::vector<int>& ranking) {
  const int m = c.size();
  long double p = 1.0L;
  for (int stage = 0; stage < m; ++stage) {
    long double denom = 0.0L;
    for (int q = stage; q < m; ++q) {
      denom += std::exp(ScoreOf(theta, c, ranking[q]));
    }
    p *= std::exp(ScoreOf(theta, c, ranking[stage])) / denom;
  }
  return static_cast<double>(p);
}

PgaResult ProjectedGradientAscent(const plusdc::Dataset& data, double tol,
                                  int max_iters) {
  const int n = data.num_objects;
  const int d = data.num_covariates;
  const double scale = 1.0 / data.size();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n + d);
  auto unpack = [&](const Eigen::VectorXd& z) {
    return plusdc::Params{z.head(n), z.tail(d)};
  };
  double f = LogLik(unpack(x), data) * scale;
  Eigen::VectorXd g = Project(Grad(unpack(x), data) * scale, n);
  double step = 1.0;
  PgaResult result;
  for (int it = 0; it < max_iters; ++it) {
    result.iterations = it;
    if (g.cwiseAbs().maxCoeff() <= tol) {
      result.converged = true;
      break;
    }
    double alpha = step;
    Eigen::VectorXd x_new;
    double f_new = 0.0;
    for (int tries = 0; tries < 60; ++tries) {
      x_new = x + alpha * g;
      f_new = LogLik(unpack(x_new), data) * scale;
      if (f_new >= f + 1e-4 * alpha * g.squaredNorm()) break;
      alpha *= 0.5;
    }
    const Eigen::VectorXd g_new =
        Project(Grad(unpack(x_new), data) * scale, n);
    const Eigen::VectorXd s = x_new - x;
    const Eigen::VectorXd y = g_new - g;
    const double sy = -s.dot(y);  // ascent: curvature enters with a sign flip
    step = sy > 1e-300 ? std::clamp(s.squaredNorm() / sy, 1e-6, 1e6) : 1.0;
    if (f_new < f - 1e-15) break;  // line search failed
    x = x_new;
    f = f_new;
    g = g_new;
  }
  result.theta = unpack(x);
  result.grad_norm = g.cwiseAbs().maxCoeff();
  return result;
}

std::vector<std::vector<int>> Permutations(int m) {
  std::vector<int> p(m);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::vector<int> SampleRanking(const plusdc::Params& theta,
                               const plusdc::Comparison& c,
                               std::mt19937_64& rng) {
  std::vector<int> remaining(c.size());
  std::iota(remaining.begin(), remaining.end(), 0);
  std::vector<int> ranking;
  while (!remaining.empty()) {
    std::vector<double> w;
    for (int t : remaining) {
      w.push_back(std::exp(static_cast<double>(ScoreOf(theta, c, t))));
    }
    std::discrete_distribution<int> pick(w.begin(), w.end());
    const int idx = pick(rng);
    ranking.push_back(remaining[idx]);
    remaining.erase(remaining.begin() + idx);
  }
  return ranking;
}

plusdc::Dataset RandomInstance(std::mt19937_64& rng, const InstanceSpec& spec,
                               plusdc::Params* truth) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> size(spec.min_m,
                                          std::min(spec.max_m, spec.n));
  plusdc::Params theta{Eigen::VectorXd(spec.n), Eigen::VectorXd(spec.d)};
  for (int k = 0; k < spec.n; ++k) theta.u[k] = spec.u_scale * uni(rng);
  theta.u.array() -= theta.u.mean();
  for (int j = 0; j < spec.d; ++j) theta.v[j] = spec.v_scale * uni(rng);

  plusdc::Dataset data;
  data.num_objects = spec.n;
  data.num_covariates = spec.d;
  std::vector<int> order(spec.n);
  std::iota(order.begin(), order.end(), 0);
  for (int i = 0; i < spec.num_comparisons; ++i) {
    const int m = size(rng);
    std::shuffle(order.begin(), order.end(), rng);
    plusdc::Comparison c;
    // Cycle through objects first so every one is covered.
    if (i * 2 < spec.n) {
      c.edge = {(2 * i) % spec.n, (2 * i + 1) % spec.n};
      for (int t = 2; t < m; ++t) {
        for (int k : order) {
          if (std::find(c.edge.begin(), c.edge.end(), k) == c.edge.end()) {
            c.edge.push_back(k);
            break;
          }
        }
      }
    } else {
      c.edge.assign(order.begin(), order.begin() + m);
    }
    std::sort(c.edge.begin(), c.edge.end());
    c.edge.erase(std::unique(c.edge.begin(), c.edge.end()), c.edge.end());
    c.covariates.resize(c.size(), spec.d);
    for (int t = 0; t < c.size(); ++t) {
      for (int j = 0; j < spec.d; ++j) c.covariates(t, j) = normal(rng);
    }
    c.ranking = SampleRanking(theta, c, rng);
    data.comparisons.push_back(std::move(c));
  }
  if (truth) *truth = theta;
  return data;
}

double ChiSquare99(int dof) {
  switch (dof) {
    case 1:
      return 6.634897;
    case 5:
      return 15.086272;
    case 23:
      return 41.638398;
    default:
      throw std::invalid_argument("no tabulated chi-square quantile");
  }
}

}  // namespace oracle
