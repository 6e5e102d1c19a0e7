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

#include <cmath>
#include <map>
#include <random>

#include <gtest/gtest.h>

#include "support/oracle.h"
#include "test_util.h"

namespace plusdc {
namespace {

using plusdc_test::MakeComparison;
using plusdc_test::MakeDataset;
using plusdc_test::Vec;

Comparison ThreeWay() {
  return MakeComparison({0, 1, 2}, {}, {0, 1, 2});
}

TEST(ScoreTest, Examples) {
  Comparison c = MakeComparison({0, 1}, {{1, -1}, {0, 0}}, {0, 1});
  EXPECT_EQ(Score(Params::Zero(2, 2), c, 0), 0.0);
  EXPECT_NEAR(Score({Vec({0.5, 0.0}), Vec({0.2, 0.3})}, c, 0), 0.4, 1e-15);
  // Home indicator with v = log(vartheta).
  Comparison home = MakeComparison({0, 1}, {{1}, {0}}, {0, 1});
  const double vartheta = 1.7;
  EXPECT_NEAR(Score({Vec({0.3, 0.0}), Vec({std::log(vartheta)})}, home, 0),
              0.3 + std::log(vartheta), 1e-15);
}

TEST(OutcomeProbTest, ClosedForms) {
  const Comparison pair = MakeComparison({0, 1}, {}, {0, 1});
  EXPECT_DOUBLE_EQ(OutcomeProb(Params::Zero(2, 0), pair, pair.ranking), 0.5);
  const Comparison c = ThreeWay();
  const std::vector<int> order{2, 0, 1};
  EXPECT_NEAR(OutcomeProb(Params::Zero(3, 0), c, order), 1.0 / 6, 1e-15);
  const Params theta{Vec({std::log(2.0), 0, 0}), Eigen::VectorXd()};
  EXPECT_NEAR(OutcomeProb(theta, c, c.ranking), 0.25, 1e-15);
  const std::vector<int> bad{0, 0, 1};
  EXPECT_PLUSDC_ERROR(OutcomeProb(theta, c, bad), ErrorCode::kInput);
}

TEST(OutcomeProbTest, SumsToOneAndShiftInvariant) {
  std::mt19937_64 rng(20260611);
  std::normal_distribution<double> normal(0.0, 1.5);
  for (int m = 2; m <= 5; ++m) {
    std::vector<int> edge(m);
    std::vector<std::vector<double>> rows(m, std::vector<double>(2));
    for (int t = 0; t < m; ++t) {
      edge[t] = t;
      rows[t] = {normal(rng), normal(rng)};
    }
    const Comparison c = MakeComparison(edge, rows, {});
    Params theta{Eigen::VectorXd(m), Vec({normal(rng), normal(rng)})};
    for (int t = 0; t < m; ++t) theta.u[t] = normal(rng);
    Params shifted = theta;
    shifted.u.array() += 3.7;
    double total = 0.0;
    for (const auto& perm : oracle::Permutations(m)) {
      const double p = OutcomeProb(theta, c, perm);
      total += p;
      EXPECT_NEAR(p, oracle::RankingProb(theta, c, perm), 1e-14);
      EXPECT_NEAR(OutcomeProb(shifted, c, perm), p, 1e-12);
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(TopKTest, MarginalsMatchCompletionSums) {
  std::mt19937_64 rng(20260612);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int m = 4;
  const Comparison c = MakeComparison({0, 1, 2, 3}, {}, {});
  Params theta{Eigen::VectorXd(m), Eigen::VectorXd()};
  for (int t = 0; t < m; ++t) theta.u[t] = normal(rng);
  const std::vector<int> top1{2};
  EXPECT_NEAR(TopKProb(Params::Zero(4, 0), c, top1), 0.25, 1e-15);
  for (int k = 1; k <= m; ++k) {
    std::map<std::vector<int>, double> sums;
    for (const auto& perm : oracle::Permutations(m)) {
      sums[std::vector<int>(perm.begin(), perm.begin() + k)] +=
          oracle::RankingProb(theta, c, perm);
    }
    for (const auto& [prefix, expected] : sums) {
      EXPECT_NEAR(TopKProb(theta, c, prefix), expected, 1e-12);
    }
  }
  const std::vector<int> full{3, 1, 0, 2};
  EXPECT_NEAR(TopKProb(theta, c, full), OutcomeProb(theta, c, full), 1e-15);
  const std::vector<int> dup{1, 1};
  const std::vector<int> outside{7};
  EXPECT_PLUSDC_ERROR(TopKProb(theta, c, dup), ErrorCode::kInput);
  EXPECT_PLUSDC_ERROR(TopKProb(theta, c, outside), ErrorCode::kInput);
}

// P(a before b) from the full distribution equals the two-object formula.
TEST(TopKTest, LuceConsistencyOfPairs) {
  std::mt19937_64 rng(20260613);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int m = 5;
  std::vector<std::vector<double>> rows(m, std::vector<double>(1));
  for (auto& r : rows) r[0] = normal(rng);
  const Comparison c = MakeComparison({0, 1, 2, 3, 4}, rows, {});
  Params theta{Eigen::VectorXd(m), Vec({0.8})};
  for (int t = 0; t < m; ++t) theta.u[t] = normal(rng);
  const auto s = Scores(theta, c);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      if (a == b) continue;
      double marginal = 0.0;
      for (const auto& perm : oracle::Permutations(m)) {
        const auto pa = std::find(perm.begin(), perm.end(), a);
        const auto pb = std::find(perm.begin(), perm.end(), b);
        if (pa < pb) marginal += OutcomeProb(theta, c, perm);
      }
      EXPECT_NEAR(marginal, 1.0 / (1.0 + std::exp(s[b] - s[a])), 1e-12);
    }
  }
}

TEST(SampleOutcomeTest, DominantScoreAlwaysWins) {
  const Comparison c = MakeComparison({0, 1}, {}, {});
  const Params theta{Vec({50, 0}), Eigen::VectorXd()};
  Philox rng(1);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(SampleOutcome(theta, c, rng), (std::vector<int>{0, 1}));
  }
}

TEST(SampleOutcomeTest, UniformOverPermutations) {
  const Comparison c = ThreeWay();
  Philox rng(2);
  const int draws = 60000;
  std::map<std::vector<int>, int> counts;
  for (int i = 0; i < draws; ++i)
    ++counts[SampleOutcome(Params::Zero(3, 0), c, rng)];
  ASSERT_EQ(counts.size(), 6u);
  const double p = 1.0 / 6, se = std::sqrt(p * (1 - p) / draws);
  for (const auto& [perm, k] : counts) {
    EXPECT_NEAR(static_cast<double>(k) / draws, p, 3 * se);
  }
}

TEST(LogLikelihoodTest, ClosedForms) {
  auto pair = MakeDataset(2, 0, {MakeComparison({0, 1}, {}, {0, 1})});
  EXPECT_NEAR(LogLikelihood(Params::Zero(2, 0), pair), std::log(0.5), 1e-15);
  auto three = MakeDataset(3, 0, {ThreeWay()});
  const Params theta{Vec({std::log(2.0), 0, 0}), Eigen::VectorXd()};
  EXPECT_NEAR(LogLikelihood(theta, three), -std::log(4.0), 1e-15);
  three.comparisons[0].ranking.clear();
  EXPECT_PLUSDC_ERROR(LogLikelihood(theta, three), ErrorCode::kInput);
}

TEST(LogLikelihoodTest, MatchesOracleAndNormalizes) {
  std::mt19937_64 rng(20260614);
  oracle::InstanceSpec spec;
  spec.n = 8;
  spec.d = 2;
  spec.max_m = 5;
  spec.num_comparisons = 40;
  Params truth;
  const Dataset data = oracle::RandomInstance(rng, spec, &truth);
  EXPECT_NEAR(LogLikelihood(truth, data), oracle::LogLik(truth, data), 1e-11);
  EXPECT_NEAR(LogLikelihood(truth, data, true) * data.size(),
              LogLikelihood(truth, data), 1e-11);
  EXPECT_NEAR(Gradient(truth, data).cwiseAbs().maxCoeff(),
              oracle::Grad(truth, data).cwiseAbs().maxCoeff(), 1e-11);
  EXPECT_LE((Gradient(truth, data) - oracle::Grad(truth, data))
                .cwiseAbs()
                .maxCoeff(),
            1e-11);
}

TEST(LogLikelihoodTest, FiniteAtLargeScores) {
  auto data = MakeDataset(3, 0, {ThreeWay()});
  const Params theta{Vec({-700, 0, 700}), Eigen::VectorXd()};
  const double l = LogLikelihood(theta, data);
  EXPECT_TRUE(std::isfinite(l));
  EXPECT_NEAR(l, -2100.0, 1e-9);  // (-1400) + (-700)
}

TEST(DerivativeTest, PairwiseHandValues) {
  auto data = MakeDataset(
      2, 1, {MakeComparison({0, 1}, {{0.3}, {-0.5}}, {0, 1})});
  const Params theta = Params::Zero(2, 1);
  const Eigen::VectorXd g = Gradient(theta, data);
  EXPECT_NEAR(g[0], 0.5, 1e-15);
  EXPECT_NEAR(g[1], -0.5, 1e-15);
  EXPECT_NEAR(g[2], 0.5 * (0.3 - -0.5), 1e-15);
  const Eigen::MatrixXd h = Hessian(theta, data);
  EXPECT_NEAR(h(0, 0), -0.25, 1e-15);
  EXPECT_NEAR(h(0, 1), 0.25, 1e-15);
  EXPECT_NEAR(h(1, 1), -0.25, 1e-15);
}

TEST(DerivativeTest, PsiSumsToZeroAndHessianIsNsd) {
  std::mt19937_64 rng(20260615);
  oracle::InstanceSpec spec;
  spec.n = 7;
  spec.d = 3;
  spec.max_m = 5;
  spec.num_comparisons = 30;
  Params theta;
  const Dataset data = oracle::RandomInstance(rng, spec, &theta);
  for (const auto& c : data.comparisons) {
    EXPECT_NEAR(ScoreGradient(theta, c).sum(), 0.0, 1e-13);
  }
  const Eigen::MatrixXd h = Hessian(theta, data);
  EXPECT_LE((h - h.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
  EXPECT_LE(eig.eigenvalues().maxCoeff(), 1e-10);
  // The all-ones u direction is in the kernel.
  Eigen::VectorXd ones = Eigen::VectorXd::Zero(theta.size());
  ones.head(spec.n).setOnes();
  EXPECT_LE((h * ones).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(DerivativeTest, VBlockMatchesFullHessian) {
  std::mt19937_64 rng(20260616);
  oracle::InstanceSpec spec;
  spec.n = 6;
  spec.d = 2;
  spec.num_comparisons = 25;
  Params theta;
  const Dataset data = oracle::RandomInstance(rng, spec, &theta);
  Eigen::VectorXd g;
  Eigen::MatrixXd h;
  VBlockDerivatives(theta, data, &g, &h);
  EXPECT_LE((g - Gradient(theta, data).tail(2)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((h - Hessian(theta, data).bottomRightCorner(2, 2))
                .cwiseAbs()
                .maxCoeff(),
            1e-12);
}

TEST(ValidateTest, RejectsMalformedData) {
  auto data = MakeDataset(3, 0, {ThreeWay()});
  EXPECT_NO_THROW(ValidateDataset(data, true));
  auto bad = data;
  bad.comparisons[0].edge = {0, 0, 1};
  EXPECT_PLUSDC_ERROR(ValidateDataset(bad, true), ErrorCode::kInput);
  bad = data;
  bad.comparisons[0].edge = {0, 1, 5};
  EXPECT_PLUSDC_ERROR(ValidateDataset(bad, true), ErrorCode::kInput);
  bad = data;
  bad.comparisons[0].ranking = {0, 1};
  EXPECT_PLUSDC_ERROR(ValidateDataset(bad, true), ErrorCode::kInput);
  bad = data;
  bad.comparisons[0].ranking.clear();
  EXPECT_NO_THROW(ValidateDataset(bad, false));
  EXPECT_PLUSDC_ERROR(ValidateDataset(bad, true), ErrorCode::kInput);
  bad = MakeDataset(2, 0, {MakeComparison({1}, {}, {0})});
  EXPECT_PLUSDC_ERROR(ValidateDataset(bad, true), ErrorCode::kInput);
}

TEST(CanonicalizeTest, KeepsOutcomeAndCovariatesAligned) {
  // Object 3 (value 30) beat object 1 (10) beat object 2 (20).
  Comparison c;
  c.edge = {3, 1, 2};
  c.covariates = (Eigen::MatrixXd(3, 1) << 30, 10, 20).finished();
  c.ranking = {0, 1, 2};
  CanonicalizeComparison(&c);
  EXPECT_EQ(c.edge, (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(c.covariates(0, 0), 10);
  EXPECT_EQ(c.edge[c.ranking[0]], 3);
  EXPECT_EQ(c.edge[c.ranking[1]], 1);
  EXPECT_EQ(c.covariates(c.ranking[0], 0), 30);
}

}  // namespace
}  // namespace plusdc
