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

// Acceptance checks. Each criterion prints one line
//
//   PASS <name>: <summary>      or      FAIL <name>: <summary>
//
// followed by indented detail lines. Usage: plusdc_acceptance <name>... or
// --all. Exit status is nonzero if any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "core/design.h"
#include "core/estimate.h"
#include "core/experiments.h"
#include "core/hypergraph.h"
#include "core/io.h"
#include "core/model.h"
#include "core/randgraph.h"
#include "core/rng.h"
#include "support/oracle.h"

namespace {

using plusdc::Dataset;
using plusdc::Params;

class Outcome {
 public:
  void Check(bool ok, const std::string& what) {
    if (!ok) {
      passed_ = false;
      failures_.push_back(what);
    }
    details_.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void Note(const std::string& what) { details_.push_back("     " + what); }
  bool passed() const { return passed_; }
  const std::vector<std::string>& details() const { return details_; }
  const std::vector<std::string>& failures() const { return failures_; }

 private:
  bool passed_ = true;
  std::vector<std::string> details_;
  std::vector<std::string> failures_;
};

std::string Fmt(const char* format, double a) {
  char buffer[128];
  std::snprintf(buffer, sizeof(buffer), format, a);
  return buffer;
}

std::string Fmt(const char* format, double a, double b) {
  char buffer[160];
  std::snprintf(buffer, sizeof(buffer), format, a, b);
  return buffer;
}

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

std::string Fixture(const std::string& name) {
  return std::string(PLUSDC_FIXTURE_DIR) + "/" + name;
}

bool EqualUpToSign(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) {
  return a == b || a == -b;
}

// ---------------------------------------------------------------------------

void ToyIdentifiability(Outcome* out) {
  const auto start = std::chrono::steady_clock::now();
  const Dataset data = plusdc::ReadComparisonsCsvFile(Fixture("f1_toy.csv"));
  Eigen::MatrixXd dx1(3, 2), dx2(1, 2), dx3(1, 2);
  dx1 << 4, -2, -3, 1, 1, -4;
  dx2 << -1, 3;
  dx3 << -3, 5;
  const std::vector<Eigen::MatrixXd> printed{dx1, dx2, dx3};
  bool blocks_ok = data.size() == 3;
  for (int i = 0; blocks_ok && i < 3; ++i) {
    const Eigen::MatrixXd got = plusdc::DeltaX(data.comparisons[i]);
    blocks_ok = got.rows() == printed[i].rows() && got.cols() == 2;
    for (int r = 0; blocks_ok && r < got.rows(); ++r) {
      blocks_ok = EqualUpToSign(got.row(r), printed[i].row(r));
    }
  }
  out->Check(blocks_ok, "Delta X_1, Delta X_2, Delta X_3 equal the printed "
                        "matrices (exact, rows up to orientation sign)");

  const auto dm = plusdc::Assemble(data);
  Eigen::MatrixXd q_printed(4, 5), k_printed(5, 2);
  q_printed << -1, -1, -1, 0, 0, 1, 0, 0, 0, -1, 0, 1, 0, -1, 0, 0, 0, 1, 1, 1;
  k_printed << 4, -2, -3, 1, 1, -4, -1, 3, -3, 5;
  const Eigen::MatrixXd q = Eigen::MatrixXd(dm.q);
  bool qk_ok = q.rows() == 4 && q.cols() == 5 && dm.k.rows() == 5;
  for (int c = 0; qk_ok && c < 5; ++c) {
    qk_ok = EqualUpToSign(q.col(c).transpose(),
                          q_printed.col(c).transpose()) &&
            EqualUpToSign(dm.k.row(c), k_printed.row(c));
  }
  out->Check(qk_ok, "Q (4x5) and K (5x2) equal the printed matrices");

  const auto id = plusdc::IdentifiabilityCheck(dm);
  out->Check(id.rank == 5 && id.identifiable,
             "rank(W) = " + std::to_string(id.rank) + " (expected 5 = n+d-1)");

  const auto curl = plusdc::CurlForTriangles(
      dm, {plusdc::Triangle{{0, 1, 3}}, plusdc::Triangle{{0, 2, 3}}});
  std::ostringstream t;
  t << "[[" << curl.t_matrix(0, 0) << "," << curl.t_matrix(0, 1) << "],["
    << curl.t_matrix(1, 0) << "," << curl.t_matrix(1, 1) << "]]";
  out->Check(curl.det == -14.0,
             "det T for triangles (1,2,4),(1,3,4) = " +
                 Fmt("%g", curl.det) + " (expected -14), T = " + t.str());
  const double seconds = Seconds(start);
  out->Check(seconds < 1.0, Fmt("runtime %.3f s < 1 s", seconds));
}

void TopologyExamples(Outcome* out) {
  const auto start = std::chrono::steady_clock::now();
  const plusdc::Hypergraph g(4, {{0, 1}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  auto h = [&](const std::vector<int>& set) {
    const double boundary = static_cast<double>(g.Boundary(set).size());
    const int size = static_cast<int>(set.size());
    return boundary / std::min(size, g.num_vertices() - size);
  };
  const double h1 = h({0});
  const double h2 = h({0, 1});
  out->Check(h1 == 2.0, Fmt("h(U={1}) = %g (expected 2)", h1));
  out->Check(h2 == 1.5, Fmt("h(U={1,2}) = %g (expected 1.5)", h2));
  const int d06 = plusdc::WeaklyAdmissibleDiameter(g, 0.6).length;
  const int d05 = plusdc::WeaklyAdmissibleDiameter(g, 0.5).length;
  out->Check(d06 == 3, "diam(A(0.6)) = " + std::to_string(d06) +
                           " (expected 3)");
  out->Check(d05 == 4, "diam(A(0.5)) = " + std::to_string(d05) +
                           " (expected 4)");

  // The 26 sequences listed for lambda = 0.6, as vertex masks (bit k = k+1).
  const std::vector<std::vector<std::uint64_t>> listed{
      {1, 15},  {1, 11, 15}, {2, 15},  {2, 7, 15},  {2, 11, 15}, {2, 14, 15},
      {4, 15},  {4, 14, 15}, {8, 15},  {8, 11, 15}, {8, 13, 15}, {8, 14, 15},
      {3, 15},  {3, 11, 15}, {5, 15},  {9, 15},     {9, 11, 15}, {6, 15},
      {6, 14, 15}, {10, 15}, {12, 15}, {12, 14, 15}, {7, 15},    {11, 15},
      {13, 15}, {14, 15}};
  int admissible = 0;
  for (const auto& chain : listed) {
    admissible += plusdc::IsWeaklyAdmissible(g, chain, 0.6);
  }
  out->Note("reconstructed graph edges (1,2),(1,4),(2,3),(2,4),(3,4): " +
            std::to_string(admissible) + "/" + std::to_string(listed.size()) +
            " listed 0.6-sequences are admissible");
  const double seconds = Seconds(start);
  out->Check(seconds < 1.0, Fmt("runtime %.3f s < 1 s", seconds));
}

void AicBicArithmetic(Outcome* out) {
  struct Row {
    const char* label;
    double loglik;
    int d;
    double aic;
    double bic;
  };
  const Row rows[] = {{"(1,1,1)", -16.985, 3, 34.860, 37.865},
                      {"(0,0,0)", -17.671, 0, 36.230, 39.232}};
  for (const auto& row : rows) {
    const auto ic = plusdc::AicBic(row.loglik, 2814, row.d, 6328);
    out->Check(std::abs(ic.aic_norm - row.aic) <= 0.01,
               std::string(row.label) +
                   Fmt(" aic %.4f vs %.3f", ic.aic_norm, row.aic));
    out->Check(std::abs(ic.bic_norm - row.bic) <= 0.01,
               std::string(row.label) +
                   Fmt(" bic %.4f vs %.3f", ic.bic_norm, row.bic));
  }
}

// Well-posed random instances for the estimator checks.
std::vector<Dataset> WellPosedInstances(int count, std::uint64_t seed,
                                        int* rejected) {
  std::mt19937_64 rng(seed);
  std::vector<Dataset> out;
  *rejected = 0;
  while (static_cast<int>(out.size()) < count) {
    oracle::InstanceSpec spec;
    spec.n = std::uniform_int_distribution<int>(4, 30)(rng);
    spec.d = std::uniform_int_distribution<int>(0, 3)(rng);
    spec.max_m = std::uniform_int_distribution<int>(2, 5)(rng);
    spec.num_comparisons =
        std::uniform_int_distribution<int>(6, 12)(rng) * spec.n;
    Dataset data = oracle::RandomInstance(rng, spec);
    const auto id = plusdc::IdentifiabilityCheck(plusdc::Assemble(data));
    if (!id.identifiable ||
        plusdc::CheckMleExistence(data).status != plusdc::Existence::kExists) {
      ++*rejected;
      continue;
    }
    out.push_back(std::move(data));
  }
  return out;
}

void EstimatorOracle(Outcome* out) {
  const auto start = std::chrono::steady_clock::now();
  int rejected = 0;
  const auto instances = WellPosedInstances(50, 20260501, &rejected);
  double worst_diff = 0.0, worst_grad = 0.0;
  int diff_fail = 0, grad_fail = 0, not_converged = 0, pga_unconverged = 0;
  double fit_seconds = 0.0, pga_seconds = 0.0;
  for (const auto& data : instances) {
    auto tick = std::chrono::steady_clock::now();
    const auto fit = plusdc::Fit(data);
    fit_seconds += Seconds(tick);
    tick = std::chrono::steady_clock::now();
    const auto pga = oracle::ProjectedGradientAscent(data, 1e-13, 400000);
    pga_seconds += Seconds(tick);
    pga_unconverged += !pga.converged;
    not_converged += !fit.converged;
    const double diff = (fit.theta.Stacked() - pga.theta.Stacked())
                            .cwiseAbs()
                            .maxCoeff();
    const double grad =
        oracle::Grad(fit.theta, data).cwiseAbs().maxCoeff() / data.size();
    worst_diff = std::max(worst_diff, diff);
    worst_grad = std::max(worst_grad, grad);
    diff_fail += diff > 1e-5;
    grad_fail += grad > 1e-6;
  }
  out->Note(std::to_string(instances.size()) + " instances (" +
            std::to_string(rejected) + " draws rejected as ill-posed), " +
            std::to_string(pga_unconverged) + " oracle runs hit the cap");
  out->Note(Fmt("fit %.1f s, oracle %.1f s", fit_seconds, pga_seconds));
  out->Check(not_converged == 0,
             std::to_string(not_converged) + " fits reported nonconvergence");
  out->Check(diff_fail == 0,
             Fmt("max ||theta_fit - theta_pga||_inf = %.3e (<= 1e-5)",
                 worst_diff) +
                 ", failures " + std::to_string(diff_fail));
  out->Check(grad_fail == 0,
             Fmt("max ||grad l||_inf / N = %.3e (<= 1e-6)", worst_grad) +
                 ", failures " + std::to_string(grad_fail));
  const double seconds = Seconds(start);
  out->Check(seconds < 120.0, Fmt("runtime %.1f s < 120 s", seconds));
}

void DerivativesFiniteDifference(Outcome* out) {
  std::mt19937_64 rng(20260502);
  std::normal_distribution<double> normal(0.0, 0.7);
  double worst_g = 0.0, worst_h = 0.0, worst_eig = -INFINITY;
  for (int inst = 0; inst < 20; ++inst) {
    oracle::InstanceSpec spec;
    spec.n = std::uniform_int_distribution<int>(3, 10)(rng);
    spec.d = std::uniform_int_distribution<int>(0, 3)(rng);
    spec.max_m = std::uniform_int_distribution<int>(2, 5)(rng);
    spec.num_comparisons = 3 * spec.n;
    const Dataset data = oracle::RandomInstance(rng, spec);
    Params theta = Params::Zero(spec.n, spec.d);
    for (int k = 0; k < spec.n; ++k) theta.u[k] = normal(rng);
    for (int j = 0; j < spec.d; ++j) theta.v[j] = normal(rng);
    const int p = spec.n + spec.d;
    const Eigen::VectorXd x = theta.Stacked();
    const Eigen::VectorXd g = plusdc::Gradient(theta, data);
    const Eigen::MatrixXd hess = plusdc::Hessian(theta, data);
    const double h = 1e-6;
    Eigen::VectorXd g_fd(p);
    Eigen::MatrixXd h_fd(p, p);
    for (int k = 0; k < p; ++k) {
      Eigen::VectorXd plus = x, minus = x;
      plus[k] += h;
      minus[k] -= h;
      const Params tp = Params::FromStacked(plus, spec.n);
      const Params tm = Params::FromStacked(minus, spec.n);
      g_fd[k] = (plusdc::LogLikelihood(tp, data) -
                 plusdc::LogLikelihood(tm, data)) /
                (2 * h);
      h_fd.col(k) =
          (plusdc::Gradient(tp, data) - plusdc::Gradient(tm, data)) / (2 * h);
    }
    worst_g = std::max(worst_g, (g - g_fd).cwiseAbs().maxCoeff() /
                                    std::max(1.0, g.cwiseAbs().maxCoeff()));
    worst_h = std::max(worst_h, (hess - h_fd).cwiseAbs().maxCoeff() /
                                    std::max(1.0, hess.cwiseAbs().maxCoeff()));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hess);
    worst_eig = std::max(worst_eig, eig.eigenvalues().maxCoeff());
  }
  out->Check(worst_g <= 1e-5,
             Fmt("gradient relative error %.3e (<= 1e-5)", worst_g));
  out->Check(worst_h <= 1e-4,
             Fmt("Hessian relative error %.3e (<= 1e-4)", worst_h));
  out->Check(worst_eig <= 1e-10,
             Fmt("largest Hessian eigenvalue %.3e (<= 1e-10)", worst_eig));
}

void MmGuarantees(Outcome* out) {
  std::mt19937_64 rng(20260503);
  int fits = 0, steps = 0, decreases = 0;
  double worst_drop = 0.0;
  for (int inst = 0; inst < 40; ++inst) {
    oracle::InstanceSpec spec;
    spec.n = std::uniform_int_distribution<int>(3, 25)(rng);
    spec.d = std::uniform_int_distribution<int>(0, 3)(rng);
    spec.max_m = std::uniform_int_distribution<int>(2, 6)(rng);
    spec.num_comparisons = std::uniform_int_distribution<int>(2, 10)(rng) *
                           spec.n;
    spec.u_scale = inst % 4 == 0 ? 3.0 : 0.8;
    const Dataset data = oracle::RandomInstance(rng, spec);
    plusdc::FitConfig config;
    config.record_inner_trace = true;
    config.max_outer = 500;
    const auto fit = plusdc::Fit(data, config);
    ++fits;
    for (const auto* trace : {&fit.inner_trace, &fit.loglik_trace}) {
      for (std::size_t t = 1; t < trace->size(); ++t) {
        ++steps;
        const double drop = (*trace)[t - 1] - (*trace)[t];
        const double slack = 1e-12 * std::max(1.0, std::abs((*trace)[t - 1]));
        if (drop > slack) ++decreases;
        worst_drop = std::max(worst_drop, drop);
      }
    }
  }
  out->Check(decreases == 0,
             std::to_string(decreases) + " likelihood decreases over " +
                 std::to_string(steps) + " recorded steps of " +
                 std::to_string(fits) + Fmt(" fits (largest drop %.2e)",
                                            worst_drop));

  std::normal_distribution<double> normal(0.0, 1.0);
  double worst_gap = 0.0, worst_excess = -INFINITY, worst_near = -INFINITY;
  for (int probe = 0; probe < 100; ++probe) {
    oracle::InstanceSpec spec;
    spec.n = std::uniform_int_distribution<int>(3, 12)(rng);
    spec.d = std::uniform_int_distribution<int>(0, 3)(rng);
    spec.max_m = std::uniform_int_distribution<int>(2, 5)(rng);
    spec.num_comparisons = 4 * spec.n;
    const Dataset data = oracle::RandomInstance(rng, spec);
    Eigen::VectorXd u(spec.n), u_ref(spec.n), v(spec.d);
    for (int k = 0; k < spec.n; ++k) {
      u[k] = 2 * normal(rng);
      u_ref[k] = 2 * normal(rng);
    }
    for (int j = 0; j < spec.d; ++j) v[j] = normal(rng);
    const double l_ref = oracle::LogLik(Params{u_ref, v}, data);
    // A far probe plus near probes, where Q - l is second order and a wrong
    // bound would show.
    for (double scale : {0.0, 1e-1, 1e-3}) {
      Eigen::VectorXd at = u;
      if (scale > 0.0) {
        for (int k = 0; k < spec.n; ++k) at[k] = u_ref[k] + scale * normal(rng);
      }
      const double l_at = oracle::LogLik(Params{at, v}, data);
      const double excess = plusdc::MinorizerQ(at, u_ref, v, data) - l_at;
      worst_excess = std::max(worst_excess, excess);
      if (scale == 1e-3) worst_near = std::max(worst_near, excess);
    }
    worst_gap = std::max(
        worst_gap, std::abs(plusdc::MinorizerQ(u_ref, u_ref, v, data) - l_ref));
  }
  out->Check(worst_excess <= 1e-10,
             Fmt("max Q(u|u_ref) - l(u) = %.3e over 300 probes (<= 0)",
                 worst_excess));
  out->Note(Fmt("closest probes (|u - u_ref| ~ 1e-3): max Q - l = %.3e",
                worst_near));
  out->Check(worst_gap <= 1e-10,
             Fmt("max |Q(u_ref|u_ref) - l(u_ref)| = %.3e (<= 1e-10)",
                 worst_gap));
}

void ExistenceIff(Outcome* out) {
  const auto start = std::chrono::steady_clock::now();
  // 4-cycle 1-2-3-4-1 with multiplicities 3, 2, 2, 2.
  const std::vector<std::pair<int, int>> pairs{{0, 1}, {0, 1}, {0, 1},
                                               {1, 2}, {1, 2}, {2, 3},
                                               {2, 3}, {0, 3}, {0, 3}};
  std::mt19937_64 rng(20260504);
  std::normal_distribution<double> normal(0.0, 1.0);
  Dataset base;
  base.num_objects = 4;
  base.num_covariates = 1;
  for (const auto& [a, b] : pairs) {
    plusdc::Comparison c;
    c.edge = {a, b};
    c.covariates.resize(2, 1);
    c.covariates << normal(rng), normal(rng);
    base.comparisons.push_back(c);
  }
  int agree = 0, lp_exists = 0, bounded_fail = 0, undetermined = 0;
  std::vector<int> disagreements;
  for (int mask = 0; mask < 512; ++mask) {
    Dataset data = base;
    for (int i = 0; i < 9; ++i) {
      data.comparisons[i].ranking =
          (mask >> i) & 1 ? std::vector<int>{1, 0} : std::vector<int>{0, 1};
    }
    const auto lp = plusdc::CheckMleExistence(data);
    const auto fit = plusdc::Fit(data);
    undetermined += lp.status == plusdc::Existence::kUndetermined;
    const bool lp_yes = lp.status == plusdc::Existence::kExists;
    const bool fit_yes =
        fit.existence.status != plusdc::Existence::kNonexistent;
    if (lp_yes == fit_yes) {
      ++agree;
    } else if (disagreements.size() < 5) {
      disagreements.push_back(mask);
    }
    if (lp_yes) {
      ++lp_exists;
      const double norm = fit.theta.Stacked().cwiseAbs().maxCoeff();
      if (!fit.converged || !(norm < 30.0)) ++bounded_fail;
    }
  }
  out->Note("design: 4-cycle, multiplicities 3,2,2,2, d = 1; LP says exists "
            "for " + std::to_string(lp_exists) + "/512");
  std::string first;
  for (int m : disagreements) first += " " + std::to_string(m);
  out->Check(undetermined == 0,
             std::to_string(undetermined) + " LP verdicts undetermined");
  out->Check(agree == 512, "LP and divergence detection agree on " +
                               std::to_string(agree) + "/512" +
                               (first.empty() ? "" : "; first masks:" + first));
  out->Check(bounded_fail == 0,
             std::to_string(bounded_fail) +
                 " LP-exists cases without a converged, bounded fit");
  const double seconds = Seconds(start);
  out->Check(seconds < 300.0, Fmt("runtime %.1f s < 300 s", seconds));
}

void CareEquivalence(Outcome* out) {
  std::mt19937_64 rng(20260505);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst_l = 0.0, worst_formula = 0.0, worst_constraint = 0.0;
  int instances = 0;
  while (instances < 20) {
    const int n = std::uniform_int_distribution<int>(5, 20)(rng);
    const int d =
        std::uniform_int_distribution<int>(1, std::min(3, n - 2))(rng);
    Eigen::MatrixXd z(n, d);
    for (int k = 0; k < n; ++k) {
      for (int j = 0; j < d; ++j) z(k, j) = normal(rng);
    }
    // Preconditions: rank(Z) = d and 1 outside range(Z).
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(z);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    const Eigen::VectorXd resid = ones - z * qr.solve(ones);
    if (qr.rank() != d || resid.norm() < 1e-3) continue;

    oracle::InstanceSpec spec;
    spec.n = n;
    spec.d = 0;
    spec.max_m = 4;
    spec.num_comparisons = 10 * n;
    Dataset pl = oracle::RandomInstance(rng, spec);
    if (plusdc::CheckMleExistence(pl).status != plusdc::Existence::kExists) {
      continue;
    }
    Dataset care = pl;
    care.num_covariates = d;
    for (auto& c : care.comparisons) {
      c.covariates.resize(c.size(), d);
      for (int t = 0; t < c.size(); ++t) c.covariates.row(t) = z.row(c.edge[t]);
    }
    const auto fit = plusdc::Fit(pl);
    const Eigen::VectorXd u_tilde = fit.theta.u;
    const auto care_hat = plusdc::CareEquivalence(z, u_tilde);

    // The displayed formulas, evaluated directly.
    const Eigen::MatrixXd a =
        z.transpose() * z -
        z.transpose() * ones * ones.transpose() * z / static_cast<double>(n);
    const Eigen::VectorXd v_formula = a.inverse() * z.transpose() * u_tilde;
    const Eigen::MatrixXd centering =
        Eigen::MatrixXd::Identity(n, n) -
        ones * ones.transpose() / static_cast<double>(n);
    const Eigen::VectorXd u_formula = u_tilde - centering * z * v_formula;
    worst_formula = std::max(
        {worst_formula, (care_hat.v_hat - v_formula).cwiseAbs().maxCoeff(),
         (care_hat.u_hat - u_formula).cwiseAbs().maxCoeff()});
    worst_constraint = std::max(
        {worst_constraint, std::abs(care_hat.u_hat.sum()),
         (z.transpose() * care_hat.u_hat).cwiseAbs().maxCoeff()});
    const double l_pl = oracle::LogLik(Params{u_tilde, Eigen::VectorXd()}, pl);
    const double l_care =
        oracle::LogLik(Params{care_hat.u_hat, care_hat.v_hat}, care);
    worst_l = std::max(worst_l, std::abs(l_pl - l_care));
    ++instances;
  }
  out->Check(worst_l <= 1e-8,
             Fmt("max |l(u~,0) - l(u^,v^)| = %.3e over 20 instances "
                 "(<= 1e-8)", worst_l));
  out->Check(worst_formula <= 1e-8,
             Fmt("max deviation from the v^/u^ formulas = %.3e (<= 1e-8)",
                 worst_formula));
  out->Note(Fmt("constraints 1'u^ = 0, Z'u^ = 0 hold to %.3e",
                worst_constraint));
}

void LuceProperties(Outcome* out) {
  std::mt19937_64 rng(20260506);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst_sum = 0.0, worst_topk = 0.0, worst_shift = 0.0;
  for (int trial = 0; trial < 40; ++trial) {
    const int m = 2 + trial % 4;
    const int d = trial % 3;
    plusdc::Comparison c;
    for (int t = 0; t < m; ++t) c.edge.push_back(2 * t + 1);
    c.covariates.resize(m, d);
    for (int t = 0; t < m; ++t) {
      for (int j = 0; j < d; ++j) c.covariates(t, j) = normal(rng);
    }
    Params theta = Params::Zero(2 * m + 1, d);
    for (int k = 0; k < theta.u.size(); ++k) theta.u[k] = 1.5 * normal(rng);
    for (int j = 0; j < d; ++j) theta.v[j] = normal(rng);
    Params shifted = theta;
    shifted.u.array() += 3.7;
    const auto perms = oracle::Permutations(m);
    double total = 0.0;
    for (const auto& p : perms) {
      const double prob = plusdc::OutcomeProb(theta, c, p);
      total += prob;
      worst_shift = std::max(
          worst_shift, std::abs(prob - plusdc::OutcomeProb(shifted, c, p)));
    }
    worst_sum = std::max(worst_sum, std::abs(total - 1.0));
    for (int k = 1; k < m; ++k) {
      for (const auto& p : perms) {
        const std::vector<int> prefix(p.begin(), p.begin() + k);
        double brute = 0.0;
        for (const auto& q : perms) {
          if (std::equal(prefix.begin(), prefix.end(), q.begin())) {
            brute += oracle::RankingProb(theta, c, q);
          }
        }
        worst_topk = std::max(
            worst_topk, std::abs(plusdc::TopKProb(theta, c, prefix) - brute));
      }
    }
  }
  out->Check(worst_sum <= 1e-12,
             Fmt("max |sum over S(e) of P - 1| = %.3e (<= 1e-12)", worst_sum));
  out->Check(worst_topk <= 1e-12,
             Fmt("max |top-k marginal - completion sum| = %.3e (<= 1e-12)",
                 worst_topk));
  out->Check(worst_shift <= 1e-12,
             Fmt("max change under u + c = %.3e (<= 1e-12)", worst_shift));

  plusdc::Philox philox(20260506, 0);
  for (int m = 2; m <= 4; ++m) {
    plusdc::Comparison c;
    for (int t = 0; t < m; ++t) c.edge.push_back(t);
    c.covariates.resize(m, 1);
    for (int t = 0; t < m; ++t) c.covariates(t, 0) = 0.3 * t - 0.4;
    Params theta = Params::Zero(m, 1);
    for (int t = 0; t < m; ++t) theta.u[t] = 0.5 * std::sin(1.0 + t);
    theta.v[0] = 0.8;
    const auto perms = oracle::Permutations(m);
    std::map<std::vector<int>, int> counts;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
      ++counts[plusdc::SampleOutcome(theta, c, philox)];
    }
    double chi2 = 0.0;
    for (const auto& p : perms) {
      const double expected = draws * oracle::RankingProb(theta, c, p);
      const double diff = counts[p] - expected;
      chi2 += diff * diff / expected;
    }
    const int dof = static_cast<int>(perms.size()) - 1;
    const double critical = oracle::ChiSquare99(dof);
    out->Check(chi2 <= critical,
               "sampler m = " + std::to_string(m) +
                   Fmt(": chi2 = %.2f <= %.2f (1%% level, 1e5 draws)", chi2,
                       critical));
  }
}

void ConsistencyTrend(Outcome* out) {
  const auto start = std::chrono::steady_clock::now();
  plusdc::ConsistencySpec spec;
  spec.design = plusdc::DesignKind::kNurhm6;
  spec.n_list = {100, 200, 400};
  spec.reps = 20;
  spec.seed = 20260507;
  const auto report = plusdc::RunConsistency(spec);
  const auto& s = report.summary;
  for (const auto& row : s) {
    out->Note("n = " + std::to_string(row.n) + ", N = " +
              std::to_string(row.num_edges) + ", ok " + std::to_string(row.ok) +
              "/" + std::to_string(row.ok + row.failed) +
              Fmt(": mean err_u %.4f, mean err_v %.4f", row.mean_err_u,
                  row.mean_err_v));
  }
  bool all_ok = true;
  for (const auto& row : s) all_ok = all_ok && row.ok > 0;
  out->Check(all_ok, "every n has successful replicates");
  out->Check(s[0].mean_err_u > s[1].mean_err_u &&
                 s[1].mean_err_u > s[2].mean_err_u,
             "mean ||u^ - u*||_inf strictly decreases");
  out->Check(s[0].mean_err_v > s[1].mean_err_v &&
                 s[1].mean_err_v > s[2].mean_err_v,
             "mean ||v^ - v*||_inf strictly decreases");
  bool v_below = true;
  for (const auto& row : s)
    v_below = v_below && row.mean_err_v < row.mean_err_u;
  out->Check(v_below, "mean err_v < mean err_u at every n");
  const double seconds = Seconds(start);
  out->Check(seconds < 900.0, Fmt("runtime %.1f s < 900 s", seconds));
}

void RandomDesignDiagnostics(Outcome* out) {
  const int n = 50, num_edges = 2000, seeds = 40;
  int incoherence_ok = 0, sigma_ok = 0;
  double worst_cos = 0.0, worst_sigma = INFINITY;
  const double bound = 5.0 * std::sqrt((n + 3.0) / num_edges);
  for (int seed = 0; seed < seeds; ++seed) {
    plusdc::Philox rng(20260508, static_cast<std::uint64_t>(seed));
    const auto graph = plusdc::SampleExperimentDesign(
        plusdc::DesignKind::kNurhm6, n, num_edges, rng);
    plusdc::SimulationSpec sim;
    sim.num_covariates = 3;
    sim.v_star = Eigen::Vector3d(1.0, -0.5, 0.0);
    const auto simulated = plusdc::SimulateData(graph, sim, rng);
    const auto diag = plusdc::ComputeConsistencyDiagnostics(
        plusdc::Assemble(simulated.data));
    incoherence_ok += diag.incoherence_cos <= bound;
    sigma_ok += diag.sigma_min_k >= 0.2;
    worst_cos = std::max(worst_cos, diag.incoherence_cos);
    worst_sigma = std::min(worst_sigma, diag.sigma_min_k);
  }
  out->Check(incoherence_ok >= 38,
             "incoherence_cos <= 5 sqrt((n+d)/N) = " + Fmt("%.3f", bound) +
                 " in " + std::to_string(incoherence_ok) + "/40 seeds" +
                 Fmt(" (worst %.3f)", worst_cos));
  out->Check(sigma_ok >= 38,
             "sigma_min(K)/sqrt(N_br) >= 0.2 in " + std::to_string(sigma_ok) +
                 "/40 seeds" + Fmt(" (worst %.3f)", worst_sigma));
}

struct Criterion {
  const char* name;
  const char* title;
  std::function<void(Outcome*)> run;
};

const std::vector<Criterion>& Criteria() {
  static const std::vector<Criterion> kCriteria{
      {"toy_identifiability", "toy identifiability", ToyIdentifiability},
      {"topology_examples", "topology examples", TopologyExamples},
      {"aic_bic", "AIC/BIC arithmetic", AicBicArithmetic},
      {"estimator_oracle", "estimator vs gradient-ascent oracle",
       EstimatorOracle},
      {"derivatives_fd", "gradient/Hessian vs finite differences",
       DerivativesFiniteDifference},
      {"mm_guarantees", "MM monotonicity and minorization", MmGuarantees},
      {"existence_iff", "existence iff cone condition", ExistenceIff},
      {"care_equivalence", "static-covariate equivalence", CareEquivalence},
      {"luce_properties", "Luce probability properties", LuceProperties},
      {"consistency_trend", "desk-scale consistency trend", ConsistencyTrend},
      {"random_design_diagnostics", "random-design diagnostics",
       RandomDesignDiagnostics},
  };
  return kCriteria;
}

bool RunOne(const Criterion& c) {
  Outcome outcome;
  const auto start = std::chrono::steady_clock::now();
  try {
    c.run(&outcome);
  } catch (const std::exception& e) {
    outcome.Check(false, std::string("exception: ") + e.what());
  }
  const double seconds = Seconds(start);
  std::string summary = c.title;
  if (!outcome.passed()) summary += " (" + outcome.failures().front() + ")";
  std::cout << (outcome.passed() ? "PASS " : "FAIL ") << c.name << ": "
            << summary << Fmt(" [%.2f s]", seconds) << '\n';
  for (const auto& line : outcome.details())
    std::cout << "    " << line << '\n';
  std::cout.flush();
  return outcome.passed();
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> names;
  for (int i = 1; i < argc; ++i) names.push_back(argv[i]);
  if (names.empty()) {
    std::cerr << "usage: plusdc_acceptance --all | --list | <criterion>...\n";
    return 64;
  }
  if (names[0] == "--list") {
    for (const auto& c : Criteria()) std::cout << c.name << '\n';
    return 0;
  }
  bool all_passed = true;
  for (const auto& c : Criteria()) {
    const bool selected =
        names[0] == "--all" ||
        std::find(names.begin(), names.end(), c.name) != names.end();
    if (selected) all_passed = RunOne(c) && all_passed;
  }
  for (const auto& name : names) {
    if (name == "--all") continue;
    const bool known =
        std::any_of(Criteria().begin(), Criteria().end(),
                    [&](const Criterion& c) { return name == c.name; });
    if (!known) {
      std::cerr << "unknown criterion '" << name << "'\n";
      return 64;
    }
  }
  return all_passed ? 0 : 1;
}
