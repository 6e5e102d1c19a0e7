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

#include "core/design.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include <Eigen/SVD>
#include <Eigen/SparseCholesky>

#include "core/error.h"

namespace plusdc {
namespace {

// Stop the triangle scan after this many candidates without a witness.
constexpr std::int64_t kTriangleBudget = 5'000'000;

std::int64_t PairKey(int a, int b, int n) {
  return static_cast<std::int64_t>(a) * n + b;
}

// Singular values and right singular vectors of a tall or wide matrix. Tall
// inputs are reduced to their R factor first.
void SingularSystem(const Eigen::MatrixXd& a, Eigen::VectorXd* sigma,
                    Eigen::MatrixXd* v) {
  const Eigen::Index p = a.cols();
  if (a.rows() > 2 * p) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    const Eigen::MatrixXd r =
        qr.matrixQR().topRows(p).triangularView<Eigen::Upper>();
    Eigen::BDCSVD<Eigen::MatrixXd> svd(r, Eigen::ComputeFullV);
    *sigma = svd.singularValues();
    *v = svd.matrixV();
    return;
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  *sigma = Eigen::VectorXd::Zero(p);
  sigma->head(svd.singularValues().size()) = svd.singularValues();
  *v = svd.matrixV();
}

// Unit vector of span(basis) farthest from the gauge direction (1, 0).
Eigen::VectorXd GaugeFreeDirection(const Eigen::MatrixXd& basis, int n) {
  Eigen::MatrixXd projected = basis;
  const double inv = 1.0 / std::sqrt(static_cast<double>(n));
  for (Eigen::Index c = 0; c < projected.cols(); ++c) {
    const double along = projected.col(c).head(n).sum() * inv;
    projected.col(c).head(n).array() -= along * inv;
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(projected, Eigen::ComputeThinU);
  Eigen::VectorXd w = svd.matrixU().col(0);
  // Fix the sign so the largest entry is positive.
  Eigen::Index at;
  w.cwiseAbs().maxCoeff(&at);
  if (w[at] < 0) w = -w;
  return w;
}

// Orthonormal basis of range(a) with a relative rank cutoff.
Eigen::MatrixXd RangeBasis(const Eigen::MatrixXd& a) {
  if (a.cols() == 0 || a.rows() == 0) return Eigen::MatrixXd(a.rows(), 0);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  const double cutoff = 1e-10 *
                        static_cast<double>(std::max(a.rows(), a.cols())) *
                        (s.size() > 0 ? s[0] : 0.0);
  Eigen::Index rank = 0;
  while (rank < s.size() && s[rank] > cutoff) ++rank;
  return svd.matrixU().leftCols(rank);
}

IdentifiabilityReport SparseIdentifiability(const DesignMatrices& dm) {
  // Fix the gauge by dropping u_0; W has rank n + d - 1 iff the remaining
  // columns are independent, i.e. W'^T W' is positive definite.
  const int n = dm.num_objects;
  const int d = dm.num_covariates;
  const int p = n + d - 1;
  const int rows = dm.num_pairs();
  std::vector<Eigen::Triplet<double>> entries;
  for (int r = 0; r < rows; ++r) {
    const auto [a, b] = dm.breaking.pairs[r];
    if (a > 0) entries.emplace_back(r, a - 1, -1.0);
    if (b > 0) entries.emplace_back(r, b - 1, 1.0);
    for (int c = 0; c < d; ++c) {
      if (dm.k(r, c) != 0.0) entries.emplace_back(r, n - 1 + c, dm.k(r, c));
    }
  }
  Eigen::SparseMatrix<double> w(rows, p);
  w.setFromTriplets(entries.begin(), entries.end());
  const Eigen::SparseMatrix<double> normal =
      Eigen::SparseMatrix<double>(w.transpose()) * w;

  Eigen::VectorXd x = Eigen::VectorXd::Ones(p).normalized();
  double lambda_max = 0.0;
  for (int it = 0; it < 50; ++it) {
    Eigen::VectorXd y = normal * x;
    lambda_max = y.norm();
    if (lambda_max == 0.0) break;
    x = y / lambda_max;
  }
  IdentifiabilityReport report;
  report.rank_exact = false;
  report.sigma_max = std::sqrt(lambda_max);
  report.threshold =
      1e-10 * static_cast<double>(std::max(rows, n + d)) * report.sigma_max;

  Eigen::SparseMatrix<double> shifted = normal;
  const double shift = 1e-14 * std::max(lambda_max, 1.0);
  for (int i = 0; i < p; ++i) shifted.coeffRef(i, i) += shift;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(shifted);
  Eigen::VectorXd z = Eigen::VectorXd::Ones(p).normalized();
  double lambda_min = 0.0;
  if (ldlt.info() == Eigen::Success) {
    for (int it = 0; it < 50; ++it) {
      Eigen::VectorXd y = ldlt.solve(z);
      const double norm = y.norm();
      if (!std::isfinite(norm) || norm == 0.0) break;
      z = y / norm;
    }
    lambda_min = std::max(0.0, z.dot(normal * z));
  }
  const double sigma_min = std::sqrt(lambda_min);
  report.identifiable = sigma_min > report.threshold;
  report.rank = report.identifiable ? n + d - 1 : n + d - 2;
  if (!report.identifiable) {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(n + d);
    full.segment(1, n - 1) = z.head(n - 1);
    full.tail(d) = z.tail(d);
    full.head(n).array() -= full.head(n).mean();
    report.witness = full.normalized();
  }
  return report;
}

}  // namespace

Eigen::MatrixXd DesignMatrices::DenseW() const {
  Eigen::MatrixXd w(num_pairs(), num_objects + num_covariates);
  w.leftCols(num_objects) = Eigen::MatrixXd(q.transpose());
  w.rightCols(num_covariates) = k;
  return w;
}

Eigen::MatrixXd DeltaX(const Comparison& c) {
  const int m = c.size();
  Require(m >= 2, ErrorCode::kInput, "comparison needs at least 2 objects");
  return c.covariates.bottomRows(m - 1).rowwise() - c.covariates.row(0);
}

DesignMatrices Assemble(const Dataset& data) {
  ValidateDataset(data, false);
  DesignMatrices dm;
  dm.num_objects = data.num_objects;
  dm.num_covariates = data.num_covariates;
  dm.breaking = BreakEdges(GraphOf(data));
  const int rows = dm.num_pairs();
  dm.k.resize(rows, data.num_covariates);
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(2 * rows);
  int r = 0;
  for (const auto& c : data.comparisons) {
    const Eigen::MatrixXd delta = DeltaX(c);
    for (int t = 1; t < c.size(); ++t, ++r) {
      entries.emplace_back(c.edge[0], r, -1.0);
      entries.emplace_back(c.edge[t], r, 1.0);
      dm.k.row(r) = delta.row(t - 1);
    }
  }
  dm.q.resize(data.num_objects, rows);
  dm.q.setFromTriplets(entries.begin(), entries.end());
  for (int p = 0; p < rows; ++p) {
    const auto [a, b] = dm.breaking.pairs[p];
    dm.first_row.emplace(PairKey(a, b, dm.num_objects), p);
  }
  return dm;
}

IdentifiabilityReport IdentifiabilityCheck(const DesignMatrices& dm) {
  const int n = dm.num_objects;
  const int p = n + dm.num_covariates;
  if (p > kDenseRankLimit) return SparseIdentifiability(dm);

  IdentifiabilityReport report;
  const Eigen::MatrixXd w = dm.DenseW();
  Eigen::VectorXd sigma;
  Eigen::MatrixXd v;
  if (w.rows() == 0) {
    sigma = Eigen::VectorXd::Zero(p);
    v = Eigen::MatrixXd::Identity(p, p);
  } else {
    SingularSystem(w, &sigma, &v);
  }
  report.sigma_max = sigma.size() > 0 ? sigma.maxCoeff() : 0.0;
  report.threshold = 1e-10 * static_cast<double>(std::max(dm.num_pairs(), p)) *
                     report.sigma_max;
  std::vector<Eigen::Index> kernel;
  for (Eigen::Index i = 0; i < p; ++i) {
    if (sigma[i] > report.threshold) {
      ++report.rank;
    } else {
      kernel.push_back(i);
    }
  }
  report.identifiable = report.rank == p - 1;
  if (!report.identifiable && !kernel.empty()) {
    Eigen::MatrixXd basis(p, static_cast<Eigen::Index>(kernel.size()));
    for (std::size_t c = 0; c < kernel.size(); ++c) {
      basis.col(static_cast<Eigen::Index>(c)) = v.col(kernel[c]);
    }
    report.witness = GaugeFreeDirection(basis, n);
  }
  return report;
}

std::vector<Triangle> BreakingTriangles(const DesignMatrices& dm) {
  const int n = dm.num_objects;
  std::vector<std::vector<int>> above(n);
  for (int r = 0; r < dm.num_pairs(); ++r) {
    const auto [a, b] = dm.breaking.pairs[r];
    if (dm.PairRow(a, b) == r) above[a].push_back(b);
  }
  for (auto& list : above) std::sort(list.begin(), list.end());
  std::vector<Triangle> out;
  for (int i = 0; i < n; ++i) {
    for (std::size_t x = 0; x < above[i].size(); ++x) {
      for (std::size_t y = x + 1; y < above[i].size(); ++y) {
        const int j = above[i][x], k = above[i][y];
        if (dm.PairRow(j, k) >= 0) out.push_back({{i, j, k}});
      }
    }
    if (static_cast<std::int64_t>(out.size()) > kTriangleBudget) break;
  }
  return out;
}

int DesignMatrices::PairRow(int a, int b) const {
  const auto it = first_row.find(PairKey(a, b, num_objects));
  return it == first_row.end() ? -1 : it->second;
}

namespace {

int RequirePairRow(const DesignMatrices& dm, int a, int b) {
  const int r = dm.PairRow(a, b);
  Require(r >= 0, ErrorCode::kInput,
          "pair (" + std::to_string(a + 1) + ", " + std::to_string(b + 1) +
              ") is not in the breaking");
  return r;
}

}  // namespace

Eigen::VectorXd CurlFromK(const DesignMatrices& dm, const Triangle& tri) {
  auto row_of = [&](int a, int b) { return RequirePairRow(dm, a, b); };
  const auto [i, j, k] = tri.vertices;
  return (dm.k.row(row_of(i, j)) + dm.k.row(row_of(j, k)) -
          dm.k.row(row_of(i, k)))
      .transpose();
}

Eigen::VectorXd CurlFromCovariates(const DesignMatrices& dm,
                                   const Dataset& data, const Triangle& tri) {
  // Flow f(a, b) = X_{e,b} - X_{e,a} on the first comparison containing a as
  // its smallest member together with b.
  auto flow = [&](int a, int b) -> Eigen::VectorXd {
    const int r = RequirePairRow(dm, a, b);
    const auto& c = data.comparisons[dm.breaking.source_edge[r]];
    int la = -1, lb = -1;
    for (int t = 0; t < c.size(); ++t) {
      if (c.edge[t] == a) la = t;
      if (c.edge[t] == b) lb = t;
    }
    return (c.covariates.row(lb) - c.covariates.row(la)).transpose();
  };
  const auto [i, j, k] = tri.vertices;
  return flow(i, j) + flow(j, k) - flow(i, k);
}

CurlReport CurlForTriangles(const DesignMatrices& dm,
                            const std::vector<Triangle>& triangles) {
  const int d = dm.num_covariates;
  CurlReport report;
  report.num_triangles = static_cast<int>(triangles.size());
  report.triangles = triangles;
  report.t_matrix.resize(static_cast<Eigen::Index>(triangles.size()), d);
  for (std::size_t a = 0; a < triangles.size(); ++a) {
    report.t_matrix.row(static_cast<Eigen::Index>(a)) =
        CurlFromK(dm, triangles[a]).transpose();
  }
  if (report.t_matrix.rows() == d && d > 0) {
    report.det = report.t_matrix.determinant();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(report.t_matrix);
    const auto& s = svd.singularValues();
    report.curl_rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      if (s[i] > 1e-10 * std::max(1.0, s[0])) ++report.curl_rank;
    }
    report.passes = report.curl_rank == d;
    if (!report.passes) report.reason = "curl matrix is singular";
  } else {
    report.reason = "need exactly d triangles";
  }
  return report;
}

CurlReport CurlSufficientCheck(const DesignMatrices& dm, const Hypergraph& g) {
  const int d = dm.num_covariates;
  CurlReport report;
  if (d == 0) {
    report.reason = "no covariates (d = 0)";
    return report;
  }
  if (!g.IsConnected()) {
    report.reason = "comparison graph is disconnected";
    return report;
  }
  const auto all = BreakingTriangles(dm);
  report.num_triangles = static_cast<int>(all.size());
  if (all.empty()) {
    report.reason = "breaking has no triangles";
    return report;
  }
  // Scale for the rank cutoff.
  double scale = 0.0;
  for (Eigen::Index c = 0; c < dm.k.cols(); ++c) {
    scale = std::max(scale, dm.k.col(c).cwiseAbs().maxCoeff());
  }
  const double cutoff = 1e-9 * std::max(scale, 1.0);
  std::vector<Eigen::VectorXd> basis;
  std::vector<Triangle> chosen;
  for (const auto& tri : all) {
    Eigen::VectorXd curl = CurlFromK(dm, tri);
    Eigen::VectorXd residual = curl;
    for (const auto& b : basis) residual -= b.dot(residual) * b;
    if (residual.norm() <= cutoff) continue;
    basis.push_back(residual.normalized());
    chosen.push_back(tri);
    if (static_cast<int>(chosen.size()) == d) break;
  }
  report.curl_rank = static_cast<int>(chosen.size());
  if (report.curl_rank < d) {
    report.triangles = chosen;
    report.reason =
        static_cast<std::int64_t>(all.size()) > kTriangleBudget
            ? "inconclusive: triangle search budget exhausted"
            : "curl matrix over all triangles has rank " +
                  std::to_string(report.curl_rank) + " < d";
    return report;
  }
  CurlReport selected = CurlForTriangles(dm, chosen);
  selected.num_triangles = report.num_triangles;
  return selected;
}

ConsistencyDiagnostics ComputeConsistencyDiagnostics(
    const DesignMatrices& dm) {
  Require(dm.num_pairs() >= 1, ErrorCode::kInput,
          "diagnostics need at least one breaking pair");
  ConsistencyDiagnostics out;
  const double rows = static_cast<double>(dm.num_pairs());
  if (dm.num_covariates == 0) {
    out.sigma_min_k = std::numeric_limits<double>::quiet_NaN();
    out.incoherence_cos = 0.0;
    return out;
  }
  if (dm.num_pairs() >= dm.num_covariates) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(dm.k);
    out.sigma_min_k = svd.singularValues().minCoeff() / std::sqrt(rows);
  }
  const Eigen::MatrixXd uq = RangeBasis(Eigen::MatrixXd(dm.q.transpose()));
  const Eigen::MatrixXd uk = RangeBasis(dm.k);
  if (uq.cols() == 0 || uk.cols() == 0) return out;
  Eigen::BDCSVD<Eigen::MatrixXd> cross(uq.transpose() * uk);
  out.incoherence_cos = std::min(1.0, cross.singularValues()[0]);
  return out;
}

CareResult CareEquivalence(const Eigen::MatrixXd& z,
                           const Eigen::VectorXd& u_tilde) {
  const Eigen::Index n = z.rows();
  const Eigen::Index d = z.cols();
  Require(u_tilde.size() == n, ErrorCode::kInput,
          "u_tilde length must equal the rows of Z");
  Require(d >= 1, ErrorCode::kInput, "Z needs at least one column");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(z, Eigen::ComputeThinU |
                                            Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double cutoff =
      1e-10 * static_cast<double>(std::max(n, d)) * (s.size() ? s[0] : 0.0);
  Eigen::Index rank = 0;
  while (rank < s.size() && s[rank] > cutoff) ++rank;
  Require(rank == d, ErrorCode::kPrecondition,
          "precondition rank(Z) = d fails: rank(Z) = " + std::to_string(rank) +
              " < d = " + std::to_string(d));
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  const Eigen::MatrixXd u = svd.matrixU().leftCols(rank);
  const double residual = (ones - u * (u.transpose() * ones)).norm();
  Require(residual > 1e-8 * std::sqrt(static_cast<double>(n)),
          ErrorCode::kPrecondition,
          "precondition 1 not in range(Z) fails: the all-ones vector lies in "
          "the column space of Z");

  const Eigen::VectorXd ut = u_tilde.array() - u_tilde.mean();
  const Eigen::RowVectorXd col_sums = z.colwise().sum();
  const Eigen::MatrixXd normal =
      z.transpose() * z - col_sums.transpose() * col_sums / double(n);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(normal);
  Require(ldlt.info() == Eigen::Success, ErrorCode::kNumeric,
          "centered normal matrix is numerically singular");
  CareResult out;
  out.v_hat = ldlt.solve(z.transpose() * ut);
  const Eigen::VectorXd zv = z * out.v_hat;
  out.u_hat = ut - (zv.array() - zv.mean()).matrix();
  return out;
}

}  // namespace plusdc
