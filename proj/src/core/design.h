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

// Design matrices of the edge breaking and the identifiability diagnostics
// built on them.
//
// Each comparison (j_1 < ... < j_m) is broken into the pairs (j_1, j_t),
// t = 2..m. Column r of Q holds -1 at the anchor j_1 and +1 at j_t; row r of
// K is X_{e,j_t} - X_{e,j_1}. W = [Q^T K] has (1, 0) in its kernel, and the
// model is identifiable iff rank(W) = n + d - 1.

#ifndef PLUSDC_CORE_DESIGN_H_
#define PLUSDC_CORE_DESIGN_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "core/hypergraph.h"
#include "core/model.h"

namespace plusdc {

// Above this many unknowns the rank test avoids a dense SVD.
inline constexpr int kDenseRankLimit = 5000;

struct DesignMatrices {
  int num_objects = 0;
  int num_covariates = 0;
  Breaking breaking;
  Eigen::SparseMatrix<double> q;  // n x N_br
  Eigen::MatrixXd k;              // N_br x d
  // First breaking row of each vertex pair, keyed by a * n + b.
  std::unordered_map<std::int64_t, int> first_row;

  int num_pairs() const { return breaking.size(); }
  Eigen::MatrixXd DenseW() const;
  // Row of the representative pair (a, b), or -1.
  int PairRow(int a, int b) const;
};

// Rows X_{e,j_t} - X_{e,j_1} for t = 2..m.
Eigen::MatrixXd DeltaX(const Comparison& c);

DesignMatrices Assemble(const Dataset& data);

struct IdentifiabilityReport {
  bool identifiable = false;
  int rank = 0;
  // False when the rank came from the sparse path, which only decides
  // whether rank(W) = n + d - 1.
  bool rank_exact = true;
  double sigma_max = 0.0;
  double threshold = 0.0;
  // Unit kernel vector orthogonal to (1, 0) when not identifiable.
  std::optional<Eigen::VectorXd> witness;
};

IdentifiabilityReport IdentifiabilityCheck(const DesignMatrices& dm);

struct Triangle {
  std::array<int, 3> vertices;  // i < j < k, 0-based
};

struct CurlReport {
  bool passes = false;
  std::string reason;
  int num_triangles = 0;
  // Rank of the stacked curl matrix (one row per triangle).
  int curl_rank = 0;
  std::vector<Triangle> triangles;  // the d selected triangles
  Eigen::MatrixXd t_matrix;         // d x d, row a = curl on triangle a
  double det = 0.0;
};

// Triangles i < j < k of the simple skeleton of the breaking.
std::vector<Triangle> BreakingTriangles(const DesignMatrices& dm);

// Curl of every K column on one triangle, K(i,j) + K(j,k) - K(i,k), using the
// first breaking pair for each vertex pair.
Eigen::VectorXd CurlFromK(const DesignMatrices& dm, const Triangle& tri);
// Same quantity from the raw covariates of the representative comparisons.
Eigen::VectorXd CurlFromCovariates(const DesignMatrices& dm,
                                   const Dataset& data, const Triangle& tri);

// Searches for d triangles with a nonsingular curl matrix. Triangles are
// taken greedily in lexicographic order, keeping each one that raises the
// rank; the linear-matroid structure makes this exact.
CurlReport CurlSufficientCheck(const DesignMatrices& dm, const Hypergraph& g);

// Curl matrix and determinant for caller-chosen triangles.
CurlReport CurlForTriangles(const DesignMatrices& dm,
                            const std::vector<Triangle>& triangles);

struct ConsistencyDiagnostics {
  double sigma_min_k = 0.0;       // sigma_min(K) / sqrt(N_br)
  double incoherence_cos = 0.0;   // largest principal-angle cosine
};

ConsistencyDiagnostics ComputeConsistencyDiagnostics(const DesignMatrices& dm);

struct CareResult {
  Eigen::VectorXd u_hat;
  Eigen::VectorXd v_hat;
};

// Maps a plain PL estimate u_tilde to the static-covariate model with
// covariate matrix z (n x d). Throws kPrecondition naming the failing
// hypothesis when rank(z) < d or 1 lies in range(z).
CareResult CareEquivalence(const Eigen::MatrixXd& z,
                           const Eigen::VectorXd& u_tilde);

}  // namespace plusdc

#endif  // PLUSDC_CORE_DESIGN_H_
