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

// Random comparison-graph designs: the nonuniform random hypergraph model
// (NURHM), the uniform hypergraph stochastic block model (HSBM), and the
// fixed-edge-count designs used by the consistency experiment.

#ifndef PLUSDC_CORE_RANDGRAPH_H_
#define PLUSDC_CORE_RANDGRAPH_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/hypergraph.h"
#include "core/rng.h"

namespace plusdc {

struct NurhmSpec {
  int num_vertices = 0;
  // edge_probability[m - 2] is the inclusion probability of each size-m
  // tuple, for m = 2..M.
  std::vector<double> edge_probability;
  std::uint64_t seed = 0;
};

// Blocks are contiguous vertex ranges in the order given.
struct HsbmSpec {
  int num_vertices = 0;
  int edge_size = 2;
  std::vector<int> block_sizes;
  std::vector<double> within_probability;  // one per block
  double cross_probability = 0.0;
  std::uint64_t seed = 0;
};

enum class DesignKind { kNurhm6, kHsbm2 };

std::optional<DesignKind> ParseDesignKind(const std::string& name);
std::string DesignKindName(DesignKind kind);

// Binomial coefficient, or nullopt when it does not fit in 63 bits.
std::optional<std::int64_t> Choose(int n, int k);

// The `rank`-th k-subset of {0..n-1} in lexicographic order.
std::vector<int> UnrankCombination(int n, int k, std::int64_t rank);

void ValidateNurhmSpec(const NurhmSpec& spec);
void ValidateHsbmSpec(const HsbmSpec& spec);

// Independent Bernoulli inclusion of every size-m tuple. Small classes are
// enumerated; large ones draw a binomial count and then that many distinct
// tuples uniformly, which has the same law.
Hypergraph SampleNurhm(const NurhmSpec& spec);
Hypergraph SampleHsbm(const HsbmSpec& spec);

struct EdgeOrders {
  double xi_minus = 0.0;
  double xi_plus = 0.0;
};

// Homogeneous probabilities, so xi_minus == xi_plus.
EdgeOrders ExpectedEdgeOrders(const NurhmSpec& spec);
double ZetaMinus(const HsbmSpec& spec);

// N = 0.1 n (ln n)^3 for nurhm6 and 0.07 n^2 for hsbm2, floored.
std::int64_t ExperimentEdgeCount(DesignKind kind, int n);

// Relative community weights 5n : 20n : 4 (ln n)^3 (natural log) for the
// hsbm2 design, in the order {inside block 1, inside block 2, crossing}.
std::vector<double> Hsbm2CommunityWeights(int n);

// Fixed-N designs. nurhm6: sizes 2..7 with equal allocation (remainder to the
// smallest sizes), each edge uniform among tuples of its size. hsbm2: size-5
// edges, blocks floor(n/3) and n - floor(n/3), community drawn with
// Hsbm2CommunityWeights, edge uniform within the community. Repeated edges
// are allowed.
Hypergraph SampleExperimentDesign(DesignKind kind, int n,
                                  std::int64_t num_edges, Philox& rng);

}  // namespace plusdc

#endif  // PLUSDC_CORE_RANDGRAPH_H_
