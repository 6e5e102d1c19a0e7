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

#include "core/randgraph.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <unordered_set>

#include "core/error.h"

namespace plusdc {
namespace {

// Classes at most this large are sampled tuple by tuple.
constexpr std::int64_t kEnumerationLimit = 2'000'000;

bool NextCombination(int n, std::vector<int>* c) {
  const int k = static_cast<int>(c->size());
  int i = k - 1;
  while (i >= 0 && (*c)[i] == n - k + i) --i;
  if (i < 0) return false;
  ++(*c)[i];
  for (int j = i + 1; j < k; ++j) (*c)[j] = (*c)[j - 1] + 1;
  return true;
}

// k distinct values from [0, bound), in increasing order (Floyd).
std::vector<std::int64_t> DistinctSample(std::int64_t bound, std::int64_t k,
                                         Philox& rng) {
  std::unordered_set<std::int64_t> chosen;
  chosen.reserve(static_cast<std::size_t>(k) * 2);
  for (std::int64_t j = bound - k; j < bound; ++j) {
    const auto t = static_cast<std::int64_t>(
        rng.UniformInt(static_cast<std::uint64_t>(j) + 1));
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::int64_t> out(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

// k distinct vertices drawn uniformly from `pool`, sorted.
std::vector<int> UniformSubset(std::span<const int> pool, int k, Philox& rng) {
  const auto picks = DistinctSample(static_cast<std::int64_t>(pool.size()), k,
                                    rng);
  std::vector<int> out;
  out.reserve(k);
  for (auto p : picks) out.push_back(pool[p]);
  std::sort(out.begin(), out.end());
  return out;
}

std::int64_t BinomialCount(std::int64_t trials, double p, Philox& rng) {
  if (p <= 0.0 || trials == 0) return 0;
  if (p >= 1.0) return trials;
  std::binomial_distribution<std::int64_t> dist(trials, p);
  return dist(rng);
}

// Bernoulli(p) inclusion of each k-subset of `pool` accepted by `keep`.
// `class_size` is the number of accepted subsets.
void SampleClass(std::span<const int> pool, int k, double p,
                 std::int64_t class_size,
                 const std::function<bool(const std::vector<int>&)>& keep,
                 Philox& rng, std::vector<std::vector<int>>* edges) {
  const int n = static_cast<int>(pool.size());
  if (p <= 0.0 || class_size == 0 || k > n) return;
  const auto total = Choose(n, k);
  if (total && *total <= kEnumerationLimit) {
    std::vector<int> c(k);
    for (int i = 0; i < k; ++i) c[i] = i;
    do {
      std::vector<int> e(k);
      for (int i = 0; i < k; ++i) e[i] = pool[c[i]];
      if (!keep(e)) continue;
      if (p >= 1.0 || rng.Uniform() < p) edges->push_back(std::move(e));
    } while (NextCombination(n, &c));
    return;
  }
  Require(total.has_value(), ErrorCode::kCapability,
          "tuple space too large to index");
  const std::int64_t count = BinomialCount(class_size, p, rng);
  if (count == 0) return;
  if (class_size == *total) {
    for (auto rank : DistinctSample(*total, count, rng)) {
      auto local = UnrankCombination(n, k, rank);
      for (auto& v : local) v = pool[v];
      edges->push_back(std::move(local));
    }
    return;
  }
  // Filtered class: rejection on the full index space.
  std::unordered_set<std::int64_t> seen;
  std::vector<std::int64_t> ranks;
  while (static_cast<std::int64_t>(ranks.size()) < count) {
    const auto rank = static_cast<std::int64_t>(
        rng.UniformInt(static_cast<std::uint64_t>(*total)));
    if (seen.count(rank)) continue;
    auto local = UnrankCombination(n, k, rank);
    for (auto& v : local) v = pool[v];
    if (!keep(local)) continue;
    seen.insert(rank);
    ranks.push_back(rank);
  }
  std::sort(ranks.begin(), ranks.end());
  for (auto rank : ranks) {
    auto local = UnrankCombination(n, k, rank);
    for (auto& v : local) v = pool[v];
    edges->push_back(std::move(local));
  }
}

void CheckProbability(double p, const std::string& what) {
  Require(p >= 0.0 && p <= 1.0, ErrorCode::kInput,
          what + " must lie in [0, 1]");
}

}  // namespace

std::optional<DesignKind> ParseDesignKind(const std::string& name) {
  if (name == "nurhm6") return DesignKind::kNurhm6;
  if (name == "hsbm2") return DesignKind::kHsbm2;
  return std::nullopt;
}

std::string DesignKindName(DesignKind kind) {
  return kind == DesignKind::kNurhm6 ? "nurhm6" : "hsbm2";
}

std::optional<std::int64_t> Choose(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 result = 1;
  for (int i = 1; i <= k; ++i) {
    result =
        result * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (result > static_cast<unsigned __int128>(
                     std::numeric_limits<std::int64_t>::max())) {
      return std::nullopt;
    }
  }
  return static_cast<std::int64_t>(result);
}

std::vector<int> UnrankCombination(int n, int k, std::int64_t rank) {
  std::vector<int> out;
  out.reserve(k);
  int v = 0;
  for (int pos = 0; pos < k; ++pos) {
    for (;; ++v) {
      const std::int64_t below = Choose(n - v - 1, k - pos - 1).value();
      if (rank < below) break;
      rank -= below;
    }
    out.push_back(v++);
  }
  return out;
}

void ValidateNurhmSpec(const NurhmSpec& spec) {
  Require(spec.num_vertices >= 1, ErrorCode::kInput, "n must be positive");
  Require(!spec.edge_probability.empty(), ErrorCode::kInput,
          "NURHM needs edge probabilities for sizes 2..M");
  for (std::size_t i = 0; i < spec.edge_probability.size(); ++i) {
    CheckProbability(spec.edge_probability[i],
                     "p for edge size " + std::to_string(i + 2));
  }
}

void ValidateHsbmSpec(const HsbmSpec& spec) {
  Require(spec.num_vertices >= 1, ErrorCode::kInput, "n must be positive");
  Require(spec.edge_size >= 2, ErrorCode::kInput, "edge size must be >= 2");
  Require(!spec.block_sizes.empty() &&
              spec.block_sizes.size() == spec.within_probability.size(),
          ErrorCode::kInput,
          "one within-block probability per block is required");
  int total = 0;
  for (int s : spec.block_sizes) {
    Require(s >= 1, ErrorCode::kInput, "block sizes must be positive");
    total += s;
  }
  Require(total == spec.num_vertices, ErrorCode::kInput,
          "block sizes must sum to n");
  for (double p : spec.within_probability) {
    CheckProbability(p, "within-block probability");
  }
  CheckProbability(spec.cross_probability, "cross-block probability");
}

Hypergraph SampleNurhm(const NurhmSpec& spec) {
  ValidateNurhmSpec(spec);
  Philox rng(spec.seed, 0);
  const int n = spec.num_vertices;
  std::vector<int> pool(n);
  for (int i = 0; i < n; ++i) pool[i] = i;
  std::vector<std::vector<int>> edges;
  for (std::size_t i = 0; i < spec.edge_probability.size(); ++i) {
    const int m = static_cast<int>(i) + 2;
    // Each size class uses its own sub-stream.
    Philox size_rng = rng.Substream(static_cast<std::uint64_t>(m));
    const auto total = Choose(n, m);
    Require(total.has_value() || spec.edge_probability[i] == 0.0,
            ErrorCode::kCapability, "tuple space too large to index");
    SampleClass(pool, m, spec.edge_probability[i], total.value_or(0),
                [](const std::vector<int>&) { return true; }, size_rng,
                &edges);
  }
  return Hypergraph(n, std::move(edges));
}

Hypergraph SampleHsbm(const HsbmSpec& spec) {
  ValidateHsbmSpec(spec);
  Philox rng(spec.seed, 0);
  const int n = spec.num_vertices;
  const int k = spec.edge_size;
  std::vector<int> block_of(n);
  std::vector<std::vector<int>> pools(spec.block_sizes.size());
  int offset = 0;
  for (std::size_t b = 0; b < spec.block_sizes.size(); ++b) {
    for (int i = 0; i < spec.block_sizes[b]; ++i) {
      block_of[offset + i] = static_cast<int>(b);
      pools[b].push_back(offset + i);
    }
    offset += spec.block_sizes[b];
  }
  std::vector<std::vector<int>> edges;
  std::int64_t inside_total = 0;
  for (std::size_t b = 0; b < pools.size(); ++b) {
    Philox block_rng = rng.Substream(b + 1);
    const auto count = Choose(static_cast<int>(pools[b].size()), k);
    Require(count.has_value(), ErrorCode::kCapability,
            "tuple space too large to index");
    inside_total += *count;
    SampleClass(pools[b], k, spec.within_probability[b], *count,
                [](const std::vector<int>&) { return true; }, block_rng,
                &edges);
  }
  const auto all = Choose(n, k);
  Require(all.has_value(), ErrorCode::kCapability,
          "tuple space too large to index");
  std::vector<int> everyone(n);
  for (int i = 0; i < n; ++i) everyone[i] = i;
  Philox cross_rng = rng.Substream(0);
  SampleClass(everyone, k, spec.cross_probability, *all - inside_total,
              [&](const std::vector<int>& e) {
                for (int v : e) {
                  if (block_of[v] != block_of[e[0]]) return true;
                }
                return false;
              },
              cross_rng, &edges);
  return Hypergraph(n, std::move(edges));
}

EdgeOrders ExpectedEdgeOrders(const NurhmSpec& spec) {
  ValidateNurhmSpec(spec);
  double xi = 0.0;
  for (std::size_t i = 0; i < spec.edge_probability.size(); ++i) {
    const int m = static_cast<int>(i) + 2;
    xi += std::pow(static_cast<double>(spec.num_vertices), m - 1) *
          spec.edge_probability[i];
  }
  return {xi, xi};
}

double ZetaMinus(const HsbmSpec& spec) {
  ValidateHsbmSpec(spec);
  double lowest = spec.cross_probability;
  for (double p : spec.within_probability) lowest = std::min(lowest, p);
  return std::pow(static_cast<double>(spec.num_vertices), spec.edge_size - 1) *
         lowest;
}

std::int64_t ExperimentEdgeCount(DesignKind kind, int n) {
  Require(n >= 2, ErrorCode::kInput, "n must be at least 2");
  const double x = static_cast<double>(n);
  if (kind == DesignKind::kNurhm6) {
    const double logn = std::log(x);
    return static_cast<std::int64_t>(std::floor(0.1 * x * logn * logn * logn));
  }
  return static_cast<std::int64_t>(std::floor(0.07 * x * x));
}

std::vector<double> Hsbm2CommunityWeights(int n) {
  const double x = static_cast<double>(n);
  const double logn = std::log(x);
  return {5.0 * x, 20.0 * x, 4.0 * logn * logn * logn};
}

Hypergraph SampleExperimentDesign(DesignKind kind, int n,
                                  std::int64_t num_edges, Philox& rng) {
  Require(num_edges >= 1, ErrorCode::kInput, "edge count must be positive");
  std::vector<int> everyone(n);
  for (int i = 0; i < n; ++i) everyone[i] = i;
  std::vector<std::vector<int>> edges;
  edges.reserve(num_edges);

  if (kind == DesignKind::kNurhm6) {
    constexpr int kSizes = 6;
    for (int s = 0; s < kSizes; ++s) {
      const int m = s + 2;
      const std::int64_t quota = num_edges / kSizes + (s < num_edges % kSizes);
      const auto available = Choose(n, m);
      Require(!available || quota <= *available, ErrorCode::kInput,
              "requested " + std::to_string(quota) + " edges of size " +
                  std::to_string(m) + " but only " +
                  std::to_string(available.value_or(0)) +
                  " distinct tuples exist");
      for (std::int64_t i = 0; i < quota; ++i) {
        edges.push_back(UniformSubset(everyone, m, rng));
      }
    }
    return Hypergraph(n, std::move(edges));
  }

  constexpr int kSize = 5;
  const int first = n / 3;
  Require(first >= kSize, ErrorCode::kInput,
          "hsbm2 needs n >= 15 so both blocks hold a size-5 edge");
  const auto available = Choose(n, kSize);
  Require(!available || num_edges <= *available, ErrorCode::kInput,
          "requested more edges than distinct size-5 tuples");
  std::vector<int> block1(everyone.begin(), everyone.begin() + first);
  std::vector<int> block2(everyone.begin() + first, everyone.end());
  const auto weights = Hsbm2CommunityWeights(n);
  const double total = weights[0] + weights[1] + weights[2];
  for (std::int64_t i = 0; i < num_edges; ++i) {
    const double draw = rng.Uniform() * total;
    if (draw < weights[0]) {
      edges.push_back(UniformSubset(block1, kSize, rng));
    } else if (draw < weights[0] + weights[1]) {
      edges.push_back(UniformSubset(block2, kSize, rng));
    } else {
      for (;;) {
        auto e = UniformSubset(everyone, kSize, rng);
        const bool all_first = e.back() < first;
        const bool all_second = e.front() >= first;
        if (!all_first && !all_second) {
          edges.push_back(std::move(e));
          break;
        }
      }
    }
  }
  return Hypergraph(n, std::move(edges));
}

}  // namespace plusdc
