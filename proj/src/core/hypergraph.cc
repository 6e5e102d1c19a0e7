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

#include "core/hypergraph.h"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>
#include <string>

#include "core/error.h"

namespace plusdc {
namespace {

std::vector<std::uint64_t> EdgeMasks(const Hypergraph& graph) {
  std::vector<std::uint64_t> masks;
  masks.reserve(graph.num_edges());
  for (const auto& e : graph.edges()) {
    std::uint64_t m = 0;
    for (int v : e) m |= std::uint64_t{1} << v;
    masks.push_back(m);
  }
  return masks;
}

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int Find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool Union(int a, int b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<int> parent_;
};

// Number of boundary edges of `set` that also meet `advance`.
void CountBoundary(std::span<const std::uint64_t> edge_masks,
                   std::uint64_t set, std::uint64_t full,
                   std::vector<std::uint64_t>* boundary) {
  boundary->clear();
  const std::uint64_t complement = full & ~set;
  for (std::uint64_t m : edge_masks) {
    if ((m & set) && (m & complement)) boundary->push_back(m);
  }
}

bool StepAdmissible(std::span<const std::uint64_t> boundary,
                    std::uint64_t added, double lambda) {
  int hit = 0;
  for (std::uint64_t m : boundary) {
    if (m & added) ++hit;
  }
  return static_cast<double>(hit) >=
         lambda * static_cast<double>(boundary.size()) - 1e-12;
}

}  // namespace

Hypergraph::Hypergraph(int num_vertices, std::vector<std::vector<int>> edges,
                       int max_edge_size)
    : num_vertices_(num_vertices), edges_(std::move(edges)) {
  Require(num_vertices >= 1, ErrorCode::kInput,
          "hypergraph needs at least one vertex");
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    auto& e = edges_[i];
    Require(e.size() >= 2, ErrorCode::kInput,
            "edge " + std::to_string(i + 1) + " has fewer than 2 vertices");
    Require(max_edge_size <= 0 || static_cast<int>(e.size()) <= max_edge_size,
            ErrorCode::kInput,
            "edge " + std::to_string(i + 1) + " exceeds the size cap " +
                std::to_string(max_edge_size));
    std::sort(e.begin(), e.end());
    for (std::size_t t = 0; t < e.size(); ++t) {
      Require(e[t] >= 0 && e[t] < num_vertices, ErrorCode::kInput,
              "edge " + std::to_string(i + 1) + " references vertex " +
                  std::to_string(e[t] + 1) + " outside [1, " +
                  std::to_string(num_vertices) + "]");
      Require(t == 0 || e[t] != e[t - 1], ErrorCode::kInput,
              "edge " + std::to_string(i + 1) + " repeats vertex " +
                  std::to_string(e[t] + 1));
    }
  }
}

int Hypergraph::max_edge_size() const {
  std::size_t m = 0;
  for (const auto& e : edges_) m = std::max(m, e.size());
  return static_cast<int>(m);
}

std::int64_t Hypergraph::total_incidence() const {
  std::int64_t total = 0;
  for (const auto& e : edges_) total += static_cast<std::int64_t>(e.size());
  return total;
}

int Hypergraph::Degree(int vertex) const {
  Require(vertex >= 0 && vertex < num_vertices_, ErrorCode::kInput,
          "vertex " + std::to_string(vertex + 1) + " out of range");
  int degree = 0;
  for (const auto& e : edges_) {
    if (std::binary_search(e.begin(), e.end(), vertex)) ++degree;
  }
  return degree;
}

std::vector<int> Hypergraph::Degrees() const {
  std::vector<int> degrees(num_vertices_, 0);
  for (const auto& e : edges_) {
    for (int v : e) ++degrees[v];
  }
  return degrees;
}

std::vector<int> Hypergraph::Boundary(std::span<const int> vertex_set) const {
  std::vector<char> inside(num_vertices_, 0);
  int count = 0;
  for (int v : vertex_set) {
    Require(v >= 0 && v < num_vertices_, ErrorCode::kInput,
            "vertex " + std::to_string(v + 1) + " out of range");
    if (!inside[v]) ++count;
    inside[v] = 1;
  }
  Require(count > 0 && count < num_vertices_, ErrorCode::kInput,
          "boundary needs a nonempty proper vertex subset");
  std::vector<int> result;
  for (int i = 0; i < num_edges(); ++i) {
    bool in = false, out = false;
    for (int v : edges_[i]) (inside[v] ? in : out) = true;
    if (in && out) result.push_back(i);
  }
  return result;
}

bool Hypergraph::IsConnected() const {
  DisjointSets sets(num_vertices_);
  int components = num_vertices_;
  for (const auto& e : edges_) {
    for (std::size_t t = 1; t < e.size(); ++t) {
      if (sets.Union(e[0], e[t])) --components;
    }
  }
  return components == 1;
}

Breaking BreakEdges(const Hypergraph& graph) {
  Breaking breaking;
  const auto total = graph.total_incidence() - graph.num_edges();
  breaking.pairs.reserve(total);
  breaking.source_edge.reserve(total);
  for (int i = 0; i < graph.num_edges(); ++i) {
    const auto& e = graph.edge(i);
    for (std::size_t t = 1; t < e.size(); ++t) {
      breaking.pairs.emplace_back(e[0], e[t]);
      breaking.source_edge.push_back(i);
    }
  }
  return breaking;
}

CheegerResult CheegerConstant(const Hypergraph& graph, int vertex_cap) {
  const int n = graph.num_vertices();
  if (n > vertex_cap || n > 62) {
    Fail(ErrorCode::kCapability,
         "exact Cheeger constant is limited to " + std::to_string(vertex_cap) +
             " vertices (graph has " + std::to_string(n) +
             "); use the minimum-degree upper bound instead");
  }
  Require(n >= 2, ErrorCode::kDomain, "Cheeger constant needs n >= 2");
  const auto masks = EdgeMasks(graph);
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  CheegerResult best{std::numeric_limits<double>::infinity(), 0};
  for (std::uint64_t set = 1; set < full; ++set) {
    const int size = std::popcount(set);
    if (2 * size > n) continue;
    const std::uint64_t complement = full & ~set;
    int boundary = 0;
    for (std::uint64_t m : masks) {
      if ((m & set) && (m & complement)) ++boundary;
    }
    const double ratio = static_cast<double>(boundary) / size;
    if (ratio < best.value) best = {ratio, set};
  }
  return best;
}

DiameterResult WeaklyAdmissibleDiameter(const Hypergraph& graph,
                                        double lambda, int vertex_cap) {
  const int n = graph.num_vertices();
  Require(lambda > 0.0 && lambda <= 1.0, ErrorCode::kInput,
          "lambda must lie in (0, 1]");
  if (n > vertex_cap || n > 30) {
    Fail(ErrorCode::kCapability,
         "exact weakly admissible diameter is limited to " +
             std::to_string(vertex_cap) + " vertices (graph has " +
             std::to_string(n) + ")");
  }
  Require(graph.IsConnected(), ErrorCode::kDomain,
          "weakly admissible diameter needs a connected graph");
  const auto masks = EdgeMasks(graph);
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;

  // longest[A] = length of the longest admissible chain starting at A.
  std::vector<int> longest(full + 1, 1);
  std::vector<std::uint64_t> next(full + 1, 0);
  std::vector<std::uint64_t> boundary;
  for (std::uint64_t set = full - 1; set >= 1; --set) {
    CountBoundary(masks, set, full, &boundary);
    const std::uint64_t rest = full & ~set;
    // Every strict superset is set | added for a nonempty added <= rest.
    for (std::uint64_t added = rest; added != 0; added = (added - 1) & rest) {
      const std::uint64_t superset = set | added;
      if (longest[superset] + 1 <= longest[set]) continue;
      if (!StepAdmissible(boundary, added, lambda)) continue;
      longest[set] = longest[superset] + 1;
      next[set] = superset;
    }
  }

  DiameterResult result;
  std::uint64_t start = full;
  for (std::uint64_t set = 1; set <= full; ++set) {
    if (longest[set] > result.length) {
      result.length = longest[set];
      start = set;
    }
  }
  for (std::uint64_t set = start; set != 0; set = next[set]) {
    result.chain.push_back(set);
  }
  return result;
}

bool IsWeaklyAdmissible(const Hypergraph& graph,
                        std::span<const std::uint64_t> chain, double lambda) {
  const int n = graph.num_vertices();
  const std::uint64_t full =
      n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  const auto masks = EdgeMasks(graph);
  std::vector<std::uint64_t> boundary;
  for (std::size_t j = 0; j + 1 < chain.size(); ++j) {
    const std::uint64_t a = chain[j], b = chain[j + 1];
    if (a == 0 || (a & ~b) != 0 || a == b) return false;
    CountBoundary(masks, a, full, &boundary);
    if (boundary.empty() || !StepAdmissible(boundary, b & ~a, lambda)) {
      return false;
    }
  }
  return true;
}

}  // namespace plusdc
