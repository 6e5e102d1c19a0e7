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

// Comparison hypergraphs and their exact topology diagnostics.
//
// Vertices are 0-based inside the library; files and the C API use 1-based
// ids. Every edge is stored as a strictly increasing vertex tuple, and
// repeated edges (rematches) are kept and counted with multiplicity.

#ifndef PLUSDC_CORE_HYPERGRAPH_H_
#define PLUSDC_CORE_HYPERGRAPH_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace plusdc {

inline constexpr int kCheegerVertexCap = 22;
inline constexpr int kDiameterVertexCap = 12;

class Hypergraph {
 public:
  Hypergraph() = default;

  // Sorts each edge ascending. Throws kInput on out-of-range vertices,
  // repeated vertices inside an edge, edges of size < 2, or edges larger
  // than `max_edge_size` when that cap is positive.
  Hypergraph(int num_vertices, std::vector<std::vector<int>> edges,
             int max_edge_size = 0);

  int num_vertices() const { return num_vertices_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<int>& edge(int i) const { return edges_[i]; }
  const std::vector<std::vector<int>>& edges() const { return edges_; }
  int max_edge_size() const;
  // Sum of edge sizes.
  std::int64_t total_incidence() const;

  int Degree(int vertex) const;
  std::vector<int> Degrees() const;

  // Indices of edges meeting both `vertex_set` and its complement.
  std::vector<int> Boundary(std::span<const int> vertex_set) const;

  // Union-find over the vertex-edge incidence structure.
  bool IsConnected() const;

 private:
  int num_vertices_ = 0;
  std::vector<std::vector<int>> edges_;
};

// Star decomposition of every edge around its smallest vertex.
struct Breaking {
  std::vector<std::pair<int, int>> pairs;  // (anchor, other), anchor < other
  std::vector<int> source_edge;            // edge index of each pair
  int size() const { return static_cast<int>(pairs.size()); }
};

Breaking BreakEdges(const Hypergraph& graph);

struct CheegerResult {
  double value = 0.0;
  std::uint64_t argmin_mask = 0;  // bit k set <=> vertex k in the minimizer
};

// Exact modified Cheeger constant min_U |dU| / min(|U|, |U^c|) by subset
// enumeration. Throws kCapability above `vertex_cap` vertices.
CheegerResult CheegerConstant(const Hypergraph& graph,
                              int vertex_cap = kCheegerVertexCap);

struct DiameterResult {
  int length = 0;
  std::vector<std::uint64_t> chain;  // one maximizing sequence, as masks
};

// Longest lambda-weakly admissible chain A_1 < ... < A_J, via memoized search
// over the subset lattice. Throws kDomain when the graph is disconnected and
// kCapability above `vertex_cap` vertices.
DiameterResult WeaklyAdmissibleDiameter(const Hypergraph& graph,
                                        double lambda,
                                        int vertex_cap = kDiameterVertexCap);

// True iff every pair of consecutive masks in `chain` satisfies the
// lambda-weak-admissibility ratio. Used to check reported chains.
bool IsWeaklyAdmissible(const Hypergraph& graph,
                        std::span<const std::uint64_t> chain, double lambda);

}  // namespace plusdc

#endif  // PLUSDC_CORE_HYPERGRAPH_H_
