// Copyright 2026 The DEGNN Workbench Authors.
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

#ifndef DEGNN_GRAPH_H_
#define DEGNN_GRAPH_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "degnn/matrix.h"

namespace degnn {

using NodeId = std::int32_t;

// One undirected pair. Graph::UndirectedEdges() always yields u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  double weight = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Undirected graph in CSR layout. Both directions of every pair are stored and
// neighbor lists are sorted, so iteration order is fully deterministic.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int num_nodes);

  // Builds a symmetric graph. Reversed and repeated pairs collapse into one
  // (first occurrence wins). Self-loops and out-of-range ids throw
  // kInvalidArgument.
  static Graph FromEdges(int num_nodes, std::span<const Edge> edges);

  // Wraps raw CSR arrays without checking any invariant. Intended for
  // diagnostics and tests of Validate().
  static Graph FromCsrUnchecked(int num_nodes, std::vector<std::int64_t> row_ptr,
                                std::vector<NodeId> cols,
                                std::vector<double> weights);

  int num_nodes() const { return num_nodes_; }
  // Number of undirected pairs.
  std::int64_t num_edges() const;
  std::int64_t nnz() const { return static_cast<std::int64_t>(cols_.size()); }

  std::span<const NodeId> neighbors(NodeId i) const;
  std::span<const double> neighbor_weights(NodeId i) const;
  int degree(NodeId i) const {
    return static_cast<int>(row_ptr_[i + 1] - row_ptr_[i]);
  }

  bool has_edge(NodeId i, NodeId j) const;
  // 0.0 when the pair is absent.
  double weight(NodeId i, NodeId j) const;

  // Sorted (u, v) with u < v.
  std::vector<Edge> UndirectedEdges() const;

  const std::vector<std::int64_t>& row_ptr() const { return row_ptr_; }
  const std::vector<NodeId>& cols() const { return cols_; }
  const std::vector<double>& values() const { return values_; }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  int num_nodes_ = 0;
  std::vector<std::int64_t> row_ptr_ = {0};
  std::vector<NodeId> cols_;
  std::vector<double> values_;
};

// Returns the first violated invariant, or nullopt when the graph is valid.
std::optional<std::string> Validate(const Graph& g);

// D^-1/2 (A + I) D^-1/2 in CSR layout with the diagonal stored in place.
struct NormalizedAdjacency {
  int num_nodes = 0;
  std::vector<std::int64_t> row_ptr = {0};
  std::vector<NodeId> cols;
  std::vector<double> values;

  double entry(NodeId i, NodeId j) const;
  Matrix ToDense() const;
};

// Weighted rows sums plus one; shared by every normalization path.
std::vector<double> SelfLoopDegrees(const Graph& g);

// Throws kNonPositiveDegree when a degree of A + I is not strictly positive.
NormalizedAdjacency SymNormalize(const Graph& g);

// Row-major, each row accumulated over ascending column index.
Matrix Spmm(const NormalizedAdjacency& adj, const Matrix& dense);

// Upper-triangle pair enumeration: (0,1), (0,2), ..., (0,n-1), (1,2), ...
std::int64_t NumUpperPairs(int num_nodes);
std::int64_t UpperPairIndex(NodeId i, NodeId j, int num_nodes);  // i < j
Edge UpperPairFromIndex(std::int64_t index, int num_nodes);

// Edge-list text format: "i\tj[\tweight]" per line, 0-indexed; '#' comments.
Graph ReadEdgeList(std::istream& in, int num_nodes);
void WriteEdgeList(std::ostream& out, const Graph& g);

}  // namespace degnn

#endif  // DEGNN_GRAPH_H_
