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

#include "degnn/graph.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "degnn/error.h"

namespace degnn {

Graph::Graph(int num_nodes)
    : num_nodes_(num_nodes), row_ptr_(static_cast<std::size_t>(num_nodes) + 1, 0) {
  if (num_nodes < 0) {
    throw Error(ErrorCode::kInvalidArgument, "negative node count");
  }
}

Graph Graph::FromEdges(int num_nodes, std::span<const Edge> edges) {
  Graph g(num_nodes);
  auto pair_less = [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  };
  auto same_pair = [](const Edge& a, const Edge& b) {
    return a.u == b.u && a.v == b.v;
  };
  std::vector<Edge> canonical;
  canonical.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= num_nodes || e.v >= num_nodes) {
      throw Error(ErrorCode::kInvalidArgument,
                  "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                      ") out of range for " + std::to_string(num_nodes) +
                      " nodes");
    }
    if (e.u == e.v) {
      throw Error(ErrorCode::kInvalidArgument,
                  "self-loop at " + std::to_string(e.u));
    }
    canonical.push_back({std::min(e.u, e.v), std::max(e.u, e.v), e.weight});
  }
  // Stable sort keeps the first occurrence of a repeated pair in front.
  if (!std::is_sorted(canonical.begin(), canonical.end(), pair_less)) {
    std::stable_sort(canonical.begin(), canonical.end(), pair_less);
  }
  canonical.erase(std::unique(canonical.begin(), canonical.end(), same_pair),
                  canonical.end());

  // Scanning pairs in (u, v) order fills every row in ascending column order:
  // row r first receives its lower neighbors (pairs (u, r)), then its upper ones.
  for (const Edge& e : canonical) {
    ++g.row_ptr_[e.u + 1];
    ++g.row_ptr_[e.v + 1];
  }
  for (int i = 0; i < num_nodes; ++i) g.row_ptr_[i + 1] += g.row_ptr_[i];
  g.cols_.resize(canonical.size() * 2);
  g.values_.resize(canonical.size() * 2);
  std::vector<std::int64_t> next(g.row_ptr_.begin(), g.row_ptr_.end() - 1);
  for (const Edge& e : canonical) {
    g.cols_[next[e.u]] = e.v;
    g.values_[next[e.u]++] = e.weight;
    g.cols_[next[e.v]] = e.u;
    g.values_[next[e.v]++] = e.weight;
  }
  return g;
}

Graph Graph::FromCsrUnchecked(int num_nodes, std::vector<std::int64_t> row_ptr,
                              std::vector<NodeId> cols,
                              std::vector<double> weights) {
  Graph g;
  g.num_nodes_ = num_nodes;
  g.row_ptr_ = std::move(row_ptr);
  g.cols_ = std::move(cols);
  g.values_ = std::move(weights);
  return g;
}

std::int64_t Graph::num_edges() const {
  std::int64_t count = 0;
  for (NodeId i = 0; i < num_nodes_; ++i) {
    for (NodeId j : neighbors(i)) {
      if (j > i) ++count;
    }
  }
  return count;
}

std::span<const NodeId> Graph::neighbors(NodeId i) const {
  return {cols_.data() + row_ptr_[i],
          static_cast<std::size_t>(row_ptr_[i + 1] - row_ptr_[i])};
}

std::span<const double> Graph::neighbor_weights(NodeId i) const {
  return {values_.data() + row_ptr_[i],
          static_cast<std::size_t>(row_ptr_[i + 1] - row_ptr_[i])};
}

bool Graph::has_edge(NodeId i, NodeId j) const {
  auto nbrs = neighbors(i);
  return std::binary_search(nbrs.begin(), nbrs.end(), j);
}

double Graph::weight(NodeId i, NodeId j) const {
  auto nbrs = neighbors(i);
  auto it = std::lower_bound(nbrs.begin(), nbrs.end(), j);
  if (it == nbrs.end() || *it != j) return 0.0;
  return values_[row_ptr_[i] + (it - nbrs.begin())];
}

std::vector<Edge> Graph::UndirectedEdges() const {
  std::vector<Edge> out;
  for (NodeId i = 0; i < num_nodes_; ++i) {
    auto nbrs = neighbors(i);
    auto ws = neighbor_weights(i);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      if (nbrs[k] > i) out.push_back({i, nbrs[k], ws[k]});
    }
  }
  return out;
}

std::optional<std::string> Validate(const Graph& g) {
  const int n = g.num_nodes();
  const auto& rp = g.row_ptr();
  if (n < 0 || rp.size() != static_cast<std::size_t>(n) + 1 || rp.front() != 0 ||
      rp.back() != static_cast<std::int64_t>(g.cols().size()) ||
      g.cols().size() != g.values().size()) {
    return "malformed CSR arrays";
  }
  for (NodeId i = 0; i < n; ++i) {
    if (rp[i + 1] < rp[i]) return "malformed CSR arrays";
  }
  for (NodeId i = 0; i < n; ++i) {
    auto nbrs = g.neighbors(i);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      const NodeId j = nbrs[k];
      if (j < 0 || j >= n) {
        return "index out of range (" + std::to_string(i) + "," +
               std::to_string(j) + ")";
      }
      if (j == i) return "self-loop at " + std::to_string(i);
      if (k > 0 && nbrs[k - 1] >= j) {
        return "duplicate or unsorted pair (" + std::to_string(i) + "," +
               std::to_string(j) + ")";
      }
    }
  }
  for (NodeId i = 0; i < n; ++i) {
    auto nbrs = g.neighbors(i);
    auto ws = g.neighbor_weights(i);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      const NodeId j = nbrs[k];
      if (!g.has_edge(j, i) || g.weight(j, i) != ws[k]) {
        return "asymmetric pair (" + std::to_string(i) + "," +
               std::to_string(j) + ")";
      }
    }
  }
  return std::nullopt;
}

double NormalizedAdjacency::entry(NodeId i, NodeId j) const {
  auto begin = cols.begin() + row_ptr[i];
  auto end = cols.begin() + row_ptr[i + 1];
  auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return 0.0;
  return values[it - cols.begin()];
}

Matrix NormalizedAdjacency::ToDense() const {
  Matrix out = Matrix::Zero(num_nodes, num_nodes);
  for (NodeId i = 0; i < num_nodes; ++i) {
    for (auto k = row_ptr[i]; k < row_ptr[i + 1]; ++k) out(i, cols[k]) = values[k];
  }
  return out;
}

std::vector<double> SelfLoopDegrees(const Graph& g) {
  std::vector<double> degree(static_cast<std::size_t>(g.num_nodes()));
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    double d = 1.0;
    for (double w : g.neighbor_weights(i)) d += w;
    degree[i] = d;
  }
  return degree;
}

NormalizedAdjacency SymNormalize(const Graph& g) {
  const int n = g.num_nodes();
  const std::vector<double> degree = SelfLoopDegrees(g);
  for (NodeId i = 0; i < n; ++i) {
    if (!(degree[i] > 0.0)) {
      throw Error(ErrorCode::kNonPositiveDegree,
                  "degree of node " + std::to_string(i) + " is " +
                      std::to_string(degree[i]));
    }
  }
  NormalizedAdjacency out;
  out.num_nodes = n;
  out.row_ptr.assign(static_cast<std::size_t>(n) + 1, 0);
  out.cols.reserve(g.cols().size() + static_cast<std::size_t>(n));
  out.values.reserve(g.cols().size() + static_cast<std::size_t>(n));
  for (NodeId i = 0; i < n; ++i) {
    auto nbrs = g.neighbors(i);
    auto ws = g.neighbor_weights(i);
    bool diagonal_done = false;
    for (std::size_t k = 0; k <= nbrs.size(); ++k) {
      if (!diagonal_done && (k == nbrs.size() || nbrs[k] > i)) {
        out.cols.push_back(i);
        out.values.push_back(1.0 / degree[i]);
        diagonal_done = true;
      }
      if (k == nbrs.size()) break;
      const NodeId j = nbrs[k];
      const NodeId lo = std::min(i, j), hi = std::max(i, j);
      // Same operand order from both rows keeps the result exactly symmetric.
      out.cols.push_back(j);
      out.values.push_back(ws[k] / std::sqrt(degree[lo] * degree[hi]));
    }
    out.row_ptr[i + 1] = static_cast<std::int64_t>(out.cols.size());
  }
  return out;
}

Matrix Spmm(const NormalizedAdjacency& adj, const Matrix& dense) {
  if (dense.rows() != adj.num_nodes) {
    throw Error(ErrorCode::kDimensionMismatch,
                "spmm: adjacency is " + std::to_string(adj.num_nodes) +
                    " nodes but dense operand has " +
                    std::to_string(dense.rows()) + " rows");
  }
  Matrix out = Matrix::Zero(dense.rows(), dense.cols());
  for (NodeId i = 0; i < adj.num_nodes; ++i) {
    for (auto k = adj.row_ptr[i]; k < adj.row_ptr[i + 1]; ++k) {
      out.row(i).noalias() += adj.values[k] * dense.row(adj.cols[k]);
    }
  }
  return out;
}

std::int64_t NumUpperPairs(int num_nodes) {
  const std::int64_t n = num_nodes;
  return n * (n - 1) / 2;
}

std::int64_t UpperPairIndex(NodeId i, NodeId j, int num_nodes) {
  const std::int64_t n = num_nodes;
  return static_cast<std::int64_t>(i) * (2 * n - i - 1) / 2 + (j - i - 1);
}

Edge UpperPairFromIndex(std::int64_t index, int num_nodes) {
  // Largest row i whose first index does not exceed `index`.
  NodeId lo = 0, hi = num_nodes - 1;
  while (lo + 1 < hi) {
    const NodeId mid = lo + (hi - lo) / 2;
    if (UpperPairIndex(mid, mid + 1, num_nodes) <= index) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const NodeId i = lo;
  const NodeId j = static_cast<NodeId>(index - UpperPairIndex(i, i + 1, num_nodes)) + i + 1;
  return {i, j, 1.0};
}

Graph ReadEdgeList(std::istream& in, int num_nodes) {
  std::vector<Edge> edges;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    long long u = 0, v = 0;
    double w = 1.0;
    if (!(fields >> u >> v)) {
      throw Error(ErrorCode::kUnrecognizedFormat,
                  "edge list line " + std::to_string(line_no) + ": '" + line +
                      "'");
    }
    if (!(fields >> w)) w = 1.0;
    if (u == v) continue;  // Raw citation data contains self-citations.
    edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v), w});
  }
  return Graph::FromEdges(num_nodes, edges);
}

void WriteEdgeList(std::ostream& out, const Graph& g) {
  char buf[64];
  for (const Edge& e : g.UndirectedEdges()) {
    out << e.u << '\t' << e.v;
    if (e.weight != 1.0) {
      std::snprintf(buf, sizeof(buf), "%.17g", e.weight);
      out << '\t' << buf;
    }
    out << '\n';
  }
}

}  // namespace degnn
