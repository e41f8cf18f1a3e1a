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

#ifndef DEGNN_AUTOGRAD_H_
#define DEGNN_AUTOGRAD_H_

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "degnn/graph.h"
#include "degnn/matrix.h"

// Reverse-mode differentiation over dense row-major matrices.
//
// Every operation allocates a Node holding its value and a backward closure.
// Backward() visits the nodes reachable from a scalar loss in reverse
// topological order. Parents are always visited in argument order, so gradient
// accumulation is bitwise reproducible. All arithmetic is 64-bit.
namespace degnn::ad {

struct Node {
  Matrix value;
  Matrix grad;
  bool requires_grad = false;
  const char* op = "leaf";
  std::vector<std::shared_ptr<Node>> parents;
  // Reads this node's grad and accumulates into the parents' grads.
  std::function<void(Node&)> backward;
};

class Var {
 public:
  Var() = default;
  explicit Var(std::shared_ptr<Node> node) : node_(std::move(node)) {}

  const Matrix& value() const { return node_->value; }
  Matrix& mutable_value() { return node_->value; }
  // Empty until the first Backward() that reaches this node.
  const Matrix& grad() const { return node_->grad; }
  Matrix& mutable_grad() { return node_->grad; }

  Eigen::Index rows() const { return node_->value.rows(); }
  Eigen::Index cols() const { return node_->value.cols(); }
  Eigen::Index size() const { return node_->value.size(); }
  bool requires_grad() const { return node_->requires_grad; }
  double scalar() const;
  const char* op() const { return node_->op; }

  bool defined() const { return node_ != nullptr; }
  const std::shared_ptr<Node>& node() const { return node_; }

 private:
  std::shared_ptr<Node> node_;
};

Var Constant(Matrix value);
Var Parameter(Matrix value);

// Computes gradients of a 1x1 loss with respect to every reachable node that
// requires grad. Reachable gradients are reset before accumulation; parameters
// not reached keep whatever they held (clear them with ZeroGrad()).
// Throws kNonScalarLoss for any other shape.
void Backward(const Var& loss);
void ZeroGrad(std::span<Var> params);

Var MatMul(const Var& a, const Var& b);
Var Add(const Var& a, const Var& b);
Var Scale(const Var& a, double factor);
Var Hadamard(const Var& a, const Var& b);
Var Sum(const Var& a);
Var Relu(const Var& x);
// x if x > 0 else slope * x, where slope is a 1x1 Var.
Var PRelu(const Var& x, const Var& slope);

// adj * x for a constant normalized adjacency.
Var Spmm(std::shared_ptr<const NormalizedAdjacency> adj, const Var& x);

// Sparsity pattern for a weighted undirected graph whose edge weights are
// themselves a Var. entry_pair maps each stored CSR entry to its pair.
struct PropagationPattern {
  Graph structure;
  std::vector<Edge> pairs;               // u < v, in weight-vector order.
  std::vector<std::int32_t> entry_pair;  // One per CSR entry of structure.
};
std::shared_ptr<const PropagationPattern> MakePropagationPattern(
    int num_nodes, std::vector<Edge> pairs);

// D^-1/2 (S + I) D^-1/2 x where S has weights[k] on pattern.pairs[k] and D
// holds the weighted degrees of S + I. Differentiable in weights and x.
// Throws kNonPositiveDegree if a degree is not strictly positive.
Var NormalizedPropagate(std::shared_ptr<const PropagationPattern> pattern,
                        const Var& weights, const Var& x);

Var GatherRows(const Var& x, std::vector<NodeId> rows);
Var ConcatRows(const Var& top, const Var& bottom);
// out(i) = <a.row(i), b.row(i)>, an N x 1 column.
Var RowDot(const Var& a, const Var& b);

// Canonical row arithmetic shared by every cosine computation, so selection
// code and the differentiable op see bitwise-identical scores.
double RowNorm(const Matrix& h, NodeId i);
double RowInner(const Matrix& h, NodeId i, NodeId j);

// cos(h_u, h_v) for each pair, as an m x 1 column. Throws kZeroNormRow.
Var PairCosine(const Var& h, std::vector<Edge> pairs);

// Mean binary cross-entropy of sigmoid(logits) against targets in {0, 1},
// in the overflow-free form max(z,0) - z t + log(1 + exp(-|z|)).
// logits is n x 1 (or 1 x n). Throws kLengthMismatch.
Var BceWithLogits(const Var& logits, std::vector<double> targets);

// Mean over the listed rows of -log softmax(logits.row(r))[label].
// Throws kBadLabel for labels outside [0, cols).
Var SoftmaxCrossEntropy(const Var& logits, std::vector<NodeId> rows,
                        std::vector<int> labels);

}  // namespace degnn::ad

#endif  // DEGNN_AUTOGRAD_H_
