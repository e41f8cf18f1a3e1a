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

#include "degnn/autograd.h"

#include <algorithm>
#include <cmath>
#include <unordered_set>
#include <utility>

#include <Eigen/SparseCore>

#include "degnn/error.h"

namespace degnn::ad {

namespace {

Var MakeNode(Matrix value, const char* op, std::vector<std::shared_ptr<Node>> parents,
             std::function<void(Node&)> backward) {
  auto node = std::make_shared<Node>();
  node->value = std::move(value);
  node->op = op;
  for (const auto& p : parents) node->requires_grad |= p->requires_grad;
  if (node->requires_grad) {
    node->parents = std::move(parents);
    node->backward = std::move(backward);
  }
  return Var(std::move(node));
}

template <typename Expr>
void Accumulate(Node& parent, const Expr& g) {
  if (parent.requires_grad) parent.grad.noalias() += g;
}

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
constexpr double kSparseDensity = 0.1;

double Density(const Matrix& m) {
  if (m.size() == 0) return 1.0;
  const Eigen::Index nonzeros = (m.array() != 0.0).count();
  return static_cast<double>(nonzeros) / static_cast<double>(m.size());
}

void CheckSameShape(const Var& a, const Var& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(op) + ": " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                    "x" + std::to_string(b.cols()));
  }
}

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

double Var::scalar() const {
  if (rows() != 1 || cols() != 1) {
    throw Error(ErrorCode::kNonScalarLoss, "value is not 1x1");
  }
  return node_->value(0, 0);
}

Var Constant(Matrix value) {
  auto node = std::make_shared<Node>();
  node->value = std::move(value);
  node->op = "constant";
  return Var(std::move(node));
}

Var Parameter(Matrix value) {
  auto node = std::make_shared<Node>();
  node->value = std::move(value);
  node->op = "parameter";
  node->requires_grad = true;
  return Var(std::move(node));
}

void Backward(const Var& loss) {
  if (!loss.defined() || loss.rows() != 1 || loss.cols() != 1) {
    throw Error(ErrorCode::kNonScalarLoss,
                loss.defined() ? "loss is " + std::to_string(loss.rows()) + "x" +
                                     std::to_string(loss.cols())
                               : "loss is undefined");
  }
  if (!loss.requires_grad()) return;

  // Iterative post-order DFS; parents are explored in argument order.
  std::vector<Node*> order;
  std::unordered_set<Node*> visited;
  std::vector<std::pair<Node*, std::size_t>> stack;
  stack.emplace_back(loss.node().get(), 0);
  visited.insert(loss.node().get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      Node* parent = node->parents[next++].get();
      if (parent->requires_grad && visited.insert(parent).second) {
        stack.emplace_back(parent, 0);
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
  for (Node* node : order) {
    node->grad = Matrix::Zero(node->value.rows(), node->value.cols());
  }
  loss.node()->grad(0, 0) = 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if ((*it)->backward) (*it)->backward(**it);
  }
}

void ZeroGrad(std::span<Var> params) {
  for (Var& p : params) {
    p.mutable_grad() = Matrix::Zero(p.rows(), p.cols());
  }
}

Var MatMul(const Var& a, const Var& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "matmul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                    " * " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  if (!a.requires_grad() && Density(a.value()) <= kSparseDensity) {
    // Bag-of-words features are mostly zeros; skip them in both directions.
    auto sa = std::make_shared<const SparseMatrix>(a.value().sparseView());
    Matrix value = *sa * b.value();
    return MakeNode(std::move(value), "matmul", {a.node(), b.node()}, [sa](Node& self) {
      Node& pb = *self.parents[1];
      if (pb.requires_grad) pb.grad.noalias() += sa->transpose() * self.grad;
    });
  }
  Matrix value = a.value() * b.value();
  return MakeNode(std::move(value), "matmul", {a.node(), b.node()}, [](Node& self) {
    Node& pa = *self.parents[0];
    Node& pb = *self.parents[1];
    if (pa.requires_grad) pa.grad.noalias() += self.grad * pb.value.transpose();
    if (pb.requires_grad) pb.grad.noalias() += pa.value.transpose() * self.grad;
  });
}

Var Add(const Var& a, const Var& b) {
  CheckSameShape(a, b, "add");
  Matrix value = a.value() + b.value();
  return MakeNode(std::move(value), "add", {a.node(), b.node()}, [](Node& self) {
    Accumulate(*self.parents[0], self.grad);
    Accumulate(*self.parents[1], self.grad);
  });
}

Var Scale(const Var& a, double factor) {
  Matrix value = a.value() * factor;
  return MakeNode(std::move(value), "scale", {a.node()}, [factor](Node& self) {
    Accumulate(*self.parents[0], self.grad * factor);
  });
}

Var Hadamard(const Var& a, const Var& b) {
  CheckSameShape(a, b, "hadamard");
  Matrix value = a.value().cwiseProduct(b.value());
  return MakeNode(std::move(value), "hadamard", {a.node(), b.node()}, [](Node& self) {
    Node& pa = *self.parents[0];
    Node& pb = *self.parents[1];
    Accumulate(pa, self.grad.cwiseProduct(pb.value));
    Accumulate(pb, self.grad.cwiseProduct(pa.value));
  });
}

Var Sum(const Var& a) {
  Matrix value(1, 1);
  double total = 0.0;
  const Matrix& v = a.value();
  for (Eigen::Index k = 0; k < v.size(); ++k) total += v.data()[k];
  value(0, 0) = total;
  return MakeNode(std::move(value), "sum", {a.node()}, [](Node& self) {
    Node& p = *self.parents[0];
    if (p.requires_grad) p.grad.array() += self.grad(0, 0);
  });
}

Var Relu(const Var& x) {
  Matrix value = x.value().cwiseMax(0.0);
  return MakeNode(std::move(value), "relu", {x.node()}, [](Node& self) {
    Node& p = *self.parents[0];
    if (!p.requires_grad) return;
    p.grad.array() += (p.value.array() > 0.0).select(self.grad.array(), 0.0);
  });
}

Var PRelu(const Var& x, const Var& slope) {
  if (slope.rows() != 1 || slope.cols() != 1) {
    throw Error(ErrorCode::kDimensionMismatch, "prelu slope must be 1x1");
  }
  const double a = slope.value()(0, 0);
  Matrix value = (x.value().array() > 0.0).select(x.value().array(), a * x.value().array());
  return MakeNode(std::move(value), "prelu", {x.node(), slope.node()}, [](Node& self) {
    Node& px = *self.parents[0];
    Node& ps = *self.parents[1];
    const double a = ps.value(0, 0);
    const auto positive = px.value.array() > 0.0;
    if (px.requires_grad) {
      px.grad.array() += positive.select(self.grad.array(), a * self.grad.array());
    }
    if (ps.requires_grad) {
      double total = 0.0;
      for (Eigen::Index k = 0; k < px.value.size(); ++k) {
        const double xv = px.value.data()[k];
        if (!(xv > 0.0)) total += self.grad.data()[k] * xv;
      }
      ps.grad(0, 0) += total;
    }
  });
}

Var Spmm(std::shared_ptr<const NormalizedAdjacency> adj, const Var& x) {
  Matrix value = degnn::Spmm(*adj, x.value());
  return MakeNode(std::move(value), "spmm", {x.node()}, [adj](Node& self) {
    // The normalized adjacency is symmetric, so its transpose is itself.
    Accumulate(*self.parents[0], degnn::Spmm(*adj, self.grad));
  });
}

std::shared_ptr<const PropagationPattern> MakePropagationPattern(
    int num_nodes, std::vector<Edge> pairs) {
  auto pattern = std::make_shared<PropagationPattern>();
  std::vector<Edge> tagged;
  tagged.reserve(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    Edge e = pairs[k];
    if (e.u > e.v) std::swap(e.u, e.v);
    pairs[k] = e;
    // Weight slot carries the pair index so it survives CSR construction.
    tagged.push_back({e.u, e.v, static_cast<double>(k)});
  }
  pattern->structure = Graph::FromEdges(num_nodes, tagged);
  if (pattern->structure.num_edges() != static_cast<std::int64_t>(pairs.size())) {
    throw Error(ErrorCode::kInvalidArgument, "propagation pattern has duplicate pairs");
  }
  pattern->entry_pair.reserve(pattern->structure.values().size());
  for (double tag : pattern->structure.values()) {
    pattern->entry_pair.push_back(static_cast<std::int32_t>(tag));
  }
  pattern->pairs = std::move(pairs);
  return pattern;
}

Var NormalizedPropagate(std::shared_ptr<const PropagationPattern> pattern,
                        const Var& weights, const Var& x) {
  const auto m = static_cast<Eigen::Index>(pattern->pairs.size());
  if (weights.size() != m || (weights.cols() != 1 && weights.rows() != 1)) {
    throw Error(ErrorCode::kDimensionMismatch, "propagate: weight vector length");
  }
  if (x.rows() != pattern->structure.num_nodes()) {
    throw Error(ErrorCode::kDimensionMismatch, "propagate: feature rows");
  }
  std::vector<double> entry_values;
  entry_values.reserve(pattern->entry_pair.size());
  const double* w = weights.value().data();
  for (std::int32_t k : pattern->entry_pair) entry_values.push_back(w[k]);
  const Graph& s = pattern->structure;
  const Graph weighted = Graph::FromCsrUnchecked(s.num_nodes(), s.row_ptr(), s.cols(),
                                                 std::move(entry_values));
  auto adj = std::make_shared<NormalizedAdjacency>(SymNormalize(weighted));
  auto degree = std::make_shared<std::vector<double>>(SelfLoopDegrees(weighted));
  Matrix value = degnn::Spmm(*adj, x.value());

  return MakeNode(std::move(value), "normalized_propagate", {weights.node(), x.node()},
                  [pattern, adj, degree](Node& self) {
    Node& pw = *self.parents[0];
    Node& px = *self.parents[1];
    const Matrix& g = self.grad;
    const Matrix z = degnn::Spmm(*adj, g);  // N G, reused below.
    if (px.requires_grad) px.grad.noalias() += z;
    if (!pw.requires_grad) return;
    const Matrix& xv = px.value;
    const Matrix& y = self.value;
    const auto n = static_cast<std::size_t>(xv.rows());
    // dL/dd_k = -(g_k . y_k + x_k . z_k) / (2 d_k).
    std::vector<double> d_degree(n);
    for (std::size_t k = 0; k < n; ++k) {
      const auto r = static_cast<Eigen::Index>(k);
      d_degree[k] = -(g.row(r).dot(y.row(r)) + xv.row(r).dot(z.row(r))) / (2.0 * (*degree)[k]);
    }
    double* gw = pw.grad.data();
    for (std::size_t e = 0; e < pattern->pairs.size(); ++e) {
      const NodeId i = pattern->pairs[e].u;
      const NodeId j = pattern->pairs[e].v;
      const double scale = 1.0 / std::sqrt((*degree)[i] * (*degree)[j]);
      gw[e] += scale * (g.row(i).dot(xv.row(j)) + g.row(j).dot(xv.row(i))) +
               d_degree[i] + d_degree[j];
    }
  });
}

Var GatherRows(const Var& x, std::vector<NodeId> rows) {
  Matrix value(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] < 0 || rows[k] >= x.rows()) {
      throw Error(ErrorCode::kDimensionMismatch, "gather: row index out of range");
    }
    value.row(static_cast<Eigen::Index>(k)) = x.value().row(rows[k]);
  }
  return MakeNode(std::move(value), "gather_rows", {x.node()},
                  [rows = std::move(rows)](Node& self) {
    Node& p = *self.parents[0];
    if (!p.requires_grad) return;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      p.grad.row(rows[k]) += self.grad.row(static_cast<Eigen::Index>(k));
    }
  });
}

Var ConcatRows(const Var& top, const Var& bottom) {
  if (top.cols() != bottom.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "concat_rows: column counts differ");
  }
  Matrix value(top.rows() + bottom.rows(), top.cols());
  value.topRows(top.rows()) = top.value();
  value.bottomRows(bottom.rows()) = bottom.value();
  const Eigen::Index split = top.rows();
  return MakeNode(std::move(value), "concat_rows", {top.node(), bottom.node()},
                  [split](Node& self) {
    Accumulate(*self.parents[0], self.grad.topRows(split));
    Accumulate(*self.parents[1], self.grad.bottomRows(self.grad.rows() - split));
  });
}

Var RowDot(const Var& a, const Var& b) {
  CheckSameShape(a, b, "row_dot");
  Matrix value(a.rows(), 1);
  for (Eigen::Index i = 0; i < a.rows(); ++i) value(i, 0) = a.value().row(i).dot(b.value().row(i));
  return MakeNode(std::move(value), "row_dot", {a.node(), b.node()}, [](Node& self) {
    Node& pa = *self.parents[0];
    Node& pb = *self.parents[1];
    for (Eigen::Index i = 0; i < self.grad.rows(); ++i) {
      const double g = self.grad(i, 0);
      if (pa.requires_grad) pa.grad.row(i) += g * pb.value.row(i);
      if (pb.requires_grad) pb.grad.row(i) += g * pa.value.row(i);
    }
  });
}

double RowNorm(const Matrix& h, NodeId i) {
  double total = 0.0;
  for (Eigen::Index d = 0; d < h.cols(); ++d) total += h(i, d) * h(i, d);
  return std::sqrt(total);
}

double RowInner(const Matrix& h, NodeId i, NodeId j) {
  double total = 0.0;
  for (Eigen::Index d = 0; d < h.cols(); ++d) total += h(i, d) * h(j, d);
  return total;
}

Var PairCosine(const Var& h, std::vector<Edge> pairs) {
  const Matrix& hv = h.value();
  Matrix value(static_cast<Eigen::Index>(pairs.size()), 1);
  std::vector<double> norms(static_cast<std::size_t>(hv.rows()), -1.0);
  auto norm_of = [&](NodeId i) {
    if (norms[i] < 0.0) norms[i] = RowNorm(hv, i);
    if (norms[i] == 0.0) {
      throw Error(ErrorCode::kZeroNormRow, "embedding row " + std::to_string(i) + " is zero");
    }
    return norms[i];
  };
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const Edge& e = pairs[k];
    value(static_cast<Eigen::Index>(k), 0) =
        RowInner(hv, e.u, e.v) / (norm_of(e.u) * norm_of(e.v));
  }
  return MakeNode(std::move(value), "pair_cosine", {h.node()},
                  [pairs = std::move(pairs), norms = std::move(norms)](Node& self) {
    Node& p = *self.parents[0];
    if (!p.requires_grad) return;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const NodeId i = pairs[k].u;
      const NodeId j = pairs[k].v;
      const double g = self.grad(static_cast<Eigen::Index>(k), 0);
      const double c = self.value(static_cast<Eigen::Index>(k), 0);
      const double ni = norms[i], nj = norms[j];
      // d cos / d h_i = h_j / (|h_i||h_j|) - cos h_i / |h_i|^2.
      const Eigen::RowVectorXd hi = p.value.row(i);
      const Eigen::RowVectorXd hj = p.value.row(j);
      p.grad.row(i) += g * (hj / (ni * nj) - (c / (ni * ni)) * hi);
      p.grad.row(j) += g * (hi / (ni * nj) - (c / (nj * nj)) * hj);
    }
  });
}

Var BceWithLogits(const Var& logits, std::vector<double> targets) {
  if (logits.cols() != 1 && logits.rows() != 1) {
    throw Error(ErrorCode::kLengthMismatch, "bce: logits must be a vector");
  }
  if (static_cast<std::size_t>(logits.size()) != targets.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "bce: " + std::to_string(logits.size()) + " logits vs " +
                    std::to_string(targets.size()) + " targets");
  }
  if (targets.empty()) throw Error(ErrorCode::kLengthMismatch, "bce: empty input");
  const double* z = logits.value().data();
  double total = 0.0;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    total += std::max(z[k], 0.0) - z[k] * targets[k] + std::log1p(std::exp(-std::abs(z[k])));
  }
  Matrix value(1, 1);
  value(0, 0) = total / static_cast<double>(targets.size());
  return MakeNode(std::move(value), "bce_with_logits", {logits.node()},
                  [targets = std::move(targets)](Node& self) {
    Node& p = *self.parents[0];
    if (!p.requires_grad) return;
    const double scale = self.grad(0, 0) / static_cast<double>(targets.size());
    double* g = p.grad.data();
    const double* z = p.value.data();
    for (std::size_t k = 0; k < targets.size(); ++k) g[k] += scale * (Sigmoid(z[k]) - targets[k]);
  });
}

Var SoftmaxCrossEntropy(const Var& logits, std::vector<NodeId> rows,
                        std::vector<int> labels) {
  if (rows.size() != labels.size()) {
    throw Error(ErrorCode::kLengthMismatch, "cross-entropy: rows vs labels");
  }
  if (rows.empty()) throw Error(ErrorCode::kLengthMismatch, "cross-entropy: no rows");
  const Matrix& z = logits.value();
  const Eigen::Index classes = z.cols();
  Matrix probs(static_cast<Eigen::Index>(rows.size()), classes);
  double total = 0.0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (labels[k] < 0 || labels[k] >= classes) {
      throw Error(ErrorCode::kBadLabel, "label " + std::to_string(labels[k]) +
                                            " outside [0," + std::to_string(classes) + ")");
    }
    if (rows[k] < 0 || rows[k] >= z.rows()) {
      throw Error(ErrorCode::kDimensionMismatch, "cross-entropy: row out of range");
    }
    const auto r = static_cast<Eigen::Index>(k);
    const double max = z.row(rows[k]).maxCoeff();
    double norm = 0.0;
    for (Eigen::Index c = 0; c < classes; ++c) {
      probs(r, c) = std::exp(z(rows[k], c) - max);
      norm += probs(r, c);
    }
    probs.row(r) /= norm;
    total += -(z(rows[k], labels[k]) - max - std::log(norm));
  }
  Matrix value(1, 1);
  value(0, 0) = total / static_cast<double>(rows.size());
  return MakeNode(std::move(value), "softmax_cross_entropy", {logits.node()},
                  [rows = std::move(rows), labels = std::move(labels),
                   probs = std::move(probs)](Node& self) {
    Node& p = *self.parents[0];
    if (!p.requires_grad) return;
    const double scale = self.grad(0, 0) / static_cast<double>(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const auto r = static_cast<Eigen::Index>(k);
      p.grad.row(rows[k]) += scale * probs.row(r);
      p.grad(rows[k], labels[k]) -= scale;
    }
  });
}

}  // namespace degnn::ad
