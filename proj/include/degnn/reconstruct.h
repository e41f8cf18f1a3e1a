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

#ifndef DEGNN_RECONSTRUCT_H_
#define DEGNN_RECONSTRUCT_H_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

#include "degnn/augment.h"
#include "degnn/autograd.h"
#include "degnn/graph.h"
#include "degnn/matrix.h"

namespace degnn {

// Graph rewired from edge-expert embeddings. Pair lists are sorted (u < v).
struct ModifiedAdjacency {
  Graph s;                   // Kept edges with weight 1, added pairs with their cosine.
  Graph s_tilde;             // Binary graph after deletion only.
  MaskMatrix m1;             // Keep mask over the original edges.
  MaskMatrix m2;             // Addition mask over non-edges.
  std::vector<Edge> kept;    // weight 1
  std::vector<Edge> deleted; // weight holds the cosine that ranked it
  std::vector<Edge> added;   // weight holds the cosine
  double k_percent = 0.0;
  std::vector<double> b_selected;  // Cosines of the added pairs, same order.

  std::int64_t num_rewired() const { return static_cast<std::int64_t>(added.size()); }
};

// floor(k / 100 * |E|).
std::int64_t RewireCount(std::int64_t num_edges, double k_percent);

// Cosine for each requested pair, using the same row arithmetic as
// ad::PairCosine. Throws kZeroNormRow.
std::vector<double> PairCosines(const Matrix& h, const std::vector<Edge>& pairs);

// Deletes the m existing edges of smallest cosine (ties: smallest pair first)
// and adds the m non-edges of largest cosine (ties: largest pair first).
// Throws kInvalidArgument for k outside [0, 100], kDimensionMismatch when h
// does not have one row per node, kNotEnoughNonEdges, kZeroNormRow.
ModifiedAdjacency Reconstruct(const Graph& a, const Matrix& h_prime, double k_percent);

NormalizedAdjacency WeightedNormalizeForDownstream(const ModifiedAdjacency& mod);

// S as a Var-weighted pattern: kept pairs come first with constant weight 1,
// then the added pairs with weights PairCosine(h_prime, added).
struct DifferentiableAdjacency {
  std::shared_ptr<const ad::PropagationPattern> pattern;
  ad::Var weights;  // |kept| + |added| rows, one column.
};
DifferentiableAdjacency MakeDifferentiableAdjacency(const ModifiedAdjacency& mod,
                                                    const ad::Var& h_prime);

// "deleted|added\tu\tv\tcosine" per line, after a header row.
void WriteRewireTsv(std::ostream& out, const ModifiedAdjacency& mod);

}  // namespace degnn

#endif  // DEGNN_RECONSTRUCT_H_
