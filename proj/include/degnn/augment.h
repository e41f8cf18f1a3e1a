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

#ifndef DEGNN_AUGMENT_H_
#define DEGNN_AUGMENT_H_

#include <cstdint>
#include <vector>

#include "degnn/graph.h"
#include "degnn/matrix.h"
#include "degnn/rng.h"

namespace degnn {

struct AugConfig {
  double p = 0.2;  // Edge rewiring probability.
  double q = 0.2;  // Feature shuffling probability.
  std::uint64_t seed = 0;
};

// Symmetric binary mask with zero diagonal, stored as sorted upper-triangle
// pair indices (see UpperPairIndex).
struct MaskMatrix {
  int num_nodes = 0;
  std::vector<std::int64_t> pairs;

  bool contains(NodeId i, NodeId j) const;
};

// Every upper pair included independently with probability p.
MaskMatrix SampleMask(int num_nodes, double p, Rng& rng);

// (1 - A) * P + A * (1 - P) on binary A: flips membership of masked pairs.
Graph ApplyRewireMask(const Graph& a, const MaskMatrix& mask);

Graph RewireView(const Graph& a, double p, std::uint64_t seed);

// Per row: entries are selected with probability q and the selected values are
// permuted uniformly among the selected positions.
FeatureMatrix ShuffleFeatureView(const FeatureMatrix& x, double q,
                                 std::uint64_t seed);

struct NegativeView {
  Graph graph;                       // (1 - A) * P_neg.
  FeatureMatrix features;            // Row i is x[permutation[i]].
  std::vector<NodeId> permutation;
};

// P_neg ~ Bernoulli(|E| / (N^2 - |E|)) on upper pairs; X rows permuted.
NegativeView NegativeGraph(const Graph& a, const FeatureMatrix& x,
                           std::uint64_t seed);

double NegativeMaskRate(const Graph& a);

// One draw of each augmentation. The views are
//   g1 = (rewired, x), g2 = (a, shuffled), g3 = (rewired, shuffled),
//   neg = (negative.graph, negative.features).
struct ViewSet {
  Graph rewired;
  FeatureMatrix shuffled;
  NegativeView negative;
};

ViewSet MakeViews(const Graph& a, const FeatureMatrix& x, const AugConfig& cfg);

}  // namespace degnn

#endif  // DEGNN_AUGMENT_H_
