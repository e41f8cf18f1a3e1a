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

#ifndef DEGNN_NOISE_H_
#define DEGNN_NOISE_H_

#include <cstdint>
#include <vector>

#include "degnn/dataset.h"
#include "degnn/graph.h"
#include "degnn/matrix.h"

namespace degnn {

// Poisoning noise applied once before training.
struct NoiseSpec {
  double edge_ratio = 0.0;  // Fraction of |E| removed and re-inserted.
  double lambda = 0.0;      // Feature noise ratio.
  std::uint64_t seed = 0;
};

struct EdgeNoiseResult {
  Graph graph;
  std::vector<Edge> removed;   // Original pairs, u < v.
  std::vector<Edge> inserted;  // Previously absent pairs, weight 1.
};

// Removes m = round(ratio * |E|) edges uniformly without replacement and
// inserts m distinct pairs that were absent from the input.
EdgeNoiseResult InjectEdgeNoiseDetailed(const Graph& g, double ratio,
                                        std::uint64_t seed);
Graph InjectEdgeNoise(const Graph& g, double ratio, std::uint64_t seed);

// Mean over nodes of the row maximum.
double ReferenceAmplitude(const FeatureMatrix& x);

// x + lambda * r * eps, eps ~ N(0, 1) i.i.d., r = ReferenceAmplitude(x).
FeatureMatrix InjectFeatureNoise(const FeatureMatrix& x, double lambda,
                                 std::uint64_t seed);

Dataset ApplyNoise(const Dataset& ds, const NoiseSpec& spec);

}  // namespace degnn

#endif  // DEGNN_NOISE_H_
