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

#include "degnn/noise.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "degnn/error.h"
#include "degnn/rng.h"

namespace degnn {

EdgeNoiseResult InjectEdgeNoiseDetailed(const Graph& g, double ratio,
                                        std::uint64_t seed) {
  if (!(ratio >= 0.0 && ratio <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "edge noise ratio outside [0,1]");
  }
  const int n = g.num_nodes();
  std::vector<Edge> edges = g.UndirectedEdges();
  const auto num_edges = static_cast<std::int64_t>(edges.size());
  const auto m = static_cast<std::int64_t>(std::llround(ratio * static_cast<double>(num_edges)));

  EdgeNoiseResult result;
  if (m == 0) {
    result.graph = g;
    return result;
  }
  const std::int64_t non_edges = NumUpperPairs(n) - num_edges;
  if (m > non_edges) {
    throw Error(ErrorCode::kNotEnoughNonEdges,
                "need " + std::to_string(m) + " fake edges but only " +
                    std::to_string(non_edges) + " non-edges exist");
  }

  Rng rng(DeriveSeed(seed, "edge-noise"));
  // Partial Fisher-Yates: the first m slots become the removed set.
  for (std::int64_t k = 0; k < m; ++k) {
    const auto pick = k + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(num_edges - k)));
    std::swap(edges[k], edges[pick]);
  }
  result.removed.assign(edges.begin(), edges.begin() + m);
  std::vector<Edge> kept(edges.begin() + m, edges.end());

  if (non_edges <= 4 * m) {
    // Dense graph: enumerate every non-edge and sample without replacement.
    std::vector<Edge> candidates;
    candidates.reserve(static_cast<std::size_t>(non_edges));
    for (NodeId i = 0; i < n; ++i) {
      for (NodeId j = i + 1; j < n; ++j) {
        if (!g.has_edge(i, j)) candidates.push_back({i, j, 1.0});
      }
    }
    for (std::int64_t k = 0; k < m; ++k) {
      const auto pick = k + static_cast<std::int64_t>(rng.below(candidates.size() - k));
      std::swap(candidates[k], candidates[pick]);
    }
    result.inserted.assign(candidates.begin(), candidates.begin() + m);
  } else {
    std::unordered_set<std::int64_t> chosen;
    const auto total = static_cast<std::uint64_t>(NumUpperPairs(n));
    while (static_cast<std::int64_t>(result.inserted.size()) < m) {
      const auto index = static_cast<std::int64_t>(rng.below(total));
      const Edge pair = UpperPairFromIndex(index, n);
      if (g.has_edge(pair.u, pair.v) || !chosen.insert(index).second) continue;
      result.inserted.push_back(pair);
    }
  }
  std::sort(result.removed.begin(), result.removed.end(),
            [](const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
  std::sort(result.inserted.begin(), result.inserted.end(),
            [](const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });

  kept.insert(kept.end(), result.inserted.begin(), result.inserted.end());
  result.graph = Graph::FromEdges(n, kept);
  return result;
}

Graph InjectEdgeNoise(const Graph& g, double ratio, std::uint64_t seed) {
  return InjectEdgeNoiseDetailed(g, ratio, seed).graph;
}

double ReferenceAmplitude(const FeatureMatrix& x) {
  if (x.rows() == 0 || x.cols() == 0) return 0.0;
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    total += static_cast<double>(x.row(i).maxCoeff());
  }
  return total / static_cast<double>(x.rows());
}

FeatureMatrix InjectFeatureNoise(const FeatureMatrix& x, double lambda,
                                 std::uint64_t seed) {
  if (!(lambda >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "feature noise ratio must be >= 0");
  }
  if (lambda == 0.0) return x;
  const double scale = lambda * ReferenceAmplitude(x);
  Rng rng(DeriveSeed(seed, "feature-noise"));
  FeatureMatrix out(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index d = 0; d < x.cols(); ++d) {
      out(i, d) = static_cast<float>(static_cast<double>(x(i, d)) + scale * rng.normal());
    }
  }
  return out;
}

Dataset ApplyNoise(const Dataset& ds, const NoiseSpec& spec) {
  Dataset out = ds;
  out.graph = InjectEdgeNoise(ds.graph, spec.edge_ratio, spec.seed);
  out.features = InjectFeatureNoise(ds.features, spec.lambda, spec.seed);
  return out;
}

}  // namespace degnn
