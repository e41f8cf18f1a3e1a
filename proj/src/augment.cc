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

#include "degnn/augment.h"

#include <algorithm>
#include <numeric>

#include "degnn/error.h"

namespace degnn {

namespace {

void CheckProbability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, std::string(what) + " outside [0,1]");
  }
}

std::vector<std::int64_t> UpperIndices(const Graph& g) {
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(g.nnz() / 2));
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    for (NodeId j : g.neighbors(i)) {
      if (j > i) out.push_back(UpperPairIndex(i, j, g.num_nodes()));
    }
  }
  return out;
}

Graph GraphFromUpperIndices(int n, const std::vector<std::int64_t>& indices) {
  std::vector<Edge> edges;
  edges.reserve(indices.size());
  for (std::int64_t k : indices) edges.push_back(UpperPairFromIndex(k, n));
  return Graph::FromEdges(n, edges);
}

}  // namespace

bool MaskMatrix::contains(NodeId i, NodeId j) const {
  if (i == j) return false;
  const std::int64_t k = UpperPairIndex(std::min(i, j), std::max(i, j), num_nodes);
  return std::binary_search(pairs.begin(), pairs.end(), k);
}

MaskMatrix SampleMask(int num_nodes, double p, Rng& rng) {
  CheckProbability(p, "mask probability");
  MaskMatrix mask;
  mask.num_nodes = num_nodes;
  auto indices = SampleBernoulliIndices(
      static_cast<std::uint64_t>(NumUpperPairs(num_nodes)), p, rng);
  mask.pairs.assign(indices.begin(), indices.end());
  return mask;
}

Graph ApplyRewireMask(const Graph& a, const MaskMatrix& mask) {
  const std::vector<std::int64_t> present = UpperIndices(a);
  std::vector<std::int64_t> flipped;
  flipped.reserve(present.size() + mask.pairs.size());
  std::set_symmetric_difference(present.begin(), present.end(), mask.pairs.begin(),
                                mask.pairs.end(), std::back_inserter(flipped));
  return GraphFromUpperIndices(a.num_nodes(), flipped);
}

Graph RewireView(const Graph& a, double p, std::uint64_t seed) {
  Rng rng(DeriveSeed(seed, "rewire"));
  return ApplyRewireMask(a, SampleMask(a.num_nodes(), p, rng));
}

FeatureMatrix ShuffleFeatureView(const FeatureMatrix& x, double q,
                                 std::uint64_t seed) {
  CheckProbability(q, "shuffle probability");
  FeatureMatrix out = x;
  if (q == 0.0) return out;
  Rng rng(DeriveSeed(seed, "shuffle"));
  std::vector<float> values;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const auto selected =
        SampleBernoulliIndices(static_cast<std::uint64_t>(x.cols()), q, rng);
    values.clear();
    for (auto d : selected) values.push_back(x(i, static_cast<Eigen::Index>(d)));
    rng.shuffle(values);
    for (std::size_t k = 0; k < selected.size(); ++k) {
      out(i, static_cast<Eigen::Index>(selected[k])) = values[k];
    }
  }
  return out;
}

double NegativeMaskRate(const Graph& a) {
  const double n = a.num_nodes();
  const double e = static_cast<double>(a.num_edges());
  const double denom = n * n - e;
  return denom > 0.0 ? std::min(1.0, e / denom) : 0.0;
}

NegativeView NegativeGraph(const Graph& a, const FeatureMatrix& x,
                           std::uint64_t seed) {
  const int n = a.num_nodes();
  if (x.rows() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "negative graph: feature rows != nodes");
  }
  Rng rng(DeriveSeed(seed, "negative"));
  const MaskMatrix mask = SampleMask(n, NegativeMaskRate(a), rng);
  const std::vector<std::int64_t> present = UpperIndices(a);
  std::vector<std::int64_t> kept;
  std::set_difference(mask.pairs.begin(), mask.pairs.end(), present.begin(),
                      present.end(), std::back_inserter(kept));

  NegativeView view;
  view.graph = GraphFromUpperIndices(n, kept);
  view.permutation.resize(static_cast<std::size_t>(n));
  std::iota(view.permutation.begin(), view.permutation.end(), 0);
  rng.shuffle(view.permutation);
  view.features.resize(x.rows(), x.cols());
  for (NodeId i = 0; i < n; ++i) view.features.row(i) = x.row(view.permutation[i]);
  return view;
}

ViewSet MakeViews(const Graph& a, const FeatureMatrix& x, const AugConfig& cfg) {
  CheckProbability(cfg.p, "aug p");
  CheckProbability(cfg.q, "aug q");
  ViewSet views;
  views.rewired = RewireView(a, cfg.p, cfg.seed);
  views.shuffled = ShuffleFeatureView(x, cfg.q, cfg.seed);
  views.negative = NegativeGraph(a, x, cfg.seed);
  return views;
}

}  // namespace degnn
