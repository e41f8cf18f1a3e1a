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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>

#include "degnn/error.h"
#include "test_util.h"

namespace degnn {
namespace {

using testing::RandomGraph;

std::set<std::pair<NodeId, NodeId>> PairSet(const Graph& g) {
  std::set<std::pair<NodeId, NodeId>> out;
  for (const Edge& e : g.UndirectedEdges()) out.insert({e.u, e.v});
  return out;
}

TEST(EdgeNoise, ZeroRatioIsIdentity) {
  const Graph g = RandomGraph(20, 0.2, 1);
  EXPECT_EQ(InjectEdgeNoise(g, 0.0, 5), g);
}

TEST(EdgeNoise, TenEdgesTenPercent) {
  const std::vector<Edge> ring = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5},
                                  {5, 6}, {6, 7}, {7, 8}, {8, 9}, {0, 9}};
  const Graph g = Graph::FromEdges(10, ring);
  const EdgeNoiseResult r = InjectEdgeNoiseDetailed(g, 0.1, 3);
  EXPECT_EQ(r.graph.num_edges(), 10);
  const auto before = PairSet(g);
  const auto after = PairSet(r.graph);
  std::vector<std::pair<NodeId, NodeId>> removed, inserted;
  std::set_difference(before.begin(), before.end(), after.begin(), after.end(),
                      std::back_inserter(removed));
  std::set_difference(after.begin(), after.end(), before.begin(), before.end(),
                      std::back_inserter(inserted));
  EXPECT_EQ(removed.size(), 1u);
  EXPECT_EQ(inserted.size(), 1u);
  ASSERT_EQ(r.removed.size(), 1u);
  ASSERT_EQ(r.inserted.size(), 1u);
  EXPECT_EQ(removed[0], std::make_pair(r.removed[0].u, r.removed[0].v));
  EXPECT_EQ(inserted[0], std::make_pair(r.inserted[0].u, r.inserted[0].v));
}

TEST(EdgeNoise, CompleteGraphHasNoSlots) {
  const Graph g = RandomGraph(6, 1.0, 0);
  try {
    InjectEdgeNoise(g, 0.2, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotEnoughNonEdges);
  }
}

TEST(EdgeNoise, SetAlgebraOnRandomGraphs) {
  for (std::uint32_t seed = 0; seed < 60; ++seed) {
    const int n = 5 + static_cast<int>(seed % 46);
    const Graph g = RandomGraph(n, 0.15, seed);
    if (g.num_edges() == 0) continue;
    for (double ratio : {0.05, 0.1, 0.15, 0.5}) {
      const EdgeNoiseResult r = InjectEdgeNoiseDetailed(g, ratio, seed * 7 + 1);
      const auto m = static_cast<std::size_t>(std::llround(ratio * g.num_edges()));
      EXPECT_EQ(Validate(r.graph), std::nullopt);
      EXPECT_EQ(r.graph.num_edges(), g.num_edges());
      EXPECT_EQ(r.removed.size(), m);
      EXPECT_EQ(r.inserted.size(), m);
      for (const Edge& e : r.removed) {
        EXPECT_TRUE(g.has_edge(e.u, e.v));
        EXPECT_FALSE(r.graph.has_edge(e.u, e.v));
      }
      for (const Edge& e : r.inserted) {
        EXPECT_FALSE(g.has_edge(e.u, e.v));
        EXPECT_EQ(r.graph.weight(e.u, e.v), 1.0);
      }
      std::set<std::pair<NodeId, NodeId>> ins;
      for (const Edge& e : r.inserted) ins.insert({e.u, e.v});
      EXPECT_EQ(ins.size(), m);
    }
  }
}

TEST(EdgeNoise, DeterministicInSeed) {
  const Graph g = RandomGraph(30, 0.2, 2);
  EXPECT_EQ(InjectEdgeNoise(g, 0.15, 9), InjectEdgeNoise(g, 0.15, 9));
  EXPECT_NE(InjectEdgeNoise(g, 0.15, 9), InjectEdgeNoise(g, 0.15, 10));
}

TEST(FeatureNoise, ZeroLambdaIsBitwiseCopy) {
  const FeatureMatrix x = testing::RandomMatrix(5, 4, 1).cast<float>();
  const FeatureMatrix y = InjectFeatureNoise(x, 0.0, 3);
  EXPECT_EQ(std::memcmp(x.data(), y.data(), sizeof(float) * x.size()), 0);
}

TEST(FeatureNoise, ReferenceAmplitude) {
  FeatureMatrix x(2, 2);
  x << 1, 3, 2, 4;
  EXPECT_DOUBLE_EQ(ReferenceAmplitude(x), 3.5);
  EXPECT_DOUBLE_EQ(ReferenceAmplitude(FeatureMatrix::Constant(3, 4, 2.5f)), 2.5);
}

TEST(FeatureNoise, PerturbationMomentsMatchLambdaTimesR) {
  // 50000 copies of the rows [1,3] and [2,4]: r stays 3.5; 10^5 draws.
  const int rows = 50000;
  FeatureMatrix x(rows, 2);
  for (int i = 0; i < rows; ++i) {
    x(i, 0) = i % 2 == 0 ? 1.0f : 2.0f;
    x(i, 1) = i % 2 == 0 ? 3.0f : 4.0f;
  }
  const double lambda = 0.1;
  const FeatureMatrix y = InjectFeatureNoise(x, lambda, 11);
  const Eigen::ArrayXd d = (y.cast<double>() - x.cast<double>()).reshaped().array();
  const double n = static_cast<double>(d.size());
  const double mean = d.mean();
  const double sd = std::sqrt((d - mean).square().sum() / (n - 1));
  const double sigma = lambda * 3.5;
  EXPECT_LT(std::abs(mean), 3 * sigma / std::sqrt(n));
  EXPECT_LT(std::abs(sd - sigma), 3 * sigma / std::sqrt(2 * n));
}

TEST(FeatureNoise, DeterministicInSeed) {
  const FeatureMatrix x = testing::RandomMatrix(6, 3, 2).cast<float>();
  EXPECT_EQ(InjectFeatureNoise(x, 0.15, 4), InjectFeatureNoise(x, 0.15, 4));
  EXPECT_NE(InjectFeatureNoise(x, 0.15, 4), InjectFeatureNoise(x, 0.15, 5));
}

TEST(ApplyNoise, CombinesBoth) {
  Dataset ds = MakePlantedPartition({.seed = 1});
  const Dataset noisy = ApplyNoise(ds, {0.1, 0.1, 3});
  EXPECT_EQ(noisy.graph.num_edges(), ds.graph.num_edges());
  EXPECT_NE(noisy.graph, ds.graph);
  EXPECT_NE(noisy.features, ds.features);
  EXPECT_EQ(noisy.labels, ds.labels);
}

}  // namespace
}  // namespace degnn
