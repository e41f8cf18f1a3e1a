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

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "degnn/error.h"
#include "test_util.h"

namespace degnn {
namespace {

using testing::DenseNormalized;
using testing::MaxRelError;
using testing::RandomGraph;
using testing::RandomMatrix;

TEST(Graph, FromEdgesDeduplicatesAndSymmetrizes) {
  const std::vector<Edge> edges = {{0, 1}, {1, 0}, {2, 1}, {0, 1, 5.0}};
  const Graph g = Graph::FromEdges(3, edges);
  EXPECT_EQ(g.num_edges(), 2);
  EXPECT_EQ(g.nnz(), 4);
  EXPECT_TRUE(g.has_edge(1, 0));
  EXPECT_TRUE(g.has_edge(1, 2));
  EXPECT_FALSE(g.has_edge(0, 2));
  EXPECT_EQ(g.weight(0, 1), 1.0);
  EXPECT_EQ(g.UndirectedEdges(), (std::vector<Edge>{{0, 1}, {1, 2}}));
  EXPECT_EQ(Validate(g), std::nullopt);
}

TEST(Graph, FromEdgesRejectsSelfLoopsAndRange) {
  const std::vector<Edge> loop = {{1, 1}};
  const std::vector<Edge> range = {{0, 3}};
  EXPECT_THROW(Graph::FromEdges(3, loop), Error);
  EXPECT_THROW(Graph::FromEdges(3, range), Error);
}

TEST(Validate, SymmetricPairIsOk) {
  const Graph g = Graph::FromCsrUnchecked(2, {0, 1, 2}, {1, 0}, {1.0, 1.0});
  EXPECT_EQ(Validate(g), std::nullopt);
}

TEST(Validate, ReportsSelfLoop) {
  const Graph g = Graph::FromCsrUnchecked(2, {0, 1, 1}, {0}, {1.0});
  EXPECT_EQ(Validate(g), "self-loop at 0");
}

TEST(Validate, ReportsAsymmetricPair) {
  const Graph g = Graph::FromCsrUnchecked(2, {0, 1, 1}, {1}, {1.0});
  EXPECT_EQ(Validate(g), "asymmetric pair (0,1)");
}

TEST(Validate, ReportsWeightAsymmetryAndRange) {
  const Graph w = Graph::FromCsrUnchecked(2, {0, 1, 2}, {1, 0}, {1.0, 2.0});
  EXPECT_EQ(Validate(w), "asymmetric pair (0,1)");
  const Graph r = Graph::FromCsrUnchecked(2, {0, 1, 1}, {4}, {1.0});
  ASSERT_TRUE(Validate(r).has_value());
  EXPECT_NE(Validate(r)->find("out of range"), std::string::npos);
}

TEST(SymNormalize, IsolatedNode) {
  const NormalizedAdjacency n = SymNormalize(Graph(1));
  EXPECT_EQ(n.ToDense(), Matrix::Constant(1, 1, 1.0));
}

TEST(SymNormalize, SingleEdge) {
  const std::vector<Edge> e = {{0, 1}};
  const Matrix d = SymNormalize(Graph::FromEdges(2, e)).ToDense();
  EXPECT_EQ(d, Matrix::Constant(2, 2, 0.5));
}

TEST(SymNormalize, ThreeNodePath) {
  const std::vector<Edge> e = {{0, 1}, {1, 2}};
  const NormalizedAdjacency n = SymNormalize(Graph::FromEdges(3, e));
  EXPECT_DOUBLE_EQ(n.entry(0, 0), 0.5);
  EXPECT_NEAR(n.entry(0, 1), 1.0 / std::sqrt(6.0), 1e-15);
  EXPECT_NEAR(n.entry(0, 1), 0.4082, 1e-4);
  EXPECT_DOUBLE_EQ(n.entry(1, 1), 1.0 / 3.0);
  EXPECT_EQ(n.entry(0, 2), 0.0);
}

TEST(SymNormalize, NegativeWeightsCanFailLoudly) {
  const std::vector<Edge> e = {{0, 1, -2.0}};
  try {
    SymNormalize(Graph::FromEdges(2, e));
    FAIL() << "expected NonPositiveDegree";
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::kNonPositiveDegree);
  }
}

TEST(SymNormalize, MatchesDenseOracleAndIsExactlySymmetric) {
  for (std::uint32_t seed = 0; seed < 50; ++seed) {
    const int n = 1 + static_cast<int>(seed % 16);
    const Graph g = RandomGraph(n, 0.3, seed);
    const Matrix d = SymNormalize(g).ToDense();
    EXPECT_LT(MaxRelError(d, DenseNormalized(g)), 1e-15);
    EXPECT_EQ(d, d.transpose()) << "seed " << seed;
    for (int i = 0; i < n; ++i) EXPECT_GT(d(i, i), 0.0);
  }
}

TEST(SymNormalize, SpectralRadiusAtMostOne) {
  for (std::uint32_t seed = 0; seed < 40; ++seed) {
    const int n = 1 + static_cast<int>(seed % 8);
    const Matrix d = SymNormalize(RandomGraph(n, 0.5, seed)).ToDense();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(d);
    EXPECT_LE(solver.eigenvalues().cwiseAbs().maxCoeff(), 1.0 + 1e-12);
  }
}

TEST(Spmm, Identity) {
  const NormalizedAdjacency eye = SymNormalize(Graph(3));
  const Matrix x = RandomMatrix(3, 2, 7);
  EXPECT_EQ(Spmm(eye, x), x);
}

TEST(Spmm, TwoNodeAveraging) {
  const std::vector<Edge> e = {{0, 1}};
  Matrix x(2, 1);
  x << 2, 4;
  Matrix expected(2, 1);
  expected << 3, 3;
  EXPECT_EQ(Spmm(SymNormalize(Graph::FromEdges(2, e)), x), expected);
}

TEST(Spmm, ZeroFeatures) {
  const NormalizedAdjacency a = SymNormalize(RandomGraph(5, 0.5, 1));
  EXPECT_EQ(Spmm(a, Matrix::Zero(5, 3)), Matrix::Zero(5, 3));
}

TEST(Spmm, DimensionMismatch) {
  const NormalizedAdjacency a = SymNormalize(Graph(3));
  try {
    Spmm(a, Matrix::Zero(4, 1));
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(Spmm, MatchesDenseProduct) {
  for (std::uint32_t seed = 0; seed < 50; ++seed) {
    const int n = 1 + static_cast<int>(seed % 16);
    const Graph g = RandomGraph(n, 0.4, seed);
    const Matrix x = RandomMatrix(n, 3, seed + 100);
    EXPECT_LT(MaxRelError(Spmm(SymNormalize(g), x), DenseNormalized(g) * x), 1e-12);
  }
}

TEST(UpperPairs, IndexRoundTrip) {
  for (int n : {2, 3, 7, 20}) {
    std::int64_t expected = 0;
    for (NodeId i = 0; i < n; ++i) {
      for (NodeId j = i + 1; j < n; ++j) {
        EXPECT_EQ(UpperPairIndex(i, j, n), expected);
        const Edge e = UpperPairFromIndex(expected, n);
        EXPECT_EQ(e.u, i);
        EXPECT_EQ(e.v, j);
        ++expected;
      }
    }
    EXPECT_EQ(NumUpperPairs(n), expected);
  }
}

TEST(EdgeList, RoundTripWithWeights) {
  const std::vector<Edge> e = {{0, 1}, {1, 3, 0.1}, {2, 3, -0.25}};
  const Graph g = Graph::FromEdges(4, e);
  std::stringstream buf;
  WriteEdgeList(buf, g);
  EXPECT_EQ(ReadEdgeList(buf, 4), g);
}

TEST(EdgeList, CommentsDuplicatesAndDefaults) {
  std::istringstream in("# header\n0\t1\n1\t0\n2\t1\t1.0\n");
  const Graph g = ReadEdgeList(in, 3);
  EXPECT_EQ(g.num_edges(), 2);
  EXPECT_EQ(g.weight(1, 2), 1.0);
}

}  // namespace
}  // namespace degnn
