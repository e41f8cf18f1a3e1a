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

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "degnn/error.h"
#include "gradcheck.h"
#include "test_util.h"

namespace degnn {
namespace {

using testing::GradCheck;
using testing::Project;
using testing::RandomGraph;
using testing::RandomMatrix;

constexpr double kTol = 1e-4;

ad::Var Scalar(double v) { return ad::Constant(Matrix::Constant(1, 1, v)); }

// Random values kept away from zero so kinks are not straddled by the step.
Matrix AwayFromZero(int rows, int cols, std::uint32_t seed) {
  Matrix m = RandomMatrix(rows, cols, seed);
  for (Eigen::Index k = 0; k < m.size(); ++k) {
    if (std::abs(m.data()[k]) < 0.1) m.data()[k] += m.data()[k] < 0 ? -0.1 : 0.1;
  }
  return m;
}

TEST(Backward, SumGivesOnes) {
  ad::Var w = ad::Parameter(RandomMatrix(3, 2, 1));
  ad::Backward(ad::Sum(w));
  EXPECT_EQ(w.grad(), Matrix::Ones(3, 2));
}

TEST(Backward, HalfSquaredNormGivesW) {
  ad::Var w = ad::Parameter(RandomMatrix(3, 3, 2));
  ad::Backward(ad::Scale(ad::Sum(ad::Hadamard(w, w)), 0.5));
  EXPECT_LT((w.grad() - w.value()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Backward, NonScalarLoss) {
  ad::Var w = ad::Parameter(RandomMatrix(2, 2, 3));
  try {
    ad::Backward(w);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonScalarLoss);
  }
}

TEST(Backward, SharedSubexpressionAccumulates) {
  ad::Var w = ad::Parameter(Matrix::Constant(1, 1, 3.0));
  const ad::Var y = ad::Hadamard(w, w);
  ad::Backward(ad::Add(ad::Sum(y), ad::Sum(y)));
  EXPECT_DOUBLE_EQ(w.grad()(0, 0), 12.0);
}

TEST(Backward, RepeatedCallsResetReachableGradients) {
  ad::Var w = ad::Parameter(RandomMatrix(2, 2, 4));
  const ad::Var loss = ad::Sum(w);
  ad::Backward(loss);
  ad::Backward(loss);
  EXPECT_EQ(w.grad(), Matrix::Ones(2, 2));
}

TEST(Bce, ZeroLogitIsLn2) {
  const ad::Var l = ad::BceWithLogits(Scalar(0.0), {1.0});
  EXPECT_NEAR(l.scalar(), std::log(2.0), 1e-15);
  EXPECT_NEAR(l.scalar(), 0.693147, 1e-6);
}

TEST(Bce, SaturatesWithoutOverflow) {
  const double high = ad::BceWithLogits(Scalar(50.0), {1.0}).scalar();
  const double low = ad::BceWithLogits(Scalar(-50.0), {1.0}).scalar();
  EXPECT_TRUE(std::isfinite(high));
  EXPECT_LT(high, 1e-20);
  EXPECT_NEAR(low, 50.0, 1e-12);
  EXPECT_TRUE(std::isfinite(ad::BceWithLogits(Scalar(1e308), {0.0}).scalar()));
}

TEST(Bce, LengthMismatch) {
  try {
    ad::BceWithLogits(ad::Constant(Matrix::Zero(3, 1)), {1.0, 0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLengthMismatch);
  }
}

TEST(SoftmaxCe, UniformSevenClasses) {
  const ad::Var l = ad::SoftmaxCrossEntropy(ad::Constant(Matrix::Zero(4, 7)), {0, 1, 2, 3},
                                            {0, 3, 6, 2});
  EXPECT_NEAR(l.scalar(), std::log(7.0), 1e-15);
  EXPECT_NEAR(l.scalar(), 1.945910, 1e-6);
}

TEST(SoftmaxCe, SaturatedCorrectClass) {
  Matrix z = Matrix::Zero(1, 3);
  z(0, 1) = 50.0;
  EXPECT_LT(ad::SoftmaxCrossEntropy(ad::Constant(z), {0}, {1}).scalar(), 1e-20);
}

TEST(SoftmaxCe, AveragesRows) {
  Matrix z(2, 2);
  z << 800.0, 0.0, 0.0, 0.0;  // Row losses 0 and ln 2.
  EXPECT_NEAR(ad::SoftmaxCrossEntropy(ad::Constant(z), {0, 1}, {0, 1}).scalar(),
              std::log(2.0) / 2, 1e-15);
}

TEST(SoftmaxCe, BadLabel) {
  try {
    ad::SoftmaxCrossEntropy(ad::Constant(Matrix::Zero(1, 3)), {0}, {3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBadLabel);
  }
}

TEST(PRelu, Examples) {
  Matrix x(1, 2);
  x << -2, 3;
  Matrix expected(1, 2);
  expected << -0.5, 3;
  EXPECT_EQ(ad::PRelu(ad::Constant(x), Scalar(0.25)).value(), expected);
  EXPECT_EQ(ad::PRelu(ad::Constant(x), Scalar(1.0)).value(), x);
  EXPECT_EQ(ad::PRelu(ad::Constant(x), Scalar(0.0)).value(), ad::Relu(ad::Constant(x)).value());
}

TEST(PairCosine, ValuesAndZeroRow) {
  Matrix h(4, 2);
  h << 1, 0, 1, 1, 0, 1, 0, 0;
  const ad::Var c = ad::PairCosine(ad::Constant(h), {{0, 0}, {0, 2}, {0, 1}});
  EXPECT_DOUBLE_EQ(c.value()(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(c.value()(1, 0), 0.0);
  EXPECT_NEAR(c.value()(2, 0), 1 / std::sqrt(2.0), 1e-15);
  try {
    ad::PairCosine(ad::Constant(h), {{0, 3}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kZeroNormRow);
  }
}

TEST(Shapes, MismatchesThrow) {
  const ad::Var a = ad::Constant(Matrix::Zero(2, 3));
  const ad::Var b = ad::Constant(Matrix::Zero(2, 2));
  EXPECT_THROW(ad::MatMul(a, b), Error);
  EXPECT_THROW(ad::Add(a, b), Error);
  EXPECT_THROW(ad::Hadamard(a, b), Error);
  EXPECT_THROW(ad::RowDot(a, b), Error);
}

// One finite-difference check per differentiable primitive.
class PrimitiveGradients : public ::testing::Test {
 protected:
  static void Expect(std::vector<ad::Var> params, const std::function<ad::Var()>& f) {
    const auto r = GradCheck(std::move(params), f);
    EXPECT_LT(r.max_rel_error, kTol) << r.where;
    EXPECT_GT(r.entries, 0);
  }
};

TEST_F(PrimitiveGradients, MatMul) {
  ad::Var a = ad::Parameter(RandomMatrix(3, 4, 1));
  ad::Var b = ad::Parameter(RandomMatrix(4, 2, 2));
  const Matrix r = RandomMatrix(3, 2, 3);
  Expect({a, b}, [&] { return Project(ad::MatMul(a, b), r); });
}

TEST_F(PrimitiveGradients, AddScaleHadamard) {
  ad::Var a = ad::Parameter(RandomMatrix(3, 3, 4));
  ad::Var b = ad::Parameter(RandomMatrix(3, 3, 5));
  const Matrix r = RandomMatrix(3, 3, 6);
  Expect({a, b}, [&] { return Project(ad::Hadamard(ad::Add(a, ad::Scale(b, -1.7)), b), r); });
}

TEST_F(PrimitiveGradients, Relu) {
  ad::Var x = ad::Parameter(AwayFromZero(4, 3, 7));
  const Matrix r = RandomMatrix(4, 3, 8);
  Expect({x}, [&] { return Project(ad::Relu(x), r); });
}

TEST_F(PrimitiveGradients, PRelu) {
  ad::Var x = ad::Parameter(AwayFromZero(4, 3, 9));
  ad::Var slope = ad::Parameter(Matrix::Constant(1, 1, 0.25));
  const Matrix r = RandomMatrix(4, 3, 10);
  Expect({x, slope}, [&] { return Project(ad::PRelu(x, slope), r); });
}

TEST_F(PrimitiveGradients, Spmm) {
  auto adj = std::make_shared<const NormalizedAdjacency>(SymNormalize(RandomGraph(6, 0.4, 11)));
  ad::Var x = ad::Parameter(RandomMatrix(6, 3, 12));
  const Matrix r = RandomMatrix(6, 3, 13);
  Expect({x}, [&] { return Project(ad::Spmm(adj, x), r); });
}

TEST_F(PrimitiveGradients, NormalizedPropagateWeightsAndFeatures) {
  const Graph g = RandomGraph(7, 0.5, 14);
  auto pattern = ad::MakePropagationPattern(7, g.UndirectedEdges());
  Matrix w0 = RandomMatrix(static_cast<int>(g.num_edges()), 1, 15).cwiseAbs();
  w0.array() += 0.1;
  ad::Var w = ad::Parameter(w0);
  ad::Var x = ad::Parameter(RandomMatrix(7, 2, 16));
  const Matrix r = RandomMatrix(7, 2, 17);
  Expect({w, x}, [&] { return Project(ad::NormalizedPropagate(pattern, w, x), r); });
}

TEST(NormalizedPropagate, MatchesSymNormalizeOnTheSameWeights) {
  const Graph g = RandomGraph(9, 0.4, 18);
  std::vector<Edge> pairs = g.UndirectedEdges();
  Matrix w(static_cast<Eigen::Index>(pairs.size()), 1);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    pairs[k].weight = 0.2 + 0.1 * static_cast<double>(k);
    w(static_cast<Eigen::Index>(k), 0) = pairs[k].weight;
  }
  const Graph weighted = Graph::FromEdges(9, pairs);
  const Matrix x = RandomMatrix(9, 3, 19);
  const Matrix got = ad::NormalizedPropagate(ad::MakePropagationPattern(9, pairs),
                                             ad::Constant(w), ad::Constant(x))
                         .value();
  EXPECT_LT(testing::MaxRelError(got, testing::DenseNormalized(weighted) * x), 1e-13);
}

TEST_F(PrimitiveGradients, GatherConcatRowDot) {
  ad::Var a = ad::Parameter(RandomMatrix(4, 3, 20));
  ad::Var b = ad::Parameter(RandomMatrix(4, 3, 21));
  const Matrix r = RandomMatrix(8, 1, 22);
  Expect({a, b}, [&] {
    const ad::Var gathered = ad::GatherRows(b, {3, 0, 0, 2});
    return Project(ad::ConcatRows(ad::RowDot(a, gathered), ad::RowDot(a, b)), r);
  });
}

TEST_F(PrimitiveGradients, PairCosine) {
  ad::Var h = ad::Parameter(RandomMatrix(5, 3, 23));
  const Matrix r = RandomMatrix(4, 1, 24);
  Expect({h}, [&] { return Project(ad::PairCosine(h, {{0, 1}, {1, 4}, {2, 3}, {0, 4}}), r); });
}

TEST_F(PrimitiveGradients, BceWithLogits) {
  ad::Var z = ad::Parameter(RandomMatrix(6, 1, 25) * 3.0);
  Expect({z}, [&] { return ad::BceWithLogits(z, {1, 0, 1, 1, 0, 0}); });
}

TEST_F(PrimitiveGradients, SoftmaxCrossEntropy) {
  ad::Var z = ad::Parameter(RandomMatrix(5, 4, 26));
  Expect({z}, [&] { return ad::SoftmaxCrossEntropy(z, {0, 2, 4}, {3, 0, 1}); });
}

TEST_F(PrimitiveGradients, SpmmPReluMatMulBceComposite) {
  auto adj = std::make_shared<const NormalizedAdjacency>(SymNormalize(RandomGraph(3, 0.7, 27)));
  ad::Var x = ad::Parameter(RandomMatrix(3, 3, 28));
  ad::Var w = ad::Parameter(RandomMatrix(3, 3, 29));
  ad::Var slope = ad::Parameter(Matrix::Constant(1, 1, 0.25));
  ad::Var v = ad::Parameter(RandomMatrix(3, 1, 30));
  Expect({x, w, slope, v}, [&] {
    const ad::Var h = ad::PRelu(ad::Spmm(adj, ad::MatMul(x, w)), slope);
    return ad::BceWithLogits(ad::MatMul(h, v), {1, 0, 1});
  });
}

TEST(Determinism, IdenticalGraphsGiveBitwiseIdenticalGradients) {
  auto run = [] {
    auto adj = std::make_shared<const NormalizedAdjacency>(SymNormalize(RandomGraph(8, 0.4, 31)));
    ad::Var w = ad::Parameter(RandomMatrix(3, 4, 32));
    const ad::Var x = ad::Constant(RandomMatrix(8, 3, 33));
    const ad::Var h = ad::Relu(ad::Spmm(adj, ad::MatMul(x, w)));
    ad::Backward(ad::SoftmaxCrossEntropy(h, {0, 1, 2, 5}, {0, 1, 2, 3}));
    return w.grad();
  };
  const Matrix a = run();
  const Matrix b = run();
  EXPECT_EQ(std::memcmp(a.data(), b.data(), sizeof(double) * a.size()), 0);
}

TEST(Stability, LossesFiniteForExtremeInputs) {
  Matrix z(3, 2);
  z << 1e300, -1e300, -700, 700, 0, 1e-300;
  EXPECT_TRUE(std::isfinite(ad::SoftmaxCrossEntropy(ad::Constant(z), {0, 1, 2}, {0, 0, 1}).scalar()));
  Matrix b(3, 1);
  b << 1e300, -1e300, 0;
  EXPECT_TRUE(std::isfinite(ad::BceWithLogits(ad::Constant(b), {0, 1, 1}).scalar()));
}

}  // namespace
}  // namespace degnn
