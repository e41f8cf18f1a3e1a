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

#include "degnn/experts.h"

#include <gtest/gtest.h>

#include <cmath>

#include "degnn/checkpoint.h"
#include "degnn/error.h"
#include "gradcheck.h"
#include "test_util.h"

namespace degnn {
namespace {

using testing::RandomGraph;
using testing::RandomMatrix;
using testing::TempDir;

EncoderParams Fixed(const Matrix& w, double slope, ExpertTag tag = ExpertTag::kNode) {
  return {ad::Parameter(w), ad::Parameter(Matrix::Constant(1, 1, slope)), tag};
}

double LogSigmoid(double z) { return z >= 0 ? -std::log1p(std::exp(-z)) : z - std::log1p(std::exp(z)); }

// Direct transcription of the nested sum, with the negative term inside the
// inner sum over the three positive views (or outside it, scaled by 1/3).
double ReferenceLoss(const Matrix& h, const Matrix& h1, const Matrix& h2, const Matrix& h3,
                     const Matrix& hn, NegativeWeighting weighting) {
  const auto n = h.rows();
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double neg = LogSigmoid(-h.row(i).dot(hn.row(i)));
    double inner = 0.0;
    for (const Matrix* v : {&h1, &h2, &h3}) {
      inner += LogSigmoid(h.row(i).dot(v->row(i)));
      if (weighting == NegativeWeighting::kPerView) inner += neg;
    }
    if (weighting == NegativeWeighting::kPerNode) inner += neg;
    total += inner / 3.0;
  }
  return -total / (2.0 * static_cast<double>(n));
}

double LossOf(const Matrix& h, const Matrix& h1, const Matrix& h2, const Matrix& h3,
              const Matrix& hn, NegativeWeighting w = NegativeWeighting::kPerView) {
  return ContrastiveLoss(ad::Constant(h), ad::Constant(h1), ad::Constant(h2), ad::Constant(h3),
                         ad::Constant(hn), w)
      .scalar();
}

TEST(Encode, IsolatedNodeIdentityWeight) {
  const Matrix x = (Matrix(1, 2) << 1, 0).finished();
  const Matrix h = EncodeValue(Fixed(Matrix::Identity(2, 2), 0.7), x, Graph(1));
  EXPECT_EQ(h, x);
}

TEST(Encode, TwoNodeEdgePreActivation) {
  const std::vector<Edge> e = {{0, 1}};
  const Matrix x = (Matrix(2, 1) << 1, 0).finished();
  const Matrix h = EncodeValue(Fixed(Matrix::Ones(1, 1), 1.0), x, Graph::FromEdges(2, e));
  EXPECT_EQ(h, Matrix::Constant(2, 1, 0.5));
}

TEST(Encode, ZeroWeightGivesZero) {
  const Matrix h = EncodeValue(Fixed(Matrix::Zero(3, 4), 0.25), RandomMatrix(5, 3, 1),
                               RandomGraph(5, 0.5, 2));
  EXPECT_EQ(h, Matrix::Zero(5, 4));
}

TEST(Encode, DimensionMismatch) {
  try {
    EncodeValue(Fixed(Matrix::Zero(3, 4), 0.25), RandomMatrix(5, 2, 1), Graph(5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(Discriminate, InnerProduct) {
  const std::vector<double> a = {1, 2}, b = {3, 4}, c = {-2, 1};
  EXPECT_EQ(Discriminate(a, b), 11.0);
  EXPECT_EQ(Discriminate(a, c), 0.0);
  const std::vector<double> u = {0.6, 0.8};
  EXPECT_NEAR(Discriminate(u, u), 1.0, 1e-15);
  const std::vector<double> shorter = {1};
  EXPECT_THROW(Discriminate(a, shorter), Error);
}

TEST(ContrastiveLoss, AllZeroLogitsGiveLn2) {
  const Matrix z = Matrix::Zero(6, 3);
  EXPECT_NEAR(LossOf(z, z, z, z, z), std::log(2.0), 1e-15);
  EXPECT_NEAR(LossOf(z, z, z, z, z), 0.693147, 1e-6);
}

TEST(ContrastiveLoss, SingleNodeHandValue) {
  const Matrix h = Matrix::Constant(1, 1, 2.0);
  const Matrix pos = Matrix::Constant(1, 1, 1.0);
  const Matrix neg = Matrix::Constant(1, 1, -1.0);
  const double expected = -LogSigmoid(2.0);
  EXPECT_NEAR(LossOf(h, pos, pos, pos, neg), expected, 1e-15);
  EXPECT_NEAR(LossOf(h, pos, pos, pos, neg), 0.126928, 1e-6);
}

TEST(ContrastiveLoss, PerfectDiscriminationApproachesZero) {
  const Matrix h = Matrix::Constant(4, 2, 10.0);
  const Matrix pos = Matrix::Constant(4, 2, 10.0);
  const Matrix neg = Matrix::Constant(4, 2, -10.0);
  EXPECT_LT(LossOf(h, pos, pos, pos, neg), 1e-80);
  EXPECT_GE(LossOf(h, pos, pos, pos, neg), 0.0);
}

TEST(ContrastiveLoss, MatchesNestedSumAndIsNonNegative) {
  for (std::uint32_t seed = 0; seed < 30; ++seed) {
    const int n = 1 + static_cast<int>(seed % 9);
    const Matrix h = RandomMatrix(n, 3, seed), h1 = RandomMatrix(n, 3, seed + 100),
                 h2 = RandomMatrix(n, 3, seed + 200), h3 = RandomMatrix(n, 3, seed + 300),
                 hn = RandomMatrix(n, 3, seed + 400);
    for (auto w : {NegativeWeighting::kPerView, NegativeWeighting::kPerNode}) {
      const double got = LossOf(h, h1, h2, h3, hn, w);
      EXPECT_NEAR(got, ReferenceLoss(h, h1, h2, h3, hn, w), 1e-12);
      EXPECT_GT(got, 0.0);
    }
  }
}

TEST(ContrastiveLoss, ShapeMismatch) {
  const Matrix a = Matrix::Zero(3, 2), b = Matrix::Zero(2, 2);
  EXPECT_THROW(LossOf(a, a, a, a, b), Error);
}

struct Toy {
  Dataset ds;
  ad::Var x;
  std::shared_ptr<const NormalizedAdjacency> a_norm;
};

Toy MakeToy(int per_class, std::uint64_t seed) {
  Toy t;
  t.ds = MakePlantedPartition({.nodes_per_class = per_class, .num_features = 5, .seed = seed});
  t.x = ad::Constant(ToCompute(t.ds.features));
  t.a_norm = std::make_shared<const NormalizedAdjacency>(SymNormalize(t.ds.graph));
  return t;
}

TEST(ExpertLoss, MatchesExplicitViewEncodings) {
  const Toy t = MakeToy(6, 3);
  const AugConfig cfg{0.3, 0.4, 21};
  const EncoderParams p = InitEncoder(5, 4, ExpertTag::kNode, 8);
  const PreparedViews views = PrepareViews(t.ds.graph, t.ds.features, t.x, t.a_norm, cfg);
  const double got = ExpertLoss(p, views).loss.scalar();

  const ViewSet v = MakeViews(t.ds.graph, t.ds.features, cfg);
  const Matrix x = ToCompute(t.ds.features);
  const Matrix xs = ToCompute(v.shuffled);
  const double expected = LossOf(
      EncodeValue(p, x, t.ds.graph), EncodeValue(p, x, v.rewired), EncodeValue(p, xs, t.ds.graph),
      EncodeValue(p, xs, v.rewired), EncodeValue(p, ToCompute(v.negative.features), v.negative.graph));
  EXPECT_NEAR(got, expected, 1e-12);
}

TEST(ExpertLoss, EdgeLossSharesTheNodeImplementation) {
  const Toy t = MakeToy(6, 4);
  const PreparedViews views = PrepareViews(t.ds.graph, t.ds.features, t.x, t.a_norm, {0.2, 0.2, 5});
  const Matrix w = RandomMatrix(5, 3, 6);
  const double node = ExpertLoss(Fixed(w, 0.25, ExpertTag::kNode), views).loss.scalar();
  const double edge = ExpertLoss(Fixed(w, 0.25, ExpertTag::kEdge), views).loss.scalar();
  EXPECT_EQ(node, edge);
}

TEST(ExpertLoss, GradientMatchesFiniteDifferences) {
  const Toy t = MakeToy(5, 5);
  const PreparedViews views = PrepareViews(t.ds.graph, t.ds.features, t.x, t.a_norm, {0.3, 0.3, 7});
  for (ExpertTag tag : {ExpertTag::kNode, ExpertTag::kEdge}) {
    const EncoderParams p = InitEncoder(5, 4, tag, 9);
    const auto r = testing::GradCheck({p.weight, p.slope}, [&] { return ExpertLoss(p, views).loss; });
    EXPECT_LT(r.max_rel_error, 1e-4) << ExpertTagName(tag) << ": " << r.where;
  }
}

TEST(Pretrain, ZeroEpochsReturnsInitialParameters) {
  const Toy t = MakeToy(10, 1);
  const EncoderParams init = InitEncoder(5, 4, ExpertTag::kNode, 2);
  PretrainOptions o;
  o.epochs = 0;
  const PretrainResult r = PretrainExpert(init, t.ds, o);
  EXPECT_EQ(r.params.weight.value(), init.weight.value());
  EXPECT_EQ(r.params.slope.value(), init.slope.value());
  EXPECT_TRUE(r.losses.empty());
}

TEST(Pretrain, LossDecreasesOnToyClusters) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const Toy t = MakeToy(10, seed);
    PretrainOptions o;
    o.epochs = 200;
    o.patience = 200;
    o.lr = 1e-2;
    o.aug.seed = seed;
    const EncoderParams init = InitEncoder(5, 8, ExpertTag::kNode, seed);
    const PretrainResult r = PretrainExpert(init, t.ds, o);
    ASSERT_FALSE(r.losses.empty());
    EXPECT_LT(r.best_loss, r.losses.front()) << "seed " << seed;
    // Averaged over view draws the training schedule never saw.
    double before = 0.0, after = 0.0;
    for (std::uint64_t v = 0; v < 20; ++v) {
      const PreparedViews views =
          PrepareViews(t.ds.graph, t.ds.features, t.x, t.a_norm, {0.2, 0.2, 1000 + v});
      before += ExpertLoss(init, views).loss.scalar();
      after += ExpertLoss(r.params, views).loss.scalar();
    }
    EXPECT_LT(after, before) << "seed " << seed;
  }
}

TEST(Pretrain, DeterministicInSeed) {
  const Toy t = MakeToy(10, 4);
  PretrainOptions o;
  o.epochs = 30;
  o.aug.seed = 11;
  const EncoderParams init = InitEncoder(5, 6, ExpertTag::kEdge, 12);
  const PretrainResult a = PretrainExpert(init, t.ds, o);
  const PretrainResult b = PretrainExpert(init, t.ds, o);
  EXPECT_EQ(a.params.weight.value(), b.params.weight.value());
  EXPECT_EQ(a.losses, b.losses);
}

double MeanCosine(const Matrix& h, const std::vector<int>& labels, bool same) {
  double total = 0.0;
  int count = 0;
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < h.rows(); ++j) {
      if ((labels[i] == labels[j]) != same) continue;
      total += h.row(i).dot(h.row(j)) / (h.row(i).norm() * h.row(j).norm());
      ++count;
    }
  }
  return total / count;
}

TEST(Pretrain, EmbeddingsAreMoreSimilarWithinClusters) {
  const Toy t = MakeToy(10, 6);
  PretrainOptions o;
  o.epochs = 100;
  o.lr = 1e-2;
  o.aug.seed = 3;
  const PretrainResult r = PretrainExpert(InitEncoder(5, 8, ExpertTag::kNode, 13), t.ds, o);
  const Matrix h = EncodeValue(r.params, ToCompute(t.ds.features), t.ds.graph);
  EXPECT_GT(MeanCosine(h, t.ds.labels, true), MeanCosine(h, t.ds.labels, false));
}

TEST(Checkpoint, RoundTripAtFloatPrecision) {
  TempDir tmp;
  const EncoderParams p = InitEncoder(7, 3, ExpertTag::kEdge, 4);
  SaveEncoder(p, tmp.path() / "edge_expert", 4, 120);
  const EncoderParams back = LoadEncoder(tmp.path() / "edge_expert");
  EXPECT_EQ(back.tag, ExpertTag::kEdge);
  EXPECT_EQ(back.weight.value(), p.weight.value().cast<float>().cast<double>());
  EXPECT_EQ(back.slope.value()(0, 0), 0.25);
  const nlohmann::json meta = ReadJsonFile(tmp.path() / "edge_expert.json");
  EXPECT_EQ(meta.at("shape"), nlohmann::json({7, 3}));
  EXPECT_EQ(meta.at("expert"), "edge");
  EXPECT_EQ(meta.at("seed"), 4);
  EXPECT_EQ(meta.at("epochs"), 120);
  EXPECT_EQ(std::filesystem::file_size(tmp.path() / "edge_expert.bin"), 7u * 3u * 4u);
}

TEST(Checkpoint, TruncatedWeightsAreRejected) {
  TempDir tmp;
  SaveEncoder(InitEncoder(4, 2, ExpertTag::kNode, 1), tmp.path() / "node_expert", 1, 1);
  std::filesystem::resize_file(tmp.path() / "node_expert.bin", 12);
  try {
    LoadEncoder(tmp.path() / "node_expert");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kShapeMismatch);
  }
}

}  // namespace
}  // namespace degnn
