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

#include <cmath>
#include <limits>

#include "degnn/adam.h"
#include "degnn/checkpoint.h"
#include "degnn/error.h"
#include "degnn/rng.h"

namespace degnn {
namespace fs = std::filesystem;

std::string ExpertTagName(ExpertTag tag) {
  return tag == ExpertTag::kNode ? "node" : "edge";
}

ExpertTag ParseExpertTag(const std::string& name) {
  if (name == "node") return ExpertTag::kNode;
  if (name == "edge") return ExpertTag::kEdge;
  throw Error(ErrorCode::kInvalidArgument, "unknown expert '" + name + "'");
}

EncoderParams EncoderParams::Clone() const {
  return {ad::Parameter(weight.value()), ad::Parameter(slope.value()), tag};
}

EncoderParams InitEncoder(int in_dim, int out_dim, ExpertTag tag, std::uint64_t seed) {
  Rng rng(DeriveSeed(seed, "encoder-init", static_cast<std::uint64_t>(tag)));
  const double limit = std::sqrt(6.0 / static_cast<double>(in_dim + out_dim));
  Matrix w(in_dim, out_dim);
  for (Eigen::Index k = 0; k < w.size(); ++k) w.data()[k] = limit * (2.0 * rng.uniform() - 1.0);
  Matrix slope(1, 1);
  slope(0, 0) = 0.25;
  return {ad::Parameter(std::move(w)), ad::Parameter(std::move(slope)), tag};
}

ad::Var Encode(const EncoderParams& params, const ad::Var& x,
               std::shared_ptr<const NormalizedAdjacency> adj) {
  if (x.cols() != params.weight.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "encode: features have " + std::to_string(x.cols()) +
                    " columns, weight expects " + std::to_string(params.weight.rows()));
  }
  return ad::PRelu(ad::Spmm(std::move(adj), ad::MatMul(x, params.weight)), params.slope);
}

ad::Var Encode(const EncoderParams& params, const ad::Var& x,
               std::shared_ptr<const ad::PropagationPattern> pattern, const ad::Var& weights) {
  if (x.cols() != params.weight.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "encode: feature width");
  }
  return ad::PRelu(ad::NormalizedPropagate(std::move(pattern), weights,
                                           ad::MatMul(x, params.weight)),
                   params.slope);
}

Matrix EncodeValue(const EncoderParams& params, const Matrix& x, const Graph& a) {
  auto adj = std::make_shared<const NormalizedAdjacency>(SymNormalize(a));
  const ad::Var w = ad::Constant(params.weight.value());
  const ad::Var s = ad::Constant(params.slope.value());
  return Encode({w, s, params.tag}, ad::Constant(x), adj).value();
}

double Discriminate(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kLengthMismatch, "discriminator inputs differ in length");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) total += a[k] * b[k];
  return total;
}

ad::Var ContrastiveLoss(const ad::Var& h, const ad::Var& h1, const ad::Var& h2,
                        const ad::Var& h3, const ad::Var& h_neg,
                        NegativeWeighting weighting) {
  for (const ad::Var* v : {&h1, &h2, &h3, &h_neg}) {
    if (v->rows() != h.rows() || v->cols() != h.cols()) {
      throw Error(ErrorCode::kShapeMismatch, "contrastive loss: embedding shapes differ");
    }
  }
  const auto n = static_cast<std::size_t>(h.rows());
  const ad::Var positive = ad::ConcatRows(
      ad::ConcatRows(ad::RowDot(h, h1), ad::RowDot(h, h2)), ad::RowDot(h, h3));
  const ad::Var negative = ad::RowDot(h, h_neg);
  // (1/2N)[(1/3) sum over 3N positive terms + w * sum over N negative terms]
  // = mean_pos / 2 + w * mean_neg / 2.
  const double negative_weight = weighting == NegativeWeighting::kPerView ? 1.0 : 1.0 / 3.0;
  return ad::Add(ad::Scale(ad::BceWithLogits(positive, std::vector<double>(3 * n, 1.0)), 0.5),
                 ad::Scale(ad::BceWithLogits(negative, std::vector<double>(n, 0.0)),
                           0.5 * negative_weight));
}

PreparedViews PrepareViews(const Graph& a, const FeatureMatrix& x, const ad::Var& x_compute,
                           std::shared_ptr<const NormalizedAdjacency> a_norm,
                           const AugConfig& cfg) {
  ViewSet views = MakeViews(a, x, cfg);
  PreparedViews out;
  out.original = std::move(a_norm);
  out.rewired = std::make_shared<const NormalizedAdjacency>(SymNormalize(views.rewired));
  out.negative =
      std::make_shared<const NormalizedAdjacency>(SymNormalize(views.negative.graph));
  out.x = x_compute;
  out.shuffled = ad::Constant(ToCompute(views.shuffled));
  out.negative_permutation = std::move(views.negative.permutation);
  return out;
}

ExpertForward ExpertLoss(const EncoderParams& params, const PreparedViews& views,
                         NegativeWeighting weighting) {
  if (views.x.cols() != params.weight.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "expert: feature width");
  }
  // X W is shared by the original, rewired and negative views (the negative
  // features are a row permutation of X).
  const ad::Var xw = ad::MatMul(views.x, params.weight);
  const ad::Var xw_shuffled = ad::MatMul(views.shuffled, params.weight);
  auto encode = [&](const std::shared_ptr<const NormalizedAdjacency>& adj, const ad::Var& xw_view) {
    return ad::PRelu(ad::Spmm(adj, xw_view), params.slope);
  };
  ExpertForward out;
  out.h = encode(views.original, xw);
  const ad::Var h1 = encode(views.rewired, xw);
  const ad::Var h2 = encode(views.original, xw_shuffled);
  const ad::Var h3 = encode(views.rewired, xw_shuffled);
  const ad::Var h_neg =
      encode(views.negative, ad::GatherRows(xw, views.negative_permutation));
  out.loss = ContrastiveLoss(out.h, h1, h2, h3, h_neg, weighting);
  return out;
}

PretrainResult PretrainExpert(const EncoderParams& init, const Dataset& ds,
                              const PretrainOptions& options) {
  PretrainResult result;
  result.params = init.Clone();
  result.best_loss = std::numeric_limits<double>::infinity();
  if (options.epochs <= 0) return result;

  EncoderParams params = init.Clone();
  Adam optimizer(params.Vars(), {.lr = options.lr, .weight_decay = options.weight_decay});
  const ad::Var x = ad::Constant(ToCompute(ds.features));
  auto a_norm = std::make_shared<const NormalizedAdjacency>(SymNormalize(ds.graph));
  int since_best = 0;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    AugConfig aug = options.aug;
    aug.seed = DeriveSeed(options.aug.seed, "views", static_cast<std::uint64_t>(epoch));
    const PreparedViews views = PrepareViews(ds.graph, ds.features, x, a_norm, aug);
    const ExpertForward forward = ExpertLoss(params, views, options.weighting);
    const double loss = forward.loss.scalar();
    result.losses.push_back(loss);
    if (loss < result.best_loss) {
      result.best_loss = loss;
      result.best_epoch = epoch;
      result.params = params.Clone();
      since_best = 0;
    } else if (++since_best >= options.patience) {
      break;
    }
    optimizer.ZeroGrad();
    ad::Backward(forward.loss);
    optimizer.Step();
  }
  return result;
}

void SaveEncoder(const EncoderParams& params, const fs::path& stem, std::uint64_t seed,
                 int epochs) {
  fs::path bin = stem;
  bin += ".bin";
  fs::path sidecar = stem;
  sidecar += ".json";
  if (!stem.parent_path().empty()) fs::create_directories(stem.parent_path());
  WriteMatrixF32(bin, params.weight.value());
  nlohmann::json meta = {
      {"shape", {params.weight.rows(), params.weight.cols()}},
      {"slope", params.slope.value()(0, 0)},
      {"expert", ExpertTagName(params.tag)},
      {"seed", seed},
      {"epochs", epochs},
  };
  WriteFileAtomic(sidecar, meta.dump(2) + "\n");
}

EncoderParams LoadEncoder(const fs::path& stem) {
  fs::path bin = stem;
  bin += ".bin";
  fs::path sidecar = stem;
  sidecar += ".json";
  const nlohmann::json meta = ReadJsonFile(sidecar);
  try {
    const auto rows = meta.at("shape").at(0).get<Eigen::Index>();
    const auto cols = meta.at("shape").at(1).get<Eigen::Index>();
    Matrix slope(1, 1);
    slope(0, 0) = meta.at("slope").get<double>();
    return {ad::Parameter(ReadMatrixF32(bin, rows, cols)), ad::Parameter(std::move(slope)),
            ParseExpertTag(meta.at("expert").get<std::string>())};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kUnrecognizedFormat, sidecar.string() + ": " + e.what());
  }
}

}  // namespace degnn
