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

#ifndef DEGNN_EXPERTS_H_
#define DEGNN_EXPERTS_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "degnn/augment.h"
#include "degnn/autograd.h"
#include "degnn/dataset.h"
#include "degnn/graph.h"

namespace degnn {

// kNode is the node feature expert, kEdge the edge expert.
enum class ExpertTag { kNode, kEdge };
std::string ExpertTagName(ExpertTag tag);
ExpertTag ParseExpertTag(const std::string& name);

// One-layer GCN encoder, PReLU(norm(A) X W).
struct EncoderParams {
  ad::Var weight;  // D x D'
  ad::Var slope;   // 1 x 1
  ExpertTag tag = ExpertTag::kNode;

  // Deep copy, detached from any computation graph.
  EncoderParams Clone() const;
  std::vector<ad::Var> Vars() const { return {weight, slope}; }
};

// Glorot-uniform weight, slope 0.25.
EncoderParams InitEncoder(int in_dim, int out_dim, ExpertTag tag, std::uint64_t seed);

ad::Var Encode(const EncoderParams& params, const ad::Var& x,
               std::shared_ptr<const NormalizedAdjacency> adj);
// Weighted adjacency variant; gradients also reach the edge weights.
ad::Var Encode(const EncoderParams& params, const ad::Var& x,
               std::shared_ptr<const ad::PropagationPattern> pattern, const ad::Var& weights);
Matrix EncodeValue(const EncoderParams& params, const Matrix& x, const Graph& a);

// Inner-product discriminator; the sigmoid lives in the loss.
double Discriminate(std::span<const double> a, std::span<const double> b);

// How the negative term is counted per node. kPerView follows the nested form
// (once for each of the three positive views, each scaled by 1/3); kPerNode
// scales the single negative term by 1/3 instead.
enum class NegativeWeighting { kPerView, kPerNode };

// -(1/2N) sum_i (1/3) sum_j [log s(<h_i, h_i^j>) + log(1 - s(<h_i, h_i^neg>))].
ad::Var ContrastiveLoss(const ad::Var& h, const ad::Var& h1, const ad::Var& h2,
                        const ad::Var& h3, const ad::Var& h_neg,
                        NegativeWeighting weighting = NegativeWeighting::kPerView);

// One augmentation draw, normalized and ready for encoding.
struct PreparedViews {
  std::shared_ptr<const NormalizedAdjacency> original;
  std::shared_ptr<const NormalizedAdjacency> rewired;
  std::shared_ptr<const NormalizedAdjacency> negative;
  ad::Var x;
  ad::Var shuffled;
  std::vector<NodeId> negative_permutation;
};

PreparedViews PrepareViews(const Graph& a, const FeatureMatrix& x, const ad::Var& x_compute,
                           std::shared_ptr<const NormalizedAdjacency> a_norm,
                           const AugConfig& cfg);

struct ExpertForward {
  ad::Var h;     // Embedding of the original graph.
  ad::Var loss;  // Contrastive loss over the prepared views.
};

ExpertForward ExpertLoss(const EncoderParams& params, const PreparedViews& views,
                         NegativeWeighting weighting = NegativeWeighting::kPerView);

struct PretrainOptions {
  int epochs = 500;
  int patience = 50;  // On training loss.
  double lr = 1e-3;
  double weight_decay = 5e-4;
  AugConfig aug;  // aug.seed drives the per-epoch view schedule.
  NegativeWeighting weighting = NegativeWeighting::kPerView;
};

struct PretrainResult {
  EncoderParams params;  // Parameters with the lowest observed loss.
  std::vector<double> losses;
  int best_epoch = -1;
  double best_loss = 0.0;
};

// Per-epoch views come from DeriveSeed(aug.seed, "views", epoch), so two experts
// trained with the same options see the same draws.
PretrainResult PretrainExpert(const EncoderParams& init, const Dataset& ds,
                              const PretrainOptions& options);

// Checkpoint: <stem>.bin (little-endian float32 weight, row-major) and
// <stem>.json {shape, slope, expert, seed, epochs}.
void SaveEncoder(const EncoderParams& params, const std::filesystem::path& stem,
                 std::uint64_t seed, int epochs);
EncoderParams LoadEncoder(const std::filesystem::path& stem);

}  // namespace degnn

#endif  // DEGNN_EXPERTS_H_
