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

#ifndef DEGNN_PIPELINE_H_
#define DEGNN_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "degnn/augment.h"
#include "degnn/autograd.h"
#include "degnn/dataset.h"
#include "degnn/experts.h"
#include "degnn/noise.h"
#include "degnn/reconstruct.h"
#include "json.hpp"

namespace degnn {

enum class Regime { kGcnBaseline, kDegnnI, kDegnnII };
// "gcn", "degnn1", "degnn2".
std::string RegimeName(Regime regime);
Regime ParseRegime(const std::string& name);

struct ExpertToggles {
  bool node = true;
  bool edge = true;
  // With the node expert off, feed X itself downstream instead of a seeded
  // random projection of X to d_prime columns.
  bool identity_passthrough = false;
};

struct TrainConfig {
  Regime regime = Regime::kDegnnI;
  double alpha = 1.0;
  double beta = 1.0;
  double k_percent = 10.0;
  AugConfig aug;  // aug.seed is ignored; views are seeded from seed.
  int d_prime = 128;
  int hidden = 64;
  double lr_main = 1e-2;
  double lr_pretrain = 1e-3;
  double weight_decay = 5e-4;
  int epochs_pretrain = 500;
  int patience_pretrain = 50;
  int epochs_main = 300;
  int patience = 30;
  std::uint64_t seed = 0;
  ExpertToggles experts;
  NegativeWeighting weighting = NegativeWeighting::kPerView;
};

nlohmann::json ToJson(const TrainConfig& cfg);
// Missing keys keep their defaults.
TrainConfig TrainConfigFromJson(const nlohmann::json& j);

struct DownstreamParams {
  ad::Var w1;  // in x hidden
  ad::Var w2;  // hidden x classes

  DownstreamParams Clone() const;
  std::vector<ad::Var> Vars() const { return {w1, w2}; }
};

// Glorot-uniform, no biases.
DownstreamParams InitDownstream(int in_dim, int hidden, int num_classes, std::uint64_t seed);

// Either a constant normalized adjacency or a pattern whose weights are a Var.
struct Propagator {
  std::shared_ptr<const NormalizedAdjacency> fixed;
  std::shared_ptr<const ad::PropagationPattern> pattern;
  ad::Var weights;

  static Propagator Fixed(const Graph& g);
  static Propagator Fixed(std::shared_ptr<const NormalizedAdjacency> adj);
  static Propagator Weighted(const DifferentiableAdjacency& adj);
  ad::Var Apply(const ad::Var& x) const;
};

// s * ReLU(s * h * W1) * W2. Throws kDimensionMismatch.
ad::Var DownstreamForward(const DownstreamParams& theta, const ad::Var& h,
                          const Propagator& s);

// Fraction of rows whose argmax (lowest index on ties) equals the label.
double Accuracy(const Matrix& logits, const std::vector<int>& labels,
                const std::vector<NodeId>& rows);
double Evaluate(const DownstreamParams& theta, const Matrix& h, const Propagator& s,
                const std::vector<int>& labels, const std::vector<NodeId>& rows);

struct RunReport {
  TrainConfig config;
  std::string dataset;
  std::string cell;  // Benchmark cell key; empty for standalone runs.
  NoiseSpec noise;   // Poisoning applied to the dataset before training.
  std::uint64_t seed = 0;
  double test_accuracy = 0.0;
  double best_val_accuracy = 0.0;
  int best_epoch = -1;
  std::vector<double> val_accuracy;
  std::vector<double> loss_gnn;
  // nullopt where the term is disabled or weighted by zero.
  std::vector<std::optional<double>> loss_node;
  std::vector<std::optional<double>> loss_edge;
  std::vector<double> pretrain_loss_node;
  std::vector<double> pretrain_loss_edge;
  double wall_seconds = 0.0;
};

nlohmann::json ToJson(const RunReport& report);
RunReport RunReportFromJson(const nlohmann::json& j);
void SaveRunReport(const RunReport& report, const std::filesystem::path& file);
RunReport LoadRunReport(const std::filesystem::path& file);

// Everything needed to re-evaluate a trained model.
struct TrainedModel {
  TrainConfig config;
  DownstreamParams theta;
  std::optional<EncoderParams> node;
  std::optional<EncoderParams> edge;
};

struct TrainOutcome {
  RunReport report;
  TrainedModel model;
};

TrainOutcome TrainGcnBaseline(const Dataset& ds, const Split& split, const TrainConfig& cfg);
TrainOutcome TrainDegnnI(const Dataset& ds, const Split& split, const TrainConfig& cfg);
TrainOutcome TrainDegnnII(const Dataset& ds, const Split& split, const TrainConfig& cfg);
// Dispatches on cfg.regime.
TrainOutcome Train(const Dataset& ds, const Split& split, const TrainConfig& cfg);

// Trains theta alone on fixed inputs with early stopping on validation
// accuracy. Shared by the baseline and the frozen-expert regime.
TrainOutcome TrainDownstreamFixed(const Dataset& ds, const Split& split, const TrainConfig& cfg,
                                  const Matrix& h, const Propagator& s);

// Downstream inputs (H, S) for a trained model, as used in evaluation.
struct DownstreamInputs {
  Matrix h;
  Propagator s;
  std::optional<ModifiedAdjacency> modified;
};
DownstreamInputs ComputeInputs(const TrainedModel& model, const Dataset& ds);
double EvaluateModel(const TrainedModel& model, const Dataset& ds,
                     const std::vector<NodeId>& rows);

// Seeded Glorot matrix used when the node expert is disabled.
Matrix NodeProjection(int in_dim, int out_dim, std::uint64_t seed);

// Directory with config.json, theta.{bin,json} and node/edge encoder files.
void SaveModel(const TrainedModel& model, const std::filesystem::path& dir);
TrainedModel LoadModel(const std::filesystem::path& dir);

// FNV-1a over the raw bytes; used to assert that frozen tensors stay frozen.
std::uint64_t HashMatrix(const Matrix& m);

}  // namespace degnn

#endif  // DEGNN_PIPELINE_H_
