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

#include "degnn/pipeline.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

#include "degnn/adam.h"
#include "degnn/checkpoint.h"
#include "degnn/error.h"
#include "degnn/rng.h"

namespace degnn {
namespace fs = std::filesystem;
namespace {

Matrix Glorot(int rows, int cols, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Matrix w(rows, cols);
  for (Eigen::Index k = 0; k < w.size(); ++k) w.data()[k] = limit * (2.0 * rng.uniform() - 1.0);
  return w;
}

std::vector<int> LabelsOf(const Dataset& ds, const std::vector<NodeId>& rows) {
  std::vector<int> out;
  out.reserve(rows.size());
  for (NodeId r : rows) out.push_back(ds.labels[r]);
  return out;
}

std::uint64_t ExpertSeed(const TrainConfig& cfg) { return DeriveSeed(cfg.seed, "expert"); }
std::uint64_t AugSeed(const TrainConfig& cfg) { return DeriveSeed(cfg.seed, "aug"); }

PretrainOptions PretrainOptionsFor(const TrainConfig& cfg) {
  PretrainOptions o;
  o.epochs = cfg.epochs_pretrain;
  o.patience = cfg.patience_pretrain;
  o.lr = cfg.lr_pretrain;
  o.weight_decay = cfg.weight_decay;
  o.aug = cfg.aug;
  o.aug.seed = AugSeed(cfg);
  o.weighting = cfg.weighting;
  return o;
}

void CheckSplit(const Dataset& ds, const Split& split) {
  for (const auto* list : {&split.train, &split.val, &split.test}) {
    for (NodeId r : *list) {
      if (r < 0 || r >= ds.num_nodes()) {
        throw Error(ErrorCode::kInvalidArgument, "split references node " + std::to_string(r));
      }
    }
  }
  if (split.train.empty()) throw Error(ErrorCode::kInvalidArgument, "empty training split");
}

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

nlohmann::json OptionalSeries(const std::vector<std::optional<double>>& xs) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& x : xs) out.push_back(x ? nlohmann::json(*x) : nlohmann::json(nullptr));
  return out;
}

std::vector<std::optional<double>> ParseOptionalSeries(const nlohmann::json& j) {
  std::vector<std::optional<double>> out;
  for (const auto& x : j) {
    out.push_back(x.is_null() ? std::nullopt : std::optional<double>(x.get<double>()));
  }
  return out;
}

struct EarlyStopper {
  int patience;
  double best = -1.0;
  int best_epoch = -1;
  int since_best = 0;

  // True when this epoch is a new best.
  bool Observe(int epoch, double val) {
    if (val > best) {
      best = val;
      best_epoch = epoch;
      since_best = 0;
      return true;
    }
    ++since_best;
    return false;
  }
  bool Exhausted() const { return since_best >= patience; }
};

}  // namespace

std::string RegimeName(Regime regime) {
  switch (regime) {
    case Regime::kGcnBaseline: return "gcn";
    case Regime::kDegnnI: return "degnn1";
    case Regime::kDegnnII: return "degnn2";
  }
  return "gcn";
}

Regime ParseRegime(const std::string& name) {
  if (name == "gcn" || name == "gcn_baseline") return Regime::kGcnBaseline;
  if (name == "degnn1" || name == "degnn_i") return Regime::kDegnnI;
  if (name == "degnn2" || name == "degnn_ii") return Regime::kDegnnII;
  throw Error(ErrorCode::kInvalidArgument, "unknown regime '" + name + "'");
}

nlohmann::json ToJson(const TrainConfig& cfg) {
  return {
      {"regime", RegimeName(cfg.regime)},
      {"alpha", cfg.alpha},
      {"beta", cfg.beta},
      {"k_percent", cfg.k_percent},
      {"aug_p", cfg.aug.p},
      {"aug_q", cfg.aug.q},
      {"d_prime", cfg.d_prime},
      {"hidden", cfg.hidden},
      {"lr_main", cfg.lr_main},
      {"lr_pretrain", cfg.lr_pretrain},
      {"weight_decay", cfg.weight_decay},
      {"epochs_pretrain", cfg.epochs_pretrain},
      {"patience_pretrain", cfg.patience_pretrain},
      {"epochs_main", cfg.epochs_main},
      {"patience", cfg.patience},
      {"seed", cfg.seed},
      {"node_expert", cfg.experts.node},
      {"edge_expert", cfg.experts.edge},
      {"identity_passthrough", cfg.experts.identity_passthrough},
      {"negative_weighting",
       cfg.weighting == NegativeWeighting::kPerView ? "per_view" : "per_node"},
  };
}

TrainConfig TrainConfigFromJson(const nlohmann::json& j) {
  TrainConfig cfg;
  try {
    if (j.contains("regime")) cfg.regime = ParseRegime(j.at("regime").get<std::string>());
    cfg.alpha = j.value("alpha", cfg.alpha);
    cfg.beta = j.value("beta", cfg.beta);
    cfg.k_percent = j.value("k_percent", cfg.k_percent);
    cfg.aug.p = j.value("aug_p", cfg.aug.p);
    cfg.aug.q = j.value("aug_q", cfg.aug.q);
    cfg.d_prime = j.value("d_prime", cfg.d_prime);
    cfg.hidden = j.value("hidden", cfg.hidden);
    cfg.lr_main = j.value("lr_main", cfg.lr_main);
    cfg.lr_pretrain = j.value("lr_pretrain", cfg.lr_pretrain);
    cfg.weight_decay = j.value("weight_decay", cfg.weight_decay);
    cfg.epochs_pretrain = j.value("epochs_pretrain", cfg.epochs_pretrain);
    cfg.patience_pretrain = j.value("patience_pretrain", cfg.patience_pretrain);
    cfg.epochs_main = j.value("epochs_main", cfg.epochs_main);
    cfg.patience = j.value("patience", cfg.patience);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.experts.node = j.value("node_expert", cfg.experts.node);
    cfg.experts.edge = j.value("edge_expert", cfg.experts.edge);
    cfg.experts.identity_passthrough =
        j.value("identity_passthrough", cfg.experts.identity_passthrough);
    const std::string weighting = j.value("negative_weighting", std::string("per_view"));
    if (weighting == "per_view") {
      cfg.weighting = NegativeWeighting::kPerView;
    } else if (weighting == "per_node") {
      cfg.weighting = NegativeWeighting::kPerNode;
    } else {
      throw Error(ErrorCode::kInvalidArgument, "unknown negative_weighting '" + weighting + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("config: ") + e.what());
  }
  return cfg;
}

DownstreamParams DownstreamParams::Clone() const {
  return {ad::Parameter(w1.value()), ad::Parameter(w2.value())};
}

DownstreamParams InitDownstream(int in_dim, int hidden, int num_classes, std::uint64_t seed) {
  Rng rng(seed);
  Matrix w1 = Glorot(in_dim, hidden, rng);
  Matrix w2 = Glorot(hidden, num_classes, rng);
  return {ad::Parameter(std::move(w1)), ad::Parameter(std::move(w2))};
}

Propagator Propagator::Fixed(const Graph& g) {
  return Fixed(std::make_shared<const NormalizedAdjacency>(SymNormalize(g)));
}

Propagator Propagator::Fixed(std::shared_ptr<const NormalizedAdjacency> adj) {
  Propagator p;
  p.fixed = std::move(adj);
  return p;
}

Propagator Propagator::Weighted(const DifferentiableAdjacency& adj) {
  Propagator p;
  p.pattern = adj.pattern;
  p.weights = adj.weights;
  return p;
}

ad::Var Propagator::Apply(const ad::Var& x) const {
  if (fixed) return ad::Spmm(fixed, x);
  return ad::NormalizedPropagate(pattern, weights, x);
}

ad::Var DownstreamForward(const DownstreamParams& theta, const ad::Var& h, const Propagator& s) {
  if (h.cols() != theta.w1.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "downstream: embeddings have " + std::to_string(h.cols()) +
                    " columns, first layer expects " + std::to_string(theta.w1.rows()));
  }
  const ad::Var hidden = ad::Relu(s.Apply(ad::MatMul(h, theta.w1)));
  return s.Apply(ad::MatMul(hidden, theta.w2));
}

double Accuracy(const Matrix& logits, const std::vector<int>& labels,
                const std::vector<NodeId>& rows) {
  if (rows.empty()) return 0.0;
  std::size_t correct = 0;
  for (NodeId r : rows) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < logits.cols(); ++c) {
      if (logits(r, c) > logits(r, best)) best = c;
    }
    if (best == labels[r]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(rows.size());
}

double Evaluate(const DownstreamParams& theta, const Matrix& h, const Propagator& s,
                const std::vector<int>& labels, const std::vector<NodeId>& rows) {
  return Accuracy(DownstreamForward(theta, ad::Constant(h), s).value(), labels, rows);
}

nlohmann::json ToJson(const RunReport& r) {
  return {
      {"config", ToJson(r.config)},
      {"dataset", r.dataset},
      {"cell", r.cell},
      {"edge_noise", r.noise.edge_ratio},
      {"feature_noise", r.noise.lambda},
      {"noise_seed", r.noise.seed},
      {"seed", r.seed},
      {"test_accuracy", r.test_accuracy},
      {"best_val_accuracy", r.best_val_accuracy},
      {"best_epoch", r.best_epoch},
      {"val_accuracy", r.val_accuracy},
      {"loss_gnn", r.loss_gnn},
      {"loss_node", OptionalSeries(r.loss_node)},
      {"loss_edge", OptionalSeries(r.loss_edge)},
      {"pretrain_loss_node", r.pretrain_loss_node},
      {"pretrain_loss_edge", r.pretrain_loss_edge},
      {"wall_seconds", r.wall_seconds},
      {"precision", "float64"},
  };
}

RunReport RunReportFromJson(const nlohmann::json& j) {
  RunReport r;
  try {
    r.config = TrainConfigFromJson(j.at("config"));
    r.dataset = j.at("dataset").get<std::string>();
    r.cell = j.value("cell", std::string());
    r.noise.edge_ratio = j.value("edge_noise", 0.0);
    r.noise.lambda = j.value("feature_noise", 0.0);
    r.noise.seed = j.value("noise_seed", std::uint64_t{0});
    r.seed = j.at("seed").get<std::uint64_t>();
    r.test_accuracy = j.at("test_accuracy").get<double>();
    r.best_val_accuracy = j.at("best_val_accuracy").get<double>();
    r.best_epoch = j.at("best_epoch").get<int>();
    r.val_accuracy = j.at("val_accuracy").get<std::vector<double>>();
    r.loss_gnn = j.at("loss_gnn").get<std::vector<double>>();
    r.loss_node = ParseOptionalSeries(j.at("loss_node"));
    r.loss_edge = ParseOptionalSeries(j.at("loss_edge"));
    r.pretrain_loss_node = j.value("pretrain_loss_node", std::vector<double>{});
    r.pretrain_loss_edge = j.value("pretrain_loss_edge", std::vector<double>{});
    r.wall_seconds = j.value("wall_seconds", 0.0);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kUnrecognizedFormat, std::string("run report: ") + e.what());
  }
  return r;
}

void SaveRunReport(const RunReport& report, const fs::path& file) {
  if (!file.parent_path().empty()) fs::create_directories(file.parent_path());
  WriteFileAtomic(file, ToJson(report).dump(2) + "\n");
}

RunReport LoadRunReport(const fs::path& file) { return RunReportFromJson(ReadJsonFile(file)); }

Matrix NodeProjection(int in_dim, int out_dim, std::uint64_t seed) {
  Rng rng(DeriveSeed(seed, "projection"));
  return Glorot(in_dim, out_dim, rng);
}

std::uint64_t HashMatrix(const Matrix& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto* bytes = reinterpret_cast<const unsigned char*>(m.data());
  for (std::size_t k = 0; k < static_cast<std::size_t>(m.size()) * sizeof(double); ++k) {
    h ^= bytes[k];
    h *= 0x100000001b3ULL;
  }
  return h;
}

TrainOutcome TrainDownstreamFixed(const Dataset& ds, const Split& split, const TrainConfig& cfg,
                                  const Matrix& h, const Propagator& s) {
  CheckSplit(ds, split);
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t h_hash = HashMatrix(h);
  auto hash_s = [&s] {
    return s.fixed ? HashMatrix(Eigen::Map<const Matrix>(
                         s.fixed->values.data(), static_cast<Eigen::Index>(s.fixed->values.size()), 1))
                   : HashMatrix(s.weights.value());
  };
  const std::uint64_t s_hash = hash_s();

  TrainOutcome out;
  out.model.config = cfg;
  out.model.theta =
      InitDownstream(static_cast<int>(h.cols()), cfg.hidden, ds.num_classes,
                     DeriveSeed(cfg.seed, "theta"));
  DownstreamParams& theta = out.model.theta;
  Adam optimizer(theta.Vars(), {.lr = cfg.lr_main, .weight_decay = cfg.weight_decay});
  const ad::Var x = ad::Constant(h);
  const std::vector<int> train_labels = LabelsOf(ds, split.train);

  RunReport& report = out.report;
  EarlyStopper stopper{cfg.patience};
  DownstreamParams best = theta.Clone();
  for (int epoch = 0; epoch < cfg.epochs_main; ++epoch) {
    const ad::Var logits = DownstreamForward(theta, x, s);
    const ad::Var loss = ad::SoftmaxCrossEntropy(logits, split.train, train_labels);
    report.loss_gnn.push_back(loss.scalar());
    report.loss_node.push_back(std::nullopt);
    report.loss_edge.push_back(std::nullopt);
    const double val = Accuracy(logits.value(), ds.labels, split.val);
    report.val_accuracy.push_back(val);
    if (stopper.Observe(epoch, val)) {
      best = theta.Clone();
      report.test_accuracy = Accuracy(logits.value(), ds.labels, split.test);
    } else if (stopper.Exhausted()) {
      break;
    }
    optimizer.ZeroGrad();
    ad::Backward(loss);
    optimizer.Step();
  }
  if (HashMatrix(x.value()) != h_hash || hash_s() != s_hash) {
    throw std::logic_error("frozen downstream inputs changed during training");
  }
  theta = best;
  report.config = cfg;
  report.seed = cfg.seed;
  report.best_val_accuracy = stopper.best;
  report.best_epoch = stopper.best_epoch;
  report.wall_seconds = Seconds(start);
  return out;
}

TrainOutcome TrainGcnBaseline(const Dataset& ds, const Split& split, const TrainConfig& cfg) {
  TrainConfig c = cfg;
  c.regime = Regime::kGcnBaseline;
  return TrainDownstreamFixed(ds, split, c, ToCompute(ds.features), Propagator::Fixed(ds.graph));
}

DownstreamInputs ComputeInputs(const TrainedModel& model, const Dataset& ds) {
  const TrainConfig& cfg = model.config;
  DownstreamInputs in;
  const Matrix x = ToCompute(ds.features);
  if (cfg.regime == Regime::kGcnBaseline) {
    in.h = x;
    in.s = Propagator::Fixed(ds.graph);
    return in;
  }
  if (model.node) {
    in.h = EncodeValue(*model.node, x, ds.graph);
  } else if (cfg.experts.identity_passthrough) {
    in.h = x;
  } else {
    in.h = x * NodeProjection(ds.num_features(), cfg.d_prime, cfg.seed);
  }
  if (model.edge) {
    in.modified = Reconstruct(ds.graph, EncodeValue(*model.edge, x, ds.graph), cfg.k_percent);
    in.s = Propagator::Fixed(
        std::make_shared<const NormalizedAdjacency>(WeightedNormalizeForDownstream(*in.modified)));
  } else {
    in.s = Propagator::Fixed(ds.graph);
  }
  return in;
}

double EvaluateModel(const TrainedModel& model, const Dataset& ds,
                     const std::vector<NodeId>& rows) {
  const DownstreamInputs in = ComputeInputs(model, ds);
  return Evaluate(model.theta, in.h, in.s, ds.labels, rows);
}

namespace {

struct PretrainedExperts {
  std::optional<EncoderParams> node;
  std::optional<EncoderParams> edge;
  std::vector<double> node_losses;
  std::vector<double> edge_losses;
};

PretrainedExperts PretrainEnabled(const Dataset& ds, const TrainConfig& cfg) {
  PretrainedExperts out;
  const PretrainOptions options = PretrainOptionsFor(cfg);
  if (cfg.experts.node) {
    PretrainResult r = PretrainExpert(
        InitEncoder(ds.num_features(), cfg.d_prime, ExpertTag::kNode, ExpertSeed(cfg)), ds,
        options);
    out.node = std::move(r.params);
    out.node_losses = std::move(r.losses);
  }
  if (cfg.experts.edge) {
    PretrainResult r = PretrainExpert(
        InitEncoder(ds.num_features(), cfg.d_prime, ExpertTag::kEdge, ExpertSeed(cfg)), ds,
        options);
    out.edge = std::move(r.params);
    out.edge_losses = std::move(r.losses);
  }
  return out;
}

}  // namespace

TrainOutcome TrainDegnnII(const Dataset& ds, const Split& split, const TrainConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  TrainConfig c = cfg;
  c.regime = Regime::kDegnnII;
  PretrainedExperts experts = PretrainEnabled(ds, c);
  TrainedModel frozen{c, {}, experts.node, experts.edge};
  std::vector<std::uint64_t> expert_hashes;
  for (const auto* e : {&experts.node, &experts.edge}) {
    if (*e) expert_hashes.push_back(HashMatrix((*e)->weight.value()));
  }
  const DownstreamInputs in = ComputeInputs(frozen, ds);
  TrainOutcome out = TrainDownstreamFixed(ds, split, c, in.h, in.s);
  std::size_t k = 0;
  for (const auto* e : {&experts.node, &experts.edge}) {
    if (*e && HashMatrix((*e)->weight.value()) != expert_hashes[k++]) {
      throw std::logic_error("frozen expert changed during downstream training");
    }
  }
  out.model.node = std::move(experts.node);
  out.model.edge = std::move(experts.edge);
  out.report.pretrain_loss_node = std::move(experts.node_losses);
  out.report.pretrain_loss_edge = std::move(experts.edge_losses);
  out.report.wall_seconds = Seconds(start);
  return out;
}

TrainOutcome TrainDegnnI(const Dataset& ds, const Split& split, const TrainConfig& cfg) {
  CheckSplit(ds, split);
  const auto start = std::chrono::steady_clock::now();
  TrainConfig c = cfg;
  c.regime = Regime::kDegnnI;
  PretrainedExperts experts = PretrainEnabled(ds, c);

  TrainOutcome out;
  out.model.config = c;
  out.model.node = experts.node;
  out.model.edge = experts.edge;
  RunReport& report = out.report;
  report.pretrain_loss_node = std::move(experts.node_losses);
  report.pretrain_loss_edge = std::move(experts.edge_losses);

  const Matrix x_value = ToCompute(ds.features);
  const ad::Var x = ad::Constant(x_value);
  auto a_norm = std::make_shared<const NormalizedAdjacency>(SymNormalize(ds.graph));

  ad::Var passthrough;
  if (!c.experts.node) {
    passthrough = ad::Constant(c.experts.identity_passthrough
                                   ? x_value
                                   : Matrix(x_value * NodeProjection(ds.num_features(),
                                                                     c.d_prime, c.seed)));
  }
  const int in_dim = c.experts.node || !c.experts.identity_passthrough
                         ? c.d_prime
                         : ds.num_features();
  out.model.theta = InitDownstream(in_dim, c.hidden, ds.num_classes, DeriveSeed(c.seed, "theta"));

  std::vector<ad::Var> vars = out.model.theta.Vars();
  if (out.model.node) for (const auto& v : out.model.node->Vars()) vars.push_back(v);
  if (out.model.edge) for (const auto& v : out.model.edge->Vars()) vars.push_back(v);
  Adam optimizer(vars, {.lr = c.lr_main, .weight_decay = c.weight_decay});

  const bool node_loss = out.model.node && c.alpha != 0.0;
  const bool edge_loss = out.model.edge && c.beta != 0.0;
  const std::vector<int> train_labels = LabelsOf(ds, split.train);
  const std::uint64_t aug_seed = AugSeed(c);

  EarlyStopper stopper{c.patience};
  TrainedModel best = out.model;
  best.theta = out.model.theta.Clone();
  for (int epoch = 0; epoch < c.epochs_main; ++epoch) {
    std::optional<PreparedViews> views;
    if (node_loss || edge_loss) {
      AugConfig aug = c.aug;
      aug.seed = DeriveSeed(aug_seed, "finetune-views", static_cast<std::uint64_t>(epoch));
      views = PrepareViews(ds.graph, ds.features, x, a_norm, aug);
    }

    ad::Var h = passthrough;
    ad::Var l_node;
    if (out.model.node) {
      if (node_loss) {
        ExpertForward f = ExpertLoss(*out.model.node, *views, c.weighting);
        h = f.h;
        l_node = f.loss;
      } else {
        h = Encode(*out.model.node, x, a_norm);
      }
    }

    Propagator s = Propagator::Fixed(a_norm);
    ad::Var l_edge;
    if (out.model.edge) {
      ad::Var h_edge;
      if (edge_loss) {
        ExpertForward f = ExpertLoss(*out.model.edge, *views, c.weighting);
        h_edge = f.h;
        l_edge = f.loss;
      } else {
        h_edge = Encode(*out.model.edge, x, a_norm);
      }
      const ModifiedAdjacency mod = Reconstruct(ds.graph, h_edge.value(), c.k_percent);
      if (mod.num_rewired() > 0) s = Propagator::Weighted(MakeDifferentiableAdjacency(mod, h_edge));
    }

    const ad::Var logits = DownstreamForward(out.model.theta, h, s);
    const ad::Var l_gnn = ad::SoftmaxCrossEntropy(logits, split.train, train_labels);
    ad::Var total = l_gnn;
    if (l_node.defined()) total = ad::Add(total, ad::Scale(l_node, c.alpha));
    if (l_edge.defined()) total = ad::Add(total, ad::Scale(l_edge, c.beta));

    report.loss_gnn.push_back(l_gnn.scalar());
    report.loss_node.push_back(l_node.defined() ? std::optional(l_node.scalar()) : std::nullopt);
    report.loss_edge.push_back(l_edge.defined() ? std::optional(l_edge.scalar()) : std::nullopt);
    const double val = Accuracy(logits.value(), ds.labels, split.val);
    report.val_accuracy.push_back(val);
    if (stopper.Observe(epoch, val)) {
      best.theta = out.model.theta.Clone();
      if (out.model.node) best.node = out.model.node->Clone();
      if (out.model.edge) best.edge = out.model.edge->Clone();
      report.test_accuracy = Accuracy(logits.value(), ds.labels, split.test);
    } else if (stopper.Exhausted()) {
      break;
    }
    optimizer.ZeroGrad();
    ad::Backward(total);
    optimizer.Step();
  }
  out.model = std::move(best);
  report.config = c;
  report.seed = c.seed;
  report.best_val_accuracy = stopper.best;
  report.best_epoch = stopper.best_epoch;
  report.wall_seconds = Seconds(start);
  return out;
}

TrainOutcome Train(const Dataset& ds, const Split& split, const TrainConfig& cfg) {
  switch (cfg.regime) {
    case Regime::kGcnBaseline: return TrainGcnBaseline(ds, split, cfg);
    case Regime::kDegnnI: return TrainDegnnI(ds, split, cfg);
    case Regime::kDegnnII: return TrainDegnnII(ds, split, cfg);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown regime");
}

void SaveModel(const TrainedModel& model, const fs::path& dir) {
  fs::create_directories(dir);
  WriteFileAtomic(dir / "config.json", ToJson(model.config).dump(2) + "\n");
  WriteMatrixF32(dir / "theta_w1.bin", model.theta.w1.value());
  WriteMatrixF32(dir / "theta_w2.bin", model.theta.w2.value());
  nlohmann::json meta = {
      {"w1_shape", {model.theta.w1.rows(), model.theta.w1.cols()}},
      {"w2_shape", {model.theta.w2.rows(), model.theta.w2.cols()}},
      {"seed", model.config.seed},
  };
  WriteFileAtomic(dir / "theta.json", meta.dump(2) + "\n");
  if (model.node) SaveEncoder(*model.node, dir / "node", model.config.seed, model.config.epochs_pretrain);
  if (model.edge) SaveEncoder(*model.edge, dir / "edge", model.config.seed, model.config.epochs_pretrain);
}

TrainedModel LoadModel(const fs::path& dir) {
  TrainedModel model;
  model.config = TrainConfigFromJson(ReadJsonFile(dir / "config.json"));
  const nlohmann::json meta = ReadJsonFile(dir / "theta.json");
  try {
    const auto& s1 = meta.at("w1_shape");
    const auto& s2 = meta.at("w2_shape");
    model.theta.w1 = ad::Parameter(ReadMatrixF32(dir / "theta_w1.bin", s1.at(0), s1.at(1)));
    model.theta.w2 = ad::Parameter(ReadMatrixF32(dir / "theta_w2.bin", s2.at(0), s2.at(1)));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kUnrecognizedFormat, std::string("theta.json: ") + e.what());
  }
  if (model.config.regime != Regime::kGcnBaseline) {
    if (model.config.experts.node) model.node = LoadEncoder(dir / "node");
    if (model.config.experts.edge) model.edge = LoadEncoder(dir / "edge");
  }
  return model;
}

}  // namespace degnn
