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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "degnn/bench.h"
#include "degnn/checkpoint.h"
#include "degnn/dataset.h"
#include "degnn/error.h"
#include "degnn/experts.h"
#include "degnn/metrics.h"
#include "degnn/noise.h"
#include "degnn/pipeline.h"
#include "degnn/reconstruct.h"

namespace fs = std::filesystem;
using namespace degnn;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kRuntime = 3 };

// "10" means ten seeds starting at base; "3,5,8" is an explicit list.
std::vector<std::uint64_t> ParseSeeds(const std::string& text, std::uint64_t base) {
  if (text.find(',') == std::string::npos) {
    const int count = std::stoi(text);
    if (count < 1) throw Error(ErrorCode::kInvalidArgument, "--seeds needs a positive count");
    return SeedRange(base, count);
  }
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoull(item));
  return out;
}

struct ConfigFlags {
  std::string regime = "degnn1";
  std::optional<double> alpha, beta, k, aug_p, aug_q, lr_pretrain, lr;
  std::optional<int> dprime, hidden, epochs, pretrain_epochs, patience;
  bool no_node_expert = false;
  bool no_edge_expert = false;

  void Register(CLI::App* app, bool with_regime = true) {
    if (with_regime) {
      app->add_option("--regime", regime, "gcn, degnn1 or degnn2")
          ->check(CLI::IsMember({"gcn", "degnn1", "degnn2"}));
    }
    app->add_option("--alpha", alpha, "weight of the node expert loss");
    app->add_option("--beta", beta, "weight of the edge expert loss");
    app->add_option("--k", k, "percentage of edges rewired");
    app->add_option("--aug-p", aug_p, "edge rewiring probability of the views");
    app->add_option("--aug-q", aug_q, "feature shuffling probability of the views");
    app->add_option("--dprime", dprime, "expert embedding width");
    app->add_option("--hidden", hidden, "downstream hidden width");
    app->add_option("--lr", lr, "downstream learning rate");
    app->add_option("--lr-pretrain", lr_pretrain, "expert pre-training learning rate");
    app->add_option("--epochs", epochs, "maximum downstream epochs");
    app->add_option("--pretrain-epochs", pretrain_epochs, "maximum pre-training epochs");
    app->add_option("--patience", patience, "early stopping patience");
    app->add_flag("--no-node-expert", no_node_expert, "replace the node expert by a projection");
    app->add_flag("--no-edge-expert", no_edge_expert, "keep the input graph");
  }

  void Apply(TrainConfig& cfg, bool with_regime = true) const {
    if (with_regime) cfg.regime = ParseRegime(regime);
    if (alpha) cfg.alpha = *alpha;
    if (beta) cfg.beta = *beta;
    if (k) cfg.k_percent = *k;
    if (aug_p) cfg.aug.p = *aug_p;
    if (aug_q) cfg.aug.q = *aug_q;
    if (dprime) cfg.d_prime = *dprime;
    if (hidden) cfg.hidden = *hidden;
    if (lr) cfg.lr_main = *lr;
    if (lr_pretrain) cfg.lr_pretrain = *lr_pretrain;
    if (epochs) cfg.epochs_main = *epochs;
    if (pretrain_epochs) cfg.epochs_pretrain = *pretrain_epochs;
    if (patience) cfg.patience = *patience;
    if (no_node_expert) cfg.experts.node = false;
    if (no_edge_expert) cfg.experts.edge = false;
  }
};

struct SplitFlags {
  std::string split_file;
  int per_class = 20;
  int n_val = 500;
  int n_test = 1000;

  void Register(CLI::App* app) {
    app->add_option("--split", split_file, "split JSON; otherwise drawn from the seed");
    app->add_option("--per-class", per_class, "training nodes per class");
    app->add_option("--val", n_val, "validation nodes");
    app->add_option("--test", n_test, "test nodes");
  }

  Split Make(const Dataset& ds, std::uint64_t seed) const {
    if (!split_file.empty()) return LoadSplit(split_file);
    return MakeSplit(ds, seed, per_class, n_val, n_test);
  }
};

void PrintAccuracies(const std::vector<double>& accs) {
  if (accs.size() >= 2) {
    const RunStats s = AggregateRuns(accs);
    std::printf("test accuracy: %.2f ± %.2f %% over %d runs\n", 100 * s.mean, 100 * s.std, s.count);
  } else if (accs.size() == 1) {
    std::printf("test accuracy: %.2f %%\n", 100 * accs[0]);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dual-expert graph structure learning workbench"};
  app.require_subcommand(1);

  std::string dataset;
  std::string out;
  std::string seeds_text = "1";
  std::uint64_t base_seed = 0;
  double edge_noise = 0.0;
  double feature_noise = 0.0;
  std::uint64_t noise_seed = 0;

  // convert
  auto* convert = app.add_subcommand("convert", "convert a raw dataset into a bundle");
  std::string raw;
  convert->add_option("raw", raw, "raw dataset directory")->required();
  convert->add_option("--out", out, "bundle directory")->required();

  // synth
  auto* synth = app.add_subcommand("synth", "write a planted-partition toy bundle");
  PlantedPartitionOptions planted;
  synth->add_option("--nodes-per-class", planted.nodes_per_class, "nodes per class");
  synth->add_option("--classes", planted.num_classes, "number of classes");
  synth->add_option("--p-in", planted.p_in, "within-class edge probability");
  synth->add_option("--p-out", planted.p_out, "cross-class edge probability");
  synth->add_option("--features", planted.num_features, "feature dimension");
  synth->add_option("--seed", planted.seed, "seed");
  synth->add_option("--out", out, "bundle directory")->required();

  // noise
  auto* noise = app.add_subcommand("noise", "inject poisoning noise into a bundle");
  noise->add_option("--dataset", dataset, "input bundle")->required();
  noise->add_option("--edge-noise", edge_noise, "fraction of edges replaced");
  noise->add_option("--feature-noise", feature_noise, "feature noise ratio");
  noise->add_option("--seed", noise_seed, "noise seed");
  noise->add_option("--out", out, "output bundle")->required();

  // pretrain
  auto* pretrain = app.add_subcommand("pretrain", "pre-train one expert contrastively");
  std::string expert = "node";
  ConfigFlags pretrain_flags;
  pretrain->add_option("--dataset", dataset, "bundle")->required();
  pretrain->add_option("--expert", expert, "node or edge")->check(CLI::IsMember({"node", "edge"}));
  pretrain->add_option("--seed", base_seed, "seed");
  pretrain->add_option("--out", out, "checkpoint stem (writes <stem>.bin and <stem>.json)")
      ->required();
  pretrain_flags.Register(pretrain, false);

  // train
  auto* train = app.add_subcommand("train", "train one configuration over one or more seeds");
  ConfigFlags train_flags;
  SplitFlags train_split;
  train->add_option("--dataset", dataset, "bundle")->required();
  train->add_option("--edge-noise", edge_noise, "fraction of edges replaced before training");
  train->add_option("--feature-noise", feature_noise, "feature noise ratio before training");
  train->add_option("--noise-seed", noise_seed, "noise seed");
  train->add_option("--seeds", seeds_text, "seed count or comma-separated list");
  train->add_option("--base-seed", base_seed, "first seed when --seeds is a count");
  train->add_option("--out", out, "output directory for reports and checkpoints");
  train_flags.Register(train);
  train_split.Register(train);

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate a saved model");
  std::string model_dir;
  SplitFlags eval_split;
  std::uint64_t eval_seed = 0;
  eval->add_option("--model", model_dir, "model directory written by train")->required();
  eval->add_option("--dataset", dataset, "bundle")->required();
  eval->add_option("--seed", eval_seed, "split seed when --split is absent");
  eval_split.Register(eval);

  // run
  auto* run = app.add_subcommand("run", "run an experiment grid (resumable)");
  std::string plan_file;
  std::vector<std::string> regimes;
  std::vector<double> edge_grid, feature_grid, alpha_grid, beta_grid, k_grid, p_grid, q_grid;
  std::vector<int> dprime_grid, hidden_grid;
  std::optional<std::string> run_seeds;
  std::optional<int> workers;
  std::optional<int> run_epochs, run_pretrain_epochs;
  run->add_option("--plan", plan_file, "plan JSON");
  run->add_option("--dataset", dataset, "bundle");
  run->add_option("--regime", regimes, "models to run")->delimiter(',');
  run->add_option("--edge-noise", edge_grid, "edge noise ratios")->delimiter(',');
  run->add_option("--feature-noise", feature_grid, "feature noise ratios")->delimiter(',');
  run->add_option("--alpha", alpha_grid, "alpha grid")->delimiter(',');
  run->add_option("--beta", beta_grid, "beta grid")->delimiter(',');
  run->add_option("--k", k_grid, "k grid")->delimiter(',');
  run->add_option("--aug-p", p_grid, "p grid")->delimiter(',');
  run->add_option("--aug-q", q_grid, "q grid")->delimiter(',');
  run->add_option("--dprime", dprime_grid, "D' grid")->delimiter(',');
  run->add_option("--hidden", hidden_grid, "baseline hidden grid")->delimiter(',');
  run->add_option("--seeds", run_seeds, "seed count or comma-separated list");
  run->add_option("--base-seed", base_seed, "first seed when --seeds is a count");
  run->add_option("--workers", workers, "parallel worker processes");
  run->add_option("--epochs", run_epochs, "maximum downstream epochs");
  run->add_option("--pretrain-epochs", run_pretrain_epochs, "maximum pre-training epochs");
  std::optional<int> run_per_class, run_val, run_test;
  run->add_option("--per-class", run_per_class, "training nodes per class");
  run->add_option("--val", run_val, "validation nodes");
  run->add_option("--test", run_test, "test nodes");
  run->add_option("--out", out, "output directory");

  // report
  auto* report = app.add_subcommand("report", "aggregate run reports into tables and curves");
  std::string reports_dir;
  report->add_option("reports", reports_dir, "directory containing run reports")->required();
  report->add_option("--out", out, "output directory (defaults to the reports directory)");

  // homophily
  auto* homophily = app.add_subcommand("homophily", "homophily of noisy vs. rewired graphs");
  std::string expert_stem;
  std::vector<double> ratios = {0.0, 0.05, 0.1, 0.15};
  double k_percent = 10.0;
  homophily->add_option("--dataset", dataset, "bundle")->required();
  homophily->add_option("--expert", expert_stem, "edge expert checkpoint stem")->required();
  homophily->add_option("--edge-noise", ratios, "edge noise ratios")->delimiter(',');
  homophily->add_option("--k", k_percent, "percentage of edges rewired");
  homophily->add_option("--seed", noise_seed, "noise seed");
  homophily->add_option("--out", out, "CSV output (stdout when absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (convert->parsed()) {
      const Dataset ds = ConvertRaw(raw);
      SaveBundle(ds, out);
      std::printf("wrote %s: %d nodes, %lld edges, %d features, %d classes\n", out.c_str(),
                  ds.num_nodes(), static_cast<long long>(ds.graph.num_edges()),
                  ds.num_features(), ds.num_classes);
    } else if (synth->parsed()) {
      const Dataset ds = MakePlantedPartition(planted);
      SaveBundle(ds, out);
      std::printf("wrote %s: %d nodes, %lld edges\n", out.c_str(), ds.num_nodes(),
                  static_cast<long long>(ds.graph.num_edges()));
    } else if (noise->parsed()) {
      const NoiseSpec spec{edge_noise, feature_noise, noise_seed};
      const Dataset noisy = ApplyNoise(LoadBundle(dataset), spec);
      SaveBundle(noisy, out);
      const nlohmann::json provenance = {{"source", fs::absolute(dataset).string()},
                                         {"edge_ratio", edge_noise},
                                         {"lambda", feature_noise},
                                         {"seed", noise_seed}};
      WriteFileAtomic(fs::path(out) / "provenance.json", provenance.dump(2) + "\n");
      std::printf("wrote %s: %lld edges\n", out.c_str(),
                  static_cast<long long>(noisy.graph.num_edges()));
    } else if (pretrain->parsed()) {
      const Dataset ds = LoadBundle(dataset);
      TrainConfig cfg;
      pretrain_flags.Apply(cfg, false);
      PretrainOptions options;
      options.epochs = cfg.epochs_pretrain;
      options.lr = cfg.lr_pretrain;
      options.weight_decay = cfg.weight_decay;
      options.aug = cfg.aug;
      options.aug.seed = DeriveSeed(base_seed, "aug");
      const ExpertTag tag = ParseExpertTag(expert);
      const PretrainResult result = PretrainExpert(
          InitEncoder(ds.num_features(), cfg.d_prime, tag, DeriveSeed(base_seed, "expert")), ds,
          options);
      SaveEncoder(result.params, out, base_seed, static_cast<int>(result.losses.size()));
      std::printf("%s expert: %zu epochs, best loss %.6f at epoch %d\n", expert.c_str(),
                  result.losses.size(), result.best_loss, result.best_epoch);
    } else if (train->parsed()) {
      Dataset ds = LoadBundle(dataset);
      const NoiseSpec spec{edge_noise, feature_noise, noise_seed};
      if (edge_noise != 0.0 || feature_noise != 0.0) ds = ApplyNoise(ds, spec);
      std::vector<double> accs;
      for (std::uint64_t seed : ParseSeeds(seeds_text, base_seed)) {
        TrainConfig cfg;
        train_flags.Apply(cfg);
        cfg.seed = seed;
        TrainOutcome outcome = Train(ds, train_split.Make(ds, seed), cfg);
        outcome.report.dataset = fs::path(dataset).lexically_normal().filename().string();
        outcome.report.noise = spec;
        std::printf("seed %llu: test %.4f (best val %.4f at epoch %d, %.1fs)\n",
                    static_cast<unsigned long long>(seed), outcome.report.test_accuracy,
                    outcome.report.best_val_accuracy, outcome.report.best_epoch,
                    outcome.report.wall_seconds);
        accs.push_back(outcome.report.test_accuracy);
        if (!out.empty()) {
          const fs::path dir = fs::path(out) / ("seed_" + std::to_string(seed));
          SaveModel(outcome.model, dir / "model");
          SaveRunReport(outcome.report, fs::path(out) / ("seed_" + std::to_string(seed) + ".json"));
        }
      }
      PrintAccuracies(accs);
    } else if (eval->parsed()) {
      const Dataset ds = LoadBundle(dataset);
      const TrainedModel model = LoadModel(model_dir);
      const Split split = eval_split.Make(ds, eval_split.split_file.empty() ? eval_seed : 0);
      std::printf("val accuracy: %.4f\ntest accuracy: %.4f\n", EvaluateModel(model, ds, split.val),
                  EvaluateModel(model, ds, split.test));
    } else if (run->parsed()) {
      ExperimentPlan plan = plan_file.empty() ? PlanFromJson(nlohmann::json::object())
                                              : PlanFromJson(ReadJsonFile(plan_file));
      if (!dataset.empty()) {
        plan.dataset = dataset;
        plan.dataset_name = fs::path(dataset).lexically_normal().filename().string();
      }
      if (!out.empty()) plan.out = out;
      if (!regimes.empty()) {
        plan.regimes.clear();
        for (const auto& r : regimes) plan.regimes.push_back(ParseRegime(r));
      }
      if (!edge_grid.empty()) plan.edge_noise = edge_grid;
      if (!feature_grid.empty()) plan.feature_noise = feature_grid;
      if (!alpha_grid.empty()) plan.alpha = alpha_grid;
      if (!beta_grid.empty()) plan.beta = beta_grid;
      if (!k_grid.empty()) plan.k_percent = k_grid;
      if (!p_grid.empty()) plan.aug_p = p_grid;
      if (!q_grid.empty()) plan.aug_q = q_grid;
      if (!dprime_grid.empty()) plan.d_prime = dprime_grid;
      if (!hidden_grid.empty()) plan.hidden = hidden_grid;
      if (run_seeds) plan.seeds = ParseSeeds(*run_seeds, base_seed);
      if (workers) plan.workers = *workers;
      if (run_epochs) plan.base.epochs_main = *run_epochs;
      if (run_pretrain_epochs) plan.base.epochs_pretrain = *run_pretrain_epochs;
      if (run_per_class) plan.per_class = *run_per_class;
      if (run_val) plan.n_val = *run_val;
      if (run_test) plan.n_test = *run_test;
      if (plan.dataset.empty()) throw Error(ErrorCode::kInvalidArgument, "run needs --dataset");
      const RunSummary summary = RunPlan(plan);
      std::printf("completed %d, skipped %d, failed %d\n", summary.completed, summary.skipped,
                  summary.failed);
      if (summary.failed > 0) return kRuntime;
    } else if (report->parsed()) {
      const ReportOutput result = ReportDirectory(reports_dir, out.empty() ? reports_dir : out);
      std::cout << MarkdownTable(result);
    } else if (homophily->parsed()) {
      const Dataset ds = LoadBundle(dataset);
      const auto records = HomophilySweep(ds, ratios, LoadEncoder(expert_stem), k_percent, noise_seed);
      if (out.empty()) {
        WriteHomophilyCsv(std::cout, records);
      } else {
        std::ofstream file(out);
        WriteHomophilyCsv(file, records);
        if (!file) throw Error(ErrorCode::kIoError, "cannot write " + out);
      }
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return IsDataError(e.code()) ? kData : kRuntime;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kRuntime;
  }
  return kOk;
}
