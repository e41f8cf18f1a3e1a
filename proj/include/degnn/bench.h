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

#ifndef DEGNN_BENCH_H_
#define DEGNN_BENCH_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "degnn/metrics.h"
#include "degnn/pipeline.h"
#include "json.hpp"

namespace degnn {

// A grid of (regime x noise x hyper-parameters) cells, each run once per seed.
// Hyper-parameter lists default to the full search grid.
struct ExperimentPlan {
  std::filesystem::path dataset;
  std::string dataset_name;  // Defaults to the bundle directory name.
  std::filesystem::path out = "runs";
  std::vector<Regime> regimes = {Regime::kGcnBaseline, Regime::kDegnnI, Regime::kDegnnII};
  std::vector<double> edge_noise = {0.0};
  std::vector<double> feature_noise = {0.0};
  std::uint64_t noise_seed = 0;

  // DEGNN grid.
  std::vector<double> alpha = {0.0, 0.1, 1.0, 10.0};
  std::vector<double> beta = {0.0, 0.1, 1.0, 10.0};
  std::vector<double> k_percent = {1, 5, 10, 15, 20, 25};
  std::vector<double> aug_p = {0.2, 0.4, 0.6};
  std::vector<double> aug_q = {0.2, 0.4, 0.6};
  std::vector<int> d_prime = {128, 256, 512};
  std::vector<double> lr_pretrain = {1e-2, 5e-3, 1e-3};
  // Baseline grid.
  std::vector<int> hidden = {16, 32, 64, 128};

  // Everything not swept (schedules, DEGNN hidden width, expert toggles).
  TrainConfig base;

  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  int workers = 1;
  // Split sizes.
  int per_class = 20;
  int n_val = 500;
  int n_test = 1000;
};

nlohmann::json ToJson(const ExperimentPlan& plan);
// Missing keys keep their defaults.
ExperimentPlan PlanFromJson(const nlohmann::json& j);
// seeds = base, base + 1, ..., base + count - 1.
std::vector<std::uint64_t> SeedRange(std::uint64_t base, int count);

struct Cell {
  Regime regime = Regime::kGcnBaseline;
  NoiseSpec noise;
  TrainConfig config;  // seed filled in per run
  std::string key;     // Stable directory name for the cell.
};

std::vector<Cell> EnumerateCells(const ExperimentPlan& plan);
std::filesystem::path ReportPath(const std::filesystem::path& out, const Cell& cell,
                                 std::uint64_t seed);

struct RunSummary {
  int completed = 0;
  int skipped = 0;  // Reports that already existed.
  int failed = 0;
};

// Runs every missing (cell, seed) report under plan.out/reports, then writes
// the aggregate via ReportDirectory. Failed runs are counted, never fatal.
RunSummary RunPlan(const ExperimentPlan& plan);

struct CellAggregate {
  std::string regime;
  std::string cell;
  double edge_noise = 0.0;
  double feature_noise = 0.0;
  nlohmann::json config;
  std::vector<std::uint64_t> seeds;
  std::vector<double> test;
  std::vector<double> val;
  double test_mean = 0.0;
  double test_std = 0.0;  // NaN with a single run.
  double val_mean = 0.0;
};

struct ReportOutput {
  std::vector<CellAggregate> cells;
  // Per regime, the cell chosen by mean validation accuracy on the cleanest
  // noise setting available.
  std::vector<CellAggregate> best;
  std::vector<Series> edge_noise_curves;
  std::vector<Series> feature_noise_curves;
};

// Aggregates every RunReport under dir (recursively). Throws kNoReports.
ReportOutput AggregateReports(const std::filesystem::path& dir);
// Writes table.md, cells.csv, summary.json, curves_edge_noise.{csv,dat} and
// curves_feature_noise.{csv,dat} into out.
ReportOutput ReportDirectory(const std::filesystem::path& dir, const std::filesystem::path& out);

std::string MarkdownTable(const ReportOutput& report);

}  // namespace degnn

#endif  // DEGNN_BENCH_H_
