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

#include "degnn/bench.h"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <tuple>

#include "degnn/checkpoint.h"
#include "degnn/error.h"
#include "degnn/noise.h"

namespace degnn {
namespace fs = std::filesystem;
namespace {

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::string NoiseTag(const NoiseSpec& n) {
  return "en" + Num(n.edge_ratio) + "_fn" + Num(n.lambda);
}

template <typename T>
void ReadList(const nlohmann::json& j, const char* key, std::vector<T>& out) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  out = v.is_array() ? v.get<std::vector<T>>() : std::vector<T>{v.get<T>()};
}

std::string HyperId(nlohmann::json config) {
  config.erase("seed");
  return config.dump();
}

struct Job {
  std::size_t cell;
  std::uint64_t seed;
};

class DatasetCache {
 public:
  explicit DatasetCache(const ExperimentPlan& plan) : plan_(plan), clean_(LoadBundle(plan.dataset)) {}

  const Dataset& Get(const NoiseSpec& noise) {
    if (noise.edge_ratio == 0.0 && noise.lambda == 0.0) return clean_;
    const std::string tag = NoiseTag(noise);
    auto it = noisy_.find(tag);
    if (it != noisy_.end()) return it->second;
    const fs::path dir = plan_.out / "noisy" / tag;
    Dataset ds;
    if (IsBundle(dir) && fs::exists(dir / "provenance.json") &&
        ReadJsonFile(dir / "provenance.json") == Provenance(noise)) {
      ds = LoadBundle(dir);
    } else {
      ds = ApplyNoise(clean_, noise);
      SaveBundle(ds, dir);
      WriteFileAtomic(dir / "provenance.json", Provenance(noise).dump(2) + "\n");
    }
    return noisy_.emplace(tag, std::move(ds)).first->second;
  }

 private:
  nlohmann::json Provenance(const NoiseSpec& noise) const {
    return {{"source", fs::absolute(plan_.dataset).lexically_normal().string()},
            {"edge_ratio", noise.edge_ratio},
            {"lambda", noise.lambda},
            {"seed", noise.seed}};
  }

  const ExperimentPlan& plan_;
  Dataset clean_;
  std::map<std::string, Dataset> noisy_;
};

void RunJob(const ExperimentPlan& plan, const Cell& cell, std::uint64_t seed, DatasetCache& cache) {
  const Dataset& ds = cache.Get(cell.noise);
  const Split split = MakeSplit(ds, seed, plan.per_class, plan.n_val, plan.n_test);
  TrainConfig cfg = cell.config;
  cfg.seed = seed;
  TrainOutcome outcome = Train(ds, split, cfg);
  outcome.report.dataset = plan.dataset_name;
  outcome.report.cell = cell.key;
  outcome.report.noise = cell.noise;
  SaveRunReport(outcome.report, ReportPath(plan.out, cell, seed));
}

// Shortest text that reads back to the same double.
std::string Csv(double v) {
  if (std::isnan(v)) return "";
  return nlohmann::json(v).dump();
}

std::string Percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", 100.0 * v);
  return buf;
}

}  // namespace

std::vector<std::uint64_t> SeedRange(std::uint64_t base, int count) {
  std::vector<std::uint64_t> out;
  for (int i = 0; i < count; ++i) out.push_back(base + static_cast<std::uint64_t>(i));
  return out;
}

nlohmann::json ToJson(const ExperimentPlan& p) {
  nlohmann::json regimes = nlohmann::json::array();
  for (Regime r : p.regimes) regimes.push_back(RegimeName(r));
  return {
      {"dataset", p.dataset.string()},
      {"dataset_name", p.dataset_name},
      {"out", p.out.string()},
      {"regimes", regimes},
      {"edge_noise", p.edge_noise},
      {"feature_noise", p.feature_noise},
      {"noise_seed", p.noise_seed},
      {"alpha", p.alpha},
      {"beta", p.beta},
      {"k_percent", p.k_percent},
      {"aug_p", p.aug_p},
      {"aug_q", p.aug_q},
      {"d_prime", p.d_prime},
      {"lr_pretrain", p.lr_pretrain},
      {"hidden", p.hidden},
      {"base", ToJson(p.base)},
      {"seeds", p.seeds},
      {"workers", p.workers},
      {"per_class", p.per_class},
      {"n_val", p.n_val},
      {"n_test", p.n_test},
  };
}

ExperimentPlan PlanFromJson(const nlohmann::json& j) {
  ExperimentPlan p;
  try {
    if (j.contains("dataset")) p.dataset = j.at("dataset").get<std::string>();
    p.dataset_name = j.value("dataset_name", p.dataset_name);
    if (j.contains("out")) p.out = j.at("out").get<std::string>();
    if (j.contains("regimes")) {
      std::vector<std::string> names;
      ReadList(j, "regimes", names);
      p.regimes.clear();
      for (const auto& n : names) p.regimes.push_back(ParseRegime(n));
    }
    ReadList(j, "edge_noise", p.edge_noise);
    ReadList(j, "feature_noise", p.feature_noise);
    p.noise_seed = j.value("noise_seed", p.noise_seed);
    ReadList(j, "alpha", p.alpha);
    ReadList(j, "beta", p.beta);
    ReadList(j, "k_percent", p.k_percent);
    ReadList(j, "aug_p", p.aug_p);
    ReadList(j, "aug_q", p.aug_q);
    ReadList(j, "d_prime", p.d_prime);
    ReadList(j, "lr_pretrain", p.lr_pretrain);
    ReadList(j, "hidden", p.hidden);
    if (j.contains("base")) p.base = TrainConfigFromJson(j.at("base"));
    if (j.contains("seeds")) {
      const auto& s = j.at("seeds");
      p.seeds = s.is_array() ? s.get<std::vector<std::uint64_t>>()
                             : SeedRange(j.value("base_seed", std::uint64_t{0}), s.get<int>());
    }
    p.workers = j.value("workers", p.workers);
    p.per_class = j.value("per_class", p.per_class);
    p.n_val = j.value("n_val", p.n_val);
    p.n_test = j.value("n_test", p.n_test);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("plan: ") + e.what());
  }
  if (p.dataset_name.empty() && !p.dataset.empty()) {
    p.dataset_name = p.dataset.lexically_normal().filename().string();
    if (p.dataset_name.empty()) p.dataset_name = p.dataset.lexically_normal().parent_path().filename().string();
  }
  return p;
}

std::vector<Cell> EnumerateCells(const ExperimentPlan& plan) {
  std::vector<Cell> cells;
  for (Regime regime : plan.regimes) {
    for (double en : plan.edge_noise) {
      for (double fn : plan.feature_noise) {
        const NoiseSpec noise{en, fn, plan.noise_seed};
        auto add = [&](TrainConfig cfg, std::string hyper) {
          cfg.regime = regime;
          cells.push_back({regime, noise, cfg, NoiseTag(noise) + "_" + hyper});
        };
        if (regime == Regime::kGcnBaseline) {
          for (int h : plan.hidden) {
            TrainConfig cfg = plan.base;
            cfg.hidden = h;
            add(cfg, "h" + std::to_string(h));
          }
          continue;
        }
        for (double a : plan.alpha)
          for (double b : plan.beta)
            for (double k : plan.k_percent)
              for (double p : plan.aug_p)
                for (double q : plan.aug_q)
                  for (int d : plan.d_prime)
                    for (double lr : plan.lr_pretrain) {
                      TrainConfig cfg = plan.base;
                      cfg.alpha = a;
                      cfg.beta = b;
                      cfg.k_percent = k;
                      cfg.aug.p = p;
                      cfg.aug.q = q;
                      cfg.d_prime = d;
                      cfg.lr_pretrain = lr;
                      add(cfg, "a" + Num(a) + "_b" + Num(b) + "_k" + Num(k) + "_p" + Num(p) +
                                   "_q" + Num(q) + "_d" + std::to_string(d) + "_lr" + Num(lr));
                    }
      }
    }
  }
  return cells;
}

fs::path ReportPath(const fs::path& out, const Cell& cell, std::uint64_t seed) {
  return out / "reports" / RegimeName(cell.regime) / cell.key /
         ("seed_" + std::to_string(seed) + ".json");
}

RunSummary RunPlan(const ExperimentPlan& plan) {
  if (!IsBundle(plan.dataset)) {
    throw Error(ErrorCode::kMissingFile, "no dataset bundle at " + plan.dataset.string());
  }
  fs::create_directories(plan.out);
  WriteFileAtomic(plan.out / "plan.json", ToJson(plan).dump(2) + "\n");

  const std::vector<Cell> cells = EnumerateCells(plan);
  RunSummary summary;
  std::vector<Job> jobs;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (std::uint64_t seed : plan.seeds) {
      if (fs::exists(ReportPath(plan.out, cells[c], seed))) {
        ++summary.skipped;
      } else {
        jobs.push_back({c, seed});
      }
    }
  }

  DatasetCache cache(plan);
  // Materialize noisy bundles up front so forked workers share them.
  for (const Job& job : jobs) cache.Get(cells[job.cell].noise);

  if (plan.workers <= 1) {
    for (const Job& job : jobs) {
      try {
        RunJob(plan, cells[job.cell], job.seed, cache);
        ++summary.completed;
      } catch (const std::exception& e) {
        std::fprintf(stderr, "run %s seed %llu failed: %s\n", cells[job.cell].key.c_str(),
                     static_cast<unsigned long long>(job.seed), e.what());
        ++summary.failed;
      }
    }
  } else {
    std::size_t next = 0;
    int active = 0;
    while (next < jobs.size() || active > 0) {
      while (active < plan.workers && next < jobs.size()) {
        const Job job = jobs[next++];
        std::fflush(nullptr);
        const pid_t pid = ::fork();
        if (pid < 0) throw Error(ErrorCode::kIoError, "fork failed");
        if (pid == 0) {
          int code = 0;
          try {
            RunJob(plan, cells[job.cell], job.seed, cache);
          } catch (const std::exception& e) {
            std::fprintf(stderr, "run %s seed %llu failed: %s\n", cells[job.cell].key.c_str(),
                         static_cast<unsigned long long>(job.seed), e.what());
            code = 1;
          }
          std::fflush(nullptr);
          ::_exit(code);
        }
        ++active;
      }
      int status = 0;
      if (::waitpid(-1, &status, 0) > 0) {
        --active;
        if (WIFEXITED(status) && WEXITSTATUS(status) == 0) {
          ++summary.completed;
        } else {
          ++summary.failed;
        }
      }
    }
  }
  if (summary.completed + summary.skipped > 0) ReportDirectory(plan.out / "reports", plan.out);
  return summary;
}

ReportOutput AggregateReports(const fs::path& dir) {
  std::map<std::pair<std::string, std::string>, CellAggregate> groups;
  if (fs::is_directory(dir)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
      const std::string name = entry.path().filename().string();
      if (entry.is_regular_file() && name.rfind("seed_", 0) == 0 &&
          entry.path().extension() == ".json") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& file : files) {
      const RunReport r = LoadRunReport(file);
      const nlohmann::json config = ToJson(r.config);
      const std::string regime = RegimeName(r.config.regime);
      const std::string cell = r.cell.empty() ? NoiseTag(r.noise) + "_" + HyperId(config) : r.cell;
      CellAggregate& agg = groups[{regime, cell}];
      if (agg.seeds.empty()) {
        agg.regime = regime;
        agg.cell = cell;
        agg.edge_noise = r.noise.edge_ratio;
        agg.feature_noise = r.noise.lambda;
        agg.config = config;
        agg.config.erase("seed");
      }
      agg.seeds.push_back(r.seed);
      agg.test.push_back(r.test_accuracy);
      agg.val.push_back(r.best_val_accuracy);
    }
  }
  if (groups.empty()) throw Error(ErrorCode::kNoReports, "no run reports under " + dir.string());

  ReportOutput out;
  for (auto& [key, agg] : groups) {
    if (agg.test.size() >= 2) {
      const RunStats t = AggregateRuns(agg.test);
      agg.test_mean = t.mean;
      agg.test_std = t.std;
      agg.val_mean = AggregateRuns(agg.val).mean;
    } else {
      agg.test_mean = agg.test[0];
      agg.test_std = std::numeric_limits<double>::quiet_NaN();
      agg.val_mean = agg.val[0];
    }
    out.cells.push_back(agg);
  }
  std::sort(out.cells.begin(), out.cells.end(), [](const CellAggregate& a, const CellAggregate& b) {
    return std::tie(a.regime, a.edge_noise, a.feature_noise, a.cell) <
           std::tie(b.regime, b.edge_noise, b.feature_noise, b.cell);
  });

  std::vector<std::string> regimes;
  for (const auto& c : out.cells) {
    if (std::find(regimes.begin(), regimes.end(), c.regime) == regimes.end()) {
      regimes.push_back(c.regime);
    }
  }
  for (const std::string& regime : regimes) {
    const CellAggregate* best = nullptr;
    for (const auto& c : out.cells) {
      if (c.regime != regime) continue;
      if (!best || std::tie(c.edge_noise, c.feature_noise) < std::tie(best->edge_noise, best->feature_noise) ||
          (c.edge_noise == best->edge_noise && c.feature_noise == best->feature_noise &&
           c.val_mean > best->val_mean)) {
        best = &c;
      }
    }
    out.best.push_back(*best);
    const std::string hyper = best->config.dump();
    Series edge{regime, {}, {}, {}};
    Series feature{regime, {}, {}, {}};
    for (const auto& c : out.cells) {
      if (c.regime != regime || c.config.dump() != hyper) continue;
      const double err = std::isnan(c.test_std) ? 0.0 : c.test_std;
      if (c.feature_noise == best->feature_noise) {
        edge.x.push_back(c.edge_noise);
        edge.y.push_back(c.test_mean);
        edge.err.push_back(err);
      }
      if (c.edge_noise == best->edge_noise) {
        feature.x.push_back(c.feature_noise);
        feature.y.push_back(c.test_mean);
        feature.err.push_back(err);
      }
    }
    auto sort_series = [](Series& s) {
      std::vector<std::size_t> order(s.x.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](auto a, auto b) { return s.x[a] < s.x[b]; });
      Series sorted{s.name, {}, {}, {}};
      for (auto i : order) {
        sorted.x.push_back(s.x[i]);
        sorted.y.push_back(s.y[i]);
        sorted.err.push_back(s.err[i]);
      }
      s = std::move(sorted);
    };
    sort_series(edge);
    sort_series(feature);
    out.edge_noise_curves.push_back(std::move(edge));
    out.feature_noise_curves.push_back(std::move(feature));
  }
  return out;
}

std::string MarkdownTable(const ReportOutput& report) {
  std::ostringstream md;
  md << "| model | edge noise | feature noise | cell | runs | test acc (%) | val acc (%) |\n";
  md << "|---|---|---|---|---|---|---|\n";
  for (const auto& c : report.cells) {
    md << "| " << c.regime << " | " << Num(c.edge_noise) << " | " << Num(c.feature_noise) << " | "
       << c.cell << " | " << c.test.size() << " | " << Percent(c.test_mean);
    if (!std::isnan(c.test_std)) md << " ± " << Percent(c.test_std);
    md << " | " << Percent(c.val_mean) << " |\n";
  }
  md << "\nBest cell per model (selected on validation accuracy, cleanest setting):\n\n";
  md << "| model | cell | test acc (%) |\n|---|---|---|\n";
  for (const auto& c : report.best) {
    md << "| " << c.regime << " | " << c.cell << " | " << Percent(c.test_mean);
    if (!std::isnan(c.test_std)) md << " ± " << Percent(c.test_std);
    md << " |\n";
  }
  return md.str();
}

ReportOutput ReportDirectory(const fs::path& dir, const fs::path& out) {
  ReportOutput report = AggregateReports(dir);
  fs::create_directories(out);
  WriteFileAtomic(out / "table.md", MarkdownTable(report));

  std::ostringstream cells;
  cells << "model,edge_noise,feature_noise,cell,runs,test_mean,test_std,val_mean\n";
  nlohmann::json summary = {{"cells", nlohmann::json::array()}, {"best", nlohmann::json::array()}};
  auto cell_json = [](const CellAggregate& c) {
    return nlohmann::json{{"model", c.regime},
                          {"cell", c.cell},
                          {"edge_noise", c.edge_noise},
                          {"feature_noise", c.feature_noise},
                          {"config", c.config},
                          {"seeds", c.seeds},
                          {"test", c.test},
                          {"val", c.val},
                          {"test_mean", c.test_mean},
                          {"test_std", std::isnan(c.test_std) ? nlohmann::json(nullptr)
                                                              : nlohmann::json(c.test_std)},
                          {"val_mean", c.val_mean}};
  };
  for (const auto& c : report.cells) {
    cells << c.regime << ',' << Csv(c.edge_noise) << ',' << Csv(c.feature_noise) << ',' << c.cell
          << ',' << c.test.size() << ',' << Csv(c.test_mean) << ',' << Csv(c.test_std) << ','
          << Csv(c.val_mean) << '\n';
    summary["cells"].push_back(cell_json(c));
  }
  for (const auto& c : report.best) summary["best"].push_back(cell_json(c));
  WriteFileAtomic(out / "cells.csv", cells.str());
  WriteFileAtomic(out / "summary.json", summary.dump(2) + "\n");

  auto write_curves = [&](const std::vector<Series>& curves, const std::string& stem,
                          const char* axis) {
    std::ostringstream csv;
    csv << "model," << axis << ",test_mean,test_std\n";
    for (const auto& s : curves) {
      for (std::size_t k = 0; k < s.x.size(); ++k) {
        csv << s.name << ',' << Csv(s.x[k]) << ',' << Csv(s.y[k]) << ',' << Csv(s.err[k]) << '\n';
      }
    }
    WriteFileAtomic(out / (stem + ".csv"), csv.str());
    std::ostringstream dat;
    WriteGnuplotData(dat, curves);
    WriteFileAtomic(out / (stem + ".dat"), dat.str());
  };
  write_curves(report.edge_noise_curves, "curves_edge_noise", "edge_noise");
  write_curves(report.feature_noise_curves, "curves_feature_noise", "feature_noise");
  return report;
}

}  // namespace degnn
