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

#include "degnn/metrics.h"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "degnn/error.h"
#include "degnn/noise.h"
#include "degnn/reconstruct.h"

namespace degnn {
namespace {

void CheckLabels(const Graph& g, const std::vector<int>& labels) {
  if (static_cast<int>(labels.size()) != g.num_nodes()) {
    throw Error(ErrorCode::kLengthMismatch, "homophily: " + std::to_string(labels.size()) +
                                                " labels for " + std::to_string(g.num_nodes()) +
                                                " nodes");
  }
}

// Shortest text that reads back to the same double.
std::string Format(double v) { return nlohmann::json(v).dump(); }

}  // namespace

double EdgeHomophily(const Graph& g, const std::vector<int>& labels) {
  CheckLabels(g, labels);
  std::int64_t same = 0;
  std::int64_t total = 0;
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    for (NodeId v : g.neighbors(u)) {
      if (v <= u) continue;
      ++total;
      if (labels[u] == labels[v]) ++same;
    }
  }
  if (total == 0) throw Error(ErrorCode::kEmptyGraph, "edge homophily of a graph without edges");
  return static_cast<double>(same) / static_cast<double>(total);
}

double NodeHomophily(const Graph& g, const std::vector<int>& labels) {
  CheckLabels(g, labels);
  double sum = 0.0;
  int counted = 0;
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    auto nb = g.neighbors(u);
    if (nb.empty()) continue;
    int same = 0;
    for (NodeId v : nb) same += labels[u] == labels[v];
    sum += static_cast<double>(same) / static_cast<double>(nb.size());
    ++counted;
  }
  if (counted == 0) throw Error(ErrorCode::kEmptyGraph, "node homophily with every node isolated");
  return sum / counted;
}

RunStats AggregateRuns(const std::vector<double>& values) {
  if (values.size() < 2) {
    throw Error(ErrorCode::kTooFewRuns,
                "need at least 2 runs for a spread, got " + std::to_string(values.size()));
  }
  RunStats s;
  s.count = static_cast<int>(values.size());
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi) {
    // Summation would leave a rounding residue in both moments.
    s.mean = *lo;
    return s;
  }
  for (double v : values) s.mean += v;
  s.mean /= s.count;
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(ss / (s.count - 1));
  return s;
}

std::vector<HomophilyRecord> HomophilySweep(const Dataset& ds, const std::vector<double>& ratios,
                                            const EncoderParams& edge_expert, double k_percent,
                                            std::uint64_t seed) {
  std::vector<HomophilyRecord> out;
  for (double ratio : ratios) {
    const Graph noisy = InjectEdgeNoise(ds.graph, ratio, seed);
    const Matrix h = EncodeValue(edge_expert, ToCompute(ds.features), noisy);
    const ModifiedAdjacency mod = Reconstruct(noisy, h, k_percent);
    out.push_back({ratio, "noisy", EdgeHomophily(noisy, ds.labels), NodeHomophily(noisy, ds.labels)});
    out.push_back(
        {ratio, "refined", EdgeHomophily(mod.s, ds.labels), NodeHomophily(mod.s, ds.labels)});
  }
  return out;
}

void WriteHomophilyCsv(std::ostream& out, const std::vector<HomophilyRecord>& records) {
  out << "noise_ratio,graph,edge_homophily,node_homophily\n";
  for (const auto& r : records) {
    out << Format(r.noise_ratio) << ',' << r.graph_tag << ',' << Format(r.edge_homophily) << ','
        << Format(r.node_homophily) << '\n';
  }
}

nlohmann::json HomophilyJson(const std::vector<HomophilyRecord>& records) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : records) {
    out.push_back({{"noise_ratio", r.noise_ratio},
                   {"graph", r.graph_tag},
                   {"edge_homophily", r.edge_homophily},
                   {"node_homophily", r.node_homophily}});
  }
  return out;
}

void WriteGnuplotData(std::ostream& out, const std::vector<Series>& series) {
  for (std::size_t s = 0; s < series.size(); ++s) {
    const Series& ser = series[s];
    if (s > 0) out << "\n\n";
    out << "# " << ser.name << '\n';
    out << (ser.err.empty() ? "# x y\n" : "# x y err\n");
    for (std::size_t k = 0; k < ser.x.size(); ++k) {
      out << Format(ser.x[k]) << ' ' << Format(ser.y[k]);
      if (!ser.err.empty()) out << ' ' << Format(ser.err[k]);
      out << '\n';
    }
  }
}

}  // namespace degnn
