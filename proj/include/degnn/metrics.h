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

#ifndef DEGNN_METRICS_H_
#define DEGNN_METRICS_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "degnn/dataset.h"
#include "degnn/experts.h"
#include "degnn/graph.h"
#include "json.hpp"

namespace degnn {

// Fraction of edges whose endpoints share a label. Weighted graphs count every
// stored pair regardless of weight. Throws kEmptyGraph without edges.
double EdgeHomophily(const Graph& g, const std::vector<int>& labels);
// Mean over non-isolated nodes of the same-label neighbor fraction.
// Throws kEmptyGraph when every node is isolated.
double NodeHomophily(const Graph& g, const std::vector<int>& labels);

struct RunStats {
  double mean = 0.0;
  double std = 0.0;  // Sample standard deviation.
  int count = 0;
};

// Throws kTooFewRuns for fewer than two values.
RunStats AggregateRuns(const std::vector<double>& values);

struct HomophilyRecord {
  double noise_ratio = 0.0;
  std::string graph_tag;  // "noisy" or "refined"
  double edge_homophily = 0.0;
  double node_homophily = 0.0;
};

// For each ratio: inject edge noise with seed, rewire with the edge expert at
// k percent, and record both graphs.
std::vector<HomophilyRecord> HomophilySweep(const Dataset& ds, const std::vector<double>& ratios,
                                            const EncoderParams& edge_expert, double k_percent,
                                            std::uint64_t seed);

void WriteHomophilyCsv(std::ostream& out, const std::vector<HomophilyRecord>& records);
nlohmann::json HomophilyJson(const std::vector<HomophilyRecord>& records);

// Whitespace-separated columns with a leading '#' header, one series per
// block separated by two blank lines (gnuplot "index" layout).
struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> err;  // Empty or one per point.
};
void WriteGnuplotData(std::ostream& out, const std::vector<Series>& series);

}  // namespace degnn

#endif  // DEGNN_METRICS_H_
