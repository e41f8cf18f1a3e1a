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

#ifndef DEGNN_DATASET_H_
#define DEGNN_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "degnn/graph.h"
#include "degnn/matrix.h"

namespace degnn {

struct Dataset {
  Graph graph;
  FeatureMatrix features;  // N x D, row i holds node i.
  std::vector<int> labels;
  int num_classes = 0;
  std::vector<std::string> names;  // Empty or one per node.

  int num_nodes() const { return graph.num_nodes(); }
  int num_features() const { return static_cast<int>(features.cols()); }
};

// First violated invariant (graph, shapes, labels), or nullopt.
std::optional<std::string> ValidateDataset(const Dataset& ds);

// Bundle directory: meta.json, edges.tsv, features.bin (N*D little-endian
// float32, row-major), labels.txt, optional names.txt.
Dataset LoadBundle(const std::filesystem::path& dir);
void SaveBundle(const Dataset& ds, const std::filesystem::path& dir);
bool IsBundle(const std::filesystem::path& dir);

struct Split {
  std::vector<NodeId> train;
  std::vector<NodeId> val;
  std::vector<NodeId> test;
  std::uint64_t seed = 0;
};

// per_class training nodes drawn uniformly from each class, then n_val and
// n_test drawn uniformly without replacement from the remaining nodes.
Split MakeSplit(const Dataset& ds, std::uint64_t seed, int per_class = 20,
                int n_val = 500, int n_test = 1000);

void SaveSplit(const Split& split, const std::filesystem::path& file);
Split LoadSplit(const std::filesystem::path& file);

// Converts a raw citation dataset into a Dataset. Recognized layouts:
//   * an existing bundle (validated pass-through),
//   * LINQS-style "<name>.content" + "<name>.cites" text files.
// Throws kUnrecognizedFormat otherwise.
Dataset ConvertRaw(const std::filesystem::path& dir);

struct PlantedPartitionOptions {
  int nodes_per_class = 20;
  int num_classes = 2;
  double p_in = 0.3;
  double p_out = 0.02;
  int num_features = 4;
  double separation = 2.0;  // Distance of each class mean from the origin.
  double feature_noise = 0.5;
  std::uint64_t seed = 0;
};

// Stochastic block model graph with Gaussian class-conditional features.
// Node i belongs to class i / nodes_per_class.
Dataset MakePlantedPartition(const PlantedPartitionOptions& options);

}  // namespace degnn

#endif  // DEGNN_DATASET_H_
