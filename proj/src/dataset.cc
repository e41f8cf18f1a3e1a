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

#include "degnn/dataset.h"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "degnn/error.h"
#include "degnn/rng.h"
#include "json.hpp"

namespace degnn {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ifstream OpenForRead(const fs::path& file, bool binary = false) {
  if (!fs::exists(file)) {
    throw Error(ErrorCode::kMissingFile, file.string());
  }
  std::ifstream in(file, binary ? std::ios::binary : std::ios::in);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + file.string());
  return in;
}

std::ofstream OpenForWrite(const fs::path& file, bool binary = false) {
  std::ofstream out(file, binary ? std::ios::binary | std::ios::trunc
                                 : std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + file.string());
  return out;
}

void WriteFloatsLittleEndian(std::ostream& out, const FeatureMatrix& x) {
  std::vector<unsigned char> bytes(static_cast<std::size_t>(x.size()) * 4);
  const float* data = x.data();
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const auto bits = std::bit_cast<std::uint32_t>(data[k]);
    for (int b = 0; b < 4; ++b) bytes[4 * k + b] = (bits >> (8 * b)) & 0xff;
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

std::optional<std::string> ValidateDataset(const Dataset& ds) {
  if (auto violation = Validate(ds.graph)) return "graph: " + *violation;
  const int n = ds.graph.num_nodes();
  if (ds.features.rows() != n) {
    return "feature rows " + std::to_string(ds.features.rows()) + " != " +
           std::to_string(n) + " nodes";
  }
  if (static_cast<int>(ds.labels.size()) != n) {
    return "label count " + std::to_string(ds.labels.size()) + " != " +
           std::to_string(n) + " nodes";
  }
  if (!ds.names.empty() && static_cast<int>(ds.names.size()) != n) {
    return "name count does not match node count";
  }
  std::vector<int> per_class(static_cast<std::size_t>(std::max(ds.num_classes, 0)));
  for (int i = 0; i < n; ++i) {
    const int y = ds.labels[i];
    if (y < 0 || y >= ds.num_classes) {
      return "label " + std::to_string(y) + " of node " + std::to_string(i) +
             " outside [0," + std::to_string(ds.num_classes) + ")";
    }
    ++per_class[y];
  }
  for (int c = 0; c < ds.num_classes; ++c) {
    if (per_class[c] == 0) return "class " + std::to_string(c) + " is empty";
  }
  return std::nullopt;
}

bool IsBundle(const fs::path& dir) {
  return fs::exists(dir / "meta.json") && fs::exists(dir / "edges.tsv") &&
         fs::exists(dir / "features.bin") && fs::exists(dir / "labels.txt");
}

Dataset LoadBundle(const fs::path& dir) {
  for (const char* name : {"meta.json", "edges.tsv", "features.bin", "labels.txt"}) {
    if (!fs::exists(dir / name)) {
      throw Error(ErrorCode::kMissingFile, (dir / name).string());
    }
  }
  json meta;
  try {
    auto in = OpenForRead(dir / "meta.json");
    in >> meta;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kShapeMismatch, "meta.json: " + std::string(e.what()));
  }
  const long long n = meta.value("n_nodes", -1LL);
  const long long d = meta.value("n_features", -1LL);
  const long long c = meta.value("n_classes", -1LL);
  if (n < 0 || d < 0 || c < 0) {
    throw Error(ErrorCode::kShapeMismatch,
                "meta.json needs n_nodes, n_features, n_classes");
  }

  Dataset ds;
  ds.num_classes = static_cast<int>(c);
  {
    auto in = OpenForRead(dir / "edges.tsv");
    try {
      ds.graph = ReadEdgeList(in, static_cast<int>(n));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kInvalidArgument) {
        throw Error(ErrorCode::kShapeMismatch, std::string("edges.tsv: ") + e.what());
      }
      throw;
    }
  }
  {
    const auto expected = static_cast<std::uintmax_t>(n * d * 4);
    const auto actual = fs::file_size(dir / "features.bin");
    if (actual != expected) {
      throw Error(ErrorCode::kShapeMismatch,
                  "features.bin has " + std::to_string(actual) + " bytes, expected " +
                      std::to_string(expected));
    }
    auto in = OpenForRead(dir / "features.bin", /*binary=*/true);
    std::vector<unsigned char> bytes(expected);
    in.read(reinterpret_cast<char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
    if (!in) throw Error(ErrorCode::kIoError, "short read on features.bin");
    ds.features.resize(n, d);
    float* data = ds.features.data();
    for (long long k = 0; k < n * d; ++k) {
      std::uint32_t bits = 0;
      for (int b = 0; b < 4; ++b) {
        bits |= static_cast<std::uint32_t>(bytes[4 * k + b]) << (8 * b);
      }
      data[k] = std::bit_cast<float>(bits);
    }
  }
  {
    auto in = OpenForRead(dir / "labels.txt");
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream fields(line);
      long long y;
      if (!(fields >> y)) throw Error(ErrorCode::kBadLabel, "labels.txt: '" + line + "'");
      if (y < 0 || y >= c) {
        throw Error(ErrorCode::kBadLabel,
                    "label " + std::to_string(y) + " outside [0," + std::to_string(c) + ")");
      }
      ds.labels.push_back(static_cast<int>(y));
    }
    if (static_cast<long long>(ds.labels.size()) != n) {
      throw Error(ErrorCode::kShapeMismatch,
                  "labels.txt has " + std::to_string(ds.labels.size()) +
                      " entries, expected " + std::to_string(n));
    }
  }
  if (fs::exists(dir / "names.txt")) {
    auto in = OpenForRead(dir / "names.txt");
    std::string line;
    while (std::getline(in, line)) ds.names.push_back(line);
  }
  if (auto violation = ValidateDataset(ds)) {
    const bool label_problem = violation->find("class") != std::string::npos ||
                               violation->find("label") != std::string::npos;
    throw Error(label_problem ? ErrorCode::kBadLabel : ErrorCode::kShapeMismatch,
                *violation);
  }
  return ds;
}

void SaveBundle(const Dataset& ds, const fs::path& dir) {
  if (auto violation = ValidateDataset(ds)) {
    throw Error(ErrorCode::kInvalidArgument, "refusing to save: " + *violation);
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + dir.string() + ": " + ec.message());

  json meta = {{"n_nodes", ds.num_nodes()},
               {"n_features", ds.num_features()},
               {"n_classes", ds.num_classes}};
  OpenForWrite(dir / "meta.json") << meta.dump(2) << '\n';
  {
    auto out = OpenForWrite(dir / "edges.tsv");
    WriteEdgeList(out, ds.graph);
    if (!out) throw Error(ErrorCode::kIoError, "write failed: edges.tsv");
  }
  {
    auto out = OpenForWrite(dir / "features.bin", /*binary=*/true);
    WriteFloatsLittleEndian(out, ds.features);
    if (!out) throw Error(ErrorCode::kIoError, "write failed: features.bin");
  }
  {
    auto out = OpenForWrite(dir / "labels.txt");
    for (int y : ds.labels) out << y << '\n';
    if (!out) throw Error(ErrorCode::kIoError, "write failed: labels.txt");
  }
  if (!ds.names.empty()) {
    auto out = OpenForWrite(dir / "names.txt");
    for (const auto& name : ds.names) out << name << '\n';
  } else if (fs::exists(dir / "names.txt")) {
    fs::remove(dir / "names.txt");
  }
}

Split MakeSplit(const Dataset& ds, std::uint64_t seed, int per_class, int n_val,
                int n_test) {
  if (per_class < 0 || n_val < 0 || n_test < 0) {
    throw Error(ErrorCode::kInvalidArgument, "negative split size");
  }
  const int n = ds.num_nodes();
  std::vector<std::vector<NodeId>> by_class(static_cast<std::size_t>(ds.num_classes));
  for (NodeId i = 0; i < n; ++i) by_class[ds.labels[i]].push_back(i);

  Rng rng(DeriveSeed(seed, "split"));
  Split split;
  split.seed = seed;
  std::vector<char> taken(static_cast<std::size_t>(n), 0);
  for (int c = 0; c < ds.num_classes; ++c) {
    auto& members = by_class[c];
    if (static_cast<int>(members.size()) < per_class) {
      throw Error(ErrorCode::kInsufficientNodes,
                  "class " + std::to_string(c) + " has " +
                      std::to_string(members.size()) + " nodes, need " +
                      std::to_string(per_class));
    }
    rng.shuffle(members);
    for (int k = 0; k < per_class; ++k) {
      split.train.push_back(members[k]);
      taken[members[k]] = 1;
    }
  }
  std::vector<NodeId> rest;
  for (NodeId i = 0; i < n; ++i) {
    if (!taken[i]) rest.push_back(i);
  }
  if (static_cast<long long>(rest.size()) < static_cast<long long>(n_val) + n_test) {
    throw Error(ErrorCode::kInsufficientNodes,
                std::to_string(rest.size()) + " nodes left after training, need " +
                    std::to_string(n_val + n_test));
  }
  rng.shuffle(rest);
  split.val.assign(rest.begin(), rest.begin() + n_val);
  split.test.assign(rest.begin() + n_val, rest.begin() + n_val + n_test);
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.val.begin(), split.val.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

void SaveSplit(const Split& split, const fs::path& file) {
  json j = {{"train", split.train},
            {"val", split.val},
            {"test", split.test},
            {"seed", split.seed}};
  OpenForWrite(file) << j.dump() << '\n';
}

Split LoadSplit(const fs::path& file) {
  auto in = OpenForRead(file);
  json j;
  try {
    in >> j;
    Split split;
    split.train = j.at("train").get<std::vector<NodeId>>();
    split.val = j.at("val").get<std::vector<NodeId>>();
    split.test = j.at("test").get<std::vector<NodeId>>();
    split.seed = j.value("seed", std::uint64_t{0});
    return split;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kUnrecognizedFormat, file.string() + ": " + e.what());
  }
}

namespace {

Dataset ConvertLinqs(const fs::path& content_file, const fs::path& cites_file) {
  auto in = OpenForRead(content_file);
  std::vector<std::string> names;
  std::vector<std::vector<float>> rows;
  std::vector<std::string> label_names;
  std::string line;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (fields >> tok) tokens.push_back(tok);
    if (tokens.size() < 3) {
      throw Error(ErrorCode::kUnrecognizedFormat,
                  content_file.string() + ": too few columns");
    }
    if (width == 0) width = tokens.size();
    if (tokens.size() != width) {
      throw Error(ErrorCode::kUnrecognizedFormat,
                  content_file.string() + ": ragged rows");
    }
    names.push_back(tokens.front());
    label_names.push_back(tokens.back());
    std::vector<float> row;
    row.reserve(width - 2);
    for (std::size_t k = 1; k + 1 < tokens.size(); ++k) {
      char* end = nullptr;
      const float v = std::strtof(tokens[k].c_str(), &end);
      if (end == tokens[k].c_str() || *end != '\0') {
        throw Error(ErrorCode::kUnrecognizedFormat,
                    content_file.string() + ": non-numeric feature '" + tokens[k] + "'");
      }
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw Error(ErrorCode::kUnrecognizedFormat, content_file.string() + ": empty");
  }

  Dataset ds;
  const int n = static_cast<int>(rows.size());
  std::unordered_map<std::string, NodeId> index;
  for (NodeId i = 0; i < n; ++i) {
    if (!index.emplace(names[i], i).second) {
      throw Error(ErrorCode::kUnrecognizedFormat, "duplicate node id " + names[i]);
    }
  }
  std::map<std::string, int> classes;
  for (const auto& l : label_names) classes.emplace(l, 0);
  int next = 0;
  for (auto& [name, id] : classes) id = next++;

  ds.num_classes = next;
  ds.names = names;
  ds.features.resize(n, static_cast<Eigen::Index>(width - 2));
  for (NodeId i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < rows[i].size(); ++k) ds.features(i, k) = rows[i][k];
    ds.labels.push_back(classes.at(label_names[i]));
  }

  auto cites = OpenForRead(cites_file);
  std::vector<Edge> edges;
  while (std::getline(cites, line)) {
    std::istringstream fields(line);
    std::string a, b;
    if (!(fields >> a >> b)) continue;
    auto ia = index.find(a);
    auto ib = index.find(b);
    // Citations to papers outside the content file are dropped.
    if (ia == index.end() || ib == index.end() || ia->second == ib->second) continue;
    edges.push_back({ia->second, ib->second, 1.0});
  }
  ds.graph = Graph::FromEdges(n, edges);
  return ds;
}

}  // namespace

Dataset ConvertRaw(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::kUnrecognizedFormat, dir.string() + " is not a directory");
  }
  if (IsBundle(dir)) {
    try {
      return LoadBundle(dir);
    } catch (const Error& e) {
      throw Error(ErrorCode::kUnrecognizedFormat, e.what());
    }
  }
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".content") continue;
    fs::path cites = entry.path();
    cites.replace_extension(".cites");
    if (!fs::exists(cites)) continue;
    Dataset ds = ConvertLinqs(entry.path(), cites);
    if (auto violation = ValidateDataset(ds)) {
      throw Error(ErrorCode::kUnrecognizedFormat, *violation);
    }
    return ds;
  }
  throw Error(ErrorCode::kUnrecognizedFormat,
              dir.string() + ": expected a bundle or <name>.content + <name>.cites");
}

Dataset MakePlantedPartition(const PlantedPartitionOptions& o) {
  const int n = o.nodes_per_class * o.num_classes;
  Rng rng(DeriveSeed(o.seed, "planted-partition"));
  Dataset ds;
  ds.num_classes = o.num_classes;
  ds.labels.resize(n);
  for (int i = 0; i < n; ++i) ds.labels[i] = i / o.nodes_per_class;

  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      const double p = ds.labels[i] == ds.labels[j] ? o.p_in : o.p_out;
      if (rng.bernoulli(p)) edges.push_back({i, j, 1.0});
    }
  }
  ds.graph = Graph::FromEdges(n, edges);

  ds.features.resize(n, o.num_features);
  for (int i = 0; i < n; ++i) {
    for (int d = 0; d < o.num_features; ++d) {
      const double mean = (d % o.num_classes == ds.labels[i]) ? o.separation : 0.0;
      ds.features(i, d) = static_cast<float>(mean + o.feature_noise * rng.normal());
    }
  }
  return ds;
}

}  // namespace degnn
