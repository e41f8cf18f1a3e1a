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

#ifndef DEGNN_TESTS_TEST_UTIL_H_
#define DEGNN_TESTS_TEST_UTIL_H_

#include <unistd.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "degnn/dataset.h"
#include "degnn/graph.h"
#include "degnn/matrix.h"

namespace degnn::testing {

// Erdos-Renyi graph from std::mt19937, independent of the library RNG.
inline Graph RandomGraph(int n, double p, std::uint32_t seed) {
  std::mt19937 gen(seed);
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j)
      if (coin(gen)) edges.push_back({i, j, 1.0});
  return Graph::FromEdges(n, edges);
}

inline Matrix RandomMatrix(int rows, int cols, std::uint32_t seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> normal;
  Matrix m(rows, cols);
  for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = normal(gen);
  return m;
}

inline Matrix DenseAdjacency(const Graph& g) {
  Matrix a = Matrix::Zero(g.num_nodes(), g.num_nodes());
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    auto nb = g.neighbors(i);
    auto w = g.neighbor_weights(i);
    for (std::size_t k = 0; k < nb.size(); ++k) a(i, nb[k]) = w[k];
  }
  return a;
}

// D^-1/2 (A + I) D^-1/2 by dense arithmetic.
inline Matrix DenseNormalized(const Graph& g) {
  const Matrix a = DenseAdjacency(g) + Matrix::Identity(g.num_nodes(), g.num_nodes());
  Eigen::VectorXd d = a.rowwise().sum();
  Matrix out(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) / std::sqrt(d(i) * d(j));
  return out;
}

inline double MaxRelError(const Matrix& a, const Matrix& b) {
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("degnn_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace degnn::testing

#endif  // DEGNN_TESTS_TEST_UTIL_H_
