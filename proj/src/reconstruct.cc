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

#include "degnn/reconstruct.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <queue>
#include <tuple>

#include "degnn/error.h"

namespace degnn {
namespace {

struct Scored {
  double cos;
  NodeId u;
  NodeId v;
};

bool Less(const Scored& a, const Scored& b) {
  return std::tie(a.cos, a.u, a.v) < std::tie(b.cos, b.u, b.v);
}

MaskMatrix MaskOf(int n, const std::vector<Edge>& pairs) {
  MaskMatrix mask{n, {}};
  mask.pairs.reserve(pairs.size());
  for (const Edge& e : pairs) mask.pairs.push_back(UpperPairIndex(e.u, e.v, n));
  std::sort(mask.pairs.begin(), mask.pairs.end());
  return mask;
}

std::vector<double> Norms(const Matrix& h) {
  std::vector<double> norms(static_cast<std::size_t>(h.rows()));
  for (Eigen::Index i = 0; i < h.rows(); ++i) norms[i] = ad::RowNorm(h, static_cast<NodeId>(i));
  return norms;
}

double CosineAt(const Matrix& h, const std::vector<double>& norms, NodeId u, NodeId v) {
  for (NodeId i : {u, v}) {
    if (norms[i] == 0.0) {
      throw Error(ErrorCode::kZeroNormRow, "embedding row " + std::to_string(i) + " is zero");
    }
  }
  return ad::RowInner(h, u, v) / (norms[u] * norms[v]);
}

}  // namespace

std::int64_t RewireCount(std::int64_t num_edges, double k_percent) {
  const double product = k_percent * static_cast<double>(num_edges);
  auto m = static_cast<std::int64_t>(std::floor(product / 100.0));
  if (static_cast<double>(m + 1) * 100.0 <= product) ++m;
  if (m > 0 && static_cast<double>(m) * 100.0 > product) --m;
  return m;
}

std::vector<double> PairCosines(const Matrix& h, const std::vector<Edge>& pairs) {
  const std::vector<double> norms = Norms(h);
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const Edge& e : pairs) out.push_back(CosineAt(h, norms, e.u, e.v));
  return out;
}

ModifiedAdjacency Reconstruct(const Graph& a, const Matrix& h_prime, double k_percent) {
  if (!(k_percent >= 0.0 && k_percent <= 100.0)) {
    throw Error(ErrorCode::kInvalidArgument, "k must lie in [0, 100]");
  }
  const int n = a.num_nodes();
  if (h_prime.rows() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "embeddings have " + std::to_string(h_prime.rows()) + " rows for " +
                    std::to_string(n) + " nodes");
  }
  const std::vector<Edge> edges = a.UndirectedEdges();
  const auto num_edges = static_cast<std::int64_t>(edges.size());
  const std::int64_t m = RewireCount(num_edges, k_percent);
  if (m > NumUpperPairs(n) - num_edges) {
    throw Error(ErrorCode::kNotEnoughNonEdges,
                std::to_string(m) + " additions requested, " +
                    std::to_string(NumUpperPairs(n) - num_edges) + " non-edges available");
  }

  ModifiedAdjacency mod;
  mod.k_percent = k_percent;
  if (m == 0) {
    for (const Edge& e : edges) mod.kept.push_back({e.u, e.v, 1.0});
    mod.s = Graph::FromEdges(n, mod.kept);
    mod.s_tilde = mod.s;
    mod.m1 = MaskOf(n, mod.kept);
    mod.m2 = {n, {}};
    return mod;
  }

  const std::vector<double> norms = Norms(h_prime);

  std::vector<Scored> existing;
  existing.reserve(edges.size());
  for (const Edge& e : edges) existing.push_back({CosineAt(h_prime, norms, e.u, e.v), e.u, e.v});
  std::sort(existing.begin(), existing.end(), Less);
  for (std::int64_t r = 0; r < num_edges; ++r) {
    const Scored& s = existing[r];
    if (r < m) {
      mod.deleted.push_back({s.u, s.v, s.cos});
    } else {
      mod.kept.push_back({s.u, s.v, 1.0});
    }
  }

  // Min-heap of the m best non-edges seen so far; top() is the weakest.
  auto worse = [](const Scored& x, const Scored& y) { return Less(y, x); };
  std::priority_queue<Scored, std::vector<Scored>, decltype(worse)> best(worse);
  for (NodeId u = 0; u < n; ++u) {
    auto nb = a.neighbors(u);
    auto it = std::upper_bound(nb.begin(), nb.end(), u);
    for (NodeId v = u + 1; v < n; ++v) {
      if (it != nb.end() && *it == v) {
        ++it;
        continue;
      }
      const Scored cand{CosineAt(h_prime, norms, u, v), u, v};
      if (static_cast<std::int64_t>(best.size()) < m) {
        best.push(cand);
      } else if (Less(best.top(), cand)) {
        best.pop();
        best.push(cand);
      }
    }
  }
  while (!best.empty()) {
    const Scored& s = best.top();
    mod.added.push_back({s.u, s.v, s.cos});
    best.pop();
  }

  auto by_pair = [](const Edge& x, const Edge& y) { return std::tie(x.u, x.v) < std::tie(y.u, y.v); };
  std::sort(mod.kept.begin(), mod.kept.end(), by_pair);
  std::sort(mod.deleted.begin(), mod.deleted.end(), by_pair);
  std::sort(mod.added.begin(), mod.added.end(), by_pair);
  for (const Edge& e : mod.added) mod.b_selected.push_back(e.weight);

  mod.s_tilde = Graph::FromEdges(n, mod.kept);
  std::vector<Edge> all = mod.kept;
  all.insert(all.end(), mod.added.begin(), mod.added.end());
  mod.s = Graph::FromEdges(n, all);
  mod.m1 = MaskOf(n, mod.kept);
  mod.m2 = MaskOf(n, mod.added);
  return mod;
}

NormalizedAdjacency WeightedNormalizeForDownstream(const ModifiedAdjacency& mod) {
  return SymNormalize(mod.s);
}

DifferentiableAdjacency MakeDifferentiableAdjacency(const ModifiedAdjacency& mod,
                                                    const ad::Var& h_prime) {
  std::vector<Edge> pairs = mod.kept;
  pairs.insert(pairs.end(), mod.added.begin(), mod.added.end());
  DifferentiableAdjacency out;
  out.pattern = ad::MakePropagationPattern(mod.s.num_nodes(), std::move(pairs));
  const ad::Var ones =
      ad::Constant(Matrix::Ones(static_cast<Eigen::Index>(mod.kept.size()), 1));
  if (mod.added.empty()) {
    out.weights = ones;
    return out;
  }
  const ad::Var cos = ad::PairCosine(h_prime, mod.added);
  out.weights = mod.kept.empty() ? cos : ad::ConcatRows(ones, cos);
  return out;
}

void WriteRewireTsv(std::ostream& out, const ModifiedAdjacency& mod) {
  out << "kind\tu\tv\tcosine\n";
  char buf[64];
  auto write = [&](const char* kind, const std::vector<Edge>& list) {
    for (const Edge& e : list) {
      std::snprintf(buf, sizeof(buf), "%.17g", e.weight);
      out << kind << '\t' << e.u << '\t' << e.v << '\t' << buf << '\n';
    }
  };
  write("deleted", mod.deleted);
  write("added", mod.added);
}

}  // namespace degnn
