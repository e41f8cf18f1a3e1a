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

#include "degnn/rng.h"

#include <cmath>
#include <limits>
#include <numbers>

#include "degnn/error.h"

namespace degnn {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "Rng::below(0)");
  // Rejection on the top of the range keeps the result unbiased.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform_open_zero();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t DeriveSeed(std::uint64_t base, std::string_view stream,
                         std::uint64_t index) {
  // FNV-1a over the stream name, then mix with base and index.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : stream) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return SplitMix64(SplitMix64(base ^ h) + index);
}

std::vector<std::uint64_t> SampleBernoulliIndices(std::uint64_t n, double p,
                                                  Rng& rng) {
  std::vector<std::uint64_t> out;
  if (n == 0 || p <= 0.0) return out;
  if (p >= 1.0) {
    out.resize(n);
    for (std::uint64_t i = 0; i < n; ++i) out[i] = i;
    return out;
  }
  if (p > 0.25) {
    // Dense regime: a direct coin per index is cheaper than logarithms.
    for (std::uint64_t i = 0; i < n; ++i) {
      if (rng.bernoulli(p)) out.push_back(i);
    }
    return out;
  }
  out.reserve(static_cast<std::size_t>(static_cast<double>(n) * p * 1.1) + 8);
  const double log_q = std::log1p(-p);
  double pos = -1.0;
  while (true) {
    // Gap to the next success is geometric with parameter p.
    const double gap = std::floor(std::log(rng.uniform_open_zero()) / log_q);
    pos += gap + 1.0;
    if (pos >= static_cast<double>(n)) break;
    out.push_back(static_cast<std::uint64_t>(pos));
  }
  return out;
}

}  // namespace degnn
