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

#ifndef DEGNN_TESTS_GRADCHECK_H_
#define DEGNN_TESTS_GRADCHECK_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "degnn/autograd.h"

namespace degnn::testing {

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string where;
  int entries = 0;
};

// Central differences on every entry of every parameter, compared with the
// reverse-mode gradient. The error is |analytic - numeric| divided by
// max(|analytic|, |numeric|, floor).
inline GradCheckResult GradCheck(std::vector<ad::Var> params,
                                 const std::function<ad::Var()>& loss_fn, double h = 1e-5,
                                 double floor = 1e-4) {
  for (ad::Var& p : params) p.mutable_grad() = Matrix();
  ad::Backward(loss_fn());
  std::vector<Matrix> analytic;
  for (const ad::Var& p : params) {
    analytic.push_back(p.grad().size() == p.size() ? p.grad() : Matrix::Zero(p.rows(), p.cols()));
  }
  GradCheckResult result;
  for (std::size_t k = 0; k < params.size(); ++k) {
    Matrix& value = params[k].mutable_value();
    for (Eigen::Index e = 0; e < value.size(); ++e) {
      const double saved = value.data()[e];
      value.data()[e] = saved + h;
      const double up = loss_fn().scalar();
      value.data()[e] = saved - h;
      const double down = loss_fn().scalar();
      value.data()[e] = saved;
      const double numeric = (up - down) / (2 * h);
      const double a = analytic[k].data()[e];
      const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), floor});
      ++result.entries;
      if (rel > result.max_rel_error) {
        result.max_rel_error = rel;
        result.where = "param " + std::to_string(k) + " entry " + std::to_string(e) +
                       ": analytic " + std::to_string(a) + " numeric " + std::to_string(numeric);
      }
    }
  }
  return result;
}

// Projects a matrix output to a scalar with fixed random weights so every
// entry of the output carries a distinct gradient.
inline ad::Var Project(const ad::Var& out, const Matrix& weights) {
  return ad::Sum(ad::Hadamard(out, ad::Constant(weights)));
}

}  // namespace degnn::testing

#endif  // DEGNN_TESTS_GRADCHECK_H_
