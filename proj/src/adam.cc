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

#include "degnn/adam.h"

#include <cmath>

#include "degnn/error.h"

namespace degnn {

void AdamStep(AdamState& state, std::span<Matrix* const> params,
              std::span<const Matrix* const> grads) {
  if (params.size() != grads.size()) {
    throw Error(ErrorCode::kShapeMismatch, "adam: parameter and gradient counts differ");
  }
  if (state.m.empty()) {
    for (const Matrix* p : params) {
      state.m.push_back(Matrix::Zero(p->rows(), p->cols()));
      state.v.push_back(Matrix::Zero(p->rows(), p->cols()));
    }
  }
  if (state.m.size() != params.size()) {
    throw Error(ErrorCode::kShapeMismatch, "adam: state was built for other parameters");
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    if (params[k]->rows() != grads[k]->rows() || params[k]->cols() != grads[k]->cols() ||
        params[k]->rows() != state.m[k].rows() || params[k]->cols() != state.m[k].cols()) {
      throw Error(ErrorCode::kShapeMismatch,
                  "adam: shape mismatch for parameter " + std::to_string(k));
    }
  }
  const AdamOptions& o = state.options;
  ++state.t;
  const double correction1 = 1.0 - std::pow(o.beta1, static_cast<double>(state.t));
  const double correction2 = 1.0 - std::pow(o.beta2, static_cast<double>(state.t));
  for (std::size_t k = 0; k < params.size(); ++k) {
    Matrix& theta = *params[k];
    Matrix& m = state.m[k];
    Matrix& v = state.v[k];
    const Matrix& grad = *grads[k];
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
      const double g = grad.data()[i] + o.weight_decay * theta.data()[i];
      m.data()[i] = o.beta1 * m.data()[i] + (1.0 - o.beta1) * g;
      v.data()[i] = o.beta2 * v.data()[i] + (1.0 - o.beta2) * g * g;
      const double m_hat = m.data()[i] / correction1;
      const double v_hat = v.data()[i] / correction2;
      theta.data()[i] -= o.lr * m_hat / (std::sqrt(v_hat) + o.eps);
    }
  }
}

Adam::Adam(std::vector<ad::Var> params, AdamOptions options)
    : params_(std::move(params)) {
  state_.options = options;
}

void Adam::ZeroGrad() { ad::ZeroGrad(params_); }

void Adam::Step() {
  std::vector<Matrix*> values;
  std::vector<const Matrix*> grads;
  std::vector<Matrix> zeros;
  zeros.reserve(params_.size());
  for (ad::Var& p : params_) {
    values.push_back(&p.mutable_value());
    if (p.grad().rows() == p.rows() && p.grad().cols() == p.cols()) {
      grads.push_back(&p.grad());
    } else {
      zeros.push_back(Matrix::Zero(p.rows(), p.cols()));
      grads.push_back(&zeros.back());
    }
  }
  AdamStep(state_, values, grads);
}

}  // namespace degnn
