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

#ifndef DEGNN_ADAM_H_
#define DEGNN_ADAM_H_

#include <cstdint>
#include <span>
#include <vector>

#include "degnn/autograd.h"
#include "degnn/matrix.h"

namespace degnn {

struct AdamOptions {
  double lr = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  // Classic L2: weight_decay * theta is added to the gradient before the
  // moment updates.
  double weight_decay = 5e-4;
};

struct AdamState {
  AdamOptions options;
  std::vector<Matrix> m;
  std::vector<Matrix> v;
  std::int64_t t = 0;
};

// One bias-corrected Adam step over all parameters. Moments are created on
// the first call. Throws kShapeMismatch when shapes disagree.
void AdamStep(AdamState& state, std::span<Matrix* const> params,
              std::span<const Matrix* const> grads);

// Adam over engine parameters; gradients are read from the Vars.
class Adam {
 public:
  Adam(std::vector<ad::Var> params, AdamOptions options);

  void ZeroGrad();
  void Step();

  const AdamState& state() const { return state_; }
  std::vector<ad::Var>& params() { return params_; }

 private:
  std::vector<ad::Var> params_;
  AdamState state_;
};

}  // namespace degnn

#endif  // DEGNN_ADAM_H_
