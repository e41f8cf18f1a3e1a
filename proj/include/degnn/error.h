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

#ifndef DEGNN_ERROR_H_
#define DEGNN_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace degnn {

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kNonPositiveDegree,
  kMissingFile,
  kShapeMismatch,
  kBadLabel,
  kIoError,
  kInsufficientNodes,
  kNotEnoughNonEdges,
  kNonScalarLoss,
  kLengthMismatch,
  kZeroNormRow,
  kEmptyGraph,
  kTooFewRuns,
  kUnrecognizedFormat,
  kNoReports,
};

std::string_view ErrorCodeName(ErrorCode code);

// True for errors caused by input data (as opposed to runtime failures).
bool IsDataError(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace degnn

#endif  // DEGNN_ERROR_H_
