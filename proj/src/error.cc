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

#include "degnn/error.h"

namespace degnn {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNonPositiveDegree: return "NonPositiveDegree";
    case ErrorCode::kMissingFile: return "MissingFile";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kBadLabel: return "BadLabel";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kInsufficientNodes: return "InsufficientNodes";
    case ErrorCode::kNotEnoughNonEdges: return "NotEnoughNonEdges";
    case ErrorCode::kNonScalarLoss: return "NonScalarLoss";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kZeroNormRow: return "ZeroNormRow";
    case ErrorCode::kEmptyGraph: return "EmptyGraph";
    case ErrorCode::kTooFewRuns: return "TooFewRuns";
    case ErrorCode::kUnrecognizedFormat: return "UnrecognizedFormat";
    case ErrorCode::kNoReports: return "NoReports";
  }
  return "Unknown";
}

bool IsDataError(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingFile:
    case ErrorCode::kShapeMismatch:
    case ErrorCode::kBadLabel:
    case ErrorCode::kInsufficientNodes:
    case ErrorCode::kNotEnoughNonEdges:
    case ErrorCode::kUnrecognizedFormat:
    case ErrorCode::kNoReports:
    case ErrorCode::kEmptyGraph:
      return true;
    default:
      return false;
  }
}

}  // namespace degnn
