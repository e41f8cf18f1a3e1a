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

#ifndef DEGNN_CHECKPOINT_H_
#define DEGNN_CHECKPOINT_H_

#include <filesystem>
#include <string>

#include "degnn/matrix.h"
#include "json.hpp"

namespace degnn {

// Flat little-endian float32, row-major.
void WriteMatrixF32(const std::filesystem::path& file, const Matrix& m);
Matrix ReadMatrixF32(const std::filesystem::path& file, Eigen::Index rows,
                     Eigen::Index cols);

nlohmann::json ReadJsonFile(const std::filesystem::path& file);
// Writes to a temporary sibling, then renames over the destination.
void WriteFileAtomic(const std::filesystem::path& file, const std::string& contents);

}  // namespace degnn

#endif  // DEGNN_CHECKPOINT_H_
