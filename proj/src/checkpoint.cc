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

#include "degnn/checkpoint.h"

#include <bit>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <unistd.h>
#include <vector>

#include "degnn/error.h"

namespace degnn {
namespace fs = std::filesystem;

void WriteMatrixF32(const fs::path& file, const Matrix& m) {
  std::vector<unsigned char> bytes(static_cast<std::size_t>(m.size()) * 4);
  for (Eigen::Index k = 0; k < m.size(); ++k) {
    const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(m.data()[k]));
    for (int b = 0; b < 4; ++b) bytes[4 * k + b] = (bits >> (8 * b)) & 0xff;
  }
  WriteFileAtomic(file, std::string(bytes.begin(), bytes.end()));
}

Matrix ReadMatrixF32(const fs::path& file, Eigen::Index rows, Eigen::Index cols) {
  if (!fs::exists(file)) throw Error(ErrorCode::kMissingFile, file.string());
  const auto expected = static_cast<std::uintmax_t>(rows * cols * 4);
  if (fs::file_size(file) != expected) {
    throw Error(ErrorCode::kShapeMismatch,
                file.string() + " has " + std::to_string(fs::file_size(file)) +
                    " bytes, expected " + std::to_string(expected));
  }
  std::ifstream in(file, std::ios::binary);
  std::vector<unsigned char> bytes(expected);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(expected));
  if (!in) throw Error(ErrorCode::kIoError, "short read on " + file.string());
  Matrix m(rows, cols);
  for (Eigen::Index k = 0; k < m.size(); ++k) {
    std::uint32_t bits = 0;
    for (int b = 0; b < 4; ++b) bits |= static_cast<std::uint32_t>(bytes[4 * k + b]) << (8 * b);
    m.data()[k] = static_cast<double>(std::bit_cast<float>(bits));
  }
  return m;
}

nlohmann::json ReadJsonFile(const fs::path& file) {
  if (!fs::exists(file)) throw Error(ErrorCode::kMissingFile, file.string());
  std::ifstream in(file);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kUnrecognizedFormat, file.string() + ": " + e.what());
  }
}

void WriteFileAtomic(const fs::path& file, const std::string& contents) {
  fs::path tmp = file;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorCode::kIoError, "write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, file, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error(ErrorCode::kIoError, "rename to " + file.string() + ": " + ec.message());
  }
}

}  // namespace degnn
