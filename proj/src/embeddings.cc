// Copyright (c) 2026 The spkpriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>

#include "fmt/format.h"
#include "spkpriv/corpus.h"
#include "spkpriv/error.h"

namespace spkpriv {

namespace {

constexpr std::array<char, 4> kMagic = {'E', 'M', 'B', '1'};
constexpr std::size_t kHeaderBytes = 12;

std::uint32_t DecodeU32(const unsigned char* bytes) {
  return static_cast<std::uint32_t>(bytes[0]) |
         static_cast<std::uint32_t>(bytes[1]) << 8 |
         static_cast<std::uint32_t>(bytes[2]) << 16 |
         static_cast<std::uint32_t>(bytes[3]) << 24;
}

void EncodeU32(std::uint32_t value, std::ostream& out) {
  const char bytes[4] = {static_cast<char>(value & 0xff),
                         static_cast<char>((value >> 8) & 0xff),
                         static_cast<char>((value >> 16) & 0xff),
                         static_cast<char>((value >> 24) & 0xff)};
  out.write(bytes, 4);
}

double RowNormSquared(std::span<const float> row) {
  double sum = 0.0;
  for (float v : row) sum += static_cast<double>(v) * v;
  return sum;
}

}  // namespace

RawEmbeddings ReadRawEmbeddings(std::istream& in) {
  const std::string bytes{std::istreambuf_iterator<char>(in),
                          std::istreambuf_iterator<char>()};
  if (in.bad()) throw IoError("embeddings: read error");
  if (bytes.size() < 4 || !std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    throw ValidationError(fmt::format(
        "embeddings: bad magic \"{}\" (expected EMB1)",
        bytes.substr(0, std::min<std::size_t>(4, bytes.size()))));
  }
  if (bytes.size() < kHeaderBytes)
    throw ValidationError("embeddings: truncated header");

  const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
  RawEmbeddings raw;
  raw.count = DecodeU32(data + 4);
  raw.dim = DecodeU32(data + 8);
  if (raw.dim == 0 && raw.count != 0)
    throw ValidationError("embeddings: dim is 0 but count is not");

  const std::uint64_t n_values = std::uint64_t{raw.count} * raw.dim;
  const std::uint64_t expected = kHeaderBytes + n_values * 4;
  if (bytes.size() < expected) {
    throw ValidationError(fmt::format(
        "embeddings: truncated payload ({} bytes, header declares {}x{} = {} "
        "bytes)",
        bytes.size(), raw.count, raw.dim, expected));
  }
  if (bytes.size() > expected) {
    throw ValidationError(fmt::format(
        "embeddings: {} trailing bytes after {}x{} payload",
        bytes.size() - expected, raw.count, raw.dim));
  }

  raw.values.resize(n_values);
  for (std::uint64_t i = 0; i < n_values; ++i)
    raw.values[i] = std::bit_cast<float>(DecodeU32(data + kHeaderBytes + 4 * i));
  return raw;
}

std::vector<std::size_t> NonPositiveNormRows(const RawEmbeddings& raw) {
  std::vector<std::size_t> bad;
  const std::span<const float> values(raw.values);
  for (std::size_t r = 0; r < raw.count; ++r) {
    const double norm2 = RowNormSquared(values.subspan(r * raw.dim, raw.dim));
    if (!(norm2 > 0.0) || !std::isfinite(norm2)) bad.push_back(r);
  }
  return bad;
}

EmbeddingMatrix::EmbeddingMatrix(std::size_t dim, std::vector<float> values)
    : dim_(dim), values_(std::move(values)) {
  if (dim_ == 0 && !values_.empty())
    throw ValidationError("embedding matrix with dim 0 cannot hold values");
  if (dim_ != 0 && values_.size() % dim_ != 0) {
    throw ValidationError(fmt::format(
        "embedding matrix: {} values is not a multiple of dim {}",
        values_.size(), dim_));
  }
  for (std::size_t r = 0; r < rows(); ++r) {
    const double norm2 = RowNormSquared(Row(r));
    if (!(norm2 > 0.0) || !std::isfinite(norm2)) {
      throw ValidationError(fmt::format(
          "embedding row {} has zero (or non-finite) norm", r));
    }
  }
}

EmbeddingMatrix::EmbeddingMatrix(RawEmbeddings raw)
    : EmbeddingMatrix(raw.dim, std::move(raw.values)) {}

std::span<const float> EmbeddingMatrix::Row(std::size_t index) const {
  if (index >= rows()) {
    throw ValidationError(fmt::format(
        "embedding row {} out of range ({} rows)", index, rows()));
  }
  return std::span<const float>(values_).subspan(index * dim_, dim_);
}

EmbeddingMatrix ReadEmbeddings(std::istream& in) {
  return EmbeddingMatrix(ReadRawEmbeddings(in));
}

EmbeddingMatrix LoadEmbeddings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open embeddings {}", path.string()));
  try {
    return ReadEmbeddings(in);
  } catch (const ValidationError& e) {
    throw ValidationError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

void WriteEmbeddings(std::ostream& out, const EmbeddingMatrix& matrix) {
  out.write(kMagic.data(), kMagic.size());
  EncodeU32(static_cast<std::uint32_t>(matrix.rows()), out);
  EncodeU32(static_cast<std::uint32_t>(matrix.dim()), out);
  for (float v : matrix.values()) EncodeU32(std::bit_cast<std::uint32_t>(v), out);
}

void SaveEmbeddings(const std::filesystem::path& path,
                    const EmbeddingMatrix& matrix) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
  WriteEmbeddings(out, matrix);
  if (!out) throw IoError(fmt::format("write failed: {}", path.string()));
}

}  // namespace spkpriv
