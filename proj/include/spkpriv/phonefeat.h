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

#ifndef SPKPRIV_PHONEFEAT_H_
#define SPKPRIV_PHONEFEAT_H_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spkpriv/corpus.h"
#include "spkpriv/phones.h"

namespace spkpriv {

// Relative phone frequencies of one speaker, indexed like the alphabet.
using FrequencyVector = std::vector<double>;

// Counts pooled over all of a speaker's sequences, divided by the total.
// Throws PreconditionError when there are no phones at all.
FrequencyVector PhoneFrequencies(std::span<const PhoneSequence> sequences,
                                 std::size_t alphabet_size);

// 1 - a.b / (|a||b|), clamped at 0. Exactly 0 for identical inputs and
// bitwise symmetric in its arguments. Throws on zero-norm input or a length
// mismatch.
double CosineDistance(std::span<const double> a, std::span<const double> b);

// Symmetric matrix of pairwise cosine distances, speakers in map order.
struct SpeakerDistances {
  std::vector<std::string> speakers;
  std::vector<double> values;  // row-major, speakers.size() squared

  double at(std::size_t i, std::size_t j) const {
    return values[i * speakers.size() + j];
  }
};

SpeakerDistances PairwiseDistances(const std::map<std::string, FrequencyVector>& vectors);

// Mean distance of each speaker to the N-1 others. Needs >= 2 speakers.
std::map<std::string, double> Distinctiveness(
    const std::map<std::string, FrequencyVector>& vectors);
std::map<std::string, double> Distinctiveness(const SpeakerDistances& distances);

// Pearson product-moment correlation. Needs equal lengths >= 2 and nonzero
// variance on both sides.
double Pearson(std::span<const double> x, std::span<const double> y);

// ---------------------------------------------------------------------------
// Duration-weighted one-hot representation
//
// R has one row per alphabet phone and one column per position t of the
// sequence. Column t holds d_t at row p_t and zeros elsewhere (weighted), or
// 1 at row p_t (indicator).

enum class RepresentationMode { kWeighted, kIndicator };

RepresentationMode ParseRepresentationMode(std::string_view text);
std::string_view ModeName(RepresentationMode mode);

class DurationRepresentation {
 public:
  DurationRepresentation(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double at(std::size_t row, std::size_t col) const { return values_[col * rows_ + row]; }
  double& at(std::size_t row, std::size_t col) { return values_[col * rows_ + row]; }
  std::span<const double> Column(std::size_t col) const {
    return std::span<const double>(values_).subspan(col * rows_, rows_);
  }

  bool operator==(const DurationRepresentation&) const = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;  // column-major
};

DurationRepresentation DurationMatrix(const PhoneSequence& sequence,
                                      std::size_t alphabet_size,
                                      RepresentationMode mode);

// Sparse form of R as exported: the row index and nonzero value per column.
struct RepresentationRecord {
  std::string utterance_id;
  RepresentationMode mode = RepresentationMode::kWeighted;
  std::vector<std::size_t> phones;
  std::vector<double> values;

  bool operator==(const RepresentationRecord&) const = default;
};

// Throws ValidationError if a column does not have exactly one nonzero.
RepresentationRecord ToSparse(std::string utterance_id, RepresentationMode mode,
                              const DurationRepresentation& matrix);
DurationRepresentation ToDense(const RepresentationRecord& record,
                               std::size_t alphabet_size);

// One JSON Lines record per utterance, in manifest order. Every record must
// carry a phone alignment; the first one without is named in the error.
void WriteRepresentations(std::ostream& out, const Manifest& manifest,
                          const PhoneAlphabet& alphabet, RepresentationMode mode);
void ExportRepresentations(const Manifest& manifest, const PhoneAlphabet& alphabet,
                           RepresentationMode mode, const std::filesystem::path& path);

std::vector<RepresentationRecord> ReadRepresentations(std::istream& in,
                                                      std::string_view source);
std::vector<RepresentationRecord> LoadRepresentations(const std::filesystem::path& path);

}  // namespace spkpriv

#endif  // SPKPRIV_PHONEFEAT_H_
