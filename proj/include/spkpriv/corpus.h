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

#ifndef SPKPRIV_CORPUS_H_
#define SPKPRIV_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace spkpriv {

enum class Split { kUnassigned, kTrial, kEnrollment };

std::string_view SplitName(Split split);

// One entry of a phone alignment: label as emitted by the recognizer and its
// duration in frames. No frame rate is assumed anywhere in the toolkit.
struct AlignedPhone {
  std::string label;
  double frames = 0.0;

  bool operator==(const AlignedPhone&) const = default;
};

struct UtteranceRecord {
  std::string utterance_id;
  std::string speaker_id;
  double duration_seconds = 0.0;
  std::optional<std::string> transcript;
  std::optional<std::vector<AlignedPhone>> phones;
  std::optional<std::size_t> embedding_row;
  Split split = Split::kUnassigned;

  bool operator==(const UtteranceRecord&) const = default;
};

using Manifest = std::vector<UtteranceRecord>;

// ---------------------------------------------------------------------------
// Manifest (JSON Lines)
//
// One object per line with keys utterance_id, speaker_id, duration_seconds and
// the optional transcript, phones ([[label, frames], ...]), embedding_row and
// split ("trial" | "enrollment"). Blank lines are ignored.

// Result of a lenient parse: every well-formed record plus one message per
// problem found (malformed line, duplicate id, nonpositive duration).
struct ManifestParse {
  Manifest records;
  std::vector<std::string> problems;
};

ManifestParse ParseManifest(std::istream& in, std::string_view source);

// Strict variants: throw ValidationError describing the first problem.
Manifest ReadManifest(std::istream& in, std::string_view source);
Manifest LoadManifest(const std::filesystem::path& path);

void WriteManifest(std::ostream& out, const Manifest& manifest);
void SaveManifest(const std::filesystem::path& path, const Manifest& manifest);

// Keeps records with min_s <= duration <= max_s, in order.
Manifest FilterByDuration(const Manifest& manifest, double min_s, double max_s);

// Sorted, de-duplicated speaker ids of the manifest.
std::vector<std::string> SpeakerIds(const Manifest& manifest);

// ---------------------------------------------------------------------------
// Speaker embeddings (EMB1)
//
//   bytes 0-3   magic "EMB1"
//   bytes 4-7   count, uint32 little-endian
//   bytes 8-11  dim, uint32 little-endian
//   then count*dim IEEE-754 binary32 little-endian values, row-major.

// Decoded payload before any row checks.
struct RawEmbeddings {
  std::uint32_t count = 0;
  std::uint32_t dim = 0;
  std::vector<float> values;
};

RawEmbeddings ReadRawEmbeddings(std::istream& in);

// Indices of rows whose Euclidean norm is not strictly positive (this also
// catches rows containing NaN).
std::vector<std::size_t> NonPositiveNormRows(const RawEmbeddings& raw);

class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  // Throws ValidationError on a size mismatch or a zero-norm row.
  EmbeddingMatrix(std::size_t dim, std::vector<float> values);
  explicit EmbeddingMatrix(RawEmbeddings raw);

  std::size_t dim() const { return dim_; }
  std::size_t rows() const { return dim_ == 0 ? 0 : values_.size() / dim_; }
  std::span<const float> Row(std::size_t index) const;
  std::span<const float> values() const { return values_; }

  bool operator==(const EmbeddingMatrix&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<float> values_;
};

EmbeddingMatrix ReadEmbeddings(std::istream& in);
EmbeddingMatrix LoadEmbeddings(const std::filesystem::path& path);
void WriteEmbeddings(std::ostream& out, const EmbeddingMatrix& matrix);
void SaveEmbeddings(const std::filesystem::path& path,
                    const EmbeddingMatrix& matrix);

// ---------------------------------------------------------------------------
// Demographics: CSV with header speaker_id,<attr1>,<attr2>,...

class SegmentTable {
 public:
  const std::vector<std::string>& attributes() const { return attributes_; }
  // Speakers in file order.
  const std::vector<std::string>& speakers() const { return speakers_; }
  bool HasAttribute(std::string_view attribute) const;

  // Empty when the speaker is not listed or the cell is blank.
  std::optional<std::string> Value(std::string_view attribute,
                                   std::string_view speaker_id) const;

  void AddAttribute(std::string attribute);
  void AddSpeaker(const std::string& speaker_id);
  // A blank value removes the cell.
  void Set(std::string_view attribute, const std::string& speaker_id,
           std::string value);

 private:
  std::vector<std::string> attributes_;
  std::vector<std::string> speakers_;
  // attribute -> speaker -> label
  std::map<std::string, std::map<std::string, std::string>, std::less<>>
      values_;
};

// Quotes a CSV field when it contains a comma, quote or line break.
std::string CsvField(std::string_view text);

SegmentTable ReadDemographics(std::istream& in, std::string_view source);
SegmentTable LoadDemographics(const std::filesystem::path& path);
void WriteDemographics(std::ostream& out, const SegmentTable& table);

// Speakers of the table that do not occur in the manifest.
std::vector<std::string> SpeakersMissingFromManifest(const SegmentTable& table,
                                                     const Manifest& manifest);

// ---------------------------------------------------------------------------
// Trial / enrollment splits

struct SpeakerSplit {
  std::vector<std::string> enrollment;
  std::vector<std::string> trial;

  bool operator==(const SpeakerSplit&) const = default;
};

struct SplitPlan {
  std::map<std::string, SpeakerSplit> speakers;

  bool operator==(const SplitPlan&) const = default;
};

// Exactly n_enroll + n_trial utterances per speaker; speakers with fewer are
// an error.
struct FixedPolicy {
  std::size_t n_enroll = 20;
  std::size_t n_trial = 20;
};

// Keep up to `total` utterances per speaker, `n_enroll` of them for
// enrollment. Speakers with fewer than `even_below` utterances are split
// evenly, the odd one going to trial.
struct CappedPolicy {
  std::size_t total = 60;
  std::size_t n_enroll = 20;
  std::size_t even_below = 30;
};

using SplitPolicy = std::variant<FixedPolicy, CappedPolicy>;

// "fixed:20,20", "capped:60,20" (even_below = total / 2) or "capped:60,20,30".
SplitPolicy ParseSplitPolicy(std::string_view text);
std::string FormatSplitPolicy(const SplitPolicy& policy);

SplitPlan MakeSplit(const Manifest& manifest, const SplitPolicy& policy,
                    std::uint64_t seed);

// Plan encoded in the records' split fields. Unassigned records are ignored.
SplitPlan PlanFromManifest(const Manifest& manifest);

// Copy of the manifest with every record's split set from the plan.
Manifest ApplySplit(const Manifest& manifest, const SplitPlan& plan);

bool HasSplitAnnotations(const Manifest& manifest);

// Throws ValidationError when trial and enrollment overlap or an id is not in
// the manifest or is listed under the wrong speaker.
void ValidateSplitPlan(const SplitPlan& plan, const Manifest& manifest);

}  // namespace spkpriv

#endif  // SPKPRIV_CORPUS_H_
