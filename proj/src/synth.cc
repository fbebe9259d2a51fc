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
#include <cmath>
#include <map>

#include "fmt/format.h"
#include "spkpriv/error.h"
#include "spkpriv/random.h"
#include "spkpriv/synth.h"

namespace spkpriv {

namespace {

std::size_t Digits(std::size_t n) {
  std::size_t digits = 1;
  while (n >= 10) {
    n /= 10;
    ++digits;
  }
  return std::max<std::size_t>(digits, 3);
}

// Index of the basis vector used as each speaker's mean.
std::vector<std::size_t> MeanIndices(const SynthSpec& spec) {
  std::vector<std::size_t> indices(spec.n_speakers);
  if (spec.scheme == MeanScheme::kOrthogonal) {
    for (std::size_t s = 0; s < spec.n_speakers; ++s) indices[s] = s;
    return indices;
  }
  if (spec.groups.size() != spec.n_speakers) {
    throw PreconditionError(fmt::format("{} group labels for {} speakers",
                                        spec.groups.size(), spec.n_speakers));
  }
  std::map<std::string, std::size_t> group_index;
  for (std::size_t s = 0; s < spec.n_speakers; ++s) {
    if (spec.groups[s].empty())
      throw PreconditionError(fmt::format("speaker {} has an empty group label", s));
    indices[s] = group_index.emplace(spec.groups[s], group_index.size()).first->second;
  }
  return indices;
}

}  // namespace

std::string SynthSpeakerId(std::size_t speaker, std::size_t n_speakers) {
  return fmt::format("spk{:0{}}", speaker, Digits(n_speakers));
}

SynthCorpus GenerateSynthetic(const SynthSpec& spec) {
  if (spec.n_speakers < 2) throw PreconditionError("synthetic corpus needs >= 2 speakers");
  if (spec.utterances_per_speaker < 2)
    throw PreconditionError("synthetic corpus needs >= 2 utterances per speaker");
  if (!std::isfinite(spec.noise_sigma) || spec.noise_sigma < 0.0)
    throw PreconditionError("noise_sigma must be a nonnegative number");
  const auto means = MeanIndices(spec);
  std::size_t n_means = 0;
  for (std::size_t m : means) n_means = std::max(n_means, m + 1);
  if (spec.dim < n_means) {
    throw PreconditionError(fmt::format(
        "dim {} cannot hold {} orthogonal speaker means", spec.dim, n_means));
  }

  Rng rng(spec.seed);
  SynthCorpus corpus;
  std::vector<float> values;
  values.reserve(spec.n_speakers * spec.utterances_per_speaker * spec.dim);
  const std::size_t utt_digits = Digits(spec.utterances_per_speaker);
  for (std::size_t s = 0; s < spec.n_speakers; ++s) {
    const std::string speaker = SynthSpeakerId(s, spec.n_speakers);
    for (std::size_t u = 0; u < spec.utterances_per_speaker; ++u) {
      UtteranceRecord record;
      record.utterance_id = fmt::format("{}-utt{:0{}}", speaker, u, utt_digits);
      record.speaker_id = speaker;
      // Inside the 2-30 s window used for evaluation corpora.
      record.duration_seconds = 2.0 + 28.0 * rng.Uniform01();
      record.embedding_row = corpus.manifest.size();
      corpus.manifest.push_back(std::move(record));
      for (std::size_t d = 0; d < spec.dim; ++d) {
        const double mean = d == means[s] ? 1.0 : 0.0;
        values.push_back(static_cast<float>(mean + spec.noise_sigma * rng.Normal()));
      }
    }
  }
  corpus.embeddings = EmbeddingMatrix(spec.dim, std::move(values));

  if (spec.scheme == MeanScheme::kSharedWithinGroups) {
    SegmentTable table;
    table.AddAttribute(kSynthGroupAttribute);
    for (std::size_t s = 0; s < spec.n_speakers; ++s)
      table.Set(kSynthGroupAttribute, SynthSpeakerId(s, spec.n_speakers), spec.groups[s]);
    corpus.demographics = std::move(table);
  }
  return corpus;
}

}  // namespace spkpriv
