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

#ifndef SPKPRIV_SYNTH_H_
#define SPKPRIV_SYNTH_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spkpriv/corpus.h"

namespace spkpriv {

enum class MeanScheme {
  // Speaker k has mean e_k, the k-th standard basis vector.
  kOrthogonal,
  // Speakers with the same group label share a mean; each distinct label
  // gets its own basis vector, in order of first appearance.
  kSharedWithinGroups,
};

// Synthetic speakers: every utterance embedding is its speaker's mean plus
// isotropic Gaussian noise of standard deviation noise_sigma per dimension.
struct SynthSpec {
  std::size_t n_speakers = 40;
  std::size_t dim = 64;
  std::size_t utterances_per_speaker = 60;
  double noise_sigma = 0.05;
  MeanScheme scheme = MeanScheme::kOrthogonal;
  std::vector<std::string> groups;  // one label per speaker for kSharedWithinGroups
  std::uint64_t seed = 0;
};

struct SynthCorpus {
  Manifest manifest;
  EmbeddingMatrix embeddings;
  // Attribute "group" when SynthSpec::groups is used.
  std::optional<SegmentTable> demographics;
};

inline constexpr const char* kSynthGroupAttribute = "group";

// Throws PreconditionError for an infeasible spec (dim smaller than the
// number of distinct means, group list of the wrong length, negative sigma,
// fewer than 2 speakers or utterances). Bit-identical for identical specs.
SynthCorpus GenerateSynthetic(const SynthSpec& spec);

std::string SynthSpeakerId(std::size_t speaker, std::size_t n_speakers);

}  // namespace spkpriv

#endif  // SPKPRIV_SYNTH_H_
