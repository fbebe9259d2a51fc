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

#ifndef SPKPRIV_ATTACK_H_
#define SPKPRIV_ATTACK_H_

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spkpriv/corpus.h"

namespace spkpriv {

// Similarity scores, higher meaning "same speaker".
struct ScoreSet {
  std::vector<double> targets;
  std::vector<double> nontargets;
};

struct EerResult {
  double eer = 0.0;
  // Acceptance threshold (score >= threshold accepts) of the reported
  // operating point.
  double threshold = 0.0;
  std::size_t n_target = 0;
  std::size_t n_nontarget = 0;
};

// Equal error rate with FRR(t) = #{target < t} / n_target and
// FAR(t) = #{nontarget >= t} / n_nontarget.
//
// Sweeping t upwards through the sorted scores visits the operating points
// ("vertices") of the DET staircase, along which FAR - FRR strictly
// decreases. The EER is (FAR + FRR) / 2 at the vertex closest to FAR = FRR;
// when the two vertices around the crossing are equally close, their values
// are averaged, which is the point where the segment between them meets the
// diagonal. Ties are decided on exact integer counts.
//
// O(n log n). Invariant under strictly increasing transforms of the scores;
// swapping the two lists maps e to 1 - e.
EerResult ComputeEer(const ScoreSet& scores);

// Speaker model: unweighted mean of the speaker's enrollment embeddings. The
// centroid is not renormalized.
struct EnrollmentModel {
  std::string speaker_id;
  std::vector<double> centroid;
};

// One model per speaker of the plan, in speaker-id order.
std::vector<EnrollmentModel> BuildEnrollmentModels(const SplitPlan& plan,
                                                   const Manifest& manifest,
                                                   const EmbeddingMatrix& embeddings);

struct ScoredPair {
  std::string trial_utterance_id;
  std::string trial_speaker_id;
  std::string model_speaker_id;
  double score = 0.0;
  bool is_target = false;

  bool operator==(const ScoredPair&) const = default;
};

// Every (trial utterance, model) pair, ordered by trial utterance id and then
// model speaker id.
using PairTable = std::vector<ScoredPair>;

double CosineSimilarity(std::span<const float> a, std::span<const double> b);

// Scores every trial utterance of the plan against every model. Work is
// split across `threads` workers; the table is identical for any count.
PairTable ScoreTrials(const SplitPlan& plan, const Manifest& manifest,
                      const EmbeddingMatrix& embeddings,
                      const std::vector<EnrollmentModel>& models,
                      unsigned threads = 1);

// Scores of the pairs accepted by `keep`, split by label.
ScoreSet SelectScores(const PairTable& pairs,
                      const std::function<bool(const ScoredPair&)>& keep);
ScoreSet AllScores(const PairTable& pairs);

EerResult GlobalEer(const PairTable& pairs);

// EER over the pairs whose trial speaker is `speaker_id`, at that speaker's
// own operating point.
EerResult SpeakerEer(const PairTable& pairs, const std::string& speaker_id);

// SpeakerEer for every trial speaker, in speaker-id order.
std::vector<std::pair<std::string, EerResult>> SpeakerEers(const PairTable& pairs);

// CSV: trial_utterance_id,model_speaker_id,score,is_target
void WriteScoreTable(std::ostream& out, const PairTable& pairs);

}  // namespace spkpriv

#endif  // SPKPRIV_ATTACK_H_
