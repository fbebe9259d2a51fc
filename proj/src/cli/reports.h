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

#ifndef SPKPRIV_CLI_REPORTS_H_
#define SPKPRIV_CLI_REPORTS_H_

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spkpriv/attack.h"
#include "spkpriv/phonefeat.h"
#include "spkpriv/phones.h"
#include "spkpriv/segments.h"

namespace spkpriv::cli {

using SpeakerEerList = std::vector<std::pair<std::string, EerResult>>;

struct EerSummary {
  std::string policy;
  std::uint64_t seed = 0;
  std::size_t n_speakers = 0;
  std::size_t n_trials = 0;
  EerResult global;
  SpeakerEerList speakers;  // sorted by EER, then speaker id
};

std::string EerText(const EerSummary& summary);
std::string EerJson(const EerSummary& summary);
// speaker_id,eer,threshold,n_target,n_nontarget
std::string SpeakerEerCsv(const SpeakerEerList& speakers);

std::string FrequencyCsv(const std::map<std::string, FrequencyVector>& vectors,
                         const PhoneAlphabet& alphabet);
std::string DistanceCsv(const SpeakerDistances& distances);
std::string DistinctivenessCsv(const std::map<std::string, double>& averages);

struct PhonestatsSummary {
  std::string source;
  std::size_t n_utterances = 0;
  std::size_t n_without_source = 0;
  std::size_t n_tokens = 0;
  std::size_t n_oov = 0;
  std::map<std::string, double> distinctiveness;
  std::optional<double> pearson;
  std::size_t n_correlated = 0;
};

std::string PhonestatsText(const PhonestatsSummary& summary);
std::string PhonestatsJson(const PhonestatsSummary& summary);

std::string SegmentText(const std::vector<SegmentReport>& reports);

struct CompareRow {
  std::string dataset;
  std::string features;
  std::optional<double> original;
  std::optional<double> anonymized;
};

std::string CompareText(const std::vector<CompareRow>& rows);
// dataset,features,original_eer,anonymized_eer (fractions; blank if absent)
std::string CompareCsv(const std::vector<CompareRow>& rows);

}  // namespace spkpriv::cli

#endif  // SPKPRIV_CLI_REPORTS_H_
