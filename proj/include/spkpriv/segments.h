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

#ifndef SPKPRIV_SEGMENTS_H_
#define SPKPRIV_SEGMENTS_H_

#include <cstddef>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "spkpriv/attack.h"
#include "spkpriv/corpus.h"

namespace spkpriv {

// Category given to speakers with no value for the attribute.
inline constexpr std::string_view kUnknownCategory = "unknown";

// Pairs whose trial speaker and model speaker are both in the segment: how
// well the segment's speakers are told apart from each other.
EerResult IntraEer(const PairTable& pairs, const std::set<std::string>& segment);

// Pairs whose trial speaker is in the segment, against every model: how
// exposed the segment's speakers are within the whole population.
EerResult InterEer(const PairTable& pairs, const std::set<std::string>& segment);

struct SegmentRow {
  std::string category;
  std::size_t n_speakers = 0;
  EerResult intra;
  EerResult inter;
};

struct ExcludedCategory {
  std::string category;
  std::size_t n_speakers = 0;
};

struct SegmentReport {
  std::string attribute;
  std::size_t min_speakers = 3;
  std::vector<SegmentRow> rows;             // category order
  std::vector<ExcludedCategory> excluded;   // below min_speakers
};

// Groups the speakers of the pair table by their value of `attribute` and
// reports intra/inter EERs for every category with at least `min_speakers`
// speakers (>= 2).
SegmentReport MakeSegmentReport(const PairTable& pairs, const SegmentTable& table,
                                std::string_view attribute, std::size_t min_speakers = 3);

// attribute,category,n_speakers,intra_eer,inter_eer
void WriteSegmentCsv(std::ostream& out, const std::vector<SegmentReport>& reports);
void WriteSegmentJson(std::ostream& out, const std::vector<SegmentReport>& reports);

}  // namespace spkpriv

#endif  // SPKPRIV_SEGMENTS_H_
