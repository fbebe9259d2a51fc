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

#include <map>
#include <ostream>

#include "fmt/format.h"
#include "json.hpp"
#include "spkpriv/error.h"
#include "spkpriv/segments.h"

namespace spkpriv {

EerResult IntraEer(const PairTable& pairs, const std::set<std::string>& segment) {
  ScoreSet scores = SelectScores(pairs, [&](const ScoredPair& p) {
    return segment.contains(p.trial_speaker_id) && segment.contains(p.model_speaker_id);
  });
  if (scores.targets.empty() || scores.nontargets.empty()) {
    throw PreconditionError(fmt::format(
        "segment of {} speaker(s) is too small to form target and nontarget pairs",
        segment.size()));
  }
  return ComputeEer(scores);
}

EerResult InterEer(const PairTable& pairs, const std::set<std::string>& segment) {
  ScoreSet scores = SelectScores(
      pairs, [&](const ScoredPair& p) { return segment.contains(p.trial_speaker_id); });
  if (scores.targets.empty() && scores.nontargets.empty())
    throw PreconditionError("segment has no trials");
  return ComputeEer(scores);
}

SegmentReport MakeSegmentReport(const PairTable& pairs, const SegmentTable& table,
                                std::string_view attribute, std::size_t min_speakers) {
  if (!table.HasAttribute(attribute))
    throw PreconditionError(fmt::format("unknown attribute \"{}\"", attribute));
  if (min_speakers < 2)
    throw PreconditionError("min_speakers must be at least 2");

  std::set<std::string> speakers;
  for (const auto& pair : pairs) {
    speakers.insert(pair.trial_speaker_id);
    speakers.insert(pair.model_speaker_id);
  }
  std::map<std::string, std::set<std::string>> categories;
  for (const auto& speaker : speakers) {
    categories[table.Value(attribute, speaker).value_or(std::string(kUnknownCategory))]
        .insert(speaker);
  }

  SegmentReport report{std::string(attribute), min_speakers, {}, {}};
  for (const auto& [category, members] : categories) {
    if (members.size() < min_speakers) {
      report.excluded.push_back({category, members.size()});
      continue;
    }
    report.rows.push_back(
        {category, members.size(), IntraEer(pairs, members), InterEer(pairs, members)});
  }
  return report;
}

void WriteSegmentCsv(std::ostream& out, const std::vector<SegmentReport>& reports) {
  out << "attribute,category,n_speakers,intra_eer,inter_eer\n";
  for (const auto& report : reports) {
    for (const auto& row : report.rows) {
      out << fmt::format("{},{},{},{},{}\n", CsvField(report.attribute),
                         CsvField(row.category), row.n_speakers, row.intra.eer,
                         row.inter.eer);
    }
  }
}

void WriteSegmentJson(std::ostream& out, const std::vector<SegmentReport>& reports) {
  auto document = nlohmann::ordered_json::array();
  for (const auto& report : reports) {
    nlohmann::ordered_json entry;
    entry["attribute"] = report.attribute;
    entry["min_speakers"] = report.min_speakers;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : report.rows) {
      rows.push_back({{"category", row.category},
                      {"n_speakers", row.n_speakers},
                      {"intra_eer", row.intra.eer},
                      {"inter_eer", row.inter.eer},
                      {"intra_threshold", row.intra.threshold},
                      {"inter_threshold", row.inter.threshold}});
    }
    entry["rows"] = std::move(rows);
    auto excluded = nlohmann::ordered_json::array();
    for (const auto& item : report.excluded)
      excluded.push_back({{"category", item.category}, {"n_speakers", item.n_speakers}});
    entry["excluded"] = std::move(excluded);
    document.push_back(std::move(entry));
  }
  out << document.dump(2) << '\n';
}

}  // namespace spkpriv
