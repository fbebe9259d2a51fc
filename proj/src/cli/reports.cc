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

#include "cli/reports.h"
#include "fmt/format.h"
#include "json.hpp"

namespace spkpriv::cli {

namespace {

std::string Percent(double fraction) { return fmt::format("{:.2f}", 100.0 * fraction); }

std::size_t LongestKey(const SpeakerEerList& speakers, std::size_t minimum) {
  std::size_t width = minimum;
  for (const auto& [speaker, result] : speakers) width = std::max(width, speaker.size());
  return width;
}

}  // namespace

std::string EerText(const EerSummary& summary) {
  std::string text;
  text += fmt::format("{:<12}{}\n", "policy", summary.policy);
  text += fmt::format("{:<12}{}\n", "seed", summary.seed);
  text += fmt::format("{:<12}{}\n", "speakers", summary.n_speakers);
  text += fmt::format("{:<12}{}\n", "trials", summary.n_trials);
  text += fmt::format("{:<12}{}\n", "targets", summary.global.n_target);
  text += fmt::format("{:<12}{}\n", "nontargets", summary.global.n_nontarget);
  text += fmt::format("{:<12}{} %\n", "EER", Percent(summary.global.eer));
  text += fmt::format("{:<12}{:.6f}\n\n", "threshold", summary.global.threshold);

  const std::size_t width = LongestKey(summary.speakers, 7) + 2;
  text += fmt::format("{:<{}}{:>8}{:>12}{:>9}{:>12}\n", "speaker", width, "EER(%)",
                      "threshold", "targets", "nontargets");
  for (const auto& [speaker, result] : summary.speakers) {
    text += fmt::format("{:<{}}{:>8}{:>12.6f}{:>9}{:>12}\n", speaker, width,
                        Percent(result.eer), result.threshold, result.n_target,
                        result.n_nontarget);
  }
  return text;
}

std::string EerJson(const EerSummary& summary) {
  nlohmann::ordered_json document;
  document["policy"] = summary.policy;
  document["seed"] = summary.seed;
  document["n_speakers"] = summary.n_speakers;
  document["n_trials"] = summary.n_trials;
  document["eer"] = summary.global.eer;
  document["threshold"] = summary.global.threshold;
  document["n_target"] = summary.global.n_target;
  document["n_nontarget"] = summary.global.n_nontarget;
  auto speakers = nlohmann::ordered_json::array();
  for (const auto& [speaker, result] : summary.speakers) {
    speakers.push_back({{"speaker_id", speaker},
                        {"eer", result.eer},
                        {"threshold", result.threshold},
                        {"n_target", result.n_target},
                        {"n_nontarget", result.n_nontarget}});
  }
  document["speakers"] = std::move(speakers);
  return document.dump(2) + '\n';
}

std::string SpeakerEerCsv(const SpeakerEerList& speakers) {
  std::string text = "speaker_id,eer,threshold,n_target,n_nontarget\n";
  for (const auto& [speaker, result] : speakers) {
    text += fmt::format("{},{},{},{},{}\n", CsvField(speaker), result.eer, result.threshold,
                        result.n_target, result.n_nontarget);
  }
  return text;
}

std::string FrequencyCsv(const std::map<std::string, FrequencyVector>& vectors,
                         const PhoneAlphabet& alphabet) {
  std::string text = "speaker_id";
  for (const auto& label : alphabet.labels()) text += ',' + label;
  text += '\n';
  for (const auto& [speaker, frequencies] : vectors) {
    text += CsvField(speaker);
    for (double f : frequencies) text += fmt::format(",{}", f);
    text += '\n';
  }
  return text;
}

std::string DistanceCsv(const SpeakerDistances& distances) {
  std::string text = "speaker_a,speaker_b,cosine_distance\n";
  const std::size_t n = distances.speakers.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      text += fmt::format("{},{},{}\n", CsvField(distances.speakers[i]),
                          CsvField(distances.speakers[j]), distances.at(i, j));
    }
  }
  return text;
}

std::string DistinctivenessCsv(const std::map<std::string, double>& averages) {
  std::string text = "speaker_id,avg_cosine_distance\n";
  for (const auto& [speaker, average] : averages)
    text += fmt::format("{},{}\n", CsvField(speaker), average);
  return text;
}

std::string PhonestatsText(const PhonestatsSummary& summary) {
  std::string text;
  text += fmt::format("{:<22}{}\n", "phone source", summary.source);
  text += fmt::format("{:<22}{}\n", "utterances", summary.n_utterances);
  text += fmt::format("{:<22}{}\n", "without phone source", summary.n_without_source);
  if (summary.source == "transcript") {
    text += fmt::format("{:<22}{}\n", "tokens", summary.n_tokens);
    const double rate = summary.n_tokens == 0
                            ? 0.0
                            : static_cast<double>(summary.n_oov) / summary.n_tokens;
    text += fmt::format("{:<22}{} ({} %)\n", "out of vocabulary", summary.n_oov,
                        Percent(rate));
  }
  text += fmt::format("{:<22}{}\n", "speakers", summary.distinctiveness.size());
  if (summary.pearson) {
    text += fmt::format("{:<22}{:.4f} over {} speakers\n", "pearson r (dist, EER)",
                        *summary.pearson, summary.n_correlated);
  }

  std::vector<std::pair<std::string, double>> ranked(summary.distinctiveness.begin(),
                                                     summary.distinctiveness.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::size_t width = 7;
  for (const auto& [speaker, value] : ranked) width = std::max(width, speaker.size());
  text += fmt::format("\n{:<{}}  {}\n", "speaker", width, "avg cosine distance");
  for (const auto& [speaker, value] : ranked)
    text += fmt::format("{:<{}}  {:.6f}\n", speaker, width, value);
  return text;
}

std::string PhonestatsJson(const PhonestatsSummary& summary) {
  nlohmann::ordered_json document;
  document["source"] = summary.source;
  document["n_utterances"] = summary.n_utterances;
  document["n_without_source"] = summary.n_without_source;
  document["n_tokens"] = summary.n_tokens;
  document["n_oov"] = summary.n_oov;
  document["distinctiveness"] = summary.distinctiveness;
  if (summary.pearson) {
    document["pearson_r"] = *summary.pearson;
    document["n_correlated"] = summary.n_correlated;
  } else {
    document["pearson_r"] = nullptr;
  }
  return document.dump(2) + '\n';
}

std::string SegmentText(const std::vector<SegmentReport>& reports) {
  std::string text;
  for (const auto& report : reports) {
    std::size_t width = 8;
    for (const auto& row : report.rows) width = std::max(width, row.category.size());
    for (const auto& item : report.excluded) width = std::max(width, item.category.size());
    text += fmt::format("attribute {} (min {} speakers)\n", report.attribute,
                        report.min_speakers);
    text += fmt::format("  {:<{}}{:>10}{:>14}{:>14}\n", "category", width, "speakers",
                        "intra-EER(%)", "inter-EER(%)");
    for (const auto& row : report.rows) {
      text += fmt::format("  {:<{}}{:>10}{:>14}{:>14}\n", row.category, width,
                          row.n_speakers, Percent(row.intra.eer), Percent(row.inter.eer));
    }
    for (const auto& item : report.excluded) {
      text += fmt::format("  {:<{}}{:>10}  excluded (fewer than {} speakers)\n",
                          item.category, width, item.n_speakers, report.min_speakers);
    }
    text += '\n';
  }
  return text;
}

std::string CompareText(const std::vector<CompareRow>& rows) {
  std::size_t dataset_width = 7, features_width = 8;
  for (const auto& row : rows) {
    dataset_width = std::max(dataset_width, row.dataset.size());
    features_width = std::max(features_width, row.features.size());
  }
  const auto cell = [](const std::optional<double>& eer) {
    return eer ? fmt::format("{:.1f}", 100.0 * *eer) : std::string("-");
  };
  std::string text = fmt::format("{:<{}}  {:<{}}  {:>9}  {:>10}\n", "Dataset",
                                 dataset_width, "Features", features_width, "Original",
                                 "Anonymized");
  for (const auto& row : rows) {
    text += fmt::format("{:<{}}  {:<{}}  {:>9}  {:>10}\n", row.dataset, dataset_width,
                        row.features, features_width, cell(row.original),
                        cell(row.anonymized));
  }
  return text;
}

std::string CompareCsv(const std::vector<CompareRow>& rows) {
  const auto cell = [](const std::optional<double>& eer) {
    return eer ? fmt::format("{}", *eer) : std::string();
  };
  std::string text = "dataset,features,original_eer,anonymized_eer\n";
  for (const auto& row : rows) {
    text += fmt::format("{},{},{},{}\n", CsvField(row.dataset), CsvField(row.features),
                        cell(row.original), cell(row.anonymized));
  }
  return text;
}

}  // namespace spkpriv::cli
