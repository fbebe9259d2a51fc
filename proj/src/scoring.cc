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
#include <ostream>
#include <set>
#include <thread>
#include <unordered_map>

#include "fmt/format.h"
#include "spkpriv/attack.h"
#include "spkpriv/error.h"

namespace spkpriv {

namespace {

using RecordIndex = std::unordered_map<std::string_view, const UtteranceRecord*>;

RecordIndex IndexById(const Manifest& manifest) {
  RecordIndex index;
  for (const auto& record : manifest) index.emplace(record.utterance_id, &record);
  return index;
}

std::span<const float> EmbeddingOf(const RecordIndex& index, const std::string& id,
                                   const EmbeddingMatrix& embeddings) {
  auto it = index.find(id);
  if (it == index.end())
    throw ValidationError(fmt::format("utterance \"{}\" is not in the manifest", id));
  const auto& row = it->second->embedding_row;
  if (!row) throw ValidationError(fmt::format("utterance \"{}\" has no embedding_row", id));
  if (*row >= embeddings.rows()) {
    throw ValidationError(fmt::format("utterance \"{}\" references embedding row {} of {}",
                                      id, *row, embeddings.rows()));
  }
  return embeddings.Row(*row);
}

double Norm(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

double Norm(std::span<const float> v) {
  double sum = 0.0;
  for (float x : v) sum += static_cast<double>(x) * x;
  return std::sqrt(sum);
}

double Dot(std::span<const float> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += static_cast<double>(a[i]) * b[i];
  return sum;
}

}  // namespace

std::vector<EnrollmentModel> BuildEnrollmentModels(const SplitPlan& plan,
                                                   const Manifest& manifest,
                                                   const EmbeddingMatrix& embeddings) {
  const RecordIndex index = IndexById(manifest);
  std::vector<EnrollmentModel> models;
  models.reserve(plan.speakers.size());
  for (const auto& [speaker, split] : plan.speakers) {
    if (split.enrollment.empty()) {
      throw PreconditionError(
          fmt::format("speaker \"{}\" has no enrollment utterances", speaker));
    }
    EnrollmentModel model{speaker, std::vector<double>(embeddings.dim(), 0.0)};
    for (const auto& id : split.enrollment) {
      const auto row = EmbeddingOf(index, id, embeddings);
      for (std::size_t d = 0; d < row.size(); ++d) model.centroid[d] += row[d];
    }
    const double count = static_cast<double>(split.enrollment.size());
    for (double& value : model.centroid) value /= count;
    if (!(Norm(model.centroid) > 0.0)) {
      throw PreconditionError(
          fmt::format("enrollment centroid of speaker \"{}\" has zero norm", speaker));
    }
    models.push_back(std::move(model));
  }
  return models;
}

double CosineSimilarity(std::span<const float> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw PreconditionError(
        fmt::format("dimension mismatch: {} vs {}", a.size(), b.size()));
  }
  return Dot(a, b) / (Norm(a) * Norm(b));
}

PairTable ScoreTrials(const SplitPlan& plan, const Manifest& manifest,
                      const EmbeddingMatrix& embeddings,
                      const std::vector<EnrollmentModel>& models, unsigned threads) {
  if (models.size() < 2)
    throw PreconditionError(fmt::format("scoring needs >= 2 speaker models, got {}", models.size()));

  std::vector<const EnrollmentModel*> sorted_models;
  std::set<std::string_view> model_speakers;
  std::vector<double> model_norms;
  for (const auto& model : models) {
    if (model.centroid.size() != embeddings.dim()) {
      throw PreconditionError(fmt::format(
          "dimension mismatch: model \"{}\" has {} dims, embeddings have {}",
          model.speaker_id, model.centroid.size(), embeddings.dim()));
    }
    if (!model_speakers.insert(model.speaker_id).second)
      throw PreconditionError(fmt::format("two models for speaker \"{}\"", model.speaker_id));
    sorted_models.push_back(&model);
  }
  std::sort(sorted_models.begin(), sorted_models.end(),
            [](const auto* a, const auto* b) { return a->speaker_id < b->speaker_id; });
  for (const auto* model : sorted_models) model_norms.push_back(Norm(model->centroid));

  struct Trial {
    const std::string* id;
    const std::string* speaker;
    std::span<const float> embedding;
  };
  const RecordIndex index = IndexById(manifest);
  std::vector<Trial> trials;
  for (const auto& [speaker, split] : plan.speakers) {
    if (!split.trial.empty() && !model_speakers.contains(speaker)) {
      throw PreconditionError(
          fmt::format("trial speaker \"{}\" has no enrollment model", speaker));
    }
    for (const auto& id : split.trial)
      trials.push_back({&id, &speaker, EmbeddingOf(index, id, embeddings)});
  }
  std::sort(trials.begin(), trials.end(),
            [](const Trial& a, const Trial& b) { return *a.id < *b.id; });

  const std::size_t n_models = sorted_models.size();
  PairTable table(trials.size() * n_models);
  const auto score_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      const Trial& trial = trials[t];
      const double trial_norm = Norm(trial.embedding);
      for (std::size_t m = 0; m < n_models; ++m) {
        const EnrollmentModel& model = *sorted_models[m];
        ScoredPair& pair = table[t * n_models + m];
        pair.trial_utterance_id = *trial.id;
        pair.trial_speaker_id = *trial.speaker;
        pair.model_speaker_id = model.speaker_id;
        pair.score = Dot(trial.embedding, model.centroid) / (trial_norm * model_norms[m]);
        pair.is_target = *trial.speaker == model.speaker_id;
      }
    }
  };

  const std::size_t workers =
      std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(trials.size(), 1));
  if (workers == 1) {
    score_range(0, trials.size());
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (trials.size() + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(trials.size(), begin + chunk);
      if (begin < end) pool.emplace_back(score_range, begin, end);
    }
  }
  return table;
}

ScoreSet SelectScores(const PairTable& pairs,
                      const std::function<bool(const ScoredPair&)>& keep) {
  ScoreSet scores;
  for (const auto& pair : pairs) {
    if (!keep(pair)) continue;
    (pair.is_target ? scores.targets : scores.nontargets).push_back(pair.score);
  }
  return scores;
}

ScoreSet AllScores(const PairTable& pairs) {
  return SelectScores(pairs, [](const ScoredPair&) { return true; });
}

EerResult GlobalEer(const PairTable& pairs) { return ComputeEer(AllScores(pairs)); }

EerResult SpeakerEer(const PairTable& pairs, const std::string& speaker_id) {
  const bool known = std::any_of(pairs.begin(), pairs.end(), [&](const ScoredPair& p) {
    return p.trial_speaker_id == speaker_id || p.model_speaker_id == speaker_id;
  });
  if (!known) throw PreconditionError(fmt::format("unknown speaker \"{}\"", speaker_id));
  ScoreSet scores = SelectScores(
      pairs, [&](const ScoredPair& p) { return p.trial_speaker_id == speaker_id; });
  if (scores.targets.empty() && scores.nontargets.empty())
    throw PreconditionError(fmt::format("speaker \"{}\" has no trials", speaker_id));
  return ComputeEer(scores);
}

std::vector<std::pair<std::string, EerResult>> SpeakerEers(const PairTable& pairs) {
  std::set<std::string> speakers;
  for (const auto& pair : pairs) speakers.insert(pair.trial_speaker_id);
  std::vector<std::pair<std::string, EerResult>> results;
  for (const auto& speaker : speakers) results.emplace_back(speaker, SpeakerEer(pairs, speaker));
  return results;
}

void WriteScoreTable(std::ostream& out, const PairTable& pairs) {
  out << "trial_utterance_id,model_speaker_id,score,is_target\n";
  for (const auto& pair : pairs) {
    out << fmt::format("{},{},{},{}\n", CsvField(pair.trial_utterance_id),
                       CsvField(pair.model_speaker_id),
                       pair.score, pair.is_target ? 1 : 0);
  }
}

}  // namespace spkpriv
