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
#include <numeric>

#include "fmt/format.h"
#include "spkpriv/error.h"
#include "spkpriv/phonefeat.h"

namespace spkpriv {

FrequencyVector PhoneFrequencies(std::span<const PhoneSequence> sequences,
                                 std::size_t alphabet_size) {
  std::vector<std::size_t> counts(alphabet_size, 0);
  std::size_t total = 0;
  for (const auto& sequence : sequences) {
    CheckPhoneSequence(sequence, alphabet_size);
    for (std::size_t phone : sequence.phones) ++counts[phone];
    total += sequence.size();
  }
  if (total == 0) throw PreconditionError("no phones to count");
  FrequencyVector frequencies(alphabet_size);
  for (std::size_t i = 0; i < alphabet_size; ++i)
    frequencies[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  return frequencies;
}

double CosineDistance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw PreconditionError(
        fmt::format("cosine distance of vectors of length {} and {}", a.size(), b.size()));
  }
  double dot = 0.0, norm_a = 0.0, norm_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    norm_a += a[i] * a[i];
    norm_b += b[i] * b[i];
  }
  if (!(norm_a > 0.0) || !(norm_b > 0.0))
    throw PreconditionError("cosine distance of a zero-norm vector");
  if (std::equal(a.begin(), a.end(), b.begin())) return 0.0;
  return std::max(0.0, 1.0 - dot / std::sqrt(norm_a * norm_b));
}

SpeakerDistances PairwiseDistances(const std::map<std::string, FrequencyVector>& vectors) {
  SpeakerDistances distances;
  std::vector<const FrequencyVector*> rows;
  for (const auto& [speaker, vector] : vectors) {
    distances.speakers.push_back(speaker);
    rows.push_back(&vector);
  }
  const std::size_t n = rows.size();
  distances.values.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = CosineDistance(*rows[i], *rows[j]);
      distances.values[i * n + j] = d;
      distances.values[j * n + i] = d;
    }
  }
  return distances;
}

std::map<std::string, double> Distinctiveness(const SpeakerDistances& distances) {
  const std::size_t n = distances.speakers.size();
  if (n < 2)
    throw PreconditionError("distinctiveness needs at least 2 speakers");
  std::map<std::string, double> averages;
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) sum += distances.at(i, j);
    averages[distances.speakers[i]] = sum / static_cast<double>(n - 1);
  }
  return averages;
}

std::map<std::string, double> Distinctiveness(
    const std::map<std::string, FrequencyVector>& vectors) {
  if (vectors.size() < 2)
    throw PreconditionError("distinctiveness needs at least 2 speakers");
  return Distinctiveness(PairwiseDistances(vectors));
}

double Pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw PreconditionError(fmt::format("pearson of {} and {} values", x.size(), y.size()));
  if (x.size() < 2) throw PreconditionError("pearson needs at least 2 points");
  const auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double e) { return e == v.front(); });
  };
  if (constant(x) || constant(y))
    throw PreconditionError("pearson is undefined for a zero-variance input");

  const double n = static_cast<double>(x.size());
  const double mean_x = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0))
    throw PreconditionError("pearson is undefined for a zero-variance input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

RepresentationMode ParseRepresentationMode(std::string_view text) {
  if (text == "weighted") return RepresentationMode::kWeighted;
  if (text == "indicator") return RepresentationMode::kIndicator;
  throw PreconditionError(
      fmt::format("unknown representation mode \"{}\" (weighted|indicator)", text));
}

std::string_view ModeName(RepresentationMode mode) {
  return mode == RepresentationMode::kWeighted ? "weighted" : "indicator";
}

DurationRepresentation DurationMatrix(const PhoneSequence& sequence,
                                      std::size_t alphabet_size,
                                      RepresentationMode mode) {
  CheckPhoneSequence(sequence, alphabet_size);
  if (mode == RepresentationMode::kWeighted && !sequence.durations) {
    throw PreconditionError(
        "weighted representation needs phone durations");
  }
  DurationRepresentation matrix(alphabet_size, sequence.size());
  for (std::size_t t = 0; t < sequence.size(); ++t) {
    matrix.at(sequence.phones[t], t) =
        mode == RepresentationMode::kWeighted ? (*sequence.durations)[t] : 1.0;
  }
  return matrix;
}

RepresentationRecord ToSparse(std::string utterance_id, RepresentationMode mode,
                              const DurationRepresentation& matrix) {
  RepresentationRecord record{std::move(utterance_id), mode, {}, {}};
  record.phones.reserve(matrix.cols());
  record.values.reserve(matrix.cols());
  for (std::size_t t = 0; t < matrix.cols(); ++t) {
    const auto column = matrix.Column(t);
    std::size_t nonzeros = 0;
    for (std::size_t i = 0; i < column.size(); ++i) {
      if (column[i] == 0.0) continue;
      ++nonzeros;
      record.phones.push_back(i);
      record.values.push_back(column[i]);
    }
    if (nonzeros != 1) {
      throw ValidationError(fmt::format(
          "{}: column {} has {} nonzero entries", record.utterance_id, t, nonzeros));
    }
  }
  return record;
}

DurationRepresentation ToDense(const RepresentationRecord& record,
                               std::size_t alphabet_size) {
  if (record.phones.size() != record.values.size()) {
    throw ValidationError(fmt::format("{}: {} phones but {} values",
                                      record.utterance_id, record.phones.size(),
                                      record.values.size()));
  }
  DurationRepresentation matrix(alphabet_size, record.phones.size());
  for (std::size_t t = 0; t < record.phones.size(); ++t) {
    if (record.phones[t] >= alphabet_size) {
      throw ValidationError(fmt::format("{}: phone index {} outside alphabet",
                                        record.utterance_id, record.phones[t]));
    }
    if (!(record.values[t] > 0.0)) {
      throw ValidationError(fmt::format("{}: nonpositive value at column {}",
                                        record.utterance_id, t));
    }
    matrix.at(record.phones[t], t) = record.values[t];
  }
  return matrix;
}

}  // namespace spkpriv
