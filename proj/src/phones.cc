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

#include <cmath>

#include "fmt/format.h"
#include "spkpriv/error.h"
#include "spkpriv/phones.h"

namespace spkpriv {

namespace {

std::vector<std::string> BaseLabels() {
  return {"AA", "AE", "AH", "AO", "AW", "AY", "B",  "CH", "D",  "DH",
          "EH", "ER", "EY", "F",  "G",  "HH", "IH", "IY", "JH", "K",
          "L",  "M",  "N",  "NG", "OW", "OY", "P",  "R",  "S",  "SH",
          "T",  "TH", "UH", "UW", "V",  "W",  "Y",  "Z",  "ZH"};
}

}  // namespace

PhoneAlphabet::PhoneAlphabet(std::vector<std::string> labels)
    : labels_(std::move(labels)) {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i].empty()) throw ValidationError("empty phone label in alphabet");
    if (!index_.emplace(labels_[i], i).second) {
      throw ValidationError(
          fmt::format("duplicate phone label \"{}\" in alphabet", labels_[i]));
    }
  }
}

const PhoneAlphabet& PhoneAlphabet::Base() {
  static const PhoneAlphabet alphabet(BaseLabels());
  return alphabet;
}

const PhoneAlphabet& PhoneAlphabet::WithSilence() {
  static const PhoneAlphabet alphabet = [] {
    auto labels = BaseLabels();
    labels.emplace_back(kSilenceLabel);
    return PhoneAlphabet(std::move(labels));
  }();
  return alphabet;
}

std::optional<std::size_t> PhoneAlphabet::Index(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void CheckPhoneSequence(const PhoneSequence& sequence, std::size_t alphabet_size) {
  for (std::size_t t = 0; t < sequence.phones.size(); ++t) {
    if (sequence.phones[t] >= alphabet_size) {
      throw ValidationError(fmt::format(
          "phone index {} at position {} is outside an alphabet of {} phones",
          sequence.phones[t], t, alphabet_size));
    }
  }
  if (!sequence.durations) return;
  const auto& durations = *sequence.durations;
  if (durations.size() != sequence.phones.size()) {
    throw ValidationError(fmt::format("{} durations for {} phones", durations.size(),
                                      sequence.phones.size()));
  }
  for (std::size_t t = 0; t < durations.size(); ++t) {
    if (!std::isfinite(durations[t]) || durations[t] <= 0.0) {
      throw ValidationError(
          fmt::format("nonpositive duration {} at position {}", durations[t], t));
    }
  }
}

}  // namespace spkpriv
