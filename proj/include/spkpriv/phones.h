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

#ifndef SPKPRIV_PHONES_H_
#define SPKPRIV_PHONES_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace spkpriv {

inline constexpr std::string_view kSilenceLabel = "SIL";

// Ordered phone inventory with its label -> index map.
class PhoneAlphabet {
 public:
  // Throws ValidationError on duplicate or empty labels.
  explicit PhoneAlphabet(std::vector<std::string> labels);

  // The 39 stress-free CMU dictionary phones, AA..ZH.
  static const PhoneAlphabet& Base();
  // Base() with SIL appended at index 39, for recognizer alignments.
  static const PhoneAlphabet& WithSilence();

  std::size_t size() const { return labels_.size(); }
  const std::string& Label(std::size_t index) const { return labels_.at(index); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<std::size_t> Index(std::string_view label) const;

  bool operator==(const PhoneAlphabet& other) const { return labels_ == other.labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Phone indices p_t and, for recognizer output, per-phone durations d_t in
// frames. Text-derived sequences carry no durations.
struct PhoneSequence {
  std::vector<std::size_t> phones;
  std::optional<std::vector<double>> durations;

  std::size_t size() const { return phones.size(); }
  bool empty() const { return phones.empty(); }

  bool operator==(const PhoneSequence&) const = default;
};

// Throws ValidationError when durations are present with the wrong length or
// a nonpositive value, or a phone index is outside [0, alphabet_size).
void CheckPhoneSequence(const PhoneSequence& sequence, std::size_t alphabet_size);

}  // namespace spkpriv

#endif  // SPKPRIV_PHONES_H_
