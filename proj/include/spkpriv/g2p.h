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

#ifndef SPKPRIV_G2P_H_
#define SPKPRIV_G2P_H_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "spkpriv/corpus.h"
#include "spkpriv/phones.h"

namespace spkpriv {

// Removes trailing stress digits: "OW1" -> "OW", "HH" -> "HH".
std::string StripStress(std::string_view label);

// Pronouncing dictionary keyed by uppercase word. Pronunciations are stored
// as indices into the lexicon's alphabet, in file order, so the first entry is
// the base form and the rest are the "(n)" variants.
class Lexicon {
 public:
  using Pronunciation = std::vector<std::size_t>;

  explicit Lexicon(PhoneAlphabet alphabet) : alphabet_(std::move(alphabet)) {}

  const PhoneAlphabet& alphabet() const { return alphabet_; }
  std::size_t size() const { return entries_.size(); }

  void Add(const std::string& word, Pronunciation pronunciation);
  // nullptr when the word is not in the dictionary.
  const std::vector<Pronunciation>* Find(std::string_view word) const;

 private:
  PhoneAlphabet alphabet_;
  std::map<std::string, std::vector<Pronunciation>, std::less<>> entries_;
};

// Reads the CMU dictionary text format: WORD PH1 PH2 ..., variants written as
// WORD(1), ";;;" comment lines. Lowercase words and trailing "#" comments (the
// cmudict.dict flavour) are accepted too.
Lexicon ReadLexicon(std::istream& in, const PhoneAlphabet& alphabet,
                    std::string_view source);
Lexicon LoadLexicon(const std::filesystem::path& path, const PhoneAlphabet& alphabet);

enum class OovPolicy { kSkip, kError };

OovPolicy ParseOovPolicy(std::string_view text);

// Uppercases, drops every character outside [A-Z0-9'] except whitespace, and
// splits on whitespace.
std::vector<std::string> Tokenize(std::string_view text);

struct G2pResult {
  PhoneSequence sequence;
  std::size_t n_tokens = 0;
  std::size_t n_skipped = 0;
};

// Expands each token to its first pronunciation. Out-of-vocabulary tokens are
// counted and skipped, or raise ValidationError under OovPolicy::kError.
G2pResult TranscriptToPhones(std::string_view text, const Lexicon& lexicon,
                             OovPolicy oov_policy = OovPolicy::kSkip);

// Converts a recognizer alignment to a PhoneSequence with durations. Labels
// are stress-stripped before lookup; unknown labels raise ValidationError.
PhoneSequence AlignmentToSequence(const std::vector<AlignedPhone>& alignment,
                                  const PhoneAlphabet& alphabet);

}  // namespace spkpriv

#endif  // SPKPRIV_G2P_H_
