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

#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>

#include "fmt/format.h"
#include "spkpriv/error.h"
#include "spkpriv/g2p.h"

namespace spkpriv {

namespace {

std::string ToUpper(std::string_view text) {
  std::string upper(text);
  for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return upper;
}

// "READ(1)" -> "READ"; anything else is returned unchanged.
std::string_view BaseWord(std::string_view word) {
  if (word.size() < 4 || word.back() != ')') return word;
  const auto open = word.rfind('(');
  if (open == std::string_view::npos || open == 0 || open + 2 >= word.size()) return word;
  for (std::size_t i = open + 1; i + 1 < word.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(word[i]))) return word;
  return word.substr(0, open);
}

}  // namespace

std::string StripStress(std::string_view label) {
  std::size_t end = label.size();
  while (end > 0 && std::isdigit(static_cast<unsigned char>(label[end - 1]))) --end;
  return std::string(label.substr(0, end));
}

void Lexicon::Add(const std::string& word, Pronunciation pronunciation) {
  for (std::size_t index : pronunciation) {
    if (index >= alphabet_.size()) {
      throw ValidationError(fmt::format(
          "pronunciation of \"{}\" uses phone index {} outside the alphabet", word,
          index));
    }
  }
  entries_[word].push_back(std::move(pronunciation));
}

const std::vector<Lexicon::Pronunciation>* Lexicon::Find(std::string_view word) const {
  auto it = entries_.find(word);
  return it == entries_.end() ? nullptr : &it->second;
}

Lexicon ReadLexicon(std::istream& in, const PhoneAlphabet& alphabet,
                    std::string_view source) {
  Lexicon lexicon(alphabet);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.starts_with(";;;")) continue;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);

    std::istringstream fields(line);
    std::string word;
    if (!(fields >> word)) continue;
    Lexicon::Pronunciation pronunciation;
    std::string raw;
    while (fields >> raw) {
      const std::string label = StripStress(ToUpper(raw));
      const auto index = alphabet.Index(label);
      if (!index) {
        throw ValidationError(fmt::format("{}:{}: phone \"{}\" of \"{}\" is not in the alphabet",
                                          source, line_number, raw, word));
      }
      pronunciation.push_back(*index);
    }
    if (pronunciation.empty()) {
      throw ValidationError(
          fmt::format("{}:{}: \"{}\" has no pronunciation", source, line_number, word));
    }
    lexicon.Add(ToUpper(BaseWord(word)), std::move(pronunciation));
  }
  if (in.bad()) throw IoError(fmt::format("{}: read error", source));
  return lexicon;
}

Lexicon LoadLexicon(const std::filesystem::path& path, const PhoneAlphabet& alphabet) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open lexicon {}", path.string()));
  return ReadLexicon(in, alphabet, path.string());
}

OovPolicy ParseOovPolicy(std::string_view text) {
  if (text == "skip") return OovPolicy::kSkip;
  if (text == "error") return OovPolicy::kError;
  throw PreconditionError(fmt::format("unknown OOV policy \"{}\" (skip|error)", text));
}

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char raw : text) {
    const auto c = static_cast<unsigned char>(raw);
    if (std::isspace(c)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
      continue;
    }
    const char upper = static_cast<char>(std::toupper(c));
    if ((upper >= 'A' && upper <= 'Z') || (upper >= '0' && upper <= '9') || upper == '\'')
      current += upper;
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

G2pResult TranscriptToPhones(std::string_view text, const Lexicon& lexicon,
                             OovPolicy oov_policy) {
  G2pResult result;
  for (const auto& token : Tokenize(text)) {
    ++result.n_tokens;
    const auto* pronunciations = lexicon.Find(token);
    if (pronunciations == nullptr) {
      if (oov_policy == OovPolicy::kError)
        throw ValidationError(fmt::format("out-of-vocabulary token \"{}\"", token));
      ++result.n_skipped;
      continue;
    }
    const auto& first = pronunciations->front();
    result.sequence.phones.insert(result.sequence.phones.end(), first.begin(),
                                  first.end());
  }
  return result;
}

PhoneSequence AlignmentToSequence(const std::vector<AlignedPhone>& alignment,
                                  const PhoneAlphabet& alphabet) {
  PhoneSequence sequence;
  sequence.durations.emplace();
  sequence.phones.reserve(alignment.size());
  sequence.durations->reserve(alignment.size());
  for (const auto& phone : alignment) {
    const auto index = alphabet.Index(StripStress(phone.label));
    if (!index) {
      throw ValidationError(
          fmt::format("alignment label \"{}\" is not in the phone alphabet", phone.label));
    }
    sequence.phones.push_back(*index);
    sequence.durations->push_back(phone.frames);
  }
  CheckPhoneSequence(sequence, alphabet.size());
  return sequence;
}

}  // namespace spkpriv
