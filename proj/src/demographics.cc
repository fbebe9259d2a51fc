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
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "fmt/format.h"
#include "spkpriv/corpus.h"
#include "spkpriv/error.h"

namespace spkpriv {

namespace {

// Splits one CSV record. Double-quoted fields may contain commas and "" as
// an escaped quote; embedded newlines are not supported.
std::vector<std::string> SplitCsvLine(std::string_view line, std::string_view source,
                                      std::size_t line_number) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          fields.back() += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) {
    throw ValidationError(
        fmt::format("{}:{}: unterminated quoted field", source, line_number));
  }
  return fields;
}

std::string Trim(std::string text) {
  const auto begin = text.find_first_not_of(" \t");
  if (begin == std::string::npos) return {};
  const auto end = text.find_last_not_of(" \t");
  return text.substr(begin, end - begin + 1);
}

}  // namespace

bool SegmentTable::HasAttribute(std::string_view attribute) const {
  return values_.find(attribute) != values_.end();
}

std::optional<std::string> SegmentTable::Value(std::string_view attribute,
                                               std::string_view speaker_id) const {
  auto column = values_.find(attribute);
  if (column == values_.end()) return std::nullopt;
  auto cell = column->second.find(std::string(speaker_id));
  if (cell == column->second.end()) return std::nullopt;
  return cell->second;
}

void SegmentTable::AddAttribute(std::string attribute) {
  if (HasAttribute(attribute)) return;
  values_.emplace(attribute, std::map<std::string, std::string>{});
  attributes_.push_back(std::move(attribute));
}

void SegmentTable::AddSpeaker(const std::string& speaker_id) {
  if (std::find(speakers_.begin(), speakers_.end(), speaker_id) == speakers_.end())
    speakers_.push_back(speaker_id);
}

void SegmentTable::Set(std::string_view attribute, const std::string& speaker_id,
                       std::string value) {
  auto column = values_.find(attribute);
  if (column == values_.end())
    throw PreconditionError(fmt::format("unknown attribute \"{}\"", attribute));
  AddSpeaker(speaker_id);
  if (value.empty()) {
    column->second.erase(speaker_id);
  } else {
    column->second[speaker_id] = std::move(value);
  }
}

SegmentTable ReadDemographics(std::istream& in, std::string_view source) {
  SegmentTable table;
  std::string line;
  std::size_t line_number = 0;
  std::vector<std::string> header;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_number == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (header.empty()) {
      header = SplitCsvLine(line, source, line_number);
      for (auto& name : header) name = Trim(name);
      if (header.front() != "speaker_id") {
        throw ValidationError(fmt::format(
            "{}:1: first header column must be speaker_id", source));
      }
      for (std::size_t c = 1; c < header.size(); ++c) {
        if (header[c].empty() || table.HasAttribute(header[c])) {
          throw ValidationError(fmt::format(
              "{}:1: empty or duplicate attribute name \"{}\"", source, header[c]));
        }
        table.AddAttribute(header[c]);
      }
      continue;
    }
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    auto fields = SplitCsvLine(line, source, line_number);
    if (fields.size() != header.size()) {
      throw ValidationError(fmt::format("{}:{}: expected {} fields, found {}", source,
                                        line_number, header.size(), fields.size()));
    }
    const std::string speaker = Trim(fields.front());
    if (speaker.empty())
      throw ValidationError(fmt::format("{}:{}: empty speaker_id", source, line_number));
    if (!seen.insert(speaker).second) {
      throw ValidationError(fmt::format("{}:{}: duplicate speaker_id \"{}\"", source,
                                        line_number, speaker));
    }
    table.AddSpeaker(speaker);
    for (std::size_t c = 1; c < header.size(); ++c)
      table.Set(header[c], speaker, Trim(fields[c]));
  }
  if (in.bad()) throw IoError(fmt::format("{}: read error", source));
  if (header.empty())
    throw ValidationError(fmt::format("{}: missing header row", source));
  return table;
}

SegmentTable LoadDemographics(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open demographics {}", path.string()));
  return ReadDemographics(in, path.string());
}

std::string CsvField(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

void WriteDemographics(std::ostream& out, const SegmentTable& table) {
  out << "speaker_id";
  for (const auto& attribute : table.attributes()) out << ',' << CsvField(attribute);
  out << '\n';
  for (const auto& speaker : table.speakers()) {
    out << CsvField(speaker);
    for (const auto& attribute : table.attributes())
      out << ',' << CsvField(table.Value(attribute, speaker).value_or(""));
    out << '\n';
  }
}

std::vector<std::string> SpeakersMissingFromManifest(const SegmentTable& table,
                                                     const Manifest& manifest) {
  std::set<std::string> known;
  for (const auto& record : manifest) known.insert(record.speaker_id);
  std::vector<std::string> missing;
  for (const auto& speaker : table.speakers())
    if (!known.contains(speaker)) missing.push_back(speaker);
  return missing;
}

}  // namespace spkpriv
