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
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_map>

#include "fmt/format.h"
#include "json.hpp"
#include "spkpriv/corpus.h"
#include "spkpriv/error.h"

namespace spkpriv {

namespace {

using nlohmann::json;

const json* Find(const json& object, const char* key) {
  auto it = object.find(key);
  if (it == object.end() || it->is_null()) return nullptr;
  return &*it;
}

std::string RequireString(const json& object, const char* key) {
  const json* value = Find(object, key);
  if (value == nullptr) throw ValidationError(fmt::format("missing \"{}\"", key));
  if (!value->is_string())
    throw ValidationError(fmt::format("\"{}\" must be a string", key));
  auto text = value->get<std::string>();
  if (text.empty())
    throw ValidationError(fmt::format("\"{}\" must not be empty", key));
  return text;
}

Split ParseSplitField(const json& value) {
  if (!value.is_string()) throw ValidationError("\"split\" must be a string");
  const auto text = value.get<std::string>();
  if (text == "trial") return Split::kTrial;
  if (text == "enrollment") return Split::kEnrollment;
  if (text == "unassigned") return Split::kUnassigned;
  throw ValidationError(fmt::format("unknown split \"{}\"", text));
}

std::vector<AlignedPhone> ParsePhones(const json& value) {
  if (!value.is_array()) throw ValidationError("\"phones\" must be an array");
  std::vector<AlignedPhone> phones;
  phones.reserve(value.size());
  for (std::size_t i = 0; i < value.size(); ++i) {
    const json& entry = value[i];
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string() ||
        !entry[1].is_number()) {
      throw ValidationError(fmt::format(
          "\"phones\"[{}] must be a [label, duration_frames] pair", i));
    }
    AlignedPhone phone{entry[0].get<std::string>(), entry[1].get<double>()};
    if (phone.label.empty())
      throw ValidationError(fmt::format("\"phones\"[{}] has an empty label", i));
    if (!std::isfinite(phone.frames) || phone.frames <= 0.0) {
      throw ValidationError(fmt::format(
          "\"phones\"[{}] has nonpositive duration {}", i, phone.frames));
    }
    phones.push_back(std::move(phone));
  }
  return phones;
}

UtteranceRecord ParseRecord(const json& object) {
  if (!object.is_object()) throw ValidationError("line is not a JSON object");
  UtteranceRecord record;
  record.utterance_id = RequireString(object, "utterance_id");
  record.speaker_id = RequireString(object, "speaker_id");

  const json* duration = Find(object, "duration_seconds");
  if (duration == nullptr) throw ValidationError("missing \"duration_seconds\"");
  if (!duration->is_number())
    throw ValidationError("\"duration_seconds\" must be a number");
  record.duration_seconds = duration->get<double>();
  if (!std::isfinite(record.duration_seconds) || record.duration_seconds <= 0.0) {
    throw ValidationError(fmt::format(
        "utterance \"{}\" has nonpositive duration {}", record.utterance_id,
        record.duration_seconds));
  }

  if (const json* transcript = Find(object, "transcript")) {
    if (!transcript->is_string())
      throw ValidationError("\"transcript\" must be a string");
    record.transcript = transcript->get<std::string>();
  }
  if (const json* phones = Find(object, "phones")) record.phones = ParsePhones(*phones);
  if (const json* row = Find(object, "embedding_row")) {
    if (!row->is_number_unsigned()) {
      throw ValidationError(
          "\"embedding_row\" must be a nonnegative integer");
    }
    record.embedding_row = row->get<std::size_t>();
  }
  if (const json* split = Find(object, "split")) record.split = ParseSplitField(*split);
  return record;
}

}  // namespace

std::string_view SplitName(Split split) {
  switch (split) {
    case Split::kTrial:
      return "trial";
    case Split::kEnrollment:
      return "enrollment";
    case Split::kUnassigned:
      break;
  }
  return "unassigned";
}

ManifestParse ParseManifest(std::istream& in, std::string_view source) {
  ManifestParse result;
  std::unordered_map<std::string, std::size_t> first_line;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    UtteranceRecord record;
    try {
      record = ParseRecord(json::parse(line));
    } catch (const json::exception& e) {
      result.problems.push_back(
          fmt::format("{}:{}: malformed JSON: {}", source, line_number, e.what()));
      continue;
    } catch (const ValidationError& e) {
      result.problems.push_back(
          fmt::format("{}:{}: {}", source, line_number, e.what()));
      continue;
    }
    auto [it, inserted] = first_line.emplace(record.utterance_id, line_number);
    if (!inserted) {
      result.problems.push_back(fmt::format(
          "{}:{}: duplicate utterance_id \"{}\" (first seen on line {})",
          source, line_number, record.utterance_id, it->second));
      continue;
    }
    result.records.push_back(std::move(record));
  }
  if (in.bad()) throw IoError(fmt::format("{}: read error", source));
  return result;
}

Manifest ReadManifest(std::istream& in, std::string_view source) {
  ManifestParse parsed = ParseManifest(in, source);
  if (!parsed.problems.empty()) throw ValidationError(parsed.problems.front());
  return std::move(parsed.records);
}

Manifest LoadManifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open manifest {}", path.string()));
  return ReadManifest(in, path.string());
}

void WriteManifest(std::ostream& out, const Manifest& manifest) {
  for (const auto& record : manifest) {
    nlohmann::ordered_json object;
    object["utterance_id"] = record.utterance_id;
    object["speaker_id"] = record.speaker_id;
    object["duration_seconds"] = record.duration_seconds;
    if (record.transcript) object["transcript"] = *record.transcript;
    if (record.phones) {
      auto phones = nlohmann::ordered_json::array();
      for (const auto& phone : *record.phones)
        phones.push_back({phone.label, phone.frames});
      object["phones"] = std::move(phones);
    }
    if (record.embedding_row) object["embedding_row"] = *record.embedding_row;
    if (record.split != Split::kUnassigned)
      object["split"] = std::string(SplitName(record.split));
    out << object.dump() << '\n';
  }
}

void SaveManifest(const std::filesystem::path& path, const Manifest& manifest) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
  WriteManifest(out, manifest);
  if (!out) throw IoError(fmt::format("write failed: {}", path.string()));
}

Manifest FilterByDuration(const Manifest& manifest, double min_s, double max_s) {
  if (!(min_s < max_s)) {
    throw PreconditionError(fmt::format(
        "duration filter needs min < max (got {} and {})", min_s, max_s));
  }
  Manifest kept;
  for (const auto& record : manifest) {
    if (record.duration_seconds >= min_s && record.duration_seconds <= max_s)
      kept.push_back(record);
  }
  return kept;
}

std::vector<std::string> SpeakerIds(const Manifest& manifest) {
  std::set<std::string> ids;
  for (const auto& record : manifest) ids.insert(record.speaker_id);
  return {ids.begin(), ids.end()};
}

}  // namespace spkpriv
