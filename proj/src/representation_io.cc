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
#include <sstream>

#include "fmt/format.h"
#include "json.hpp"
#include "spkpriv/error.h"
#include "spkpriv/g2p.h"
#include "spkpriv/phonefeat.h"

namespace spkpriv {

void WriteRepresentations(std::ostream& out, const Manifest& manifest,
                          const PhoneAlphabet& alphabet, RepresentationMode mode) {
  std::vector<RepresentationRecord> records;
  records.reserve(manifest.size());
  for (const auto& utterance : manifest) {
    if (!utterance.phones) {
      throw ValidationError(fmt::format("utterance \"{}\" has no phone alignment",
                                        utterance.utterance_id));
    }
    PhoneSequence sequence;
    try {
      sequence = AlignmentToSequence(*utterance.phones, alphabet);
    } catch (const ValidationError& e) {
      throw ValidationError(fmt::format("utterance \"{}\": {}", utterance.utterance_id,
                                        e.what()));
    }
    records.push_back(ToSparse(utterance.utterance_id, mode,
                               DurationMatrix(sequence, alphabet.size(), mode)));
  }
  for (const auto& record : records) {
    nlohmann::ordered_json object;
    object["utterance_id"] = record.utterance_id;
    object["mode"] = std::string(ModeName(record.mode));
    object["phones"] = record.phones;
    object["values"] = record.values;
    out << object.dump() << '\n';
  }
}

void ExportRepresentations(const Manifest& manifest, const PhoneAlphabet& alphabet,
                           RepresentationMode mode, const std::filesystem::path& path) {
  std::ostringstream buffer;
  WriteRepresentations(buffer, manifest, alphabet, mode);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
  out << buffer.str();
  if (!out) throw IoError(fmt::format("write failed: {}", path.string()));
}

std::vector<RepresentationRecord> ReadRepresentations(std::istream& in,
                                                      std::string_view source) {
  std::vector<RepresentationRecord> records;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto object = nlohmann::json::parse(line);
      RepresentationRecord record;
      record.utterance_id = object.at("utterance_id").get<std::string>();
      record.mode = ParseRepresentationMode(object.at("mode").get<std::string>());
      record.phones = object.at("phones").get<std::vector<std::size_t>>();
      record.values = object.at("values").get<std::vector<double>>();
      if (record.phones.size() != record.values.size())
        throw ValidationError("phones and values differ in length");
      for (double v : record.values) {
        if (!(v > 0.0) || !std::isfinite(v))
          throw ValidationError(fmt::format("nonpositive value {}", v));
        if (record.mode == RepresentationMode::kIndicator && v != 1.0)
          throw ValidationError(fmt::format("indicator value {} is not 1", v));
      }
      records.push_back(std::move(record));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(fmt::format("{}:{}: {}", source, line_number, e.what()));
    } catch (const Error& e) {
      throw ValidationError(fmt::format("{}:{}: {}", source, line_number, e.what()));
    }
  }
  if (in.bad()) throw IoError(fmt::format("{}: read error", source));
  return records;
}

std::vector<RepresentationRecord> LoadRepresentations(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open {}", path.string()));
  return ReadRepresentations(in, path.string());
}

}  // namespace spkpriv
