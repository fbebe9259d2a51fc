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

#ifndef SPKPRIV_CLI_COMMANDS_H_
#define SPKPRIV_CLI_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spkpriv/corpus.h"
#include "spkpriv/g2p.h"
#include "spkpriv/phonefeat.h"
#include "spkpriv/synth.h"

namespace spkpriv::cli {

enum class PhoneSource { kAuto, kTranscript, kAlignment };

struct RunConfig {
  std::filesystem::path manifest;
  std::filesystem::path embeddings;
  std::filesystem::path lexicon;
  std::filesystem::path demographics;
  std::filesystem::path out;
  std::uint64_t seed = 0;
  OovPolicy oov = OovPolicy::kSkip;
  RepresentationMode mode = RepresentationMode::kWeighted;
  std::size_t min_speakers = 3;
  std::optional<SplitPolicy> policy;
  std::optional<double> min_duration;
  std::optional<double> max_duration;
  unsigned threads = 1;

  // eer
  std::filesystem::path compare;
  // phonestats
  PhoneSource source = PhoneSource::kAuto;
  std::filesystem::path speaker_eers;
  // segments
  std::vector<std::string> attributes;
  // synth
  SynthSpec synth;
  std::vector<std::size_t> group_sizes;
};

// Each command returns an exit code and throws spkpriv::Error subclasses for
// failures that map onto the other codes.
int CmdValidate(const RunConfig& config, std::ostream& out);
int CmdSplit(const RunConfig& config, std::ostream& out);
int CmdEer(const RunConfig& config, std::ostream& out);
int CmdPhonestats(const RunConfig& config, std::ostream& out);
int CmdDurfeat(const RunConfig& config, std::ostream& out);
int CmdSegments(const RunConfig& config, std::ostream& out);
int CmdSynth(const RunConfig& config, std::ostream& out);

// Writes `content` to `path`, replacing any previous file.
void WriteTextFile(const std::filesystem::path& path, const std::string& content);
void EnsureDirectory(const std::filesystem::path& path);

}  // namespace spkpriv::cli

#endif  // SPKPRIV_CLI_COMMANDS_H_
