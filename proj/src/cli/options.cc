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

#include <ostream>

#include "CLI11.hpp"
#include "cli/commands.h"
#include "spkpriv/cli.h"
#include "spkpriv/error.h"

namespace spkpriv::cli {

namespace {

struct RawOptions {
  std::string policy;
  std::string oov = "skip";
  std::string mode = "weighted";
  std::string source = "auto";
  std::string scheme = "orthogonal";
  std::string groups;
  double min_duration = -1.0;
  double max_duration = -1.0;
};

void AddCorpusOptions(CLI::App* cmd, RunConfig& config, RawOptions& raw,
                      bool needs_embeddings) {
  cmd->add_option("--manifest", config.manifest, "Utterance manifest (JSON Lines)")
      ->required();
  auto* embeddings = cmd->add_option("--embeddings", config.embeddings,
                                     "Speaker embeddings (EMB1)");
  if (needs_embeddings) embeddings->required();
  cmd->add_option("--min-duration", raw.min_duration,
                  "Drop utterances shorter than this many seconds");
  cmd->add_option("--max-duration", raw.max_duration,
                  "Drop utterances longer than this many seconds");
}

void AddSplitOptions(CLI::App* cmd, RunConfig& config, RawOptions& raw) {
  cmd->add_option("--policy", raw.policy,
                  "Split policy: fixed:E,T or capped:TOTAL,E[,EVEN_BELOW]");
  cmd->add_option("--seed", config.seed, "Seed for utterance selection");
  cmd->add_option("--threads", config.threads, "Scoring threads")
      ->check(CLI::PositiveNumber);
}

std::vector<std::size_t> ParseSizes(const std::string& text) {
  std::vector<std::size_t> sizes;
  for (const auto& field : CLI::detail::split(text, ',')) {
    try {
      std::size_t used = 0;
      const long long value = std::stoll(field, &used);
      if (used != field.size() || value <= 0) throw std::invalid_argument(field);
      sizes.push_back(static_cast<std::size_t>(value));
    } catch (const std::exception&) {
      throw PreconditionError("--groups expects positive sizes like 5,3");
    }
  }
  return sizes;
}

void Finalize(RunConfig& config, const RawOptions& raw) {
  if (!raw.policy.empty()) config.policy = ParseSplitPolicy(raw.policy);
  config.oov = ParseOovPolicy(raw.oov);
  config.mode = ParseRepresentationMode(raw.mode);
  if (raw.min_duration >= 0.0) config.min_duration = raw.min_duration;
  if (raw.max_duration >= 0.0) config.max_duration = raw.max_duration;
  if (raw.source == "transcript") {
    config.source = PhoneSource::kTranscript;
  } else if (raw.source == "alignment") {
    config.source = PhoneSource::kAlignment;
  } else {
    config.source = PhoneSource::kAuto;
  }
  config.synth.scheme =
      raw.scheme == "shared" ? MeanScheme::kSharedWithinGroups : MeanScheme::kOrthogonal;
  if (!raw.groups.empty()) config.group_sizes = ParseSizes(raw.groups);
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Privacy evaluation of speaker anonymization from exported embeddings, "
               "transcripts and phone alignments",
               "spkpriv-eval"};
  app.require_subcommand(1);
  RunConfig config;
  RawOptions raw;

  auto* validate = app.add_subcommand("validate", "Check corpus inputs and list every problem");
  AddCorpusOptions(validate, config, raw, false);
  validate->add_option("--demographics", config.demographics, "Speaker attributes (CSV)");
  validate->add_option("--lexicon", config.lexicon, "CMU pronouncing dictionary");

  auto* split = app.add_subcommand("split", "Assign trial and enrollment utterances");
  AddCorpusOptions(split, config, raw, false);
  AddSplitOptions(split, config, raw);
  split->add_option("--out", config.out, "Output directory")->required();

  auto* eer = app.add_subcommand("eer", "Simulate the attacker: global and per-speaker EERs");
  eer->add_option("--manifest", config.manifest, "Utterance manifest (JSON Lines)");
  eer->add_option("--embeddings", config.embeddings, "Speaker embeddings (EMB1)");
  eer->add_option("--min-duration", raw.min_duration, "Drop shorter utterances (s)");
  eer->add_option("--max-duration", raw.max_duration, "Drop longer utterances (s)");
  eer->add_option("--compare", config.compare,
                  "JSON grid of original/anonymized corpora; writes a comparison table");
  AddSplitOptions(eer, config, raw);
  eer->add_option("--out", config.out, "Output directory")->required();

  auto* phonestats = app.add_subcommand(
      "phonestats", "Relative phone frequencies, distinctiveness and EER correlation");
  AddCorpusOptions(phonestats, config, raw, false);
  phonestats->add_option("--lexicon", config.lexicon, "CMU pronouncing dictionary");
  phonestats->add_option("--oov", raw.oov, "Out-of-vocabulary policy")
      ->check(CLI::IsMember({"skip", "error"}));
  phonestats->add_option("--source", raw.source, "Phone source")
      ->check(CLI::IsMember({"auto", "transcript", "alignment"}));
  phonestats->add_option("--speaker-eers", config.speaker_eers,
                         "speaker_eers.csv from the eer command");
  phonestats->add_option("--out", config.out, "Output directory")->required();

  auto* durfeat = app.add_subcommand("durfeat", "Export phone-duration representations");
  AddCorpusOptions(durfeat, config, raw, false);
  durfeat->add_option("--mode", raw.mode, "Representation mode")
      ->check(CLI::IsMember({"weighted", "indicator"}));
  durfeat->add_option("--out", config.out, "Output directory")->required();

  auto* segments = app.add_subcommand("segments", "Intra- and inter-EER per population segment");
  AddCorpusOptions(segments, config, raw, true);
  AddSplitOptions(segments, config, raw);
  segments->add_option("--demographics", config.demographics, "Speaker attributes (CSV)")
      ->required();
  segments->add_option("--attribute", config.attributes,
                       "Attribute to analyse (repeatable; default all)");
  segments->add_option("--min-speakers", config.min_speakers,
                       "Smallest category that is reported")
      ->check(CLI::Range(2, 1 << 30));
  segments->add_option("--out", config.out, "Output directory")->required();

  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus with known speakers");
  synth->add_option("--speakers", config.synth.n_speakers, "Number of speakers");
  synth->add_option("--dim", config.synth.dim, "Embedding dimension");
  synth->add_option("--utterances", config.synth.utterances_per_speaker,
                    "Utterances per speaker");
  synth->add_option("--sigma", config.synth.noise_sigma, "Noise standard deviation");
  synth->add_option("--scheme", raw.scheme, "Speaker means")
      ->check(CLI::IsMember({"orthogonal", "shared"}));
  synth->add_option("--groups", raw.groups,
                    "Shared scheme: sizes of the leading groups, e.g. 5,3 (default: "
                    "one group of everyone)");
  synth->add_option("--seed", config.synth.seed, "Generator seed");
  synth->add_option("--out", config.out, "Output directory")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      for (auto* sub : app.get_subcommands()) out << sub->help();
      return kExitOk;
    }
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    Finalize(config, raw);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (validate->parsed()) return CmdValidate(config, out);
    if (split->parsed()) return CmdSplit(config, out);
    if (eer->parsed()) return CmdEer(config, out);
    if (phonestats->parsed()) return CmdPhonestats(config, out);
    if (durfeat->parsed()) return CmdDurfeat(config, out);
    if (segments->parsed()) return CmdSegments(config, out);
    if (synth->parsed()) return CmdSynth(config, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitPrecondition;
  }
  return kExitUsage;
}

}  // namespace spkpriv::cli
