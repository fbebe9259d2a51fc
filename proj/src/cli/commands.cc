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
#include <charconv>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "cli/commands.h"
#include "cli/reports.h"
#include "fmt/format.h"
#include "json.hpp"
#include "spkpriv/attack.h"
#include "spkpriv/cli.h"
#include "spkpriv/error.h"
#include "spkpriv/segments.h"

namespace spkpriv::cli {

namespace fs = std::filesystem;

namespace {

const SplitPolicy kDefaultPolicy = CappedPolicy{60, 20, 30};

Manifest LoadFilteredManifest(const fs::path& path, const RunConfig& config) {
  Manifest manifest = LoadManifest(path);
  if (config.min_duration || config.max_duration) {
    manifest = FilterByDuration(manifest, config.min_duration.value_or(0.0),
                                config.max_duration.value_or(
                                    std::numeric_limits<double>::infinity()));
  }
  return manifest;
}

// Split from --policy if given, else from the manifest's own annotations,
// else the default capped policy.
SplitPlan ChooseSplit(const Manifest& manifest, const RunConfig& config,
                      std::string& description) {
  SplitPlan plan;
  if (!config.policy && HasSplitAnnotations(manifest)) {
    plan = PlanFromManifest(manifest);
    description = "manifest";
  } else {
    const SplitPolicy policy = config.policy.value_or(kDefaultPolicy);
    plan = MakeSplit(manifest, policy, config.seed);
    description = FormatSplitPolicy(policy);
  }
  ValidateSplitPlan(plan, manifest);
  return plan;
}

struct Evaluation {
  Manifest manifest;
  SplitPlan plan;
  PairTable pairs;
  std::string policy;
};

Evaluation Evaluate(const fs::path& manifest_path, const fs::path& embeddings_path,
                    const RunConfig& config) {
  Evaluation evaluation;
  evaluation.manifest = LoadFilteredManifest(manifest_path, config);
  const EmbeddingMatrix embeddings = LoadEmbeddings(embeddings_path);
  evaluation.plan = ChooseSplit(evaluation.manifest, config, evaluation.policy);
  const auto models = BuildEnrollmentModels(evaluation.plan, evaluation.manifest, embeddings);
  evaluation.pairs = ScoreTrials(evaluation.plan, evaluation.manifest, embeddings, models,
                                 config.threads);
  return evaluation;
}

EerSummary Summarize(const Evaluation& evaluation, const RunConfig& config) {
  EerSummary summary;
  summary.policy = evaluation.policy;
  summary.seed = config.seed;
  summary.n_speakers = evaluation.plan.speakers.size();
  for (const auto& [speaker, split] : evaluation.plan.speakers)
    summary.n_trials += split.trial.size();
  summary.global = GlobalEer(evaluation.pairs);
  summary.speakers = SpeakerEers(evaluation.pairs);
  std::stable_sort(summary.speakers.begin(), summary.speakers.end(),
                   [](const auto& a, const auto& b) { return a.second.eer < b.second.eer; });
  return summary;
}

std::string Render(const std::function<void(std::ostream&)>& write) {
  std::ostringstream buffer;
  write(buffer);
  return buffer.str();
}

std::string SafeFileName(std::string_view name) {
  std::string safe;
  for (char c : name) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      (c >= '0' && c <= '9') || c == '-' || c == '_';
    safe += keep ? c : '_';
  }
  return safe.empty() ? "attribute" : safe;
}

std::map<std::string, double> ReadSpeakerEers(const fs::path& path) {
  const SegmentTable table = LoadDemographics(path);
  if (!table.HasAttribute("eer"))
    throw ValidationError(fmt::format("{}: no \"eer\" column", path.string()));
  std::map<std::string, double> eers;
  for (const auto& speaker : table.speakers()) {
    const auto text = table.Value("eer", speaker);
    if (!text) continue;
    double value = 0.0;
    const auto [end, ec] = std::from_chars(text->data(), text->data() + text->size(), value);
    if (ec != std::errc() || end != text->data() + text->size()) {
      throw ValidationError(fmt::format("{}: bad EER \"{}\" for speaker \"{}\"",
                                        path.string(), *text, speaker));
    }
    eers[speaker] = value;
  }
  return eers;
}

}  // namespace

void EnsureDirectory(const fs::path& path) {
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec || !fs::is_directory(path))
    throw IoError(fmt::format("cannot create output directory {}", path.string()));
}

void WriteTextFile(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
  out << content;
  if (!out) throw IoError(fmt::format("write failed: {}", path.string()));
}

// ---------------------------------------------------------------------------

int CmdValidate(const RunConfig& config, std::ostream& out) {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;

  std::ifstream manifest_in(config.manifest);
  if (!manifest_in)
    throw IoError(fmt::format("cannot open manifest {}", config.manifest.string()));
  ManifestParse parsed = ParseManifest(manifest_in, config.manifest.string());
  errors = parsed.problems;
  const Manifest& manifest = parsed.records;

  if (!config.embeddings.empty()) {
    std::ifstream in(config.embeddings, std::ios::binary);
    if (!in)
      throw IoError(fmt::format("cannot open embeddings {}", config.embeddings.string()));
    try {
      const RawEmbeddings raw = ReadRawEmbeddings(in);
      for (std::size_t row : NonPositiveNormRows(raw))
        errors.push_back(fmt::format("embedding row {} has zero norm", row));
      for (const auto& record : manifest) {
        if (!record.embedding_row) {
          errors.push_back(
              fmt::format("utterance \"{}\" has no embedding_row", record.utterance_id));
        } else if (*record.embedding_row >= raw.count) {
          errors.push_back(fmt::format(
              "utterance \"{}\" references embedding row {} but the file has {} rows",
              record.utterance_id, *record.embedding_row, raw.count));
        }
      }
    } catch (const ValidationError& e) {
      errors.push_back(fmt::format("{}: {}", config.embeddings.string(), e.what()));
    }
  }

  const PhoneAlphabet& alphabet = PhoneAlphabet::WithSilence();
  for (const auto& record : manifest) {
    if (!record.phones) continue;
    for (const auto& phone : *record.phones) {
      if (!alphabet.Index(StripStress(phone.label))) {
        errors.push_back(fmt::format("utterance \"{}\" has unknown phone label \"{}\"",
                                     record.utterance_id, phone.label));
        break;
      }
    }
  }

  if (HasSplitAnnotations(manifest)) {
    for (const auto& [speaker, split] : PlanFromManifest(manifest).speakers) {
      if (split.enrollment.empty() || split.trial.empty()) {
        warnings.push_back(fmt::format(
            "speaker \"{}\" has {} enrollment and {} trial utterances", speaker,
            split.enrollment.size(), split.trial.size()));
      }
    }
  }

  if (!config.demographics.empty()) {
    try {
      const SegmentTable table = LoadDemographics(config.demographics);
      for (const auto& speaker : SpeakersMissingFromManifest(table, manifest)) {
        errors.push_back(fmt::format("demographics speaker \"{}\" is not in the manifest",
                                     speaker));
      }
    } catch (const ValidationError& e) {
      errors.push_back(e.what());
    }
  }

  if (!config.lexicon.empty()) {
    try {
      const Lexicon lexicon = LoadLexicon(config.lexicon, PhoneAlphabet::Base());
      std::size_t tokens = 0, oov = 0;
      for (const auto& record : manifest) {
        if (!record.transcript) continue;
        const auto result = TranscriptToPhones(*record.transcript, lexicon, OovPolicy::kSkip);
        tokens += result.n_tokens;
        oov += result.n_skipped;
      }
      if (oov > 0)
        warnings.push_back(fmt::format("{} of {} transcript tokens are out of vocabulary",
                                       oov, tokens));
    } catch (const ValidationError& e) {
      errors.push_back(e.what());
    }
  }

  for (const auto& message : errors) out << "error: " << message << '\n';
  for (const auto& message : warnings) out << "warning: " << message << '\n';
  out << fmt::format("{} utterances, {} errors, {} warnings\n", manifest.size(),
                     errors.size(), warnings.size());
  return errors.empty() ? kExitOk : kExitValidation;
}

int CmdSplit(const RunConfig& config, std::ostream& out) {
  const Manifest manifest = LoadFilteredManifest(config.manifest, config);
  const SplitPolicy policy = config.policy.value_or(kDefaultPolicy);
  const SplitPlan plan = MakeSplit(manifest, policy, config.seed);
  ValidateSplitPlan(plan, manifest);

  Manifest assigned = ApplySplit(manifest, plan);
  std::erase_if(assigned, [](const auto& r) { return r.split == Split::kUnassigned; });
  std::string summary = "speaker_id,n_enrollment,n_trial\n";
  std::size_t n_enroll = 0, n_trial = 0;
  for (const auto& [speaker, split] : plan.speakers) {
    summary += fmt::format("{},{},{}\n", speaker, split.enrollment.size(), split.trial.size());
    n_enroll += split.enrollment.size();
    n_trial += split.trial.size();
  }

  EnsureDirectory(config.out);
  WriteTextFile(config.out / "split.jsonl",
                Render([&](std::ostream& s) { WriteManifest(s, assigned); }));
  WriteTextFile(config.out / "split_summary.csv", summary);
  out << fmt::format("{}: {} speakers, {} enrollment, {} trial utterances\n",
                     FormatSplitPolicy(policy), plan.speakers.size(), n_enroll, n_trial);
  return kExitOk;
}

namespace {

int RunCompare(const RunConfig& config, std::ostream& out) {
  std::ifstream in(config.compare);
  if (!in) throw IoError(fmt::format("cannot open grid {}", config.compare.string()));
  nlohmann::json grid;
  try {
    grid = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(fmt::format("{}: {}", config.compare.string(), e.what()));
  }
  const fs::path base = config.compare.parent_path();
  const auto resolve = [&](const std::string& p) {
    const fs::path path(p);
    return path.is_absolute() ? path : base / path;
  };

  std::vector<CompareRow> rows;
  try {
    for (const auto& entry : grid.at("rows")) {
      CompareRow row;
      row.dataset = entry.at("dataset").get<std::string>();
      row.features = entry.at("features").get<std::string>();
      for (const char* column : {"original", "anonymized"}) {
        if (!entry.contains(column) || entry[column].is_null()) continue;
        const auto& cell = entry[column];
        const Evaluation evaluation =
            Evaluate(resolve(cell.at("manifest").get<std::string>()),
                     resolve(cell.at("embeddings").get<std::string>()), config);
        const double eer = GlobalEer(evaluation.pairs).eer;
        (std::string_view(column) == "original" ? row.original : row.anonymized) = eer;
      }
      rows.push_back(std::move(row));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(fmt::format("{}: {}", config.compare.string(), e.what()));
  }

  EnsureDirectory(config.out);
  WriteTextFile(config.out / "compare.txt", CompareText(rows));
  WriteTextFile(config.out / "compare.csv", CompareCsv(rows));
  out << CompareText(rows);
  return kExitOk;
}

}  // namespace

int CmdEer(const RunConfig& config, std::ostream& out) {
  if (!config.compare.empty()) return RunCompare(config, out);
  if (config.manifest.empty() || config.embeddings.empty())
    throw PreconditionError("eer needs --manifest and --embeddings (or --compare)");

  const Evaluation evaluation = Evaluate(config.manifest, config.embeddings, config);
  const EerSummary summary = Summarize(evaluation, config);

  EnsureDirectory(config.out);
  WriteTextFile(config.out / "eer.txt", EerText(summary));
  WriteTextFile(config.out / "eer.json", EerJson(summary));
  WriteTextFile(config.out / "speaker_eers.csv", SpeakerEerCsv(summary.speakers));
  WriteTextFile(config.out / "scores.csv",
                Render([&](std::ostream& s) { WriteScoreTable(s, evaluation.pairs); }));
  out << fmt::format("EER {:.2f} % ({} targets, {} nontargets, {} speakers)\n",
                     100.0 * summary.global.eer, summary.global.n_target,
                     summary.global.n_nontarget, summary.n_speakers);
  return kExitOk;
}

int CmdPhonestats(const RunConfig& config, std::ostream& out) {
  const Manifest manifest = LoadFilteredManifest(config.manifest, config);
  PhoneSource source = config.source;
  if (source == PhoneSource::kAuto)
    source = config.lexicon.empty() ? PhoneSource::kAlignment : PhoneSource::kTranscript;
  if (source == PhoneSource::kTranscript && config.lexicon.empty())
    throw PreconditionError("--source transcript needs --lexicon");

  PhonestatsSummary summary;
  summary.source = source == PhoneSource::kTranscript ? "transcript" : "alignment";
  summary.n_utterances = manifest.size();

  const PhoneAlphabet& alphabet = source == PhoneSource::kTranscript
                                      ? PhoneAlphabet::Base()
                                      : PhoneAlphabet::WithSilence();
  std::map<std::string, std::vector<PhoneSequence>> sequences;
  if (source == PhoneSource::kTranscript) {
    const Lexicon lexicon = LoadLexicon(config.lexicon, alphabet);
    for (const auto& record : manifest) {
      if (!record.transcript) {
        ++summary.n_without_source;
        continue;
      }
      G2pResult result;
      try {
        result = TranscriptToPhones(*record.transcript, lexicon, config.oov);
      } catch (const ValidationError& e) {
        throw ValidationError(fmt::format("utterance \"{}\": {}", record.utterance_id, e.what()));
      }
      summary.n_tokens += result.n_tokens;
      summary.n_oov += result.n_skipped;
      sequences[record.speaker_id].push_back(std::move(result.sequence));
    }
  } else {
    for (const auto& record : manifest) {
      if (!record.phones) {
        ++summary.n_without_source;
        continue;
      }
      sequences[record.speaker_id].push_back(AlignmentToSequence(*record.phones, alphabet));
    }
  }
  if (sequences.empty()) {
    throw PreconditionError(fmt::format("no utterance has a {} to count phones from",
                                        summary.source));
  }

  std::map<std::string, FrequencyVector> frequencies;
  for (const auto& [speaker, list] : sequences) {
    try {
      frequencies[speaker] = PhoneFrequencies(list, alphabet.size());
    } catch (const PreconditionError&) {
      throw PreconditionError(fmt::format("speaker \"{}\" has no phones", speaker));
    }
  }
  const SpeakerDistances distances = PairwiseDistances(frequencies);
  summary.distinctiveness = Distinctiveness(distances);

  EnsureDirectory(config.out);
  WriteTextFile(config.out / "phone_frequencies.csv", FrequencyCsv(frequencies, alphabet));
  WriteTextFile(config.out / "distances.csv", DistanceCsv(distances));
  WriteTextFile(config.out / "distinctiveness.csv",
                DistinctivenessCsv(summary.distinctiveness));

  if (!config.speaker_eers.empty()) {
    const auto eers = ReadSpeakerEers(config.speaker_eers);
    std::vector<double> x, y;
    for (const auto& [speaker, average] : summary.distinctiveness) {
      auto it = eers.find(speaker);
      if (it == eers.end()) continue;
      x.push_back(average);
      y.push_back(it->second);
    }
    try {
      summary.pearson = Pearson(x, y);
    } catch (const PreconditionError& e) {
      WriteTextFile(config.out / "phonestats.txt", PhonestatsText(summary));
      WriteTextFile(config.out / "phonestats.json", PhonestatsJson(summary));
      throw PreconditionError(fmt::format(
          "cannot correlate distinctiveness with EERs over {} speakers: {}", x.size(),
          e.what()));
    }
    summary.n_correlated = x.size();
  }
  WriteTextFile(config.out / "phonestats.txt", PhonestatsText(summary));
  WriteTextFile(config.out / "phonestats.json", PhonestatsJson(summary));
  out << PhonestatsText(summary);
  return kExitOk;
}

int CmdDurfeat(const RunConfig& config, std::ostream& out) {
  const Manifest manifest = LoadFilteredManifest(config.manifest, config);
  const std::string content = Render([&](std::ostream& s) {
    WriteRepresentations(s, manifest, PhoneAlphabet::WithSilence(), config.mode);
  });
  EnsureDirectory(config.out);
  WriteTextFile(config.out / "representations.jsonl", content);
  out << fmt::format("{} {} representations written\n", manifest.size(),
                     ModeName(config.mode));
  return kExitOk;
}

int CmdSegments(const RunConfig& config, std::ostream& out) {
  const SegmentTable table = LoadDemographics(config.demographics);
  {
    const auto missing = SpeakersMissingFromManifest(table, LoadManifest(config.manifest));
    if (!missing.empty()) {
      throw ValidationError(fmt::format(
          "demographics speaker \"{}\" is not in the manifest ({} such speakers)",
          missing.front(), missing.size()));
    }
  }
  std::vector<std::string> attributes = config.attributes;
  if (attributes.empty()) attributes = table.attributes();
  for (const auto& attribute : attributes) {
    if (!table.HasAttribute(attribute))
      throw PreconditionError(fmt::format("unknown attribute \"{}\"", attribute));
  }

  const Evaluation evaluation = Evaluate(config.manifest, config.embeddings, config);
  std::vector<SegmentReport> reports;
  for (const auto& attribute : attributes)
    reports.push_back(MakeSegmentReport(evaluation.pairs, table, attribute, config.min_speakers));

  EnsureDirectory(config.out);
  for (const auto& report : reports) {
    const std::string stem = "segments_" + SafeFileName(report.attribute);
    const std::vector<SegmentReport> one{report};
    WriteTextFile(config.out / (stem + ".csv"),
                  Render([&](std::ostream& s) { WriteSegmentCsv(s, one); }));
    WriteTextFile(config.out / (stem + ".json"),
                  Render([&](std::ostream& s) { WriteSegmentJson(s, one); }));
  }
  const std::string text = fmt::format("global EER {:.2f} %\n\n", 100.0 * GlobalEer(evaluation.pairs).eer) +
                           SegmentText(reports);
  WriteTextFile(config.out / "segments.txt", text);
  out << text;
  return kExitOk;
}

int CmdSynth(const RunConfig& config, std::ostream& out) {
  SynthSpec spec = config.synth;
  if (spec.scheme == MeanScheme::kSharedWithinGroups) {
    spec.groups.clear();
    if (config.group_sizes.empty()) {
      spec.groups.assign(spec.n_speakers, "all");
    } else {
      for (std::size_t g = 0; g < config.group_sizes.size(); ++g)
        for (std::size_t i = 0; i < config.group_sizes[g]; ++i)
          spec.groups.push_back(fmt::format("g{}", g));
      if (spec.groups.size() > spec.n_speakers) {
        throw PreconditionError(fmt::format("groups cover {} speakers but only {} exist",
                                            spec.groups.size(), spec.n_speakers));
      }
      // Everyone else keeps an individual mean.
      while (spec.groups.size() < spec.n_speakers)
        spec.groups.push_back(SynthSpeakerId(spec.groups.size(), spec.n_speakers));
    }
  } else if (!config.group_sizes.empty()) {
    throw PreconditionError("--groups needs --scheme shared");
  }

  const SynthCorpus corpus = GenerateSynthetic(spec);
  EnsureDirectory(config.out);
  WriteTextFile(config.out / "manifest.jsonl",
                Render([&](std::ostream& s) { WriteManifest(s, corpus.manifest); }));
  WriteTextFile(config.out / "embeddings.emb",
                Render([&](std::ostream& s) { WriteEmbeddings(s, corpus.embeddings); }));
  if (corpus.demographics) {
    WriteTextFile(config.out / "demographics.csv",
                  Render([&](std::ostream& s) { WriteDemographics(s, *corpus.demographics); }));
  }
  out << fmt::format("{} speakers x {} utterances, dim {}, sigma {}\n", spec.n_speakers,
                     spec.utterances_per_speaker, spec.dim, spec.noise_sigma);
  return kExitOk;
}

}  // namespace spkpriv::cli
