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
#include <set>
#include <unordered_map>

#include "fmt/format.h"
#include "spkpriv/corpus.h"
#include "spkpriv/error.h"
#include "spkpriv/random.h"

namespace spkpriv {

namespace {

std::vector<std::size_t> ParseCounts(std::string_view text, std::string_view whole) {
  std::vector<std::size_t> counts;
  while (true) {
    const auto comma = text.find(',');
    const std::string_view field = text.substr(0, comma);
    std::size_t value = 0;
    const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || end != field.data() + field.size() || field.empty())
      throw PreconditionError(fmt::format("bad split policy \"{}\"", whole));
    counts.push_back(value);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return counts;
}

void CheckPolicy(const SplitPolicy& policy) {
  if (const auto* fixed = std::get_if<FixedPolicy>(&policy)) {
    if (fixed->n_enroll == 0 || fixed->n_trial == 0)
      throw PreconditionError("fixed split policy needs positive counts");
    return;
  }
  const auto& capped = std::get<CappedPolicy>(policy);
  if (capped.n_enroll == 0 || capped.n_enroll >= capped.total) {
    throw PreconditionError(fmt::format(
        "capped split policy needs 0 < n_enroll < total (got {}, {})",
        capped.total, capped.n_enroll));
  }
  if (capped.even_below <= capped.n_enroll || capped.even_below > capped.total) {
    throw PreconditionError(fmt::format(
        "capped split policy needs n_enroll < even_below <= total (got {})",
        capped.even_below));
  }
}

// FNV-1a of the speaker id; seeds the speaker's own stream.
std::uint64_t HashId(std::string_view id) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : id) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SpeakerSplit SplitSpeaker(const std::string& speaker, std::vector<std::string> ids,
                          const SplitPolicy& policy, std::uint64_t seed) {
  const std::size_t n = ids.size();
  if (n < 2) {
    throw PreconditionError(fmt::format(
        "speaker \"{}\" has {} utterance(s); at least 2 are needed", speaker, n));
  }
  std::sort(ids.begin(), ids.end());
  Rng rng(SplitMix64(seed ^ HashId(speaker)));
  rng.Shuffle(ids);

  std::size_t n_enroll = 0;
  std::size_t n_keep = 0;
  if (const auto* fixed = std::get_if<FixedPolicy>(&policy)) {
    n_keep = fixed->n_enroll + fixed->n_trial;
    if (n < n_keep) {
      throw PreconditionError(fmt::format(
          "fixed:{},{} is infeasible for speaker \"{}\" ({} utterances)",
          fixed->n_enroll, fixed->n_trial, speaker, n));
    }
    n_enroll = fixed->n_enroll;
  } else {
    const auto& capped = std::get<CappedPolicy>(policy);
    if (n < capped.even_below) {
      n_keep = n;
      n_enroll = n / 2;
    } else {
      n_keep = std::min(n, capped.total);
      n_enroll = capped.n_enroll;
    }
  }

  SpeakerSplit split;
  split.enrollment.assign(ids.begin(), ids.begin() + n_enroll);
  split.trial.assign(ids.begin() + n_enroll, ids.begin() + n_keep);
  std::sort(split.enrollment.begin(), split.enrollment.end());
  std::sort(split.trial.begin(), split.trial.end());
  return split;
}

}  // namespace

SplitPolicy ParseSplitPolicy(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw PreconditionError(fmt::format("bad split policy \"{}\"", text));
  const std::string_view kind = text.substr(0, colon);
  const auto counts = ParseCounts(text.substr(colon + 1), text);
  SplitPolicy policy;
  if (kind == "fixed" && counts.size() == 2) {
    policy = FixedPolicy{counts[0], counts[1]};
  } else if (kind == "capped" && (counts.size() == 2 || counts.size() == 3)) {
    policy = CappedPolicy{counts[0], counts[1],
                          counts.size() == 3 ? counts[2] : counts[0] / 2};
  } else {
    throw PreconditionError(fmt::format(
        "bad split policy \"{}\" (expected fixed:E,T or capped:TOTAL,E[,EVEN_BELOW])",
        text));
  }
  CheckPolicy(policy);
  return policy;
}

std::string FormatSplitPolicy(const SplitPolicy& policy) {
  if (const auto* fixed = std::get_if<FixedPolicy>(&policy))
    return fmt::format("fixed:{},{}", fixed->n_enroll, fixed->n_trial);
  const auto& capped = std::get<CappedPolicy>(policy);
  return fmt::format("capped:{},{},{}", capped.total, capped.n_enroll,
                     capped.even_below);
}

SplitPlan MakeSplit(const Manifest& manifest, const SplitPolicy& policy,
                    std::uint64_t seed) {
  if (manifest.empty()) throw PreconditionError("cannot split an empty manifest");
  CheckPolicy(policy);
  std::map<std::string, std::vector<std::string>> by_speaker;
  for (const auto& record : manifest)
    by_speaker[record.speaker_id].push_back(record.utterance_id);

  SplitPlan plan;
  for (auto& [speaker, ids] : by_speaker)
    plan.speakers.emplace(speaker, SplitSpeaker(speaker, std::move(ids), policy, seed));
  return plan;
}

SplitPlan PlanFromManifest(const Manifest& manifest) {
  SplitPlan plan;
  for (const auto& record : manifest) {
    if (record.split == Split::kUnassigned) continue;
    auto& split = plan.speakers[record.speaker_id];
    (record.split == Split::kTrial ? split.trial : split.enrollment)
        .push_back(record.utterance_id);
  }
  for (auto& [speaker, split] : plan.speakers) {
    std::sort(split.enrollment.begin(), split.enrollment.end());
    std::sort(split.trial.begin(), split.trial.end());
  }
  return plan;
}

Manifest ApplySplit(const Manifest& manifest, const SplitPlan& plan) {
  std::unordered_map<std::string_view, Split> assignment;
  for (const auto& [speaker, split] : plan.speakers) {
    for (const auto& id : split.enrollment) assignment[id] = Split::kEnrollment;
    for (const auto& id : split.trial) assignment[id] = Split::kTrial;
  }
  Manifest out = manifest;
  for (auto& record : out) {
    auto it = assignment.find(record.utterance_id);
    record.split = it == assignment.end() ? Split::kUnassigned : it->second;
  }
  return out;
}

bool HasSplitAnnotations(const Manifest& manifest) {
  return std::any_of(manifest.begin(), manifest.end(), [](const auto& record) {
    return record.split != Split::kUnassigned;
  });
}

void ValidateSplitPlan(const SplitPlan& plan, const Manifest& manifest) {
  std::unordered_map<std::string_view, std::string_view> speaker_of;
  for (const auto& record : manifest) speaker_of[record.utterance_id] = record.speaker_id;

  std::set<std::string_view> used;
  for (const auto& [speaker, split] : plan.speakers) {
    for (const auto* list : {&split.enrollment, &split.trial}) {
      for (const auto& id : *list) {
        auto it = speaker_of.find(id);
        if (it == speaker_of.end()) {
          throw ValidationError(
              fmt::format("split lists unknown utterance \"{}\"", id));
        }
        if (it->second != speaker) {
          throw ValidationError(fmt::format(
              "split lists utterance \"{}\" under speaker \"{}\" but it belongs "
              "to \"{}\"",
              id, speaker, it->second));
        }
        if (!used.insert(id).second) {
          throw ValidationError(fmt::format(
              "utterance \"{}\" appears in more than one split list", id));
        }
      }
    }
  }
}

}  // namespace spkpriv
