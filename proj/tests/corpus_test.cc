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
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "fmt/format.h"
#include "gtest/gtest.h"
#include "spkpriv/corpus.h"
#include "spkpriv/error.h"
#include "test_util.h"

namespace spkpriv {
namespace {

using ::spkpriv::testing::EncodeEmb1;

UtteranceRecord Record(std::string id, std::string speaker, double duration) {
  UtteranceRecord r;
  r.utterance_id = std::move(id);
  r.speaker_id = std::move(speaker);
  r.duration_seconds = duration;
  return r;
}

Manifest SpeakerWith(const std::string& speaker, std::size_t n) {
  Manifest m;
  for (std::size_t i = 0; i < n; ++i)
    m.push_back(Record(fmt::format("{}-{:03d}", speaker, i), speaker, 5.0));
  return m;
}

std::string ThrowMessage(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

// ---------------------------------------------------------------- manifest

TEST(Manifest, ParsesThreeLines) {
  std::istringstream in(
      R"({"utterance_id":"u1","speaker_id":"s1","duration_seconds":2.5})" "\n"
      R"({"utterance_id":"u2","speaker_id":"s1","duration_seconds":3,"transcript":"hi","embedding_row":1})" "\n"
      R"({"utterance_id":"u3","speaker_id":"s2","duration_seconds":4,"phones":[["HH",3],["AY1",7.5]]})" "\n");
  const Manifest m = ReadManifest(in, "m");
  ASSERT_EQ(m.size(), 3u);
  EXPECT_EQ(m[0].utterance_id, "u1");
  EXPECT_FALSE(m[0].transcript.has_value());
  EXPECT_EQ(m[1].transcript, "hi");
  EXPECT_EQ(m[1].embedding_row, 1u);
  ASSERT_TRUE(m[2].phones.has_value());
  EXPECT_EQ((*m[2].phones)[1], (AlignedPhone{"AY1", 7.5}));
}

TEST(Manifest, DuplicateIdIsNamed) {
  std::istringstream in(
      R"({"utterance_id":"u1","speaker_id":"s1","duration_seconds":2})" "\n"
      R"({"utterance_id":"u1","speaker_id":"s2","duration_seconds":3})" "\n");
  const std::string message = ThrowMessage([&] { ReadManifest(in, "m"); });
  EXPECT_NE(message.find("\"u1\""), std::string::npos) << message;
  EXPECT_NE(message.find("m:2"), std::string::npos) << message;
}

TEST(Manifest, EmptyFileIsEmptyManifest) {
  std::istringstream in("");
  EXPECT_TRUE(ReadManifest(in, "m").empty());
}

TEST(Manifest, RejectsNonpositiveDuration) {
  for (const char* d : {"-1", "0"}) {
    std::istringstream in(fmt::format(
        R"({{"utterance_id":"u1","speaker_id":"s1","duration_seconds":{}}})", d));
    EXPECT_THROW(ReadManifest(in, "m"), ValidationError) << d;
  }
}

TEST(Manifest, MalformedLineReportsLineNumber) {
  std::istringstream in(
      R"({"utterance_id":"u1","speaker_id":"s1","duration_seconds":2})" "\n"
      "\n"
      "{not json\n");
  const std::string message = ThrowMessage([&] { ReadManifest(in, "corpus.jsonl"); });
  EXPECT_NE(message.find("corpus.jsonl:3"), std::string::npos) << message;
}

TEST(Manifest, LenientParseCollectsEveryProblem) {
  std::istringstream in(
      R"({"utterance_id":"u1","speaker_id":"s1","duration_seconds":2})" "\n"
      R"({"utterance_id":"u1","speaker_id":"s1","duration_seconds":2})" "\n"
      R"({"utterance_id":"u2","speaker_id":"s1","duration_seconds":-2})" "\n"
      R"({"utterance_id":"u3","duration_seconds":2})" "\n"
      R"({"utterance_id":"u4","speaker_id":"s1","duration_seconds":2,"embedding_row":-1})" "\n"
      R"({"utterance_id":"u5","speaker_id":"s1","duration_seconds":2,"phones":[["AA",0]]})" "\n");
  const ManifestParse parsed = ParseManifest(in, "m");
  EXPECT_EQ(parsed.records.size(), 1u);
  EXPECT_EQ(parsed.problems.size(), 5u);
}

TEST(Manifest, RoundTripIsFieldForField) {
  Manifest m;
  m.push_back(Record("a", "s1", 2.000000000000001));
  m.push_back(Record("b\"q", "s2", 1e-3));
  m[1].transcript = "It's \"quoted\", ok\n";
  m[1].phones = std::vector<AlignedPhone>{{"SIL", 4}, {"AH0", 0.5}};
  m[1].embedding_row = 7;
  m[1].split = Split::kEnrollment;
  m.push_back(Record("c", "s1", 30));
  m[2].split = Split::kTrial;
  m[2].transcript = "";

  std::ostringstream out;
  WriteManifest(out, m);
  std::istringstream in(out.str());
  EXPECT_EQ(ReadManifest(in, "rt"), m);

  std::ostringstream again;
  WriteManifest(again, ReadManifest(*std::make_unique<std::istringstream>(out.str()), "rt"));
  EXPECT_EQ(again.str(), out.str());
}

TEST(Manifest, LoadMissingFileIsIoError) {
  EXPECT_THROW(LoadManifest("/nonexistent/dir/manifest.jsonl"), IoError);
}

// -------------------------------------------------------------- embeddings

TEST(Embeddings, DecodesTwoByThree) {
  std::istringstream in(EncodeEmb1(2, 3, {1, 2, 3, -4, 5.5f, 6}));
  const EmbeddingMatrix e = ReadEmbeddings(in);
  EXPECT_EQ(e.rows(), 2u);
  EXPECT_EQ(e.dim(), 3u);
  EXPECT_EQ(e.Row(1)[0], -4.0f);
  EXPECT_EQ(e.Row(1)[1], 5.5f);
}

TEST(Embeddings, BadMagic) {
  std::istringstream in(EncodeEmb1(1, 1, {1}, "XXXX"));
  const std::string message = ThrowMessage([&] { ReadEmbeddings(in); });
  EXPECT_NE(message.find("magic"), std::string::npos) << message;
}

TEST(Embeddings, TruncatedPayload) {
  std::string bytes = EncodeEmb1(2, 3, {1, 2, 3, 4, 5, 6});
  bytes.resize(bytes.size() - 2);
  std::istringstream in(bytes);
  const std::string message = ThrowMessage([&] { ReadEmbeddings(in); });
  EXPECT_NE(message.find("truncated"), std::string::npos) << message;
}

TEST(Embeddings, TrailingBytesRejected) {
  std::istringstream in(EncodeEmb1(1, 2, {1, 2}) + "x");
  EXPECT_THROW(ReadEmbeddings(in), ValidationError);
}

TEST(Embeddings, ZeroRowReportsIndex) {
  std::istringstream in(EncodeEmb1(3, 2, {1, 0, 0, 0, 0, 1}));
  const std::string message = ThrowMessage([&] { ReadEmbeddings(in); });
  EXPECT_NE(message.find("row 1"), std::string::npos) << message;

  std::istringstream raw_in(EncodeEmb1(3, 2, {1, 0, 0, 0, 0, 1}));
  EXPECT_EQ(NonPositiveNormRows(ReadRawEmbeddings(raw_in)), std::vector<std::size_t>{1});
}

TEST(Embeddings, EmptyMatrixIsValid) {
  std::istringstream in(EncodeEmb1(0, 16, {}));
  const EmbeddingMatrix e = ReadEmbeddings(in);
  EXPECT_EQ(e.rows(), 0u);
  EXPECT_EQ(e.dim(), 16u);
}

TEST(Embeddings, WriterIsBitExact) {
  const std::vector<float> values{1.0f, -0.0f, 3.14159274f, 1e-38f,
                                  std::numeric_limits<float>::denorm_min(), 2.0f};
  std::ostringstream out;
  WriteEmbeddings(out, EmbeddingMatrix(3, values));
  EXPECT_EQ(out.str(), EncodeEmb1(2, 3, values));
  std::istringstream in(out.str());
  const EmbeddingMatrix back = ReadEmbeddings(in);
  for (std::size_t i = 0; i < values.size(); ++i) {
    EXPECT_EQ(std::bit_cast<std::uint32_t>(back.values()[i]),
              std::bit_cast<std::uint32_t>(values[i]));
  }
}

// -------------------------------------------------------------- durations

TEST(FilterByDuration, KeepsOnlyInsideBounds) {
  const Manifest m{Record("a", "s", 1.5), Record("b", "s", 2.0), Record("c", "s", 31.0)};
  const Manifest kept = FilterByDuration(m, 2, 30);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0].utterance_id, "b");
}

TEST(FilterByDuration, InfiniteBoundsAreIdentity) {
  const Manifest m{Record("a", "s", 1e-9), Record("b", "s", 2.0), Record("c", "s", 1e9)};
  EXPECT_EQ(FilterByDuration(m, 0, std::numeric_limits<double>::infinity()), m);
  EXPECT_TRUE(FilterByDuration({}, 2, 30).empty());
}

TEST(FilterByDuration, RejectsEmptyInterval) {
  EXPECT_THROW(FilterByDuration({}, 3, 3), PreconditionError);
  EXPECT_THROW(FilterByDuration({}, 4, 3), PreconditionError);
}

TEST(FilterByDuration, IdempotentUnderWidening) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> d(0.1, 40.0);
  for (int trial = 0; trial < 200; ++trial) {
    Manifest m;
    for (int i = 0; i < 50; ++i) m.push_back(Record(std::to_string(i), "s", d(gen)));
    double a = d(gen), b = d(gen);
    if (a > b) std::swap(a, b);
    if (a == b) continue;
    const Manifest once = FilterByDuration(m, a, b);
    const double wa = a - d(gen), wb = b + d(gen);
    EXPECT_EQ(FilterByDuration(once, wa, wb), once);
    EXPECT_EQ(FilterByDuration(once, a, b), once);
  }
}

// ------------------------------------------------------------------ splits

TEST(SplitPolicyText, ParsesAndFormats) {
  EXPECT_EQ(FormatSplitPolicy(ParseSplitPolicy("capped:60,20")), "capped:60,20,30");
  EXPECT_EQ(FormatSplitPolicy(ParseSplitPolicy("capped:50,10,12")), "capped:50,10,12");
  EXPECT_EQ(FormatSplitPolicy(ParseSplitPolicy("fixed:20,20")), "fixed:20,20");
  for (const char* bad : {"", "fixed", "fixed:0,20", "capped:60", "capped:20,20",
                          "capped:60,20,70", "capped:60,x", "random:1,2", "fixed:1,2,3"}) {
    EXPECT_THROW(ParseSplitPolicy(bad), PreconditionError) << bad;
  }
}

TEST(MakeSplit, Capped78Gives20And40) {
  const SplitPlan plan = MakeSplit(SpeakerWith("s", 78), CappedPolicy{60, 20, 30}, 1);
  EXPECT_EQ(plan.speakers.at("s").enrollment.size(), 20u);
  EXPECT_EQ(plan.speakers.at("s").trial.size(), 40u);
}

TEST(MakeSplit, Capped25SplitsEvenlyOddToTrial) {
  const SplitPlan plan = MakeSplit(SpeakerWith("s", 25), CappedPolicy{60, 20, 30}, 1);
  EXPECT_EQ(plan.speakers.at("s").enrollment.size(), 12u);
  EXPECT_EQ(plan.speakers.at("s").trial.size(), 13u);
}

TEST(MakeSplit, CappedCountsAcrossSizes) {
  for (std::size_t n = 2; n <= 90; ++n) {
    const SplitPlan plan = MakeSplit(SpeakerWith("s", n), CappedPolicy{60, 20, 30}, n);
    const auto& s = plan.speakers.at("s");
    if (n < 30) {
      EXPECT_EQ(s.enrollment.size(), n / 2) << n;
      EXPECT_EQ(s.trial.size(), n - n / 2) << n;
    } else {
      EXPECT_EQ(s.enrollment.size(), 20u) << n;
      EXPECT_EQ(s.trial.size(), std::min<std::size_t>(n, 60) - 20) << n;
    }
  }
}

TEST(MakeSplit, Fixed40Gives20And20) {
  const SplitPlan plan = MakeSplit(SpeakerWith("s", 40), FixedPolicy{20, 20}, 3);
  EXPECT_EQ(plan.speakers.at("s").enrollment.size(), 20u);
  EXPECT_EQ(plan.speakers.at("s").trial.size(), 20u);
}

TEST(MakeSplit, FixedInfeasibleIsError) {
  Manifest m = SpeakerWith("a", 40);
  const Manifest b = SpeakerWith("b", 39);
  m.insert(m.end(), b.begin(), b.end());
  const std::string message = ThrowMessage([&] { MakeSplit(m, FixedPolicy{20, 20}, 0); });
  EXPECT_NE(message.find("\"b\""), std::string::npos) << message;
}

TEST(MakeSplit, SingleUtteranceSpeakerIsError) {
  Manifest m = SpeakerWith("a", 10);
  m.push_back(Record("lonely", "b", 3));
  EXPECT_THROW(MakeSplit(m, CappedPolicy{}, 0), PreconditionError);
  EXPECT_THROW(MakeSplit({}, CappedPolicy{}, 0), PreconditionError);
}

TEST(MakeSplit, DisjointCompleteAndDeterministic) {
  std::mt19937_64 gen(5);
  std::uniform_int_distribution<std::size_t> count(2, 120);
  for (int trial = 0; trial < 30; ++trial) {
    Manifest m;
    for (int s = 0; s < 6; ++s) {
      const Manifest one = SpeakerWith(fmt::format("spk{}", s), count(gen));
      m.insert(m.end(), one.begin(), one.end());
    }
    std::shuffle(m.begin(), m.end(), gen);
    const std::uint64_t seed = gen();
    const SplitPlan plan = MakeSplit(m, CappedPolicy{60, 20, 30}, seed);
    EXPECT_NO_THROW(ValidateSplitPlan(plan, m));
    EXPECT_EQ(MakeSplit(m, CappedPolicy{60, 20, 30}, seed), plan);

    std::set<std::string> seen;
    for (const auto& [speaker, split] : plan.speakers) {
      for (const auto& id : split.enrollment) EXPECT_TRUE(seen.insert(id).second) << id;
      for (const auto& id : split.trial) EXPECT_TRUE(seen.insert(id).second) << id;
      EXPECT_TRUE(std::is_sorted(split.enrollment.begin(), split.enrollment.end()));
      EXPECT_TRUE(std::is_sorted(split.trial.begin(), split.trial.end()));
    }
    // Manifest order does not matter.
    Manifest reordered = m;
    std::reverse(reordered.begin(), reordered.end());
    EXPECT_EQ(MakeSplit(reordered, CappedPolicy{60, 20, 30}, seed), plan);
  }
}

TEST(MakeSplit, SeedChangesSelection) {
  const Manifest m = SpeakerWith("s", 100);
  EXPECT_NE(MakeSplit(m, CappedPolicy{}, 1), MakeSplit(m, CappedPolicy{}, 2));
}

TEST(SplitPlan, AnnotationRoundTrip) {
  const Manifest m = SpeakerWith("s", 50);
  const SplitPlan plan = MakeSplit(m, CappedPolicy{}, 9);
  const Manifest annotated = ApplySplit(m, plan);
  EXPECT_TRUE(HasSplitAnnotations(annotated));
  EXPECT_FALSE(HasSplitAnnotations(m));
  EXPECT_EQ(PlanFromManifest(annotated), plan);
}

TEST(SplitPlan, ValidationCatchesOverlapAndUnknownIds) {
  const Manifest m = SpeakerWith("s", 4);
  SplitPlan overlap;
  overlap.speakers["s"] = {{"s-000", "s-001"}, {"s-001", "s-002"}};
  EXPECT_THROW(ValidateSplitPlan(overlap, m), ValidationError);
  SplitPlan unknown;
  unknown.speakers["s"] = {{"s-000"}, {"nope"}};
  EXPECT_THROW(ValidateSplitPlan(unknown, m), ValidationError);
  SplitPlan wrong_speaker;
  wrong_speaker.speakers["t"] = {{"s-000"}, {"s-001"}};
  EXPECT_THROW(ValidateSplitPlan(wrong_speaker, m), ValidationError);
}

// ------------------------------------------------------------ demographics

TEST(Demographics, ParsesQuotedCsv) {
  std::istringstream in(
      "\xEF\xBB\xBFspeaker_id,accent,age\r\n"
      "s1,Irish,30-39\r\n"
      "s2,\"Scottish, Highland\",\r\n"
      "s3, \"a \"\"quoted\"\" one\" ,40-49\n");
  const SegmentTable t = ReadDemographics(in, "d");
  EXPECT_EQ(t.attributes(), (std::vector<std::string>{"accent", "age"}));
  EXPECT_EQ(t.speakers(), (std::vector<std::string>{"s1", "s2", "s3"}));
  EXPECT_EQ(t.Value("accent", "s2"), "Scottish, Highland");
  EXPECT_EQ(t.Value("age", "s2"), std::nullopt);
  EXPECT_EQ(t.Value("accent", "s3"), "a \"quoted\" one");
  EXPECT_EQ(t.Value("accent", "nobody"), std::nullopt);
}

TEST(Demographics, Errors) {
  std::istringstream bad_header("speaker,accent\ns1,x\n");
  EXPECT_THROW(ReadDemographics(bad_header, "d"), ValidationError);
  std::istringstream short_row("speaker_id,accent\ns1\n");
  EXPECT_THROW(ReadDemographics(short_row, "d"), ValidationError);
  std::istringstream dup("speaker_id,accent\ns1,a\ns1,b\n");
  EXPECT_THROW(ReadDemographics(dup, "d"), ValidationError);
}

TEST(Demographics, RoundTripAndManifestCheck) {
  SegmentTable t;
  t.AddAttribute("accent");
  t.Set("accent", "s1", "Irish");
  t.Set("accent", "s2", "with, comma");
  t.AddSpeaker("s9");
  std::ostringstream out;
  WriteDemographics(out, t);
  std::istringstream in(out.str());
  const SegmentTable back = ReadDemographics(in, "d");
  EXPECT_EQ(back.speakers(), t.speakers());
  EXPECT_EQ(back.Value("accent", "s2"), "with, comma");
  EXPECT_EQ(back.Value("accent", "s9"), std::nullopt);

  const Manifest m{Record("u1", "s1", 3), Record("u2", "s2", 3)};
  EXPECT_EQ(SpeakersMissingFromManifest(back, m), std::vector<std::string>{"s9"});
}

}  // namespace
}  // namespace spkpriv
