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
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "oracles.h"
#include "spkpriv/error.h"
#include "spkpriv/phonefeat.h"
#include "spkpriv/phones.h"
#include "test_util.h"

namespace spkpriv {
namespace {

using ::spkpriv::testing::RandomSequence;

std::size_t Phone(const char* label) { return *PhoneAlphabet::Base().Index(label); }

std::vector<double> RandomNonnegative(std::mt19937_64& gen, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::bernoulli_distribution zero(0.3);
  std::vector<double> v(n);
  for (auto& x : v) x = zero(gen) ? 0.0 : u(gen);
  v[gen() % n] += 0.5;
  return v;
}

// -------------------------------------------------------------- frequencies

TEST(PhoneFrequencies, CountsAndNormalizes) {
  const std::vector<PhoneSequence> seqs{
      {{Phone("AH"), Phone("AH"), Phone("AY"), Phone("B")}, std::nullopt}};
  const FrequencyVector f = PhoneFrequencies(seqs, 39);
  ASSERT_EQ(f.size(), 39u);
  EXPECT_EQ(f[Phone("AH")], 0.5);
  EXPECT_EQ(f[Phone("AY")], 0.25);
  EXPECT_EQ(f[Phone("B")], 0.25);
  EXPECT_EQ(std::count(f.begin(), f.end(), 0.0), 36);
}

TEST(PhoneFrequencies, SinglePhone) {
  const std::vector<PhoneSequence> seqs{{{Phone("K")}, std::nullopt}};
  const FrequencyVector f = PhoneFrequencies(seqs, 39);
  EXPECT_EQ(f[Phone("K")], 1.0);
}

TEST(PhoneFrequencies, NoPhonesIsError) {
  EXPECT_THROW(PhoneFrequencies({}, 39), PreconditionError);
  const std::vector<PhoneSequence> empty(3);
  EXPECT_THROW(PhoneFrequencies(empty, 39), PreconditionError);
  const std::vector<PhoneSequence> out_of_range{{{39}, std::nullopt}};
  EXPECT_THROW(PhoneFrequencies(out_of_range, 39), ValidationError);
}

TEST(PhoneFrequencies, SumsToOneAndIgnoresOrder) {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<PhoneSequence> seqs;
    for (int i = 0; i < 1 + trial % 7; ++i)
      seqs.push_back(RandomSequence<PhoneSequence>(gen, 40, 60));
    seqs.push_back({{static_cast<std::size_t>(trial % 40)}, std::vector<double>{1}});
    const FrequencyVector f = PhoneFrequencies(seqs, 40);
    EXPECT_NEAR(std::accumulate(f.begin(), f.end(), 0.0), 1.0, 1e-9);
    EXPECT_TRUE(std::all_of(f.begin(), f.end(), [](double x) { return x >= 0.0; }));

    // Direct count oracle.
    std::vector<double> counts(40, 0.0);
    double total = 0.0;
    for (const auto& s : seqs)
      for (std::size_t p : s.phones) counts[p] += 1, total += 1;
    for (std::size_t i = 0; i < 40; ++i) EXPECT_DOUBLE_EQ(f[i], counts[i] / total);

    std::shuffle(seqs.begin(), seqs.end(), gen);
    EXPECT_EQ(PhoneFrequencies(seqs, 40), f);
  }
}

// -------------------------------------------------------------- distances

TEST(CosineDistance, Examples) {
  const std::vector<double> a{0.5, 0.5, 0.0}, b{1.0, 0.0, 0.0}, c{0.0, 0.0, 2.0};
  EXPECT_EQ(CosineDistance(a, a), 0.0);
  EXPECT_DOUBLE_EQ(CosineDistance(b, c), 1.0);
  EXPECT_NEAR(CosineDistance(a, b), 1.0 - 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(CosineDistance, Errors) {
  const std::vector<double> zero{0, 0}, one{1, 0}, three{1, 0, 0};
  EXPECT_THROW(CosineDistance(zero, one), PreconditionError);
  EXPECT_THROW(CosineDistance(one, three), PreconditionError);
}

TEST(CosineDistance, SymmetricBoundedMatchesOracle) {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 1 + gen() % 40;
    const auto a = RandomNonnegative(gen, n), b = RandomNonnegative(gen, n);
    const double ab = CosineDistance(a, b);
    EXPECT_EQ(ab, CosineDistance(b, a));
    EXPECT_EQ(CosineDistance(a, a), 0.0);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0);
    EXPECT_NEAR(ab, 1.0 - oracle::Cosine(a, b), 1e-12);
  }
}

TEST(Distinctiveness, IdenticalVectorsAreZero) {
  const FrequencyVector v{0.2, 0.3, 0.5};
  const auto d = Distinctiveness(std::map<std::string, FrequencyVector>{{"a", v}, {"b", v}, {"c", v}});
  for (const auto& [speaker, value] : d) EXPECT_EQ(value, 0.0) << speaker;
}

TEST(Distinctiveness, OrthogonalOutlier) {
  const std::map<std::string, FrequencyVector> vectors{
      {"a", {0.5, 0.5, 0.0}}, {"b", {0.5, 0.5, 0.0}}, {"odd", {0.0, 0.0, 1.0}}};
  const auto d = Distinctiveness(vectors);
  EXPECT_DOUBLE_EQ(d.at("odd"), 1.0);
  EXPECT_DOUBLE_EQ(d.at("a"), 0.5);
  EXPECT_DOUBLE_EQ(d.at("b"), 0.5);
}

TEST(Distinctiveness, NeedsTwoSpeakers) {
  EXPECT_THROW(Distinctiveness(std::map<std::string, FrequencyVector>{{"a", {1.0}}}),
               PreconditionError);
}

TEST(Distinctiveness, MeanOverOtherSpeakers) {
  std::mt19937_64 gen(4);
  std::map<std::string, FrequencyVector> vectors;
  for (int s = 0; s < 9; ++s) vectors["s" + std::to_string(s)] = RandomNonnegative(gen, 39);
  const SpeakerDistances m = PairwiseDistances(vectors);
  ASSERT_EQ(m.speakers.size(), 9u);
  const auto d = Distinctiveness(vectors);
  for (std::size_t i = 0; i < 9; ++i) {
    EXPECT_EQ(m.at(i, i), 0.0);
    double sum = 0.0;
    for (std::size_t j = 0; j < 9; ++j) {
      EXPECT_EQ(m.at(i, j), m.at(j, i));
      if (i != j) sum += 1.0 - oracle::Cosine(vectors[m.speakers[i]], vectors[m.speakers[j]]);
    }
    EXPECT_NEAR(d.at(m.speakers[i]), sum / 8.0, 1e-12);
  }
}

// ------------------------------------------------------------------ pearson

TEST(Pearson, Examples) {
  const std::vector<double> x{1, 2, 3, 5, 8}, neg{-1, -2, -3, -5, -8};
  EXPECT_NEAR(Pearson(x, x), 1.0, 1e-15);
  EXPECT_NEAR(Pearson(x, neg), -1.0, 1e-15);
}

TEST(Pearson, Errors) {
  const std::vector<double> x{1, 2, 3}, flat{2, 2, 2}, one{1}, two{1, 2};
  EXPECT_THROW(Pearson(x, flat), PreconditionError);
  EXPECT_THROW(Pearson(flat, x), PreconditionError);
  EXPECT_THROW(Pearson(one, one), PreconditionError);
  EXPECT_THROW(Pearson(x, two), PreconditionError);
}

TEST(Pearson, MatchesOracleAndAffineInvariance) {
  std::mt19937_64 gen(17);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> scale(0.01, 100.0), shift(-50.0, 50.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + gen() % 60;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = normal(gen);
      y[i] = 0.4 * x[i] + normal(gen);
    }
    const double r = Pearson(x, y);
    EXPECT_NEAR(r, oracle::Pearson(x, y), 1e-12);
    EXPECT_LE(std::abs(r), 1.0);
    const double a = scale(gen), b = shift(gen);
    std::vector<double> ax(n);
    std::transform(x.begin(), x.end(), ax.begin(), [&](double v) { return a * v + b; });
    EXPECT_NEAR(Pearson(ax, y), r, 1e-9);
    EXPECT_NEAR(Pearson(x, ax), 1.0, 1e-9);
  }
}

// -------------------------------------------------------- duration matrix

TEST(DurationMatrix, WeightedExample) {
  const PhoneSequence seq{{0, 1}, std::vector<double>{3, 2}};
  const DurationRepresentation r = DurationMatrix(seq, 3, RepresentationMode::kWeighted);
  ASSERT_EQ(r.rows(), 3u);
  ASSERT_EQ(r.cols(), 2u);
  EXPECT_EQ(std::vector<double>(r.Column(0).begin(), r.Column(0).end()),
            (std::vector<double>{3, 0, 0}));
  EXPECT_EQ(std::vector<double>(r.Column(1).begin(), r.Column(1).end()),
            (std::vector<double>{0, 2, 0}));
}

TEST(DurationMatrix, IndicatorExample) {
  const PhoneSequence seq{{0, 1}, std::vector<double>{3, 2}};
  const DurationRepresentation r = DurationMatrix(seq, 3, RepresentationMode::kIndicator);
  EXPECT_EQ(std::vector<double>(r.Column(0).begin(), r.Column(0).end()),
            (std::vector<double>{1, 0, 0}));
  EXPECT_EQ(std::vector<double>(r.Column(1).begin(), r.Column(1).end()),
            (std::vector<double>{0, 1, 0}));
  // Indicator mode does not need durations.
  EXPECT_EQ(DurationMatrix({{0, 1}, std::nullopt}, 3, RepresentationMode::kIndicator), r);
}

TEST(DurationMatrix, EmptySequence) {
  const DurationRepresentation r =
      DurationMatrix({{}, std::vector<double>{}}, 40, RepresentationMode::kWeighted);
  EXPECT_EQ(r.rows(), 40u);
  EXPECT_EQ(r.cols(), 0u);
}

TEST(DurationMatrix, Errors) {
  EXPECT_THROW(DurationMatrix({{3}, std::vector<double>{1}}, 3, RepresentationMode::kWeighted),
               ValidationError);
  EXPECT_THROW(DurationMatrix({{0}, std::vector<double>{0}}, 3, RepresentationMode::kWeighted),
               ValidationError);
  EXPECT_THROW(DurationMatrix({{0}, std::vector<double>{-1}}, 3, RepresentationMode::kWeighted),
               ValidationError);
  EXPECT_THROW(DurationMatrix({{0, 1}, std::vector<double>{1}}, 3, RepresentationMode::kWeighted),
               ValidationError);
  EXPECT_THROW(DurationMatrix({{0}, std::nullopt}, 3, RepresentationMode::kWeighted),
               PreconditionError);
}

TEST(DurationMatrix, SparseRoundTrip) {
  std::mt19937_64 gen(2);
  for (int trial = 0; trial < 300; ++trial) {
    const auto seq = RandomSequence<PhoneSequence>(gen, 40, 50);
    for (auto mode : {RepresentationMode::kWeighted, RepresentationMode::kIndicator}) {
      const DurationRepresentation dense = DurationMatrix(seq, 40, mode);
      const RepresentationRecord sparse = ToSparse("u", mode, dense);
      EXPECT_EQ(sparse.phones, seq.phones);
      EXPECT_EQ(ToDense(sparse, 40), dense);
    }
  }
}

TEST(DurationMatrix, ModeNames) {
  EXPECT_EQ(ParseRepresentationMode("weighted"), RepresentationMode::kWeighted);
  EXPECT_EQ(ParseRepresentationMode("indicator"), RepresentationMode::kIndicator);
  EXPECT_EQ(ModeName(RepresentationMode::kIndicator), "indicator");
  EXPECT_THROW(ParseRepresentationMode("binary"), PreconditionError);
}

// ------------------------------------------------------------------- export

Manifest AlignedManifest() {
  Manifest m(2);
  m[0].utterance_id = "u1";
  m[0].speaker_id = "s";
  m[0].duration_seconds = 1;
  m[0].phones = std::vector<AlignedPhone>{{"SIL", 12}, {"HH", 3}, {"AH0", 2.25}, {"SIL", 7}};
  m[1].utterance_id = "u2";
  m[1].speaker_id = "s";
  m[1].duration_seconds = 1;
  m[1].phones = std::vector<AlignedPhone>{{"ZH", 0.1}};
  return m;
}

TEST(Representations, ExportRoundTrips) {
  for (auto mode : {RepresentationMode::kWeighted, RepresentationMode::kIndicator}) {
    std::ostringstream out;
    WriteRepresentations(out, AlignedManifest(), PhoneAlphabet::WithSilence(), mode);
    std::istringstream in(out.str());
    const auto records = ReadRepresentations(in, "r");
    ASSERT_EQ(records.size(), 2u);
    EXPECT_EQ(records[0].utterance_id, "u1");
    EXPECT_EQ(records[0].mode, mode);
    EXPECT_EQ(records[0].phones, (std::vector<std::size_t>{39, 15, 2, 39}));
    if (mode == RepresentationMode::kWeighted) {
      EXPECT_EQ(records[0].values, (std::vector<double>{12, 3, 2.25, 7}));
      EXPECT_EQ(records[1].values, std::vector<double>{0.1});
    } else {
      for (const auto& r : records)
        for (double v : r.values) EXPECT_EQ(v, 1.0);
    }
  }
}

TEST(Representations, MissingAlignmentNamesUtterance) {
  Manifest m = AlignedManifest();
  m.push_back(m[0]);
  m.back().utterance_id = "bare";
  m.back().phones.reset();
  std::ostringstream out;
  try {
    WriteRepresentations(out, m, PhoneAlphabet::WithSilence(), RepresentationMode::kWeighted);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("\"bare\""), std::string::npos) << e.what();
  }
  EXPECT_TRUE(out.str().empty());
}

TEST(Representations, EmptyManifestIsEmptyFile) {
  std::ostringstream out;
  WriteRepresentations(out, {}, PhoneAlphabet::WithSilence(), RepresentationMode::kWeighted);
  std::istringstream in(out.str());
  EXPECT_TRUE(ReadRepresentations(in, "r").empty());
}

TEST(Representations, ReaderRejectsBadRecords) {
  for (const char* line :
       {R"({"utterance_id":"u","mode":"weighted","phones":[1],"values":[]})",
        R"({"utterance_id":"u","mode":"weighted","phones":[1],"values":[0]})",
        R"({"utterance_id":"u","mode":"other","phones":[],"values":[]})",
        R"({"utterance_id":"u","mode":"indicator","phones":[1],"values":[2]})",
        R"({"mode":"weighted","phones":[],"values":[]})"}) {
    std::istringstream in(line);
    EXPECT_THROW(ReadRepresentations(in, "r"), ValidationError) << line;
  }
}

}  // namespace
}  // namespace spkpriv
