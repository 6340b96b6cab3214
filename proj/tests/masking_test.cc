// Copyright 2026 The Noisemask Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "noisemask/masking.h"

#include <gtest/gtest.h>

#include <set>

#include "noisemask/error.h"
#include "noisemask/targeting.h"
#include "test_util.h"

namespace noisemask {
namespace {

using testing::CodeOf;
using testing::MakeEntry;
using testing::NonZeroSamples;
using testing::TempDir;

MaskSpec Spec(NoiseSource noise, std::optional<std::int64_t> fixed = std::nullopt,
              std::int64_t margin = kDefaultMarginMs) {
  MaskSpec s;
  s.noise = std::move(noise);
  s.fixed_duration_ms = fixed;
  s.margin_ms = margin;
  return s;
}

TEST(MaskSpec, Labels) {
  EXPECT_EQ(Spec(NoiseSource::Silence()).Label(), "silence");
  EXPECT_EQ(Spec(NoiseSource::White(1), 500).Label(), "white@500ms");
  EXPECT_EQ(Spec(NoiseSource::Pink(1), std::nullopt, 250).Label(), "pink+m250");
}

TEST(MaskSpec, Validation) {
  EXPECT_EQ(CodeOf([] { Spec(NoiseSource::Silence(), 0).Validate(); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([] { Spec(NoiseSource::Silence(), std::nullopt, -1).Validate(); }),
            ErrorCode::kInvalidArgument);
  EXPECT_NO_THROW(Spec(NoiseSource::Silence(), std::nullopt, 0).Validate());
}

TEST(ParseDurationMode, Forms) {
  EXPECT_EQ(ParseDurationMode("match"), std::nullopt);
  EXPECT_EQ(ParseDurationMode("500"), 500);
  EXPECT_EQ(ParseDurationMode("100ms"), 100);
  EXPECT_EQ(CodeOf([] { ParseDurationMode("0"); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([] { ParseDurationMode("abc"); }), ErrorCode::kInvalidArgument);
}

TEST(ApplyNoiseMask, MatchWordSilenceZeroesMarginWindow) {
  const CorpusEntry e = MakeEntry("u", {{"mister", {100, 400}}, {"soames", {450, 800}}}, 1200);
  const MaskedQuery q = ApplyNoiseMask(e, 1, Spec(NoiseSource::Silence()));
  ASSERT_EQ(q.clip.size(), e.clip.size());
  for (std::size_t i = 0; i < q.clip.size(); ++i) {
    const bool inside = i >= 5600 && i < 14400;  // [350, 900) ms
    ASSERT_EQ(q.clip.samples()[i], inside ? 0 : e.clip.samples()[i]) << i;
  }
  EXPECT_EQ(q.true_word, "soames");
  EXPECT_EQ(q.reference.Text(), "mister <*>");
  EXPECT_EQ(q.QueryId(), "u.1");
  EXPECT_TRUE(q.silence_noise);
  EXPECT_EQ(q.window, (SampleRange{5600, 14400}));
}

TEST(ApplyNoiseMask, FixedDurationChangesLength) {
  const CorpusEntry e = MakeEntry("u", {{"a", {100, 300}}, {"b", {400, 600}}}, 1000);
  const MaskedQuery q = ApplyNoiseMask(e, 1, Spec(NoiseSource::White(2), 1000));
  // [300, 700) removed, 1000 ms inserted.
  EXPECT_EQ(q.clip.size(), e.clip.size() + MsToSamples(600, 16000));
  EXPECT_EQ(q.inserted_samples, 16000u);
  for (std::size_t i = 0; i < 4800; ++i) ASSERT_EQ(q.clip.samples()[i], e.clip.samples()[i]);
  const std::size_t tail = e.clip.size() - 11200;
  for (std::size_t i = 0; i < tail; ++i) {
    ASSERT_EQ(q.clip.samples()[q.clip.size() - tail + i], e.clip.samples()[11200 + i]);
  }
  EXPECT_FALSE(q.silence_noise);
}

TEST(ApplyNoiseMask, ZeroMarginClampsAtStart) {
  const CorpusEntry e = MakeEntry("u", {{"a", {0, 100}}, {"b", {200, 300}}}, 1000);
  const MaskedQuery q = ApplyNoiseMask(e, 0, Spec(NoiseSource::Silence(), std::nullopt, 0));
  for (std::size_t i = 0; i < q.clip.size(); ++i) {
    ASSERT_EQ(q.clip.samples()[i], i < 1600 ? 0 : e.clip.samples()[i]);
  }
}

TEST(ApplyNoiseMask, MarginClampsAtBothEnds) {
  const CorpusEntry e = MakeEntry("u", {{"a", {20, 980}}}, 1000);
  const MaskedQuery q = ApplyNoiseMask(e, 0, Spec(NoiseSource::Silence()));
  EXPECT_EQ(q.window, (SampleRange{0, 16000}));
  for (Sample s : q.clip.samples()) ASSERT_EQ(s, 0);
}

TEST(ApplyNoiseMask, Errors) {
  const CorpusEntry e = MakeEntry("u", {{"a", {0, 100}}}, 200);
  EXPECT_EQ(CodeOf([&] { ApplyNoiseMask(e, 1, Spec(NoiseSource::Silence())); }),
            ErrorCode::kIndexOutOfRange);
  CorpusEntry bad = e;
  bad.alignment = WordAlignment({{"a", 0, 300}});  // past the clip
  EXPECT_EQ(CodeOf([&] { ApplyNoiseMask(bad, 0, Spec(NoiseSource::Silence())); }),
            ErrorCode::kInvariantViolation);

  TempDir dir;
  WriteWav(AudioClip(NonZeroSamples(100, 1), 8000), dir / "n.wav");
  EXPECT_EQ(CodeOf([&] { ApplyNoiseMask(e, 0, Spec(NoiseSource::File(dir / "n.wav", 1))); }),
            ErrorCode::kRateMismatch);
}

TEST(ApplyNoiseMask, NoiseDependsOnQueryNotOrder) {
  const CorpusEntry e = MakeEntry("u", {{"mister", {0, 100}}, {"x", {200, 300}}}, 500);
  const MaskedQuery a = ApplyNoiseMask(e, 1, Spec(NoiseSource::White(9)));
  const MaskedQuery b = ApplyNoiseMask(e, 1, Spec(NoiseSource::White(9)));
  EXPECT_EQ(a.clip, b.clip);
  CorpusEntry other = e;
  other.id = "v";
  EXPECT_NE(ApplyNoiseMask(other, 1, Spec(NoiseSource::White(9))).clip, a.clip);
}

TEST(BatchMask, OneQueryPerTarget) {
  std::vector<std::pair<std::string, std::pair<int, int>>> words;
  const std::vector<std::string> tokens{"mister", "a", "b", "c", "d", "e", "miss", "f"};
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    words.push_back({tokens[i], {static_cast<int>(i) * 100, static_cast<int>(i) * 100 + 80}});
  }
  const CorpusEntry e = MakeEntry("u", words, 900);
  const auto queries = BatchMask(std::vector<CorpusEntry>{e}, TargetRule::Default(),
                                 Spec(NoiseSource::Silence()));
  ASSERT_EQ(queries.size(), 2u);
  EXPECT_EQ(queries[0].QueryId(), "u.1");
  EXPECT_EQ(queries[1].QueryId(), "u.7");
  EXPECT_TRUE(BatchMask({}, TargetRule::Default(), Spec(NoiseSource::Silence())).empty());
}

TEST(BatchMask, GroupedBySpec) {
  TempDir dir;
  WriteWav(AudioClip(NonZeroSamples(3200, 3), 16000), dir / "babble.wav");
  WriteWav(AudioClip(NonZeroSamples(3200, 4), 16000), dir / "music.wav");
  std::vector<CorpusEntry> corpus;
  for (int i = 0; i < 3; ++i) {
    corpus.push_back(MakeEntry("e" + std::to_string(i), {{"mister", {0, 100}}, {"n", {200, 300}}},
                               400, static_cast<std::uint64_t>(i)));
  }
  const std::vector<MaskSpec> specs{
      Spec(NoiseSource::Silence()), Spec(NoiseSource::White(1)), Spec(NoiseSource::Pink(1)),
      Spec(NoiseSource::File(dir / "babble.wav", 1)), Spec(NoiseSource::File(dir / "music.wav", 1)),
      Spec(NoiseSource::White(2), 500)};
  const auto queries = BatchMask(corpus, TargetRule::Default(), specs);
  ASSERT_EQ(queries.size(), 18u);
  for (std::size_t i = 0; i < queries.size(); ++i) {
    EXPECT_EQ(queries[i].mask_label, specs[i / 3].Label());
    EXPECT_EQ(queries[i].utterance_id, "e" + std::to_string(i % 3));
  }
}

TEST(DumpMasked, FileName) {
  TempDir dir;
  const CorpusEntry e = MakeEntry("utt7", {{"mister", {0, 100}}, {"n", {200, 300}}}, 400);
  const MaskedQuery q = ApplyNoiseMask(e, 1, Spec(NoiseSource::Pink(1)));
  const auto path = DumpMasked(q, dir.path());
  EXPECT_EQ(path.filename(), "utt7.1.pink.wav");
  EXPECT_EQ(ReadWav(path), q.clip);
}

}  // namespace
}  // namespace noisemask
