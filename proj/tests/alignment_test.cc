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

#include "noisemask/alignment.h"

#include <gtest/gtest.h>

#include <sstream>

#include "noisemask/error.h"
#include "test_util.h"

namespace noisemask {
namespace {

using testing::CodeOf;
using testing::Tone;

TEST(Normalize, LowercasesAndStrips) {
  EXPECT_EQ(NormalizeText("Mister SOAMES, was -somehow!").words(),
            (std::vector<std::string>{"mister", "soames", "was", "somehow"}));
  EXPECT_EQ(NormalizeText("don't  well-known  --- 42").words(),
            (std::vector<std::string>{"don't", "well-known"}));
  EXPECT_TRUE(NormalizeText("  ").empty());
}

TEST(Normalize, NeverProducesWildcard) {
  EXPECT_EQ(NormalizeText("<*>").size(), 0u);
  EXPECT_EQ(NormalizeText("a <*> b").words(), (std::vector<std::string>{"a", "b"}));
}

TEST(Transcript, RejectsUnnormalizedTokens) {
  EXPECT_EQ(CodeOf([] { Transcript({"Smith"}); }), ErrorCode::kInvariantViolation);
  EXPECT_EQ(CodeOf([] { Transcript({""}); }), ErrorCode::kInvariantViolation);
  EXPECT_EQ(CodeOf([] { Transcript({"-x"}); }), ErrorCode::kInvariantViolation);
  EXPECT_NO_THROW(Transcript({"a", std::string(kWildcard)}));
}

TEST(Transcript, WildcardAndRemoval) {
  const Transcript t({"mister", "soames", "was"});
  EXPECT_EQ(t.WithWildcard(1).Text(), "mister <*> was");
  EXPECT_EQ(t.WithoutIndices({0, 2}).Text(), "soames");
  EXPECT_EQ(CodeOf([&] { t.WithWildcard(3); }), ErrorCode::kIndexOutOfRange);
}

TEST(ParseAlignment, TwoEntries) {
  const WordAlignment a = ParseAlignment("mister\t100\t400\nsoames\t450\t800");
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a[0], (AlignedWord{"mister", 100, 400}));
  EXPECT_EQ(a[1], (AlignedWord{"soames", 450, 800}));
}

TEST(ParseAlignment, OverlapIsInvariantViolation) {
  EXPECT_EQ(CodeOf([] { ParseAlignment("a\t0\t100\nb\t50\t200"); }), ErrorCode::kInvariantViolation);
  EXPECT_EQ(CodeOf([] { ParseAlignment("a\t100\t100"); }), ErrorCode::kInvariantViolation);
  EXPECT_EQ(CodeOf([] { ParseAlignment("a\t-5\t10"); }), ErrorCode::kInvariantViolation);
}

TEST(ParseAlignment, EmptyAndMalformed) {
  EXPECT_TRUE(ParseAlignment("").empty());
  EXPECT_TRUE(ParseAlignment("\n\n").empty());
  EXPECT_EQ(CodeOf([] { ParseAlignment("a\t0"); }), ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] { ParseAlignment("a\t0\t1\t2"); }), ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] { ParseAlignment("a\tx\t10"); }), ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] { ParseAlignment("a\t1.5\t10"); }), ErrorCode::kParseError);
}

TEST(ParseAlignment, TouchingSpansAreFine) {
  EXPECT_EQ(ParseAlignment("a\t0\t100\nb\t100\t200").size(), 2u);
}

TEST(ParseAlignment, RenderRoundTrip) {
  const WordAlignment a({{"mister", 0, 10}, {"x", 20, 35}});
  std::istringstream in(RenderAlignment(a));
  EXPECT_EQ(ParseAlignment(in), a);
}

TEST(ValidateAlignment, ChecksTokensAndDuration) {
  const AudioClip clip(std::vector<Sample>(16000), 16000);
  const WordAlignment a({{"a", 0, 500}, {"b", 600, 1000}});
  EXPECT_NO_THROW(ValidateAlignment(a, Transcript({"a", "b"}), clip));
  EXPECT_EQ(CodeOf([&] { ValidateAlignment(a, Transcript({"a", "c"}), clip); }),
            ErrorCode::kInvariantViolation);
  EXPECT_EQ(CodeOf([&] { ValidateAlignment(a, Transcript({"a"}), clip); }),
            ErrorCode::kInvariantViolation);
  const WordAlignment late({{"a", 0, 500}, {"b", 600, 1001}});
  EXPECT_EQ(CodeOf([&] { ValidateAlignment(late, Transcript({"a", "b"}), clip); }),
            ErrorCode::kInvariantViolation);
}

TEST(EnergySegment, TwoTonesAroundSilence) {
  auto samples = Tone(100, 16000, 5000, 440);
  samples.resize(samples.size() + 2400, 0);
  const auto second = Tone(100, 16000, 5000, 440);
  samples.insert(samples.end(), second.begin(), second.end());
  const AudioClip clip(samples, 16000);

  const WordAlignment a = EnergySegment(clip, Transcript({"ab", "cd"}), 150, 50);
  ASSERT_EQ(a.size(), 2u);
  // One fingerprint frame is 10 ms; the sine's zero crossings at the edges
  // cost at most a few samples.
  EXPECT_NEAR(a[0].start_ms, 0, 10);
  EXPECT_NEAR(a[0].end_ms, 100, 10);
  EXPECT_NEAR(a[1].start_ms, 250, 10);
  EXPECT_NEAR(a[1].end_ms, 350, 10);
  EXPECT_EQ(a[0].token, "ab");
}

TEST(EnergySegment, SilentClipMismatch) {
  const AudioClip clip(std::vector<Sample>(16000), 16000);
  EXPECT_EQ(CodeOf([&] { EnergySegment(clip, Transcript({"a"}), 150, 50); }),
            ErrorCode::kSegmentCountMismatch);
}

TEST(EnergySegment, SingleTone) {
  const AudioClip clip(Tone(300, 16000, 4000, 300), 16000);
  const WordAlignment a = EnergySegment(clip, Transcript({"a"}), 150, 50);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_LE(a[0].start_ms, 1);
  EXPECT_GE(a[0].end_ms, 299);
  EXPECT_LE(a[0].end_ms, 300);
}

TEST(DetectVoicedRuns, MergesShortGaps) {
  std::vector<Sample> s(1000, 0);
  for (int i = 100; i < 200; ++i) s[i] = 1000;
  for (int i = 220; i < 300; ++i) s[i] = 1000;  // 20-sample gap
  for (int i = 700; i < 800; ++i) s[i] = 1000;  // 400-sample gap
  const auto runs = DetectVoicedRuns(AudioClip(s, 1000), 150, 50);
  ASSERT_EQ(runs.size(), 2u);
  EXPECT_EQ(runs[0], (SampleRange{100, 300}));
  EXPECT_EQ(runs[1], (SampleRange{700, 800}));
}

}  // namespace
}  // namespace noisemask
