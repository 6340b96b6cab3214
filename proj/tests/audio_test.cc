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

#include "noisemask/audio.h"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <functional>
#include <optional>

#include "noisemask/error.h"
#include "test_util.h"

namespace noisemask {
namespace {

using testing::CodeOf;
using testing::Constant;
using testing::TempDir;

// Canonical 44-byte header + data, assembled by hand.
std::vector<std::uint8_t> WavBytes(const std::vector<Sample>& samples, int rate, int channels = 1,
                                   int bits = 16, int format = 1,
                                   std::optional<std::uint32_t> declared_data = std::nullopt) {
  std::vector<std::uint8_t> b;
  auto u32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  };
  auto u16 = [&](std::uint16_t v) {
    b.push_back(static_cast<std::uint8_t>(v));
    b.push_back(static_cast<std::uint8_t>(v >> 8));
  };
  auto tag = [&](const char* t) { b.insert(b.end(), t, t + 4); };
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
  tag("RIFF");
  u32(36 + declared_data.value_or(data_bytes));
  tag("WAVE");
  tag("fmt ");
  u32(16);
  u16(static_cast<std::uint16_t>(format));
  u16(static_cast<std::uint16_t>(channels));
  u32(static_cast<std::uint32_t>(rate));
  u32(static_cast<std::uint32_t>(rate * channels * bits / 8));
  u16(static_cast<std::uint16_t>(channels * bits / 8));
  u16(static_cast<std::uint16_t>(bits));
  tag("data");
  u32(declared_data.value_or(data_bytes));
  for (Sample s : samples) u16(static_cast<std::uint16_t>(s));
  return b;
}

TEST(MsToSamples, RoundsHalfUp) {
  EXPECT_EQ(MsToSamples(100, 16000), 1600);
  EXPECT_EQ(MsToSamples(1, 500), 1);    // 0.5
  EXPECT_EQ(MsToSamples(1, 1500), 2);   // 1.5
  EXPECT_EQ(MsToSamples(1, 44100), 44); // 44.1
  EXPECT_EQ(MsToSamples(-20, 16000), 0);
}

TEST(Wav, DecodesHandBuiltFile) {
  const std::vector<Sample> samples{0, 100, -100, 32767};
  const AudioClip clip = DecodeWav(WavBytes(samples, 16000));
  EXPECT_EQ(clip.sample_rate_hz(), 16000);
  EXPECT_EQ(clip.samples(), samples);
}

TEST(Wav, EncodeMatchesHandBuiltBytes) {
  const std::vector<Sample> samples{0, 100, -100, 32767, -32768};
  EXPECT_EQ(EncodeWav(AudioClip(samples, 22050)), WavBytes(samples, 22050));
}

TEST(Wav, RejectsStereo) {
  EXPECT_EQ(CodeOf([] { DecodeWav(WavBytes({1, 2, 3, 4}, 16000, 2)); }),
            ErrorCode::kUnsupportedFormat);
}

TEST(Wav, RejectsOtherBitDepthsAndFormats) {
  EXPECT_EQ(CodeOf([] { DecodeWav(WavBytes({1, 2}, 16000, 1, 8)); }),
            ErrorCode::kUnsupportedFormat);
  EXPECT_EQ(CodeOf([] { DecodeWav(WavBytes({1, 2}, 16000, 1, 16, 3)); }),
            ErrorCode::kUnsupportedFormat);
}

TEST(Wav, RejectsTruncatedData) {
  std::vector<Sample> fifty(50, 7);
  EXPECT_EQ(CodeOf([&] { DecodeWav(WavBytes(fifty, 16000, 1, 16, 1, 200)); }),
            ErrorCode::kMalformedWav);
}

TEST(Wav, RejectsGarbage) {
  const std::vector<std::uint8_t> junk{'R', 'I', 'F', 'X', 0, 0, 0, 0};
  EXPECT_EQ(CodeOf([&] { DecodeWav(junk); }), ErrorCode::kMalformedWav);
  EXPECT_EQ(CodeOf([] { DecodeWav(std::vector<std::uint8_t>{}); }), ErrorCode::kMalformedWav);
}

TEST(Wav, SkipsUnknownChunks) {
  auto bytes = WavBytes({5, -5}, 16000);
  // Insert a LIST chunk with odd size (padded) between fmt and data.
  const std::vector<std::uint8_t> list{'L', 'I', 'S', 'T', 3, 0, 0, 0, 'a', 'b', 'c', 0};
  bytes.insert(bytes.begin() + 36, list.begin(), list.end());
  const std::uint32_t riff = static_cast<std::uint32_t>(bytes.size() - 8);
  std::memcpy(bytes.data() + 4, &riff, 4);
  EXPECT_EQ(DecodeWav(bytes).samples(), (std::vector<Sample>{5, -5}));
}

TEST(Wav, RoundTripsFilesIncludingEmpty) {
  TempDir dir;
  const AudioClip four({0, 100, -100, 32767}, 16000);
  WriteWav(four, dir / "a.wav");
  EXPECT_EQ(ReadWav(dir / "a.wav"), four);

  const AudioClip empty({}, 16000);
  WriteWav(empty, dir / "e.wav");
  EXPECT_EQ(ReadWav(dir / "e.wav"), empty);
  EXPECT_EQ(std::filesystem::file_size(dir / "e.wav"), 44u);

  const AudioClip noise = GenerateNoise(NoiseSource::White(11), 1000, 16000);
  WriteWav(noise, dir / "n.wav");
  EXPECT_EQ(ReadWav(dir / "n.wav"), noise);
}

TEST(Wav, WriteToMissingDirectoryFails) {
  EXPECT_EQ(CodeOf([] { WriteWav(AudioClip({1}, 16000), "/nonexistent-dir/x/y.wav"); }),
            ErrorCode::kIoFailure);
  EXPECT_EQ(CodeOf([] { ReadWav("/nonexistent-dir/y.wav"); }), ErrorCode::kIoFailure);
}

TEST(AudioClip, RejectsNonPositiveRate) {
  EXPECT_EQ(CodeOf([] { AudioClip({}, 0); }), ErrorCode::kInvalidArgument);
}

TEST(AudioClip, ContainsMsIsExact) {
  const AudioClip clip(std::vector<Sample>(16000), 16000);
  EXPECT_TRUE(clip.ContainsMs(1000));
  EXPECT_FALSE(clip.ContainsMs(1001));
  // 1601 samples at 16 kHz is 100.0625 ms.
  const AudioClip odd(std::vector<Sample>(1601), 16000);
  EXPECT_TRUE(odd.ContainsMs(100));
  EXPECT_FALSE(odd.ContainsMs(101));
}

TEST(Noise, SilenceIsZeros) {
  const AudioClip clip = GenerateNoise(NoiseSource::Silence(), 100, 16000);
  EXPECT_EQ(clip.samples(), std::vector<Sample>(1600, 0));
}

TEST(Noise, SeededKindsAreDeterministic) {
  for (const auto& src : {NoiseSource::White(7), NoiseSource::Pink(7)}) {
    const AudioClip a = GenerateNoise(src, 100, 16000);
    const AudioClip b = GenerateNoise(src, 100, 16000);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.size(), 1600u);
    EXPECT_GT(Rms(a.view()), 100.0);
    EXPECT_NE(a, GenerateNoise(src.WithSeed(8), 100, 16000));
  }
}

TEST(Noise, WhiteStaysInRange) {
  const AudioClip clip = GenerateNoise(NoiseSource::White(3), 500, 16000);
  for (Sample s : clip.samples()) {
    EXPECT_GE(s, -8192);
    EXPECT_LE(s, 8192);
  }
}

TEST(Noise, FileNoiseLoopsWithFilePeriod) {
  TempDir dir;
  std::vector<Sample> file(800);  // 50 ms at 16 kHz, all values distinct
  for (std::size_t i = 0; i < file.size(); ++i) file[i] = static_cast<Sample>(i + 1);
  WriteWav(AudioClip(file, 16000), dir / "babble.wav");

  const AudioClip out = GenerateNoise(NoiseSource::File(dir / "babble.wav", 5), 120, 16000);
  ASSERT_EQ(out.size(), 1920u);
  const std::size_t offset = static_cast<std::size_t>(out.samples()[0] - 1);
  for (std::size_t i = 0; i < out.size(); ++i) {
    ASSERT_EQ(out.samples()[i], file[(offset + i) % file.size()]) << "at " << i;
  }
  EXPECT_EQ(out, GenerateNoise(NoiseSource::File(dir / "babble.wav", 5), 120, 16000));
}

TEST(Noise, FileNoisePadPolicyEndsInSilence) {
  TempDir dir;
  WriteWav(AudioClip(Constant(800, 9), 16000), dir / "f.wav");
  NoiseSource src = NoiseSource::File(dir / "f.wav", 1);
  src.loop = LoopPolicy::kPadSilence;
  const AudioClip out = GenerateNoise(src, 120, 16000);
  EXPECT_EQ(out.samples().back(), 0);
  std::size_t nonzero = 0;
  for (Sample s : out.samples()) nonzero += s != 0;
  EXPECT_LE(nonzero, 800u);
}

TEST(Noise, FileRateMismatch) {
  TempDir dir;
  WriteWav(AudioClip(Constant(80, 9), 8000), dir / "f.wav");
  EXPECT_EQ(CodeOf([&] { GenerateNoise(NoiseSource::File(dir / "f.wav", 1), 10, 16000); }),
            ErrorCode::kRateMismatch);
}

TEST(Noise, ParsesSourceSpecs) {
  EXPECT_EQ(ParseNoiseSource("silence", 1).kind, NoiseKind::kSilence);
  EXPECT_EQ(ParseNoiseSource("white", 1).Label(), "white");
  EXPECT_EQ(ParseNoiseSource("pink", 1).kind, NoiseKind::kPink);
  const NoiseSource f = ParseNoiseSource("file:/x/cafe.wav", 1);
  EXPECT_EQ(f.kind, NoiseKind::kFile);
  EXPECT_EQ(f.Label(), "cafe");
  EXPECT_EQ(ParseNoiseSource("file:/x/a.wav=babble", 1).Label(), "babble");
  EXPECT_EQ(CodeOf([] { ParseNoiseSource("brown", 1); }), ErrorCode::kInvalidArgument);
}

TEST(ReplaceSpan, ReplacesMiddleWithEqualLengthSilence) {
  const AudioClip clip(Constant(16000, 1000), 16000);
  const AudioClip out = ReplaceSpan(clip, 400, 600, GenerateNoise(NoiseSource::Silence(), 200, 16000));
  ASSERT_EQ(out.size(), 16000u);
  for (std::size_t i = 0; i < out.size(); ++i) {
    ASSERT_EQ(out.samples()[i], (i >= 6400 && i < 9600) ? 0 : 1000) << i;
  }
}

TEST(ReplaceSpan, ClampsNegativeStart) {
  const AudioClip clip(Constant(16000, 1000), 16000);
  const AudioClip out = ReplaceSpan(clip, -50, 50, GenerateNoise(NoiseSource::Silence(), 50, 16000));
  ASSERT_EQ(out.size(), 16000u);
  for (std::size_t i = 0; i < out.size(); ++i) ASSERT_EQ(out.samples()[i], i < 800 ? 0 : 1000);
}

TEST(ReplaceSpan, LongerNoiseGrowsClip) {
  const AudioClip clip(Constant(16000, 1000), 16000);
  const AudioClip out = ReplaceSpan(clip, 400, 600, GenerateNoise(NoiseSource::White(1), 1000, 16000));
  EXPECT_EQ(out.size(), 16000u - 3200u + 16000u);
}

TEST(ReplaceSpan, ClampsPastEndAndRejectsRateMismatch) {
  const AudioClip clip(Constant(1600, 3), 16000);
  const AudioClip out = ReplaceSpan(clip, 50, 500, AudioClip(Constant(10, 0), 16000));
  EXPECT_EQ(out.size(), 800u + 10u);
  EXPECT_EQ(CodeOf([&] { ReplaceSpan(clip, 0, 10, AudioClip({1}, 8000)); }),
            ErrorCode::kRateMismatch);
}

TEST(FitToLength, LoopsFromStart) {
  const std::vector<Sample> noise{1, 2, 3};
  EXPECT_EQ(FitToLength(noise, 7), (std::vector<Sample>{1, 2, 3, 1, 2, 3, 1}));
  EXPECT_EQ(FitToLength(noise, 2), (std::vector<Sample>{1, 2}));
}

TEST(Snr, GainFormula) {
  const auto clean = Constant(100, 500);
  const auto noise = Constant(100, -500);
  EXPECT_DOUBLE_EQ(SnrGain(clean, noise, 0.0), 1.0);
  EXPECT_NEAR(SnrGain(clean, noise, 20.0), 0.1, 1e-12);
  EXPECT_NEAR(SnrGain(Constant(100, 1000), noise, 0.0), 2.0, 1e-12);
}

TEST(Snr, SilentInputsThrow) {
  EXPECT_EQ(CodeOf([] { SnrGain(Constant(10, 5), Constant(10, 0), 10); }), ErrorCode::kSilentInput);
  EXPECT_EQ(CodeOf([] { SnrGain(Constant(10, 0), Constant(10, 5), 10); }), ErrorCode::kSilentInput);
}

TEST(Snr, MixSaturates) {
  const AudioClip clean(Constant(100, 30000), 16000);
  const AudioClip noise(Constant(100, 30000), 16000);
  const AudioClip out = MixAtSnr(clean, noise, 0.0);
  for (Sample s : out.samples()) EXPECT_EQ(s, 32767);
}

TEST(Snr, MeasuredSnrMatchesRequest) {
  const AudioClip clean = GenerateNoise(NoiseSource::Pink(2), 300, 16000);
  const AudioClip noise = GenerateNoise(NoiseSource::White(4), 300, 16000);
  for (double snr : {0.0, 5.0, 12.5, 25.0}) {
    const AudioClip out = MixAtSnr(clean, noise, snr);
    double signal = 0, residual = 0;
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double c = clean.samples()[i];
      signal += c * c;
      residual += (out.samples()[i] - c) * (out.samples()[i] - c);
    }
    EXPECT_NEAR(10.0 * std::log10(signal / residual), snr, 0.01);
  }
}

}  // namespace
}  // namespace noisemask
