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

// Mono 16-bit PCM clips, WAV I/O, sample-exact span replacement, noise
// generation and SNR-controlled mixing.

#ifndef NOISEMASK_AUDIO_H_
#define NOISEMASK_AUDIO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace noisemask {

using Sample = std::int16_t;

class AudioClip {
 public:
  // Throws kInvalidArgument unless sample_rate_hz > 0.
  AudioClip(std::vector<Sample> samples, int sample_rate_hz);

  const std::vector<Sample>& samples() const { return samples_; }
  std::span<const Sample> view() const { return samples_; }
  int sample_rate_hz() const { return sample_rate_hz_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }

  double duration_seconds() const {
    return static_cast<double>(samples_.size()) / sample_rate_hz_;
  }
  // True iff `ms` <= duration, compared exactly.
  bool ContainsMs(std::int64_t ms) const;

  friend bool operator==(const AudioClip&, const AudioClip&) = default;

 private:
  std::vector<Sample> samples_;
  int sample_rate_hz_;
};

// round-half-up(ms * rate / 1000) for ms >= 0; negative ms maps to 0.
std::int64_t MsToSamples(std::int64_t ms, int sample_rate_hz);

double Rms(std::span<const Sample> samples);

// WAV (RIFF/WAVE, PCM format 1, 16-bit LE, mono).
AudioClip DecodeWav(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> EncodeWav(const AudioClip& clip);
AudioClip ReadWav(const std::filesystem::path& path);
void WriteWav(const AudioClip& clip, const std::filesystem::path& path);

enum class NoiseKind { kSilence, kWhite, kPink, kFile };

enum class LoopPolicy {
  kLoop,        // wrap around to the file start
  kPadSilence,  // play the file once from the offset, then zeros
};

struct NoiseSource {
  NoiseKind kind = NoiseKind::kSilence;
  std::filesystem::path path;  // kFile only
  LoopPolicy loop = LoopPolicy::kLoop;
  std::uint64_t seed = 0;
  std::string label;  // report name; defaults to Label() below when empty

  static NoiseSource Silence() { return {}; }
  static NoiseSource White(std::uint64_t seed) {
    return {NoiseKind::kWhite, {}, LoopPolicy::kLoop, seed, {}};
  }
  static NoiseSource Pink(std::uint64_t seed) {
    return {NoiseKind::kPink, {}, LoopPolicy::kLoop, seed, {}};
  }
  static NoiseSource File(std::filesystem::path path, std::uint64_t seed) {
    return {NoiseKind::kFile, std::move(path), LoopPolicy::kLoop, seed, {}};
  }

  // "silence", "white", "pink", or the file stem, unless label is set.
  std::string Label() const;
  NoiseSource WithSeed(std::uint64_t s) const {
    NoiseSource copy = *this;
    copy.seed = s;
    return copy;
  }
};

// Parses "silence", "white", "pink", "file:<path>" with an optional
// "=<label>" suffix.
NoiseSource ParseNoiseSource(const std::string& text, std::uint64_t seed);

// Exactly MsToSamples(duration_ms, rate) samples.
AudioClip GenerateNoise(const NoiseSource& source, std::int64_t duration_ms,
                        int sample_rate_hz);
AudioClip GenerateNoiseSamples(const NoiseSource& source,
                               std::size_t num_samples, int sample_rate_hz);

struct SampleRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t length() const { return end - begin; }
  friend bool operator==(const SampleRange&, const SampleRange&) = default;
};

// [start_ms, end_ms) clamped to the clip, in sample indices.
SampleRange ClampMsRange(const AudioClip& clip, std::int64_t start_ms,
                         std::int64_t end_ms);

// Removes the clamped span and inserts all of `noise` in its place.
AudioClip ReplaceSpan(const AudioClip& clip, std::int64_t start_ms,
                      std::int64_t end_ms, const AudioClip& noise);
AudioClip ReplaceSamples(const AudioClip& clip, SampleRange range,
                         const AudioClip& noise);

// Zeroes the range in place (length unchanged).
AudioClip SilenceSamples(const AudioClip& clip, SampleRange range);

// Crops or loops `noise` to exactly `length` samples, starting at sample 0.
std::vector<Sample> FitToLength(std::span<const Sample> noise,
                                std::size_t length);

// Gain applied to the (fitted) noise so that RMS_clean / RMS(g * noise)
// equals 10^(snr_db / 20). Throws kSilentInput for zero-RMS inputs.
double SnrGain(std::span<const Sample> clean, std::span<const Sample> noise,
               double snr_db);

// clean + g * noise, rounded and saturated to 16 bits.
AudioClip MixAtSnr(const AudioClip& clean, const AudioClip& noise,
                   double snr_db);

}  // namespace noisemask

#endif  // NOISEMASK_AUDIO_H_
