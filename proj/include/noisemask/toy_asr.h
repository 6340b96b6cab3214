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

// A deterministic recognizer that memorizes its training corpus.
//
// Each voiced segment of the input is fingerprinted and matched against the
// fingerprints of every training word. When nothing matches closely enough
// the recognizer falls back to the most frequent training bigram after the
// previously emitted word, so a masked word is "filled in" from memory.
//
// Silence between segments that is longer than any inter-word gap seen in
// training is treated as a word slot with the all-zero fingerprint, which
// always takes the bigram fallback. A model trained on audio with silenced
// words has seen long gaps and therefore stops filling them.

#ifndef NOISEMASK_TOY_ASR_H_
#define NOISEMASK_TOY_ASR_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "noisemask/alignment.h"
#include "noisemask/audio.h"
#include "noisemask/corpus_entry.h"

namespace noisemask {

inline constexpr std::size_t kFingerprintSize = 32;
inline constexpr std::int64_t kFingerprintFrameMs = 25;
inline constexpr std::int64_t kFingerprintHopMs = 10;
inline constexpr std::string_view kSentenceStart = "<s>";

using Fingerprint = std::array<double, kFingerprintSize>;

// Per-frame RMS envelope (25 ms frames, 10 ms hop) linearly resampled to 32
// points and L2-normalized. Silent input gives the zero vector.
Fingerprint ComputeFingerprint(std::span<const Sample> samples, int sample_rate_hz);

// Zero when either side is the zero vector.
double CosineSimilarity(const Fingerprint& a, const Fingerprint& b);

struct ToyAsrOptions {
  double match_threshold = 0.95;
  double silence_threshold = 150.0;
  std::int64_t min_gap_ms = 50;
  // Added to the longest training gap to get the hole threshold.
  std::int64_t hole_slack_ms = 50;
};

struct ToyAsrModel {
  std::map<std::string, std::vector<Fingerprint>> templates;
  std::map<std::string, std::map<std::string, std::uint64_t>> bigram_counts;
  std::map<std::string, std::uint64_t> unigram_counts;
  double match_threshold = 0.95;
  double silence_threshold = 150.0;
  std::int64_t min_gap_ms = 50;
  // Silent gaps strictly longer than this become word slots.
  std::optional<std::int64_t> hole_gap_ms;

  bool empty() const { return templates.empty() && bigram_counts.empty(); }
  std::uint64_t BigramCount(const std::string& prev, const std::string& next) const;

  friend bool operator==(const ToyAsrModel&, const ToyAsrModel&) = default;
};

ToyAsrModel TrainToy(std::span<const CorpusEntry> corpus, const ToyAsrOptions& options = {});

// Throws kEmptyModel for an untrained model.
Transcript ToyTranscribe(const ToyAsrModel& model, const AudioClip& clip);

// Versioned little-endian binary format.
void SaveToyModel(const ToyAsrModel& model, const std::filesystem::path& path);
ToyAsrModel LoadToyModel(const std::filesystem::path& path);

}  // namespace noisemask

#endif  // NOISEMASK_TOY_ASR_H_
