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

// Noise masking queries: the target word's audio, plus a margin on both
// sides, is swapped for noise and the model is asked to transcribe the
// result.

#ifndef NOISEMASK_MASKING_H_
#define NOISEMASK_MASKING_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "noisemask/audio.h"
#include "noisemask/corpus_entry.h"
#include "noisemask/targeting.h"

namespace noisemask {

inline constexpr std::int64_t kDefaultMarginMs = 100;

struct MaskSpec {
  NoiseSource noise;
  // Unset: noise spans the margin-extended word window (match_word).
  std::optional<std::int64_t> fixed_duration_ms;
  std::int64_t margin_ms = kDefaultMarginMs;

  // Throws kInvalidArgument on a non-positive fixed duration or negative
  // margin.
  void Validate() const;

  // Row key in reports, e.g. "white", "silence@500ms", "pink+m250".
  std::string Label() const;
};

// Parses "match" or a positive millisecond count.
std::optional<std::int64_t> ParseDurationMode(const std::string& text);

struct MaskedQuery {
  std::string utterance_id;
  std::string setting;
  std::size_t target_index = 0;
  std::string true_word;
  std::string mask_label;
  bool silence_noise = false;
  AudioClip clip{{}, 16000};
  Transcript reference;
  // Window removed from the original clip, and how much noise replaced it.
  SampleRange window;
  std::size_t inserted_samples = 0;

  // <utterance_id>.<target_index>
  std::string QueryId() const;
};

// The noise for a query is seeded from spec.noise.seed and the query id, so
// queries are reproducible regardless of batch order.
MaskedQuery ApplyNoiseMask(const CorpusEntry& entry, std::size_t target_index,
                           const MaskSpec& spec);

// Grouped by spec, then corpus order, then target order.
std::vector<MaskedQuery> BatchMask(std::span<const CorpusEntry> corpus, const TargetRule& rule,
                                   std::span<const MaskSpec> specs);
std::vector<MaskedQuery> BatchMask(std::span<const CorpusEntry> corpus, const TargetRule& rule,
                                   const MaskSpec& spec);

// <utterance_id>.<target_index>.<noise_kind>.wav
std::filesystem::path DumpMasked(const MaskedQuery& query, const std::filesystem::path& dir);

}  // namespace noisemask

#endif  // NOISEMASK_MASKING_H_
