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

#include <charconv>

#include "noisemask/error.h"
#include "noisemask/rng.h"

namespace noisemask {

void MaskSpec::Validate() const {
  if (fixed_duration_ms && *fixed_duration_ms <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "fixed noise duration must be positive");
  }
  if (margin_ms < 0) throw Error(ErrorCode::kInvalidArgument, "margin must be non-negative");
}

std::string MaskSpec::Label() const {
  std::string label = noise.Label();
  if (fixed_duration_ms) label += "@" + std::to_string(*fixed_duration_ms) + "ms";
  if (margin_ms != kDefaultMarginMs) label += "+m" + std::to_string(margin_ms);
  return label;
}

std::optional<std::int64_t> ParseDurationMode(const std::string& text) {
  if (text == "match" || text == "match_word") return std::nullopt;
  std::string digits = text;
  if (digits.ends_with("ms")) digits.resize(digits.size() - 2);
  std::int64_t ms = 0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), ms);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || ms <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "bad duration mode '" + text + "'");
  }
  return ms;
}

std::string MaskedQuery::QueryId() const {
  return utterance_id + "." + std::to_string(target_index);
}

MaskedQuery ApplyNoiseMask(const CorpusEntry& entry, std::size_t target_index,
                           const MaskSpec& spec) {
  spec.Validate();
  entry.Validate();
  if (target_index >= entry.transcript.size()) {
    throw Error(ErrorCode::kIndexOutOfRange, "target " + std::to_string(target_index) + " in '" +
                                                 entry.id + "' with " +
                                                 std::to_string(entry.transcript.size()) + " words");
  }
  const AlignedWord& word = entry.alignment[target_index];
  const SampleRange window =
      ClampMsRange(entry.clip, word.start_ms - spec.margin_ms, word.end_ms + spec.margin_ms);
  const std::size_t noise_len =
      spec.fixed_duration_ms
          ? static_cast<std::size_t>(MsToSamples(*spec.fixed_duration_ms, entry.clip.sample_rate_hz()))
          : window.length();

  MaskedQuery q;
  q.utterance_id = entry.id;
  q.setting = entry.split;
  q.target_index = target_index;
  q.true_word = entry.transcript[target_index];
  q.mask_label = spec.Label();
  q.silence_noise = spec.noise.kind == NoiseKind::kSilence;
  q.reference = entry.transcript.WithWildcard(target_index);
  q.window = window;
  q.inserted_samples = noise_len;

  const NoiseSource seeded = spec.noise.WithSeed(DeriveSeed(spec.noise.seed, q.QueryId()));
  const AudioClip noise = GenerateNoiseSamples(seeded, noise_len, entry.clip.sample_rate_hz());
  q.clip = ReplaceSamples(entry.clip, window, noise);
  return q;
}

std::vector<MaskedQuery> BatchMask(std::span<const CorpusEntry> corpus, const TargetRule& rule,
                                   std::span<const MaskSpec> specs) {
  std::vector<MaskedQuery> queries;
  for (const auto& spec : specs) {
    for (const auto& entry : corpus) {
      for (std::size_t index : FindTargets(entry.transcript, rule)) {
        queries.push_back(ApplyNoiseMask(entry, index, spec));
      }
    }
  }
  return queries;
}

std::vector<MaskedQuery> BatchMask(std::span<const CorpusEntry> corpus, const TargetRule& rule,
                                   const MaskSpec& spec) {
  return BatchMask(corpus, rule, std::span<const MaskSpec>(&spec, 1));
}

std::filesystem::path DumpMasked(const MaskedQuery& query, const std::filesystem::path& dir) {
  std::filesystem::path path = dir / (query.QueryId() + "." + query.mask_label + ".wav");
  WriteWav(query.clip, path);
  return path;
}

}  // namespace noisemask
