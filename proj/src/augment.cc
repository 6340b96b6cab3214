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

#include "noisemask/augment.h"

#include <algorithm>
#include <numeric>

#include "noisemask/error.h"
#include "noisemask/rng.h"

namespace noisemask {
namespace {

constexpr std::string_view kDropoutStream = "word-dropout:";
constexpr std::string_view kMtrStream = "mtr:";

}  // namespace

void AugmentConfig::Validate() const {
  if (!(mtr_noisy_fraction >= 0.0 && mtr_noisy_fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "mtr noisy fraction must be in [0, 1]");
  }
  if (mtr_snr_lo_db > mtr_snr_hi_db) {
    throw Error(ErrorCode::kInvalidArgument, "mtr SNR range has lo > hi");
  }
  if (mtr_noisy_fraction > 0.0 && noise_bank.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "mtr needs a non-empty noise bank");
  }
}

CorpusEntry SilenceWords(const CorpusEntry& entry, const std::vector<std::size_t>& indices) {
  CorpusEntry out = entry;
  for (std::size_t i : indices) {
    if (i >= entry.alignment.size()) {
      throw Error(ErrorCode::kIndexOutOfRange, "word " + std::to_string(i) + " in '" + entry.id + "'");
    }
    const AlignedWord& w = entry.alignment[i];
    out.clip = SilenceSamples(out.clip, ClampMsRange(out.clip, w.start_ms, w.end_ms));
  }
  out.transcript = entry.transcript.WithoutIndices(indices);
  out.alignment = entry.alignment.WithoutIndices(indices);
  return out;
}

CorpusEntry WordDropout(const CorpusEntry& entry, std::size_t k, std::uint64_t seed) {
  const std::size_t n = entry.transcript.size();
  if (k > n) {
    throw Error(ErrorCode::kKTooLarge, "k=" + std::to_string(k) + " for " + std::to_string(n) +
                                           " words in '" + entry.id + "'");
  }
  entry.Validate();
  if (k == 0) return entry;
  Rng rng(DeriveSeed(seed, std::string(kDropoutStream) + entry.id));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.UniformIndex(n - i));
    std::swap(order[i], order[j]);
  }
  std::vector<std::size_t> chosen(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(chosen.begin(), chosen.end());
  return SilenceWords(entry, chosen);
}

CorpusEntry NameSilencing(const CorpusEntry& entry, const TargetRule& rule) {
  entry.Validate();
  const auto targets = FindTargets(entry.transcript, rule);
  if (targets.empty()) return entry;
  return SilenceWords(entry, targets);
}

bool MtrSelects(const CorpusEntry& entry, const AugmentConfig& config, std::uint64_t seed) {
  Rng rng(DeriveSeed(seed, std::string(kMtrStream) + entry.id));
  return rng.Bernoulli(config.mtr_noisy_fraction);
}

CorpusEntry MtrMix(const CorpusEntry& entry, const AugmentConfig& config, std::uint64_t seed) {
  config.Validate();
  Rng rng(DeriveSeed(seed, std::string(kMtrStream) + entry.id));
  if (!rng.Bernoulli(config.mtr_noisy_fraction)) return entry;
  const NoiseSource& source =
      config.noise_bank[static_cast<std::size_t>(rng.UniformIndex(config.noise_bank.size()))];
  const double snr_db = rng.Uniform(config.mtr_snr_lo_db, config.mtr_snr_hi_db);
  const AudioClip noise = GenerateNoiseSamples(source.WithSeed(rng.NextU64()), entry.clip.size(),
                                               entry.clip.sample_rate_hz());
  CorpusEntry out = entry;
  out.clip = MixAtSnr(entry.clip, noise, snr_db);
  return out;
}

}  // namespace noisemask
