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

// Training-side mitigations. Each transform is a pure function of the entry
// and a seed; per-entry randomness is keyed on the entry id so corpus order
// never changes the outcome.

#ifndef NOISEMASK_AUGMENT_H_
#define NOISEMASK_AUGMENT_H_

#include <cstdint>
#include <vector>

#include "noisemask/audio.h"
#include "noisemask/corpus_entry.h"
#include "noisemask/targeting.h"

namespace noisemask {

struct AugmentConfig {
  std::size_t word_dropout_k = 1;
  double mtr_noisy_fraction = 0.2;
  double mtr_snr_lo_db = 5.0;
  double mtr_snr_hi_db = 25.0;
  std::vector<NoiseSource> noise_bank;
  std::uint64_t seed = 0;

  // Throws kInvalidArgument.
  void Validate() const;
};

// Removes the listed words from transcript and alignment and zeroes their
// aligned spans. Indices must be sorted and distinct.
CorpusEntry SilenceWords(const CorpusEntry& entry, const std::vector<std::size_t>& indices);

// k distinct words chosen uniformly. Throws kKTooLarge.
CorpusEntry WordDropout(const CorpusEntry& entry, std::size_t k, std::uint64_t seed);

CorpusEntry NameSilencing(const CorpusEntry& entry, const TargetRule& rule);

// Mixes noise from the bank into the clip with probability
// mtr_noisy_fraction. Transcript and alignment are untouched.
CorpusEntry MtrMix(const CorpusEntry& entry, const AugmentConfig& config, std::uint64_t seed);

// Whether MtrMix would mix this entry.
bool MtrSelects(const CorpusEntry& entry, const AugmentConfig& config, std::uint64_t seed);

}  // namespace noisemask

#endif  // NOISEMASK_AUGMENT_H_
