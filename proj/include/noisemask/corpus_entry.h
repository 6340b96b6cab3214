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

#ifndef NOISEMASK_CORPUS_ENTRY_H_
#define NOISEMASK_CORPUS_ENTRY_H_

#include <string>
#include <string_view>

#include "noisemask/alignment.h"
#include "noisemask/audio.h"

namespace noisemask {

enum class Provenance { kReal, kSynthetic };

std::string_view ProvenanceName(Provenance p);
Provenance ParseProvenance(std::string_view text);

// train, train_tts, test, test_tts, or custom:<anything>.
bool IsValidSplit(std::string_view split);

struct CorpusEntry {
  std::string id;
  std::string split;
  Transcript transcript;
  WordAlignment alignment;
  AudioClip clip{{}, 16000};
  Provenance source = Provenance::kReal;

  // Alignment against transcript and clip.
  void Validate() const { ValidateAlignment(alignment, transcript, clip); }

  friend bool operator==(const CorpusEntry&, const CorpusEntry&) = default;
};

}  // namespace noisemask

#endif  // NOISEMASK_CORPUS_ENTRY_H_
