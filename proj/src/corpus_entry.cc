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

#include "noisemask/corpus_entry.h"

#include "noisemask/error.h"

namespace noisemask {

std::string_view ProvenanceName(Provenance p) {
  return p == Provenance::kReal ? "real" : "synthetic";
}

Provenance ParseProvenance(std::string_view text) {
  if (text == "real") return Provenance::kReal;
  if (text == "synthetic") return Provenance::kSynthetic;
  throw Error(ErrorCode::kInvalidArgument, "unknown source '" + std::string(text) + "'");
}

bool IsValidSplit(std::string_view split) {
  if (split == "train" || split == "train_tts" || split == "test" || split == "test_tts") {
    return true;
  }
  return split.starts_with("custom:") && split.size() > 7;
}

}  // namespace noisemask
