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

// Attacker target knowledge: which words are worth masking, and the name
// lexicon used to score what the model fills in.

#ifndef NOISEMASK_TARGETING_H_
#define NOISEMASK_TARGETING_H_

#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "noisemask/alignment.h"
#include "noisemask/corpus_entry.h"

namespace noisemask {

using TokenSet = std::set<std::string>;

class TargetRule {
 public:
  // Throws kInvariantViolation if a token is not normalized or a keyword is
  // also stoplisted.
  TargetRule(TokenSet title_keywords, TokenSet stoplist);

  // {"mister", "miss", "missus"} with an empty stoplist.
  static TargetRule Default();

  const TokenSet& title_keywords() const { return title_keywords_; }
  const TokenSet& stoplist() const { return stoplist_; }

  bool IsKeyword(const std::string& token) const { return title_keywords_.contains(token); }
  bool IsStopped(const std::string& token) const { return stoplist_.contains(token); }

 private:
  TokenSet title_keywords_;
  TokenSet stoplist_;
};

// One token per line; blank lines and lines starting with '#' are skipped.
// Tokens are normalized on read.
TokenSet ReadTokenFile(const std::filesystem::path& path);
void WriteTokenFile(const TokenSet& tokens, const std::filesystem::path& path);

// Indices i+1 where word i is a title keyword and word i+1 exists and is not
// stoplisted. Strictly increasing.
std::vector<std::size_t> FindTargets(const Transcript& transcript, const TargetRule& rule);

std::vector<CorpusEntry> SelectTranscripts(std::span<const CorpusEntry> corpus,
                                           const TargetRule& rule);

struct NameLexicon {
  TokenSet all_names;      // follows any title keyword
  TokenSet after_primary;  // follows the primary keyword
};

// Title keywords are treated as stoplisted here, so "mister mister smith"
// contributes only "smith". Throws kPrimaryNotInRule.
NameLexicon BuildLexicon(std::span<const Transcript> train_transcripts, const TargetRule& rule,
                         const std::string& primary_keyword);

}  // namespace noisemask

#endif  // NOISEMASK_TARGETING_H_
