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

#include "noisemask/targeting.h"

#include <fstream>

#include "noisemask/error.h"

namespace noisemask {

TargetRule::TargetRule(TokenSet title_keywords, TokenSet stoplist)
    : title_keywords_(std::move(title_keywords)), stoplist_(std::move(stoplist)) {
  for (const auto* set : {&title_keywords_, &stoplist_}) {
    for (const auto& t : *set) {
      if (!IsNormalizedToken(t)) {
        throw Error(ErrorCode::kInvariantViolation, "rule token '" + t + "' is not normalized");
      }
    }
  }
  for (const auto& k : title_keywords_) {
    if (stoplist_.contains(k)) {
      throw Error(ErrorCode::kInvariantViolation, "keyword '" + k + "' is also stoplisted");
    }
  }
}

TargetRule TargetRule::Default() { return TargetRule({"mister", "miss", "missus"}, {}); }

TokenSet ReadTokenFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  TokenSet tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.front() == '#') continue;
    const Transcript normalized = NormalizeText(line);
    tokens.insert(normalized.words().begin(), normalized.words().end());
  }
  return tokens;
}

void WriteTokenFile(const TokenSet& tokens, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string() + " for writing");
  for (const auto& t : tokens) out << t << '\n';
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed: " + path.string());
}

std::vector<std::size_t> FindTargets(const Transcript& transcript, const TargetRule& rule) {
  std::vector<std::size_t> targets;
  for (std::size_t i = 0; i + 1 < transcript.size(); ++i) {
    if (rule.IsKeyword(transcript[i]) && !rule.IsStopped(transcript[i + 1])) {
      targets.push_back(i + 1);
    }
  }
  return targets;
}

std::vector<CorpusEntry> SelectTranscripts(std::span<const CorpusEntry> corpus,
                                           const TargetRule& rule) {
  std::vector<CorpusEntry> selected;
  for (const auto& entry : corpus) {
    if (!FindTargets(entry.transcript, rule).empty()) selected.push_back(entry);
  }
  return selected;
}

NameLexicon BuildLexicon(std::span<const Transcript> train_transcripts, const TargetRule& rule,
                         const std::string& primary_keyword) {
  if (!rule.IsKeyword(primary_keyword)) {
    throw Error(ErrorCode::kPrimaryNotInRule, "'" + primary_keyword + "' is not a title keyword");
  }
  NameLexicon lexicon;
  for (const auto& t : train_transcripts) {
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
      const auto& next = t[i + 1];
      if (!rule.IsKeyword(t[i]) || rule.IsStopped(next) || rule.IsKeyword(next)) continue;
      lexicon.all_names.insert(next);
      if (t[i] == primary_keyword) lexicon.after_primary.insert(next);
    }
  }
  return lexicon;
}

}  // namespace noisemask
