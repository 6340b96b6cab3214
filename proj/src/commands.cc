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

#include "noisemask/commands.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <tuple>

#include "json.hpp"
#include "noisemask/error.h"
#include "noisemask/parallel.h"
#include "noisemask/report.h"
#include "noisemask/rng.h"

namespace noisemask {
namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

template <typename Fn>
auto RunStage(const char* stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

bool IsTrainSplit(const std::string& split) { return split == "train" || split == "train_tts"; }

// Refuses to write outputs into (or over) the corpus being read.
void RequireSeparateOutput(const fs::path& manifest, const fs::path& out_dir) {
  if (out_dir.empty()) throw Error(ErrorCode::kInvalidArgument, "output directory is required");
  const fs::path corpus_dir = fs::weakly_canonical(fs::absolute(manifest).parent_path());
  const fs::path out = fs::weakly_canonical(fs::absolute(out_dir));
  if (corpus_dir == out) {
    throw Error(ErrorCode::kInvalidArgument,
                "output directory must differ from the corpus directory " + corpus_dir.string());
  }
}

std::vector<CorpusEntry> FilterSettings(std::vector<CorpusEntry> entries,
                                        const std::vector<std::string>& settings) {
  if (settings.empty()) return entries;
  const std::set<std::string> wanted(settings.begin(), settings.end());
  std::erase_if(entries, [&](const CorpusEntry& e) { return !wanted.contains(e.split); });
  return entries;
}

std::vector<MaskedQuery> MaskInParallel(const std::vector<CorpusEntry>& selected,
                                        const TargetRule& rule,
                                        const std::vector<MaskSpec>& specs, int jobs) {
  std::vector<std::tuple<const MaskSpec*, const CorpusEntry*, std::size_t>> plan;
  for (const auto& spec : specs) {
    for (const auto& entry : selected) {
      for (std::size_t index : FindTargets(entry.transcript, rule)) {
        plan.emplace_back(&spec, &entry, index);
      }
    }
  }
  std::vector<MaskedQuery> queries(plan.size());
  ParallelFor(plan.size(), jobs, [&](std::size_t i) {
    const auto& [spec, entry, index] = plan[i];
    queries[i] = ApplyNoiseMask(*entry, index, *spec);
  });
  return queries;
}

std::string RequestId(const MaskedQuery& q) { return q.QueryId() + "." + q.mask_label; }

}  // namespace

TargetRule RuleFiles::Load() const {
  TargetRule defaults = TargetRule::Default();
  TokenSet keyword_set = keywords ? ReadTokenFile(*keywords) : defaults.title_keywords();
  TokenSet stop_set = stoplist ? ReadTokenFile(*stoplist) : TokenSet{};
  return TargetRule(std::move(keyword_set), std::move(stop_set));
}

MaskSpec SeededSpec(MaskSpec spec, std::uint64_t seed) {
  spec.noise.seed = DeriveSeed(seed, "mask:" + spec.Label());
  return spec;
}

AuditResult CmdAudit(const AuditConfig& config) {
  AuditResult result;
  std::vector<MaskSpec> specs;
  const TargetRule rule = RunStage("config", [&] {
    if (config.mask_specs.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "at least one mask spec is required");
    }
    std::set<std::string> labels;
    for (const auto& spec : config.mask_specs) {
      spec.Validate();
      if (!labels.insert(spec.Label()).second) {
        throw Error(ErrorCode::kInvalidArgument, "duplicate mask spec '" + spec.Label() + "'");
      }
      specs.push_back(SeededSpec(spec, config.seed));
    }
    RequireSeparateOutput(config.manifest, config.out_dir);
    ParseEndpoint(config.endpoint, config.limits);
    return config.rule.Load();
  });

  const auto all_entries = RunStage("load", [&] { return LoadManifest(config.manifest); });
  const auto audited = FilterSettings(all_entries, config.settings);
  if (audited.empty()) {
    result.warnings.push_back("no corpus entries match the settings filter");
  }

  const auto selected = RunStage("select", [&] { return SelectTranscripts(audited, rule); });
  if (!audited.empty() && selected.empty()) {
    result.warnings.push_back("no transcripts contain a title keyword target");
  }

  const NameLexicon lexicon = RunStage("lexicon", [&] {
    std::vector<Transcript> train;
    for (const auto& e : all_entries) {
      if (IsTrainSplit(e.split)) train.push_back(e.transcript);
    }
    return BuildLexicon(train, rule, config.rule.primary_keyword);
  });

  const auto queries =
      RunStage("mask", [&] { return MaskInParallel(selected, rule, specs, config.jobs); });
  if (config.dump_masked) {
    RunStage("mask", [&] {
      const fs::path dir = config.out_dir / "masked";
      fs::create_directories(dir);
      for (const auto& q : queries) DumpMasked(q, dir);
      return 0;
    });
  }

  std::vector<Transcript> hypotheses;
  if (!queries.empty()) {
    hypotheses = RunStage("transcribe", [&] {
      const auto recognizer =
          MakeRecognizer(ParseEndpoint(config.endpoint, config.limits), config.jobs);
      std::vector<std::string> ids;
      ids.reserve(queries.size());
      for (const auto& q : queries) ids.push_back(RequestId(q));
      std::vector<TranscriptionRequest> requests;
      requests.reserve(queries.size());
      for (std::size_t i = 0; i < queries.size(); ++i) requests.push_back({ids[i], &queries[i].clip});
      return recognizer->TranscribeBatch(requests);
    });
  }

  RunStage("score", [&] {
    result.records.reserve(queries.size());
    for (std::size_t i = 0; i < queries.size(); ++i) {
      result.records.push_back(Score(queries[i], hypotheses[i], lexicon, config.extraction));
    }
    result.report = Aggregate(result.records);
    return 0;
  });

  RunStage("write", [&] {
    WriteReportFiles(config.out_dir, result.report, result.records);
    return 0;
  });
  return result;
}

fs::path CmdAugment(const AugmentCommandConfig& config) {
  const TargetRule rule = RunStage("config", [&] {
    RequireSeparateOutput(config.manifest, config.out_dir);
    if (config.mtr) config.mtr_config.Validate();
    return config.rule.Load();
  });
  auto entries = RunStage("load", [&] { return LoadManifest(config.manifest); });
  RunStage("augment", [&] {
    for (auto& e : entries) {
      if (config.name_silencing) e = NameSilencing(e, rule);
      if (config.word_dropout_k) e = WordDropout(e, *config.word_dropout_k, config.seed);
      if (config.mtr) e = MtrMix(e, config.mtr_config, config.seed);
    }
    return 0;
  });
  return RunStage("write", [&] { return WriteCorpus(entries, config.out_dir); });
}

NameLexicon CmdLexicon(const LexiconCommandConfig& config) {
  const TargetRule rule = RunStage("config", [&] {
    if (config.manifest.has_value() == config.transcripts.has_value()) {
      throw Error(ErrorCode::kInvalidArgument, "give exactly one of a manifest or a transcript file");
    }
    return config.rule.Load();
  });
  const auto transcripts = RunStage("load", [&] {
    std::vector<Transcript> out;
    if (config.manifest) {
      for (const auto& e : LoadManifest(*config.manifest)) {
        if (IsTrainSplit(e.split)) out.push_back(e.transcript);
      }
    } else {
      std::ifstream in(*config.transcripts);
      if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + config.transcripts->string());
      std::string line;
      while (std::getline(in, line)) out.push_back(NormalizeText(line));
    }
    return out;
  });
  const NameLexicon lexicon = RunStage(
      "lexicon", [&] { return BuildLexicon(transcripts, rule, config.rule.primary_keyword); });
  RunStage("write", [&] {
    fs::create_directories(config.out_dir);
    WriteTokenFile(lexicon.all_names, config.out_dir / "names_all.txt");
    WriteTokenFile(lexicon.after_primary, config.out_dir / "names_after_primary.txt");
    return 0;
  });
  return lexicon;
}

ToyAsrModel CmdToyTrain(const ToyTrainConfig& config) {
  auto entries = RunStage("load", [&] { return LoadManifest(config.manifest); });
  entries = FilterSettings(std::move(entries), config.splits);
  const ToyAsrModel model = RunStage("train", [&] { return TrainToy(entries, config.options); });
  RunStage("write", [&] {
    if (config.model_out.has_parent_path()) fs::create_directories(config.model_out.parent_path());
    SaveToyModel(model, config.model_out);
    return 0;
  });
  return model;
}

std::size_t CmdMask(const MaskCommandConfig& config) {
  std::vector<MaskSpec> specs;
  const TargetRule rule = RunStage("config", [&] {
    if (config.mask_specs.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "at least one mask spec is required");
    }
    for (const auto& spec : config.mask_specs) specs.push_back(SeededSpec(spec, config.seed));
    RequireSeparateOutput(config.manifest, config.out_dir);
    return config.rule.Load();
  });
  const auto entries =
      RunStage("load", [&] { return FilterSettings(LoadManifest(config.manifest), config.settings); });
  const auto selected = SelectTranscripts(entries, rule);
  const auto queries = RunStage("mask", [&] { return BatchMask(selected, rule, specs); });
  RunStage("write", [&] {
    fs::create_directories(config.out_dir);
    std::ofstream index(config.out_dir / "queries.jsonl", std::ios::trunc);
    for (const auto& q : queries) {
      const fs::path wav = DumpMasked(q, config.out_dir);
      ordered_json j;
      j["id"] = RequestId(q);
      j["utterance_id"] = q.utterance_id;
      j["target_index"] = q.target_index;
      j["setting"] = q.setting;
      j["noise"] = q.mask_label;
      j["true_word"] = q.true_word;
      j["reference"] = q.reference.Text();
      j["window_begin"] = q.window.begin;
      j["window_end"] = q.window.end;
      j["inserted_samples"] = q.inserted_samples;
      j["wav"] = wav.filename().string();
      index << j.dump() << '\n';
    }
    if (!index) throw Error(ErrorCode::kIoFailure, "write failed: queries.jsonl");
    return 0;
  });
  return queries.size();
}

fs::path CmdGenFixtures(const FixtureOptions& options, const fs::path& out_dir) {
  return RunStage("generate", [&] { return GenerateFixtureCorpus(options, out_dir); });
}

}  // namespace noisemask
