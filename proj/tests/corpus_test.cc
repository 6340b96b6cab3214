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

#include "noisemask/corpus.h"

#include <gtest/gtest.h>

#include <map>

#include "noisemask/error.h"
#include "noisemask/toy_asr.h"
#include "test_util.h"

namespace noisemask {
namespace {

using testing::CodeOf;
using testing::MakeEntry;
using testing::ReadFile;
using testing::TempDir;
using testing::WriteFile;

std::filesystem::path TwoEntryCorpus(const TempDir& dir) {
  std::vector<CorpusEntry> entries{
      MakeEntry("b", {{"mister", {0, 100}}, {"smith", {200, 300}}}, 400, 1),
      MakeEntry("a", {{"hello", {50, 150}}}, 200, 2)};
  entries[1].split = "test_tts";
  entries[1].source = Provenance::kSynthetic;
  return WriteCorpus(entries, dir.path());
}

TEST(Manifest, WriteThenLoadPreservesOrderAndContent) {
  TempDir dir;
  const auto manifest = TwoEntryCorpus(dir);
  const auto entries = LoadManifest(manifest);
  ASSERT_EQ(entries.size(), 2u);
  EXPECT_EQ(entries[0].id, "b");
  EXPECT_EQ(entries[1].id, "a");
  EXPECT_EQ(entries[1].split, "test_tts");
  EXPECT_EQ(entries[1].source, Provenance::kSynthetic);
  EXPECT_EQ(entries[0], MakeEntry("b", {{"mister", {0, 100}}, {"smith", {200, 300}}}, 400, 1));
}

TEST(Manifest, RelativePathsResolveAgainstManifestDir) {
  TempDir dir;
  TwoEntryCorpus(dir);
  // Loading through a different working directory must not matter.
  const auto cwd = std::filesystem::current_path();
  std::filesystem::current_path("/");
  EXPECT_EQ(LoadManifest(dir / "manifest.jsonl").size(), 2u);
  std::filesystem::current_path(cwd);
}

TEST(Manifest, SourceDefaultsToReal) {
  TempDir dir;
  TwoEntryCorpus(dir);
  WriteFile(dir / "m2.jsonl",
            R"({"id":"x","split":"train","wav":"wav/b.wav","transcript":"Mister Smith!","alignment":"ali/b.ali"})"
            "\n");
  const auto entries = LoadManifest(dir / "m2.jsonl");
  ASSERT_EQ(entries.size(), 1u);
  EXPECT_EQ(entries[0].source, Provenance::kReal);
  EXPECT_EQ(entries[0].transcript.Text(), "mister smith");
}

TEST(Manifest, StructuralErrors) {
  TempDir dir;
  TwoEntryCorpus(dir);
  const std::string line =
      R"({"id":"x","split":"train","wav":"wav/b.wav","transcript":"mister smith","alignment":"ali/b.ali"})";
  WriteFile(dir / "dup.jsonl", line + "\n" + line + "\n");
  EXPECT_EQ(CodeOf([&] { LoadManifest(dir / "dup.jsonl"); }), ErrorCode::kManifestParseError);
  WriteFile(dir / "json.jsonl", "{not json\n");
  EXPECT_EQ(CodeOf([&] { LoadManifest(dir / "json.jsonl"); }), ErrorCode::kManifestParseError);
  WriteFile(dir / "field.jsonl", R"({"id":"x","split":"train"})" "\n");
  EXPECT_EQ(CodeOf([&] { LoadManifest(dir / "field.jsonl"); }), ErrorCode::kManifestParseError);
  WriteFile(dir / "split.jsonl",
            R"({"id":"x","split":"dev","wav":"wav/b.wav","transcript":"mister smith","alignment":"ali/b.ali"})"
            "\n");
  EXPECT_EQ(CodeOf([&] { LoadManifest(dir / "split.jsonl"); }), ErrorCode::kManifestParseError);
  WriteFile(dir / "custom.jsonl",
            R"({"id":"x","split":"custom:held-out","wav":"wav/b.wav","transcript":"mister smith","alignment":"ali/b.ali"})"
            "\n");
  EXPECT_EQ(LoadManifest(dir / "custom.jsonl")[0].split, "custom:held-out");
  EXPECT_EQ(CodeOf([&] { LoadManifest(dir / "missing.jsonl"); }), ErrorCode::kIoFailure);
}

TEST(Manifest, AlignmentPastClipNamesTheEntry) {
  TempDir dir;
  TwoEntryCorpus(dir);
  WriteFile(dir / "ali" / "long.ali", "mister\t0\t100\nsmith\t200\t900\n");
  WriteFile(dir / "bad.jsonl",
            R"({"id":"good","split":"train","wav":"wav/a.wav","transcript":"hello","alignment":"ali/a.ali"})"
            "\n"
            R"({"id":"broken","split":"train","wav":"wav/b.wav","transcript":"mister smith","alignment":"ali/long.ali"})"
            "\n");
  try {
    LoadManifest(dir / "bad.jsonl");
    FAIL() << "expected EntryError";
  } catch (const EntryError& e) {
    EXPECT_EQ(e.entry_id(), "broken");
    EXPECT_EQ(e.code(), ErrorCode::kEntryInvalid);
  }
}

TEST(Manifest, MissingWavNamesTheEntry) {
  TempDir dir;
  WriteFile(dir / "m.jsonl",
            R"({"id":"lost","split":"train","wav":"nope.wav","transcript":"a","alignment":"nope.ali"})"
            "\n");
  try {
    LoadManifest(dir / "m.jsonl");
    FAIL();
  } catch (const EntryError& e) {
    EXPECT_EQ(e.entry_id(), "lost");
  }
}

TEST(Fixture, SingleUtterance) {
  FixtureOptions o;
  o.n_utterances = 1;
  o.name_pool = {"smith"};
  o.seed = 3;
  const auto entries = SynthesizeFixtureCorpus(o);
  ASSERT_EQ(entries.size(), 1u);
  EXPECT_EQ(entries[0].alignment[0].token, "mister");
  EXPECT_EQ(entries[0].transcript[1], "smith");
  EXPECT_EQ(entries[0].id, "utt0000");
  EXPECT_NO_THROW(entries[0].Validate());
}

TEST(Fixture, SegmenterRecoversBoundaries) {
  FixtureOptions o;
  o.seed = 11;
  const ToyAsrOptions toy;
  for (const auto& e : SynthesizeFixtureCorpus(o)) {
    const WordAlignment found =
        EnergySegment(e.clip, e.transcript, toy.silence_threshold, toy.min_gap_ms);
    ASSERT_EQ(found.size(), e.alignment.size()) << e.id;
    for (std::size_t i = 0; i < found.size(); ++i) {
      EXPECT_LE(std::abs(found[i].start_ms - e.alignment[i].start_ms), kFingerprintHopMs) << e.id;
      EXPECT_LE(std::abs(found[i].end_ms - e.alignment[i].end_ms), kFingerprintHopMs) << e.id;
    }
  }
}

TEST(Fixture, SameSeedSameBytes) {
  TempDir a, b;
  FixtureOptions o;
  o.n_utterances = 20;
  o.seed = 5;
  GenerateFixtureCorpus(o, a.path());
  GenerateFixtureCorpus(o, b.path());
  EXPECT_EQ(ReadFile(a / "manifest.jsonl"), ReadFile(b / "manifest.jsonl"));
  for (const auto& f : std::filesystem::directory_iterator(a / "wav")) {
    EXPECT_EQ(ReadFile(f.path()), ReadFile(b.path() / "wav" / f.path().filename()));
  }
  o.seed = 6;
  EXPECT_NE(SynthesizeFixtureCorpus(o)[0].clip, LoadManifest(a / "manifest.jsonl")[0].clip);
}

TEST(Fixture, ZipfSkewAndSplits) {
  FixtureOptions o;
  o.n_utterances = 2000;
  o.test_fraction = 0.25;
  std::map<std::string, int> names;
  int test = 0;
  for (const auto& e : SynthesizeFixtureCorpus(o)) {
    ++names[e.transcript[1]];
    test += e.split == "test";
  }
  const auto& pool = o.name_pool;
  EXPECT_GT(names[pool[0]], names[pool[1]]);
  EXPECT_GT(names[pool[1]], names[pool[9]]);
  // Weight of rank 1 under exponent 1 over 20 names is 1 / H_20 ~ 0.278.
  EXPECT_NEAR(names[pool[0]] / 2000.0, 0.278, 0.04);
  EXPECT_NEAR(test / 2000.0, 0.25, 0.04);
}

TEST(Fixture, VoicesAreDistinct) {
  std::vector<std::string> vocab{"mister"};
  for (const auto& w : DefaultNamePool()) vocab.push_back(w);
  for (const auto& w : DefaultFillerWords()) vocab.push_back(w);
  const FixtureVoices voices(vocab, 0, 16000, 0.85);
  std::vector<Fingerprint> fps;
  for (const auto& [token, samples] : voices.all()) fps.push_back(ComputeFingerprint(samples, 16000));
  ASSERT_EQ(fps.size(), vocab.size());
  for (std::size_t i = 0; i < fps.size(); ++i) {
    for (std::size_t j = i + 1; j < fps.size(); ++j) EXPECT_LT(CosineSimilarity(fps[i], fps[j]), 0.85);
  }
}

TEST(Fixture, RejectsBadOptions) {
  FixtureOptions o;
  o.name_pool = {};
  EXPECT_EQ(CodeOf([&] { SynthesizeFixtureCorpus(o); }), ErrorCode::kInvalidArgument);
  o.name_pool = {"Smith"};
  EXPECT_EQ(CodeOf([&] { SynthesizeFixtureCorpus(o); }), ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace noisemask
