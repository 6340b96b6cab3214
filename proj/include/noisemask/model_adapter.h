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

// Black-box transcription endpoints.
//
// Subprocess protocol: the adapter reads one JSON object per line on stdin,
//   {"id": "<string>", "wav": "<absolute path>"}
// and writes one JSON object per line on stdout, in any order,
//   {"id": "<same string>", "transcript": "<text>"}
// or {"id": ..., "error": "<message>"} on failure. It exits 0 at EOF.
//
// HTTP protocol: POST <base>/transcribe with {"id", "wav_b64"} and a 200
// response carrying {"id", "transcript"}.

#ifndef NOISEMASK_MODEL_ADAPTER_H_
#define NOISEMASK_MODEL_ADAPTER_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "noisemask/alignment.h"
#include "noisemask/audio.h"
#include "noisemask/toy_asr.h"

namespace noisemask {

struct TranscriptionRequest {
  std::string id;
  const AudioClip* clip = nullptr;
};

class Recognizer {
 public:
  virtual ~Recognizer() = default;

  // Results are in request order. Any failed request throws; no partial or
  // empty result stands in for a failure.
  virtual std::vector<Transcript> TranscribeBatch(
      std::span<const TranscriptionRequest> requests) = 0;

  Transcript Transcribe(const AudioClip& clip, const std::string& id = "0");
};

class ToyRecognizer : public Recognizer {
 public:
  ToyRecognizer(std::shared_ptr<const ToyAsrModel> model, int jobs = 1);
  std::vector<Transcript> TranscribeBatch(std::span<const TranscriptionRequest> requests) override;

 private:
  std::shared_ptr<const ToyAsrModel> model_;
  int jobs_;
};

// A child process running `/bin/sh -c <command>` with stdin and stdout
// connected to this process.
class AdapterProcess {
 public:
  explicit AdapterProcess(const std::string& command);
  ~AdapterProcess();
  AdapterProcess(const AdapterProcess&) = delete;
  AdapterProcess& operator=(const AdapterProcess&) = delete;

  // Throws kAdapterCrashed if the child has gone away.
  void WriteLine(std::string_view line);
  // std::nullopt on EOF; throws kAdapterTimeout.
  std::optional<std::string> ReadLine(std::chrono::milliseconds timeout);
  // Signals EOF on the child's stdin.
  void CloseInput();
  // Waits for exit, killing the child after `timeout`. Returns the exit
  // status, or -1 if it had to be killed or died from a signal.
  int Wait(std::chrono::milliseconds timeout);

 private:
  int fd_ = -1;
  int pid_ = -1;
  bool input_closed_ = false;
  std::optional<int> exit_status_;
  std::string buffer_;
};

struct AdapterLimits {
  int max_inflight = 1;
  std::chrono::milliseconds timeout{30000};
};

class SubprocessRecognizer : public Recognizer {
 public:
  SubprocessRecognizer(std::string command, AdapterLimits limits);
  ~SubprocessRecognizer() override;
  std::vector<Transcript> TranscribeBatch(std::span<const TranscriptionRequest> requests) override;

 private:
  std::string command_;
  AdapterLimits limits_;
  std::filesystem::path scratch_dir_;
  std::unique_ptr<AdapterProcess> process_;
};

class HttpRecognizer : public Recognizer {
 public:
  HttpRecognizer(std::string base_url, AdapterLimits limits);
  std::vector<Transcript> TranscribeBatch(std::span<const TranscriptionRequest> requests) override;

 private:
  Transcript Post(const TranscriptionRequest& request) const;

  std::string base_url_;
  AdapterLimits limits_;
};

enum class EndpointKind { kToy, kSubprocess, kHttp };

struct ModelEndpoint {
  EndpointKind kind = EndpointKind::kToy;
  std::string target;  // model file, shell command, or base URL
  AdapterLimits limits;
};

// toy:<model file> | cmd:<shell command> | http:<url>
ModelEndpoint ParseEndpoint(const std::string& spec, AdapterLimits limits = {});

std::unique_ptr<Recognizer> MakeRecognizer(const ModelEndpoint& endpoint, int jobs);

std::string Base64Encode(std::span<const std::uint8_t> bytes);
// Throws kParseError on invalid input.
std::vector<std::uint8_t> Base64Decode(std::string_view text);

// Checks an external adapter against the subprocess protocol: interleaved
// requests with an id bijection, recovery after a malformed line, and a
// clean exit at EOF.
struct ConformanceCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ConformanceOptions {
  int interleaved_requests = 10;
  std::chrono::milliseconds timeout{10000};
  // When set, each response's transcript must equal expected(wav path).
  std::function<std::string(const std::filesystem::path&)> expected;
};

std::vector<ConformanceCheck> RunAdapterConformance(const std::string& command,
                                                    const ConformanceOptions& options = {});

}  // namespace noisemask

#endif  // NOISEMASK_MODEL_ADAPTER_H_
