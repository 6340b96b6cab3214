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

#include "noisemask/model_adapter.h"

#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstring>
#include <map>
#include <set>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "noisemask/error.h"
#include "noisemask/parallel.h"
#include "noisemask/rng.h"

namespace noisemask {
namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr char kB64Alphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::filesystem::path MakeScratchDir() {
  static std::atomic<int> counter{0};
  const auto dir = std::filesystem::temp_directory_path() /
                   ("noisemask-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::create_directories(dir);
  return dir;
}

json ParseResponseLine(const std::string& line) {
  json response;
  try {
    response = json::parse(line);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kAdapterProtocolError, "malformed response line: " + line);
  }
  if (!response.is_object()) {
    throw Error(ErrorCode::kAdapterProtocolError, "response is not a JSON object: " + line);
  }
  return response;
}

void CheckUniqueIds(std::span<const TranscriptionRequest> requests) {
  std::set<std::string> ids;
  for (const auto& r : requests) {
    if (!ids.insert(r.id).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate request id '" + r.id + "'");
    }
    if (r.clip == nullptr) throw Error(ErrorCode::kInvalidArgument, "request without audio");
  }
}

}  // namespace

Transcript Recognizer::Transcribe(const AudioClip& clip, const std::string& id) {
  const TranscriptionRequest request{id, &clip};
  return TranscribeBatch(std::span<const TranscriptionRequest>(&request, 1)).front();
}

ToyRecognizer::ToyRecognizer(std::shared_ptr<const ToyAsrModel> model, int jobs)
    : model_(std::move(model)), jobs_(jobs) {}

std::vector<Transcript> ToyRecognizer::TranscribeBatch(
    std::span<const TranscriptionRequest> requests) {
  CheckUniqueIds(requests);
  std::vector<Transcript> out(requests.size());
  ParallelFor(requests.size(), jobs_,
              [&](std::size_t i) { out[i] = ToyTranscribe(*model_, *requests[i].clip); });
  return out;
}

AdapterProcess::AdapterProcess(const std::string& command) {
  int sv[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, sv) != 0) {
    throw Error(ErrorCode::kIoFailure, std::string("socketpair: ") + std::strerror(errno));
  }
  const pid_t pid = ::fork();
  if (pid < 0) {
    ::close(sv[0]);
    ::close(sv[1]);
    throw Error(ErrorCode::kIoFailure, std::string("fork: ") + std::strerror(errno));
  }
  if (pid == 0) {
    ::dup2(sv[1], STDIN_FILENO);
    ::dup2(sv[1], STDOUT_FILENO);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(sv[1]);
  fd_ = sv[0];
  pid_ = pid;
}

AdapterProcess::~AdapterProcess() {
  if (pid_ > 0 && !exit_status_) {
    CloseInput();
    Wait(std::chrono::milliseconds(2000));
  }
  if (fd_ >= 0) ::close(fd_);
}

void AdapterProcess::WriteLine(std::string_view line) {
  std::string data(line);
  data += '\n';
  std::size_t sent = 0;
  while (sent < data.size()) {
    const ssize_t n = ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::kAdapterCrashed,
                  std::string("adapter stdin closed: ") + std::strerror(errno));
    }
    sent += static_cast<std::size_t>(n);
  }
}

std::optional<std::string> AdapterProcess::ReadLine(std::chrono::milliseconds timeout) {
  const auto deadline = Clock::now() + timeout;
  while (true) {
    if (const auto nl = buffer_.find('\n'); nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    const auto remaining =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
    if (remaining.count() <= 0) {
      throw Error(ErrorCode::kAdapterTimeout,
                  "no response within " + std::to_string(timeout.count()) + " ms");
    }
    pollfd pfd{fd_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(remaining.count()));
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::kIoFailure, std::string("poll: ") + std::strerror(errno));
    }
    if (ready == 0) continue;
    char chunk[4096];
    const ssize_t n = ::recv(fd_, chunk, sizeof(chunk), 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      if (errno == ECONNRESET) return std::nullopt;
      throw Error(ErrorCode::kIoFailure, std::string("recv: ") + std::strerror(errno));
    }
    if (n == 0) {
      if (buffer_.empty()) return std::nullopt;
      std::string line = std::move(buffer_);
      buffer_.clear();
      return line;
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

void AdapterProcess::CloseInput() {
  if (!input_closed_ && fd_ >= 0) {
    ::shutdown(fd_, SHUT_WR);
    input_closed_ = true;
  }
}

int AdapterProcess::Wait(std::chrono::milliseconds timeout) {
  if (exit_status_) return *exit_status_;
  const auto deadline = Clock::now() + timeout;
  int status = 0;
  while (true) {
    const pid_t r = ::waitpid(pid_, &status, WNOHANG);
    if (r == pid_) break;
    if (r < 0 && errno != EINTR) {
      exit_status_ = -1;
      return -1;
    }
    if (Clock::now() >= deadline) {
      ::kill(pid_, SIGKILL);
      ::waitpid(pid_, &status, 0);
      exit_status_ = -1;
      return -1;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
  exit_status_ = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return *exit_status_;
}

SubprocessRecognizer::SubprocessRecognizer(std::string command, AdapterLimits limits)
    : command_(std::move(command)), limits_(limits), scratch_dir_(MakeScratchDir()) {
  if (limits_.max_inflight < 1) throw Error(ErrorCode::kInvalidArgument, "max_inflight must be >= 1");
}

SubprocessRecognizer::~SubprocessRecognizer() {
  process_.reset();
  std::error_code ec;
  std::filesystem::remove_all(scratch_dir_, ec);
}

std::vector<Transcript> SubprocessRecognizer::TranscribeBatch(
    std::span<const TranscriptionRequest> requests) {
  CheckUniqueIds(requests);
  if (!process_) process_ = std::make_unique<AdapterProcess>(command_);

  std::vector<Transcript> out(requests.size());
  std::map<std::string, std::size_t> outstanding;
  std::vector<std::filesystem::path> wavs(requests.size());
  std::size_t next = 0;
  std::size_t done = 0;
  try {
    while (done < requests.size()) {
      while (next < requests.size() &&
             outstanding.size() < static_cast<std::size_t>(limits_.max_inflight)) {
        wavs[next] = scratch_dir_ / (std::to_string(next) + ".wav");
        WriteWav(*requests[next].clip, wavs[next]);
        const json request = {{"id", requests[next].id}, {"wav", wavs[next].string()}};
        process_->WriteLine(request.dump());
        outstanding.emplace(requests[next].id, next);
        ++next;
      }
      const auto line = process_->ReadLine(limits_.timeout);
      if (!line) {
        const int status = process_->Wait(std::chrono::milliseconds(500));
        throw Error(ErrorCode::kAdapterCrashed,
                    "adapter closed its output (exit status " + std::to_string(status) + ")");
      }
      if (line->empty()) continue;
      const json response = ParseResponseLine(*line);
      if (!response.contains("id") || !response["id"].is_string()) {
        throw Error(ErrorCode::kAdapterProtocolError, "response without string id: " + *line);
      }
      const auto id = response["id"].get<std::string>();
      const auto it = outstanding.find(id);
      if (it == outstanding.end()) {
        throw Error(ErrorCode::kAdapterProtocolError, "response id '" + id + "' matches no request");
      }
      if (response.contains("error")) {
        throw Error(ErrorCode::kAdapterProtocolError,
                    "adapter failed request '" + id + "': " + response["error"].dump());
      }
      if (!response.contains("transcript") || !response["transcript"].is_string()) {
        throw Error(ErrorCode::kAdapterProtocolError, "response without transcript: " + *line);
      }
      out[it->second] = NormalizeText(response["transcript"].get<std::string>());
      std::error_code ec;
      std::filesystem::remove(wavs[it->second], ec);
      outstanding.erase(it);
      ++done;
    }
  } catch (...) {
    process_.reset();
    throw;
  }
  return out;
}

HttpRecognizer::HttpRecognizer(std::string base_url, AdapterLimits limits)
    : base_url_(std::move(base_url)), limits_(limits) {
  if (limits_.max_inflight < 1) throw Error(ErrorCode::kInvalidArgument, "max_inflight must be >= 1");
}

Transcript HttpRecognizer::Post(const TranscriptionRequest& request) const {
  std::string host = base_url_;
  std::string prefix;
  const auto scheme = host.find("://");
  const auto slash = host.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  if (slash != std::string::npos) {
    prefix = host.substr(slash);
    host.resize(slash);
  }
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();

  httplib::Client client(host);
  const auto secs = limits_.timeout.count() / 1000;
  const auto usecs = (limits_.timeout.count() % 1000) * 1000;
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);

  const json body = {{"id", request.id}, {"wav_b64", Base64Encode(EncodeWav(*request.clip))}};
  const auto result = client.Post(prefix + "/transcribe", body.dump(), "application/json");
  if (!result) {
    const auto err = result.error();
    if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read) {
      throw Error(ErrorCode::kAdapterTimeout, "http request '" + request.id + "': " +
                                                  httplib::to_string(err));
    }
    throw Error(ErrorCode::kAdapterCrashed,
                "http request '" + request.id + "': " + httplib::to_string(err));
  }
  if (result->status != 200) {
    throw Error(ErrorCode::kAdapterProtocolError,
                "http status " + std::to_string(result->status) + " for '" + request.id + "'");
  }
  const json response = ParseResponseLine(result->body);
  if (!response.contains("id") || !response["id"].is_string() ||
      response["id"].get<std::string>() != request.id) {
    throw Error(ErrorCode::kAdapterProtocolError, "http response id mismatch for '" + request.id + "'");
  }
  if (!response.contains("transcript") || !response["transcript"].is_string()) {
    throw Error(ErrorCode::kAdapterProtocolError, "http response without transcript");
  }
  return NormalizeText(response["transcript"].get<std::string>());
}

std::vector<Transcript> HttpRecognizer::TranscribeBatch(
    std::span<const TranscriptionRequest> requests) {
  CheckUniqueIds(requests);
  std::vector<Transcript> out(requests.size());
  ParallelFor(requests.size(), limits_.max_inflight,
              [&](std::size_t i) { out[i] = Post(requests[i]); });
  return out;
}

ModelEndpoint ParseEndpoint(const std::string& spec, AdapterLimits limits) {
  ModelEndpoint endpoint;
  endpoint.limits = limits;
  if (spec.rfind("toy:", 0) == 0) {
    endpoint.kind = EndpointKind::kToy;
    endpoint.target = spec.substr(4);
  } else if (spec.rfind("cmd:", 0) == 0) {
    endpoint.kind = EndpointKind::kSubprocess;
    endpoint.target = spec.substr(4);
  } else if (spec.rfind("http://", 0) == 0 || spec.rfind("https://", 0) == 0) {
    endpoint.kind = EndpointKind::kHttp;
    endpoint.target = spec;
  } else if (spec.rfind("http:", 0) == 0) {
    endpoint.kind = EndpointKind::kHttp;
    endpoint.target = spec.substr(5);
    if (endpoint.target.find("://") == std::string::npos) endpoint.target = "http://" + endpoint.target;
  } else {
    throw Error(ErrorCode::kInvalidArgument,
                "endpoint must be toy:<model>, cmd:<command> or http:<url>, got '" + spec + "'");
  }
  if (endpoint.target.empty()) throw Error(ErrorCode::kInvalidArgument, "empty endpoint target");
  if (limits.max_inflight < 1) throw Error(ErrorCode::kInvalidArgument, "max_inflight must be >= 1");
  return endpoint;
}

std::unique_ptr<Recognizer> MakeRecognizer(const ModelEndpoint& endpoint, int jobs) {
  switch (endpoint.kind) {
    case EndpointKind::kToy:
      return std::make_unique<ToyRecognizer>(
          std::make_shared<const ToyAsrModel>(LoadToyModel(endpoint.target)), jobs);
    case EndpointKind::kSubprocess:
      return std::make_unique<SubprocessRecognizer>(endpoint.target, endpoint.limits);
    case EndpointKind::kHttp: {
      AdapterLimits limits = endpoint.limits;
      limits.max_inflight = std::max(1, std::min(limits.max_inflight, jobs));
      return std::make_unique<HttpRecognizer>(endpoint.target, limits);
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown endpoint kind");
}

std::string Base64Encode(std::span<const std::uint8_t> bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    const std::uint32_t v = bytes[i] << 16 | bytes[i + 1] << 8 | bytes[i + 2];
    out += kB64Alphabet[v >> 18 & 63];
    out += kB64Alphabet[v >> 12 & 63];
    out += kB64Alphabet[v >> 6 & 63];
    out += kB64Alphabet[v & 63];
  }
  if (const std::size_t rest = bytes.size() - i; rest > 0) {
    std::uint32_t v = bytes[i] << 16;
    if (rest == 2) v |= bytes[i + 1] << 8;
    out += kB64Alphabet[v >> 18 & 63];
    out += kB64Alphabet[v >> 12 & 63];
    out += rest == 2 ? kB64Alphabet[v >> 6 & 63] : '=';
    out += '=';
  }
  return out;
}

std::vector<std::uint8_t> Base64Decode(std::string_view text) {
  if (text.size() % 4 != 0) throw Error(ErrorCode::kParseError, "base64 length not a multiple of 4");
  auto value = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
  };
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    const bool last = i + 4 == text.size();
    const int pad = last ? (text[i + 3] == '=') + (text[i + 2] == '=') : 0;
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) {
      const char c = text[i + k];
      int d = 0;
      if (k >= 4 - pad) {
        if (c != '=') throw Error(ErrorCode::kParseError, "bad base64 padding");
      } else {
        d = value(c);
        if (d < 0) throw Error(ErrorCode::kParseError, "bad base64 character");
      }
      v = v << 6 | static_cast<std::uint32_t>(d);
    }
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    if (pad < 2) out.push_back(static_cast<std::uint8_t>(v >> 8));
    if (pad < 1) out.push_back(static_cast<std::uint8_t>(v));
  }
  return out;
}

std::vector<ConformanceCheck> RunAdapterConformance(const std::string& command,
                                                    const ConformanceOptions& options) {
  std::vector<ConformanceCheck> checks;
  const auto scratch = MakeScratchDir();
  AdapterProcess process(command);

  auto read_response = [&]() -> json {
    const auto line = process.ReadLine(options.timeout);
    if (!line) throw Error(ErrorCode::kAdapterCrashed, "adapter closed its output");
    return ParseResponseLine(*line);
  };

  {
    ConformanceCheck check{"interleaved requests", false, {}};
    try {
      std::map<std::string, std::filesystem::path> pending;
      for (int i = 0; i < options.interleaved_requests; ++i) {
        // One id exercises non-ASCII UTF-8 round-tripping.
        const std::string id = (i == 1 ? "utf8-\xC3\xA9\xE2\x82\xAC-" : "req-") + std::to_string(i);
        const auto wav = scratch / ("c" + std::to_string(i) + ".wav");
        WriteWav(GenerateNoise(NoiseSource::White(DeriveSeed(1, id)), 50 + 10 * i, 16000), wav);
        pending.emplace(id, wav);
        process.WriteLine(json({{"id", id}, {"wav", wav.string()}}).dump());
      }
      std::set<std::string> seen;
      std::string problem;
      for (int i = 0; i < options.interleaved_requests && problem.empty(); ++i) {
        const json r = read_response();
        if (!r.contains("id") || !r["id"].is_string()) {
          problem = "response without string id: " + r.dump();
        } else if (const auto id = r["id"].get<std::string>(); !pending.contains(id)) {
          problem = "unknown id '" + id + "'";
        } else if (!seen.insert(id).second) {
          problem = "duplicate response for '" + id + "'";
        } else if (!r.contains("transcript") || !r["transcript"].is_string()) {
          problem = "no transcript for '" + id + "'";
        } else if (options.expected &&
                   r["transcript"].get<std::string>() != options.expected(pending[id])) {
          problem = "transcript mismatch for '" + id + "'";
        }
      }
      check.passed = problem.empty();
      check.detail = check.passed ? std::to_string(seen.size()) + " ids matched" : problem;
    } catch (const std::exception& e) {
      check.detail = e.what();
    }
    checks.push_back(check);
  }

  {
    ConformanceCheck check{"malformed line recovery", false, {}};
    try {
      process.WriteLine("not json");
      const json err = read_response();
      if (!err.contains("id") || !err["id"].is_null() || !err.contains("error")) {
        check.detail = "expected {\"id\": null, \"error\": ...}, got " + err.dump();
      } else {
        const auto wav = scratch / "after.wav";
        WriteWav(GenerateNoise(NoiseSource::White(3), 80, 16000), wav);
        process.WriteLine(json({{"id", "after-malformed"}, {"wav", wav.string()}}).dump());
        const json r = read_response();
        check.passed = r.value("id", json()).is_string() &&
                       r["id"].get<std::string>() == "after-malformed" && r.contains("transcript");
        check.detail = check.passed ? "recovered" : "bad follow-up response " + r.dump();
      }
    } catch (const std::exception& e) {
      check.detail = e.what();
    }
    checks.push_back(check);
  }

  {
    ConformanceCheck check{"clean exit at EOF", false, {}};
    process.CloseInput();
    const int status = process.Wait(options.timeout);
    check.passed = status == 0;
    check.detail = "exit status " + std::to_string(status);
    checks.push_back(check);
  }

  std::error_code ec;
  std::filesystem::remove_all(scratch, ec);
  return checks;
}

}  // namespace noisemask
