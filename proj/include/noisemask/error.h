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

#ifndef NOISEMASK_ERROR_H_
#define NOISEMASK_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace noisemask {

enum class ErrorCode {
  kMalformedWav,
  kUnsupportedFormat,
  kIoFailure,
  kRateMismatch,
  kSilentInput,
  kParseError,
  kInvariantViolation,
  kSegmentCountMismatch,
  kPrimaryNotInRule,
  kIndexOutOfRange,
  kAdapterTimeout,
  kAdapterProtocolError,
  kAdapterCrashed,
  kEmptyModel,
  kNoWildcard,
  kMultipleWildcards,
  kEmptyReference,
  kKTooLarge,
  kManifestParseError,
  kEntryInvalid,
  kInvalidArgument,
};

std::string_view ErrorCodeName(ErrorCode code);

// All toolkit failures are reported as Error; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by load_manifest when a specific entry fails validation.
class EntryError : public Error {
 public:
  EntryError(std::string entry_id, const std::string& cause)
      : Error(ErrorCode::kEntryInvalid, "entry '" + entry_id + "': " + cause),
        entry_id_(std::move(entry_id)) {}

  const std::string& entry_id() const noexcept { return entry_id_; }

 private:
  std::string entry_id_;
};

}  // namespace noisemask

#endif  // NOISEMASK_ERROR_H_
