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

#include "noisemask/error.h"

namespace noisemask {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedWav: return "MalformedWav";
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kRateMismatch: return "RateMismatch";
    case ErrorCode::kSilentInput: return "SilentInput";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kInvariantViolation: return "InvariantViolation";
    case ErrorCode::kSegmentCountMismatch: return "SegmentCountMismatch";
    case ErrorCode::kPrimaryNotInRule: return "PrimaryNotInRule";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kAdapterTimeout: return "AdapterTimeout";
    case ErrorCode::kAdapterProtocolError: return "AdapterProtocolError";
    case ErrorCode::kAdapterCrashed: return "AdapterCrashed";
    case ErrorCode::kEmptyModel: return "EmptyModel";
    case ErrorCode::kNoWildcard: return "NoWildcard";
    case ErrorCode::kMultipleWildcards: return "MultipleWildcards";
    case ErrorCode::kEmptyReference: return "EmptyReference";
    case ErrorCode::kKTooLarge: return "KTooLarge";
    case ErrorCode::kManifestParseError: return "ManifestParseError";
    case ErrorCode::kEntryInvalid: return "EntryInvalid";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace noisemask
