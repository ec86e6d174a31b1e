/*
 * Copyright 2026 The lrhte Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "lrhte/error.h"

namespace lrhte {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid argument";
    case ErrorCode::kDimensionMismatch:
      return "dimension mismatch";
    case ErrorCode::kOutOfRange:
      return "out of range";
    case ErrorCode::kSingularSystem:
      return "singular system";
    case ErrorCode::kNotFound:
      return "not found";
    case ErrorCode::kSchema:
      return "schema violation";
    case ErrorCode::kDanglingReference:
      return "dangling reference";
    case ErrorCode::kInconsistent:
      return "inconsistent data";
    case ErrorCode::kMissingEntry:
      return "missing entry";
    case ErrorCode::kEmptyCell:
      return "empty cell";
    case ErrorCode::kCorruptFile:
      return "corrupt file";
    case ErrorCode::kVersionMismatch:
      return "version mismatch";
    case ErrorCode::kDiverged:
      return "diverged";
    case ErrorCode::kIo:
      return "i/o error";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

}  // namespace lrhte
