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

#ifndef LRHTE_ERROR_H_
#define LRHTE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace lrhte {

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kOutOfRange,
  kSingularSystem,
  kNotFound,
  kSchema,
  kDanglingReference,
  kInconsistent,
  kMissingEntry,
  kEmptyCell,
  kCorruptFile,
  kVersionMismatch,
  kDiverged,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

// Single exception type for the library. Callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

  // Numerical failures (singular solves, divergence) as opposed to bad input.
  bool IsNumerical() const {
    return code_ == ErrorCode::kSingularSystem || code_ == ErrorCode::kDiverged;
  }

 private:
  ErrorCode code_;
};

}  // namespace lrhte

#endif  // LRHTE_ERROR_H_
