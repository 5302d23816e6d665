/*
 * Copyright 2026 The LMD Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LMD_CORE_ERROR_HPP
#define LMD_CORE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace lmd {

enum class ErrorCode {
  kInvalidArgument,
  kIo,
  kFormat,
  kEmptyLog,
  kDegenerateMap,
  kEmptyDescriptor,
  kNoStructure,
  kNoFreeSpace,
  kNoWalls,
  kDuplicateMap,
  kEmptyIndex,
  kTruthNotRanked,
  kInsufficientDistractors,
};

const char* ErrorCodeName(ErrorCode code);

// Every failure raised by the core carries one of the codes above; the C API
// maps them one-to-one onto lmd_status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kFormat: return "Format";
    case ErrorCode::kEmptyLog: return "EmptyLog";
    case ErrorCode::kDegenerateMap: return "DegenerateMap";
    case ErrorCode::kEmptyDescriptor: return "EmptyDescriptor";
    case ErrorCode::kNoStructure: return "NoStructure";
    case ErrorCode::kNoFreeSpace: return "NoFreeSpace";
    case ErrorCode::kNoWalls: return "NoWalls";
    case ErrorCode::kDuplicateMap: return "DuplicateMap";
    case ErrorCode::kEmptyIndex: return "EmptyIndex";
    case ErrorCode::kTruthNotRanked: return "TruthNotRanked";
    case ErrorCode::kInsufficientDistractors: return "InsufficientDistractors";
  }
  return "Unknown";
}

inline void Require(bool condition, const std::string& message) {
  if (!condition) throw Error(ErrorCode::kInvalidArgument, message);
}

}  // namespace lmd

#endif  // LMD_CORE_ERROR_HPP
