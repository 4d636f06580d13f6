// Copyright 2026 The vqaug Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vqaug {

enum class ErrorCode {
  kEmptyTranscription,
  kInvalidUtf8,
  kPositionOutOfRange,
  kCharacterNotInWord,
  kInvalidSpec,
  kDegenerateWord,
  kInvalidDistribution,
  kUnknownPreset,
  kInvalidConfig,
  kMalformedRow,
  kDuplicateId,
  kEmptyDataset,
  kIoFailure,
  kMalformedRecord,
  kUnknownTemplateVersion,
  kEmptyReferenceSet,
  kNoOverlap,
};

std::string_view ErrorCodeName(ErrorCode code);

// Single exception type for the library. `line` is the 1-based input line
// for errors raised while reading files.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> line = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> line_;
};

}  // namespace vqaug
