// Copyright 2026 The FactScout Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace factscout {

// Every failure raised by the library carries one of these codes. The HTTP
// layer maps them onto status codes, the CLI onto exit codes.
enum class ErrorCode {
  kMissingField,
  kDuplicateId,
  kUnknownSourceType,
  kUnknownEnumValue,
  kMissingPayload,
  kInvalidValue,
  kMalformedMarkup,
  kEmptySidecar,
  kEmptyGrid,
  kEmptyTrainingSet,
  kNoDataRows,
  kLabelMismatch,
  kNotANumber,
  kInvalidGrammar,
  kDuplicateUnitId,
  kUnknownSourceFilter,
  kCorruptSnapshot,
  kIoFailure,
  kIndexNotEmpty,
  kBlankIndicator,
  kOutOfRange,
  kEmptyLedger,
  kRepositoryVersion,
  kNotFound,
  kBadRequest,
};

const char *error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace factscout
