// Copyright 2026 The olp Authors.
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

#ifndef OLP_ERRORS_H_
#define OLP_ERRORS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace olp {

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kUnsupportedConsumption,
  kSolverBudgetExceeded,
  kDegenerateFit,
  kWrongDimension,
  kRecoveryFailed,
  kInsufficientData,
  kConfigError,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception type; the code
// lets callers (the CLI in particular) map failures onto exit statuses.
class OlpError : public std::runtime_error {
 public:
  OlpError(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const { return code_; }
  // The message without the code prefix.
  const std::string& detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

inline std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kUnsupportedConsumption: return "UnsupportedConsumption";
    case ErrorCode::kSolverBudgetExceeded: return "SolverBudgetExceeded";
    case ErrorCode::kDegenerateFit: return "DegenerateFit";
    case ErrorCode::kWrongDimension: return "WrongDimension";
    case ErrorCode::kRecoveryFailed: return "RecoveryFailed";
    case ErrorCode::kInsufficientData: return "InsufficientData";
    case ErrorCode::kConfigError: return "ConfigError";
  }
  return "Unknown";
}

[[noreturn]] inline void Fail(ErrorCode code, const std::string& message) {
  throw OlpError(code, message);
}

}  // namespace olp

#endif  // OLP_ERRORS_H_
