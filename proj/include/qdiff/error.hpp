// Copyright 2026 The qdiff Authors
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
#include <string_view>

namespace qdiff {

enum class ErrorCode {
  PreconditionViolated,
  NumberExceedsCutoff,
  TruncationLoss,
  NotNormalized,
  DimensionMismatch,
  DegreeTooLarge,
  DivergentWithoutContinuation,
  SingularDenominator,
  ZeroTimeNontrivialIndex,
  CutoffTooSmall,
  SignResolutionFailed,
  QuadratureNotConverged,
  UnsupportedInput,
  StepTooLarge,
  NotDecayed,
  ZeroTime,
  StencilOutOfRange,
  SchemaError,
  UnsupportedRouteForInput,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so that
// callers (the scenario runner in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::NumberExceedsCutoff: return "NumberExceedsCutoff";
    case ErrorCode::TruncationLoss: return "TruncationLoss";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DegreeTooLarge: return "DegreeTooLarge";
    case ErrorCode::DivergentWithoutContinuation: return "DivergentWithoutContinuation";
    case ErrorCode::SingularDenominator: return "SingularDenominator";
    case ErrorCode::ZeroTimeNontrivialIndex: return "ZeroTimeNontrivialIndex";
    case ErrorCode::CutoffTooSmall: return "CutoffTooSmall";
    case ErrorCode::SignResolutionFailed: return "SignResolutionFailed";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::UnsupportedInput: return "UnsupportedInput";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::NotDecayed: return "NotDecayed";
    case ErrorCode::ZeroTime: return "ZeroTime";
    case ErrorCode::StencilOutOfRange: return "StencilOutOfRange";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::UnsupportedRouteForInput: return "UnsupportedRouteForInput";
  }
  return "Unknown";
}

}  // namespace qdiff
