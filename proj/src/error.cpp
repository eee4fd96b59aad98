// Copyright 2026 The qhist Authors
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

#include "qhist/error.hpp"

namespace qhist {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidValue: return "InvalidValue";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotAProjector: return "NotAProjector";
    case ErrorCode::NotOrthogonal: return "NotOrthogonal";
    case ErrorCode::NotComplete: return "NotComplete";
    case ErrorCode::DuplicateLabel: return "DuplicateLabel";
    case ErrorCode::IncompatibleFrameworks: return "IncompatibleFrameworks";
    case ErrorCode::NotUnitaryEvolution: return "NotUnitaryEvolution";
    case ErrorCode::BadDecomposition: return "BadDecomposition";
    case ErrorCode::UnknownHistory: return "UnknownHistory";
    case ErrorCode::NotAPartition: return "NotAPartition";
    case ErrorCode::MismatchedScenario: return "MismatchedScenario";
    case ErrorCode::NotCompatible: return "NotCompatible";
    case ErrorCode::InconsistentFamily: return "InconsistentFamily";
    case ErrorCode::ZeroProbabilityCondition: return "ZeroProbabilityCondition";
    case ErrorCode::BadTimes: return "BadTimes";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::SizeCap: return "SizeCap";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownField: return "UnknownField";
    case ErrorCode::UnknownOperatorName: return "UnknownOperatorName";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> index)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      index_(index) {}

}  // namespace qhist
