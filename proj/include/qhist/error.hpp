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

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qhist {

enum class ErrorCode {
  InvalidValue,
  NotSquare,
  DimMismatch,
  NotHermitian,
  NotAProjector,
  NotOrthogonal,
  NotComplete,
  DuplicateLabel,
  IncompatibleFrameworks,
  NotUnitaryEvolution,
  BadDecomposition,
  UnknownHistory,
  NotAPartition,
  MismatchedScenario,
  NotCompatible,
  InconsistentFamily,
  ZeroProbabilityCondition,
  BadTimes,
  UnknownLabel,
  SizeCap,
  SyntaxError,
  UnknownField,
  UnknownOperatorName,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library. `index()` names the offending element
/// (projector, slot, history) when one is identifiable.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> index = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> index_;
};

}  // namespace qhist
