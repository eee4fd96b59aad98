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

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace qhist::cli {

/// Exit codes of the qhist binary.
enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kInconsistent = 2,  ///< analyze: some family inconsistent; conditional: zero-probability condition
  kSingleFrameworkRefusal = 3,
  kOracleDiscrepancy = 4,
};

inline constexpr int kReportFormatVersion = 1;

/// Test-only fault injection.
struct Hooks {
  /// Applied to every chain-ket probability inside `verify`.
  std::function<double(const std::string& history, double probability)> corrupt_probability;
};

/// Runs one qhist invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const Hooks& hooks = {});

}  // namespace qhist::cli
