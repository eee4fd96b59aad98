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
#include <string>
#include <vector>

#include "qhist/histories.hpp"

namespace qhist::oracle {

/// One slot label per time t1 … tn.
struct OutcomeSequence {
  std::vector<std::string> labels;
};

/// Born-rule probability of observing `seq` in successive projective
/// measurements, evolving the unnormalized collapsed state between them.
/// Written against raw matrix entries; shares no code with chain_ket.
/// Throws UnknownLabel.
double sequential_probability(const HistoryFamily& family, const OutcomeSequence& seq);

/// The sequence naming the outcomes of a history.
OutcomeSequence sequence_of(const HistoryFamily& family, const History& history);

struct AdditivityViolation {
  std::vector<std::string> merged_times;
  std::vector<std::string> merged_labels;  ///< "a∨b" per merged time
  std::string coarse_history;              ///< label in the coarse family
  double merged_probability = 0.0;
  double fine_sum = 0.0;
  double discrepancy() const { return merged_probability - fine_sum; }
};

inline constexpr std::size_t kDefaultScanCap = 4096;

/// Merges every pair of outcomes at one or more slots (one pair per slot) and
/// compares each coarse history's probability with the sum of the fine
/// histories it covers. Reports every gap above 10·tol.cons. Throws SizeCap
/// when the family has more than `max_histories` histories.
std::vector<AdditivityViolation> exhaustive_additivity_scan(
    const HistoryFamily& family, const Tolerance& tol,
    std::size_t max_histories = kDefaultScanCap);

struct CrossCheck {
  std::size_t histories = 0;
  double max_discrepancy = 0.0;
  std::string worst_history;
};

/// |sequential_probability − history_probability| over every history.
CrossCheck cross_check(const HistoryFamily& family);

}  // namespace qhist::oracle
