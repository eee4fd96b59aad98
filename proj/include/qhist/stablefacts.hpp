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
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qhist/error.hpp"
#include "qhist/histories.hpp"

namespace qhist {

/// The facts one observer holds about the system: its history family.
struct ObserverRecord {
  std::string name;
  HistoryFamily family;
};

enum class Verdict { Stable, Relative };
enum class FailingCondition { None, Commutation, Consistency };

std::string_view to_string(Verdict v);
std::string_view to_string(FailingCondition c);

struct SlotCommutation {
  std::string time;
  double max_residual = 0.0;
  bool commutes = true;
  std::string worst_first;   ///< label in the first family
  std::string worst_second;  ///< label in the second family
};

/// Outcome of the two-condition test: slot-wise commutation, then consistency
/// of the slot-wise product family.
struct CompatibilityReport {
  std::vector<std::string> observers;
  std::vector<SlotCommutation> per_slot;
  /// Absent when the slot products do not form decompositions.
  std::optional<ConsistencyReport> product_consistency;
  std::size_t product_history_count = 0;
  Verdict verdict = Verdict::Stable;
  FailingCondition failing = FailingCondition::None;
};

/// Carries the report explaining why two families cannot be combined.
class NotCompatibleError : public Error {
 public:
  explicit NotCompatibleError(CompatibilityReport report);
  const CompatibilityReport& report() const noexcept { return report_; }

 private:
  CompatibilityReport report_;
};

/// Throws MismatchedScenario unless both families share dim, grid, initial
/// ket and evolutions.
CompatibilityReport check_compatibility(const ObserverRecord& a, const ObserverRecord& b,
                                        const Tolerance& tol);

/// n-way generalization: every pair commutes slot-wise and the slot-wise
/// product of all families is consistent.
CompatibilityReport check_compatibility_all(std::span<const ObserverRecord> observers,
                                            const Tolerance& tol);

/// Product family with labels "k∧y". Throws NotCompatibleError.
HistoryFamily combine(const ObserverRecord& a, const ObserverRecord& b, const Tolerance& tol);
HistoryFamily combine_all(std::span<const ObserverRecord> observers, const Tolerance& tol);

/// An event at one time: a slot label, or a projector from the slot's event
/// algebra (a sum of slot projectors).
struct TimedEvent {
  std::string time;
  std::variant<std::string, ComplexMatrix> what;
};

struct FactQuery {
  TimedEvent event;
  TimedEvent condition;
};

/// P(event | condition) inside one consistent family. Errors:
/// InconsistentFamily, ZeroProbabilityCondition, UnknownLabel, BadTimes.
double conditional_probability(const HistoryFamily& family, const FactQuery& query,
                               const Tolerance& tol);

/// P(event), summing the probabilities of the matching histories.
double event_probability(const HistoryFamily& family, const TimedEvent& event,
                         const Tolerance& tol);

struct TotalProbabilityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// P(b) against Σᵢ P(b|aᵢ)P(aᵢ) over the outcomes aᵢ at partition_time.
TotalProbabilityCheck check_total_probability_law(const HistoryFamily& family,
                                                  const TimedEvent& event,
                                                  const std::string& partition_time,
                                                  const Tolerance& tol);

/// Whether the later slot's sample space, pulled back through the evolutions
/// in between, commutes with the record slot's sample space.
bool information_preserved(const HistoryFamily& family, const std::string& record_time,
                           const std::string& later_time, const Tolerance& tol);

}  // namespace qhist
