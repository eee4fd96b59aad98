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
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qhist/framework.hpp"
#include "qhist/linalg.hpp"

namespace qhist {

inline constexpr std::size_t kDefaultMaxHistories = 1'000'000;

/// Ordered, unique time labels t0 … tn with n ≥ 1. t0 carries the initial
/// state; slots are t1 … tn.
class TimeGrid {
 public:
  explicit TimeGrid(std::vector<std::string> labels);

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::size_t slot_count() const noexcept { return labels_.size() - 1; }
  std::optional<std::size_t> index_of(std::string_view label) const;
  /// Slot index (0-based, t1 ↦ 0) of a time label. Throws BadTimes for t0 or
  /// labels not on the grid.
  std::size_t slot_of(std::string_view label) const;
  const std::string& slot_label(std::size_t slot) const { return labels_.at(slot + 1); }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  std::vector<std::string> labels_;
};

/// Observable whose spectral projectors become a slot's sample space. Labels,
/// if given, name the eigenvalues in ascending order.
struct Observable {
  ComplexMatrix matrix;
  std::vector<std::string> labels;
};

/// Mutually orthogonal projectors; the complement "rest" is added when they
/// do not sum to the identity.
struct ProjectorSet {
  std::vector<ComplexMatrix> projectors;
  std::vector<std::string> labels;
};

using SlotSpec = std::variant<Observable, ProjectorSet, ProjectiveDecomposition>;

/// Converts a slot specification into a full decomposition of the identity.
ProjectiveDecomposition slot_decomposition(const SlotSpec& spec, const Tolerance& tol);

/// Label for an eigenvalue: "+1", "-0.5", "0".
std::string eigenvalue_label(double value);

/// One outcome index per slot.
struct History {
  std::vector<std::size_t> outcomes;
  friend bool operator==(const History&, const History&) = default;
};

/// A family of histories {Yᵃ}: pure initial state at t0, unitaries between
/// adjacent times, a sample space per slot, and every outcome tuple.
class HistoryFamily {
 public:
  std::size_t dim() const noexcept { return initial_.dim(); }
  const TimeGrid& grid() const noexcept { return grid_; }
  const Ket& initial_ket() const noexcept { return initial_; }
  /// evolutions()[i] maps t_i to t_{i+1}.
  const std::vector<ComplexMatrix>& evolutions() const noexcept { return evolutions_; }
  const std::vector<ProjectiveDecomposition>& slots() const noexcept { return slots_; }
  const std::vector<History>& histories() const noexcept { return histories_; }
  std::size_t slot_count() const noexcept { return slots_.size(); }

  /// "(+x,-z)"
  std::string label_of(const History& h) const;
  /// Index of the history with the given per-slot labels.
  std::size_t find(const std::vector<std::string>& slot_labels) const;
  /// Index of a history in histories(); throws UnknownHistory.
  std::size_t index_of(const History& h) const;

 private:
  friend HistoryFamily make_family(Ket, TimeGrid, std::vector<ComplexMatrix>,
                                   std::vector<ProjectiveDecomposition>, const Tolerance&,
                                   std::size_t);
  HistoryFamily(Ket initial, TimeGrid grid) : initial_(std::move(initial)), grid_(std::move(grid)) {}

  Ket initial_;
  TimeGrid grid_;
  std::vector<ComplexMatrix> evolutions_;
  std::vector<ProjectiveDecomposition> slots_;
  std::vector<History> histories_;
};

/// Builds a family from already-complete slot decompositions.
HistoryFamily make_family(Ket initial, TimeGrid grid, std::vector<ComplexMatrix> evolutions,
                          std::vector<ProjectiveDecomposition> slots, const Tolerance& tol,
                          std::size_t max_histories = kDefaultMaxHistories);

/// Builds a family from observables or (possibly incomplete) projector sets.
/// Errors: DimMismatch, NotUnitaryEvolution, BadDecomposition, SizeCap.
HistoryFamily build_family(Ket initial, TimeGrid grid, std::vector<ComplexMatrix> evolutions,
                           const std::vector<SlotSpec>& slots, const Tolerance& tol,
                           std::size_t max_histories = kDefaultMaxHistories);

/// Pₙ T … P₁ T |ψ₀⟩, unnormalized. Throws UnknownHistory.
Ket chain_ket(const HistoryFamily& family, const History& history);

/// ⟨Yᵃ|Yᵃ⟩
double history_probability(const HistoryFamily& family, const History& history);

struct ConsistencyReport {
  std::vector<std::string> labels;     ///< one per history, family order
  ComplexMatrix gram;                  ///< ⟨Yᵃ|Yᵃ′⟩
  std::vector<double> probabilities;   ///< Gram diagonal
  double max_offdiag = 0.0;
  std::size_t worst_row = 0;
  std::size_t worst_col = 0;
  double threshold = 0.0;              ///< ε_cons · max(1, max diagonal)
  bool consistent = true;
};

ConsistencyReport consistency_check(const HistoryFamily& family, const Tolerance& tol);

/// One merge per slot: a partition of that slot's labels. Slots that are not
/// listed keep their decomposition.
struct SlotMerge {
  std::size_t slot;
  std::vector<std::vector<std::string>> groups;
};

/// Sums slot projectors within each group (labels joined with "∨") and
/// rebuilds the family. Throws NotAPartition.
HistoryFamily coarse_grain(const HistoryFamily& family, const std::vector<SlotMerge>& merges,
                           const Tolerance& tol);

}  // namespace qhist
