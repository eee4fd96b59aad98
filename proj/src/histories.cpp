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

#include "qhist/histories.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <string>

#include "qhist/error.hpp"

namespace qhist {

// ---------------------------------------------------------------------------
// TimeGrid

TimeGrid::TimeGrid(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.size() < 2) {
    throw Error(ErrorCode::BadTimes, "a time grid needs t0 and at least one later time");
  }
  std::set<std::string> seen;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!seen.insert(labels_[i]).second) {
      throw Error(ErrorCode::BadTimes, "time label '" + labels_[i] + "' repeated", i);
    }
  }
}

std::optional<std::size_t> TimeGrid::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return i;
  }
  return std::nullopt;
}

std::size_t TimeGrid::slot_of(std::string_view label) const {
  const auto idx = index_of(label);
  if (!idx) throw Error(ErrorCode::BadTimes, "time '" + std::string(label) + "' not on the grid");
  if (*idx == 0) {
    throw Error(ErrorCode::BadTimes,
                "time '" + std::string(label) + "' is the initial time and has no slot");
  }
  return *idx - 1;
}

// ---------------------------------------------------------------------------
// Slot specifications

std::string eigenvalue_label(double value) {
  if (std::abs(value) < 5e-13) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%+.12g", value);
  return buf;
}

ProjectiveDecomposition slot_decomposition(const SlotSpec& spec, const Tolerance& tol) {
  try {
    if (const auto* obs = std::get_if<Observable>(&spec)) {
      std::vector<EigenProjector> eig = hermitian_eigenprojectors(obs->matrix, tol);
      if (!obs->labels.empty() && obs->labels.size() != eig.size()) {
        throw Error(ErrorCode::BadDecomposition,
                    "observable has " + std::to_string(eig.size()) +
                        " distinct eigenvalues but " + std::to_string(obs->labels.size()) +
                        " labels");
      }
      std::vector<ComplexMatrix> projectors;
      std::vector<std::string> labels;
      for (std::size_t i = 0; i < eig.size(); ++i) {
        projectors.push_back(std::move(eig[i].projector));
        labels.push_back(obs->labels.empty() ? eigenvalue_label(eig[i].eigenvalue)
                                             : obs->labels[i]);
      }
      return make_decomposition(std::move(projectors), std::move(labels), tol);
    }
    if (const auto* set = std::get_if<ProjectorSet>(&spec)) {
      if (set->projectors.empty()) {
        throw Error(ErrorCode::BadDecomposition, "empty projector set");
      }
      std::vector<ComplexMatrix> projectors = set->projectors;
      std::vector<std::string> labels = set->labels;
      const std::size_t dim = projectors.front().rows();
      ComplexMatrix rest = ComplexMatrix::identity(dim);
      for (const ComplexMatrix& p : projectors) {
        if (p.rows() != dim || p.cols() != dim) {
          throw Error(ErrorCode::DimMismatch, "projector set with mixed dimensions");
        }
        rest -= p;
      }
      if (rest.max_abs() > tol.proj) {
        projectors.push_back(std::move(rest));
        labels.emplace_back(kRestLabel);
      }
      return make_decomposition(std::move(projectors), std::move(labels), tol);
    }
    return std::get<ProjectiveDecomposition>(spec);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::DimMismatch || e.code() == ErrorCode::BadDecomposition) throw;
    throw Error(ErrorCode::BadDecomposition, e.what(), e.index());
  }
}

// ---------------------------------------------------------------------------
// HistoryFamily

std::string HistoryFamily::label_of(const History& h) const {
  std::string out = "(";
  for (std::size_t s = 0; s < h.outcomes.size(); ++s) {
    if (s) out += ',';
    out += slots_.at(s).label(h.outcomes[s]);
  }
  return out + ")";
}

std::size_t HistoryFamily::find(const std::vector<std::string>& slot_labels) const {
  if (slot_labels.size() != slots_.size()) {
    throw Error(ErrorCode::UnknownHistory, "expected " + std::to_string(slots_.size()) +
                                               " slot labels, got " +
                                               std::to_string(slot_labels.size()));
  }
  History h;
  for (std::size_t s = 0; s < slots_.size(); ++s) {
    const auto idx = slots_[s].find(slot_labels[s]);
    if (!idx) {
      throw Error(ErrorCode::UnknownHistory,
                  "label '" + slot_labels[s] + "' not in slot " + grid_.slot_label(s), s);
    }
    h.outcomes.push_back(*idx);
  }
  return index_of(h);
}

std::size_t HistoryFamily::index_of(const History& h) const {
  if (h.outcomes.size() != slots_.size()) {
    throw Error(ErrorCode::UnknownHistory, "history has the wrong number of slots");
  }
  // Histories are enumerated in mixed-radix order, last slot fastest.
  std::size_t idx = 0;
  for (std::size_t s = 0; s < slots_.size(); ++s) {
    if (h.outcomes[s] >= slots_[s].size()) {
      throw Error(ErrorCode::UnknownHistory,
                  "outcome index out of range at slot " + grid_.slot_label(s), s);
    }
    idx = idx * slots_[s].size() + h.outcomes[s];
  }
  return idx;
}

HistoryFamily make_family(Ket initial, TimeGrid grid, std::vector<ComplexMatrix> evolutions,
                          std::vector<ProjectiveDecomposition> slots, const Tolerance& tol,
                          std::size_t max_histories) {
  const std::size_t dim = initial.dim();
  const std::size_t n = grid.slot_count();
  if (!initial.is_normalized(tol)) {
    throw Error(ErrorCode::InvalidValue,
                "initial ket has norm² " + std::to_string(initial.norm_squared()));
  }
  if (evolutions.size() != n) {
    throw Error(ErrorCode::DimMismatch, std::to_string(evolutions.size()) +
                                            " evolutions for " + std::to_string(n) +
                                            " intervals");
  }
  if (slots.size() != n) {
    throw Error(ErrorCode::DimMismatch,
                std::to_string(slots.size()) + " slots for " + std::to_string(n) + " times");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const ComplexMatrix& u = evolutions[i];
    if (!u.is_square() || u.rows() != dim) {
      throw Error(ErrorCode::DimMismatch,
                  "evolution " + grid.labels()[i] + "->" + grid.labels()[i + 1] +
                      " is not " + std::to_string(dim) + "x" + std::to_string(dim),
                  i);
    }
    if (!is_unitary(u, tol)) {
      throw Error(ErrorCode::NotUnitaryEvolution,
                  "evolution " + grid.labels()[i] + "->" + grid.labels()[i + 1] +
                      " is not unitary",
                  i);
    }
    if (slots[i].dim() != dim) {
      throw Error(ErrorCode::DimMismatch, "slot " + grid.labels()[i + 1] + " has dim " +
                                              std::to_string(slots[i].dim()),
                  i);
    }
  }
  std::size_t total = 1;
  for (const auto& s : slots) {
    if (total > max_histories / s.size()) {
      throw Error(ErrorCode::SizeCap,
                  "family exceeds the cap of " + std::to_string(max_histories) + " histories");
    }
    total *= s.size();
  }
  if (total > max_histories) {
    throw Error(ErrorCode::SizeCap,
                "family exceeds the cap of " + std::to_string(max_histories) + " histories");
  }

  HistoryFamily fam(std::move(initial), std::move(grid));
  fam.evolutions_ = std::move(evolutions);
  fam.slots_ = std::move(slots);
  fam.histories_.reserve(total);
  std::vector<std::size_t> odometer(n, 0);
  for (std::size_t k = 0; k < total; ++k) {
    fam.histories_.push_back(History{odometer});
    for (std::size_t s = n; s-- > 0;) {
      if (++odometer[s] < fam.slots_[s].size()) break;
      odometer[s] = 0;
    }
  }
  return fam;
}

HistoryFamily build_family(Ket initial, TimeGrid grid, std::vector<ComplexMatrix> evolutions,
                           const std::vector<SlotSpec>& slots, const Tolerance& tol,
                           std::size_t max_histories) {
  std::vector<ProjectiveDecomposition> decomps;
  decomps.reserve(slots.size());
  for (std::size_t i = 0; i < slots.size(); ++i) {
    try {
      decomps.push_back(slot_decomposition(slots[i], tol));
    } catch (const Error& e) {
      throw Error(e.code(), "slot " + std::to_string(i + 1) + ": " + e.what(), i);
    }
    if (decomps.back().dim() != initial.dim()) {
      throw Error(ErrorCode::DimMismatch,
                  "slot " + std::to_string(i + 1) + " has dim " +
                      std::to_string(decomps.back().dim()) + ", state has dim " +
                      std::to_string(initial.dim()),
                  i);
    }
  }
  return make_family(std::move(initial), std::move(grid), std::move(evolutions),
                     std::move(decomps), tol, max_histories);
}

Ket chain_ket(const HistoryFamily& family, const History& history) {
  family.index_of(history);  // validates
  Ket state = family.initial_ket();
  for (std::size_t s = 0; s < family.slot_count(); ++s) {
    state = family.evolutions()[s] * state;
    state = family.slots()[s].projector(history.outcomes[s]) * state;
  }
  return state;
}

double history_probability(const HistoryFamily& family, const History& history) {
  return chain_ket(family, history).norm_squared();
}

ConsistencyReport consistency_check(const HistoryFamily& family, const Tolerance& tol) {
  const auto& hs = family.histories();
  const std::size_t m = hs.size();
  std::vector<Ket> kets;
  kets.reserve(m);
  ConsistencyReport report{.labels = {}, .gram = ComplexMatrix(m, m), .probabilities = {}};
  for (const History& h : hs) {
    kets.push_back(chain_ket(family, h));
    report.labels.push_back(family.label_of(h));
  }
  double max_diag = 0.0;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a; b < m; ++b) {
      const Complex g = inner(kets[a], kets[b]);
      report.gram(a, b) = g;
      report.gram(b, a) = std::conj(g);
    }
    // The diagonal is real by construction.
    report.gram(a, a) = report.gram(a, a).real();
    report.probabilities.push_back(report.gram(a, a).real());
    max_diag = std::max(max_diag, report.probabilities.back());
  }
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      const double mag = std::abs(report.gram(a, b));
      if (mag > report.max_offdiag) {
        report.max_offdiag = mag;
        report.worst_row = a;
        report.worst_col = b;
      }
    }
  }
  report.threshold = tol.cons * std::max(1.0, max_diag);
  report.consistent = report.max_offdiag <= report.threshold;
  return report;
}

HistoryFamily coarse_grain(const HistoryFamily& family, const std::vector<SlotMerge>& merges,
                           const Tolerance& tol) {
  std::vector<ProjectiveDecomposition> slots = family.slots();
  std::set<std::size_t> touched;
  for (const SlotMerge& merge : merges) {
    if (merge.slot >= slots.size()) {
      throw Error(ErrorCode::NotAPartition, "merge names slot " + std::to_string(merge.slot) +
                                                " beyond the grid");
    }
    if (!touched.insert(merge.slot).second) {
      throw Error(ErrorCode::NotAPartition,
                  "slot " + family.grid().slot_label(merge.slot) + " merged twice", merge.slot);
    }
    const ProjectiveDecomposition& d = family.slots()[merge.slot];
    std::vector<int> used(d.size(), 0);
    std::vector<ComplexMatrix> projectors;
    std::vector<std::string> labels;
    for (const auto& group : merge.groups) {
      if (group.empty()) throw Error(ErrorCode::NotAPartition, "empty merge group", merge.slot);
      ComplexMatrix sum = ComplexMatrix::zero(d.dim(), d.dim());
      std::string label;
      for (const std::string& l : group) {
        const auto idx = d.find(l);
        if (!idx) {
          throw Error(ErrorCode::NotAPartition,
                      "label '" + l + "' not in slot " + family.grid().slot_label(merge.slot),
                      merge.slot);
        }
        if (used[*idx]++) {
          throw Error(ErrorCode::NotAPartition, "label '" + l + "' appears twice", merge.slot);
        }
        sum += d.projector(*idx);
        if (!label.empty()) label += kOrSeparator;
        label += l;
      }
      projectors.push_back(std::move(sum));
      labels.push_back(std::move(label));
    }
    for (std::size_t i = 0; i < used.size(); ++i) {
      if (!used[i]) {
        throw Error(ErrorCode::NotAPartition,
                    "label '" + d.label(i) + "' not covered by the merge", merge.slot);
      }
    }
    slots[merge.slot] = make_decomposition(std::move(projectors), std::move(labels), tol);
  }
  return make_family(family.initial_ket(), family.grid(), family.evolutions(), std::move(slots),
                     tol);
}

}  // namespace qhist
