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

#include "qhist/stablefacts.hpp"

#include <cmath>
#include <string>

namespace qhist {

std::string_view to_string(Verdict v) { return v == Verdict::Stable ? "Stable" : "Relative"; }

std::string_view to_string(FailingCondition c) {
  switch (c) {
    case FailingCondition::None: return "None";
    case FailingCondition::Commutation: return "Condition1";
    case FailingCondition::Consistency: return "Condition2";
  }
  return "None";
}

namespace {

std::string join_names(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
  return out;
}

std::string describe(const CompatibilityReport& r) {
  std::string msg = "observers " + join_names(r.observers) + " are not compatible (" +
                    std::string(to_string(r.failing)) + " fails";
  for (const auto& s : r.per_slot) {
    if (!s.commutes) {
      msg += " at " + s.time;
      break;
    }
  }
  return msg + ")";
}

void require_shared_setup(const ObserverRecord& a, const ObserverRecord& b,
                          const Tolerance& tol) {
  const HistoryFamily& fa = a.family;
  const HistoryFamily& fb = b.family;
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::MismatchedScenario,
                "observers '" + a.name + "' and '" + b.name + "' differ in " + what);
  };
  if (fa.dim() != fb.dim()) fail("Hilbert space dimension");
  if (!(fa.grid() == fb.grid())) fail("time grid");
  for (std::size_t i = 0; i < fa.dim(); ++i) {
    if (std::abs(fa.initial_ket()[i] - fb.initial_ket()[i]) > tol.norm) fail("initial state");
  }
  for (std::size_t i = 0; i < fa.evolutions().size(); ++i) {
    if ((fa.evolutions()[i] - fb.evolutions()[i]).max_abs() > tol.herm) fail("evolutions");
  }
}

/// Slot-wise product decompositions, or nullopt if some slot fails.
std::optional<std::vector<ProjectiveDecomposition>> product_slots(
    std::span<const ObserverRecord> observers, const Tolerance& tol) {
  std::vector<ProjectiveDecomposition> slots = observers.front().family.slots();
  for (std::size_t o = 1; o < observers.size(); ++o) {
    for (std::size_t s = 0; s < slots.size(); ++s) {
      auto prod = try_product_decomposition(slots[s], observers[o].family.slots()[s], tol);
      if (!prod) return std::nullopt;
      slots[s] = std::move(*prod);
    }
  }
  return slots;
}

HistoryFamily product_family(const HistoryFamily& base, std::vector<ProjectiveDecomposition> slots,
                             const Tolerance& tol) {
  return make_family(base.initial_ket(), base.grid(), base.evolutions(), std::move(slots), tol);
}

struct EventMatch {
  std::size_t slot;
  std::vector<bool> outcome_included;
};

EventMatch match_event(const HistoryFamily& family, const TimedEvent& event,
                       const Tolerance& tol) {
  EventMatch m{family.grid().slot_of(event.time), {}};
  const ProjectiveDecomposition& d = family.slots()[m.slot];
  m.outcome_included.assign(d.size(), false);
  if (const auto* label = std::get_if<std::string>(&event.what)) {
    const auto idx = d.find(*label);
    if (!idx) {
      throw Error(ErrorCode::UnknownLabel,
                  "'" + *label + "' is not an outcome at " + event.time + " in this family");
    }
    m.outcome_included[*idx] = true;
    return m;
  }
  const ComplexMatrix& e = std::get<ComplexMatrix>(event.what);
  if (!e.is_square() || e.rows() != family.dim()) {
    throw Error(ErrorCode::DimMismatch, "event projector has the wrong dimension");
  }
  for (std::size_t i = 0; i < d.size(); ++i) {
    const ComplexMatrix& p = d.projector(i);
    const ComplexMatrix ep = e * p;
    if ((ep - p).max_abs() <= tol.proj) {
      m.outcome_included[i] = true;
    } else if (ep.max_abs() > tol.proj) {
      throw Error(ErrorCode::UnknownLabel,
                  "event projector at " + event.time + " is not in the slot's event algebra");
    }
  }
  return m;
}

double matched_probability(const HistoryFamily& family, const std::vector<double>& probs,
                           std::span<const EventMatch> matches) {
  double total = 0.0;
  const auto& hs = family.histories();
  for (std::size_t h = 0; h < hs.size(); ++h) {
    bool ok = true;
    for (const EventMatch& m : matches) ok = ok && m.outcome_included[hs[h].outcomes[m.slot]];
    if (ok) total += probs[h];
  }
  return total;
}

std::vector<double> consistent_probabilities(const HistoryFamily& family, const Tolerance& tol) {
  ConsistencyReport report = consistency_check(family, tol);
  if (!report.consistent) {
    throw Error(ErrorCode::InconsistentFamily,
                "the family is inconsistent (max off-diagonal " +
                    std::to_string(report.max_offdiag) +
                    "); probabilistic reasoning must stay inside a single consistent framework");
  }
  return std::move(report.probabilities);
}

}  // namespace

NotCompatibleError::NotCompatibleError(CompatibilityReport report)
    : Error(ErrorCode::NotCompatible, describe(report)), report_(std::move(report)) {}

CompatibilityReport check_compatibility_all(std::span<const ObserverRecord> observers,
                                            const Tolerance& tol) {
  if (observers.empty()) {
    throw Error(ErrorCode::MismatchedScenario, "compatibility needs at least one observer");
  }
  CompatibilityReport report;
  for (const auto& o : observers) report.observers.push_back(o.name);
  for (std::size_t i = 1; i < observers.size(); ++i) {
    require_shared_setup(observers.front(), observers[i], tol);
  }
  const HistoryFamily& base = observers.front().family;

  bool all_commute = true;
  for (std::size_t s = 0; s < base.slot_count(); ++s) {
    SlotCommutation sc;
    sc.time = base.grid().slot_label(s);
    for (std::size_t i = 0; i < observers.size(); ++i) {
      for (std::size_t j = i + 1; j < observers.size(); ++j) {
        const auto& di = observers[i].family.slots()[s];
        const auto& dj = observers[j].family.slots()[s];
        const FrameworkCompatibility fc = decompositions_compatible(di, dj, tol);
        if (fc.max_residual > sc.max_residual || (i == 0 && j == 1)) {
          sc.max_residual = fc.max_residual;
          sc.worst_first = di.label(fc.worst_first);
          sc.worst_second = dj.label(fc.worst_second);
        }
      }
    }
    sc.commutes = sc.max_residual <= tol.comm;
    all_commute = all_commute && sc.commutes;
    report.per_slot.push_back(std::move(sc));
  }

  if (auto slots = product_slots(observers, tol)) {
    HistoryFamily prod = product_family(base, std::move(*slots), tol);
    report.product_history_count = prod.histories().size();
    report.product_consistency = consistency_check(prod, tol);
  }

  const bool consistent = report.product_consistency && report.product_consistency->consistent;
  if (!all_commute) {
    report.verdict = Verdict::Relative;
    report.failing = FailingCondition::Commutation;
  } else if (!consistent) {
    report.verdict = Verdict::Relative;
    report.failing = FailingCondition::Consistency;
  }
  return report;
}

CompatibilityReport check_compatibility(const ObserverRecord& a, const ObserverRecord& b,
                                        const Tolerance& tol) {
  const ObserverRecord pair[] = {a, b};
  return check_compatibility_all(pair, tol);
}

HistoryFamily combine_all(std::span<const ObserverRecord> observers, const Tolerance& tol) {
  CompatibilityReport report = check_compatibility_all(observers, tol);
  if (report.verdict != Verdict::Stable) throw NotCompatibleError(std::move(report));
  auto slots = product_slots(observers, tol);
  return product_family(observers.front().family, std::move(*slots), tol);
}

HistoryFamily combine(const ObserverRecord& a, const ObserverRecord& b, const Tolerance& tol) {
  const ObserverRecord pair[] = {a, b};
  return combine_all(pair, tol);
}

double event_probability(const HistoryFamily& family, const TimedEvent& event,
                         const Tolerance& tol) {
  const std::vector<double> probs = consistent_probabilities(family, tol);
  const EventMatch m = match_event(family, event, tol);
  return matched_probability(family, probs, std::span(&m, 1));
}

double conditional_probability(const HistoryFamily& family, const FactQuery& query,
                               const Tolerance& tol) {
  const std::vector<double> probs = consistent_probabilities(family, tol);
  const EventMatch ev = match_event(family, query.event, tol);
  const EventMatch cond = match_event(family, query.condition, tol);
  const double p_cond = matched_probability(family, probs, std::span(&cond, 1));
  if (p_cond <= tol.cons) {
    throw Error(ErrorCode::ZeroProbabilityCondition,
                "the condition at " + query.condition.time + " has probability " +
                    std::to_string(p_cond));
  }
  const EventMatch both[] = {ev, cond};
  // Same-slot events intersect outcome-wise.
  if (ev.slot == cond.slot) {
    EventMatch merged = ev;
    for (std::size_t i = 0; i < merged.outcome_included.size(); ++i) {
      merged.outcome_included[i] = ev.outcome_included[i] && cond.outcome_included[i];
    }
    return matched_probability(family, probs, std::span(&merged, 1)) / p_cond;
  }
  return matched_probability(family, probs, both) / p_cond;
}

TotalProbabilityCheck check_total_probability_law(const HistoryFamily& family,
                                                  const TimedEvent& event,
                                                  const std::string& partition_time,
                                                  const Tolerance& tol) {
  const std::vector<double> probs = consistent_probabilities(family, tol);
  const EventMatch ev = match_event(family, event, tol);
  const std::size_t part_slot = family.grid().slot_of(partition_time);
  if (part_slot == ev.slot) {
    throw Error(ErrorCode::BadTimes, "partition time must differ from the event time");
  }
  TotalProbabilityCheck out;
  out.lhs = matched_probability(family, probs, std::span(&ev, 1));
  const ProjectiveDecomposition& part = family.slots()[part_slot];
  for (std::size_t i = 0; i < part.size(); ++i) {
    EventMatch ai{part_slot, std::vector<bool>(part.size(), false)};
    ai.outcome_included[i] = true;
    const double p_ai = matched_probability(family, probs, std::span(&ai, 1));
    if (p_ai <= tol.cons) continue;
    const EventMatch both[] = {ev, ai};
    const double p_b_given_ai = matched_probability(family, probs, both) / p_ai;
    out.rhs += p_b_given_ai * p_ai;
  }
  out.holds = std::abs(out.lhs - out.rhs) <= 10.0 * tol.cons;
  return out;
}

bool information_preserved(const HistoryFamily& family, const std::string& record_time,
                           const std::string& later_time, const Tolerance& tol) {
  const std::size_t record = family.grid().slot_of(record_time);
  const std::size_t later = family.grid().slot_of(later_time);
  if (record >= later) {
    throw Error(ErrorCode::BadTimes, "record time must precede the later time");
  }
  // Slot s sits at t_{s+1}; evolutions()[s+1] carries it to slot s+1.
  ComplexMatrix carry = ComplexMatrix::identity(family.dim());
  for (std::size_t s = record + 1; s <= later; ++s) carry = family.evolutions()[s] * carry;
  const ComplexMatrix back = dagger(carry);
  const ProjectiveDecomposition& target = family.slots()[later];
  std::vector<ComplexMatrix> pulled;
  for (const ComplexMatrix& q : target.projectors()) pulled.push_back(back * q * carry);
  const ProjectiveDecomposition pulled_back = make_decomposition(pulled, target.labels(), tol);
  return decompositions_compatible(family.slots()[record], pulled_back, tol).compatible;
}

}  // namespace qhist
