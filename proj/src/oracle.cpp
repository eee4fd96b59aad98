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

#include "qhist/oracle.hpp"

#include <cmath>
#include <complex>

#include "qhist/error.hpp"

namespace qhist::oracle {

namespace {

using Amplitudes = std::vector<Complex>;

Amplitudes multiply(const ComplexMatrix& m, const Amplitudes& v) {
  const std::size_t n = v.size();
  const auto raw = m.entries();
  Amplitudes out(n);
  for (std::size_t c = 0; c < n; ++c) {
    const Complex vc = v[c];
    if (vc == Complex{}) continue;
    for (std::size_t r = 0; r < n; ++r) out[r] += raw[r * n + c] * vc;
  }
  return out;
}

double squared_length(const Amplitudes& v) {
  double s = 0.0;
  for (const Complex& a : v) s += a.real() * a.real() + a.imag() * a.imag();
  return s;
}

// Product of Born conditionals, renormalizing the state after each outcome.
double run_measurements(const HistoryFamily& family,
                        const std::vector<const ComplexMatrix*>& measured) {
  const auto init = family.initial_ket().amplitudes();
  Amplitudes state(init.begin(), init.end());
  double probability = 1.0;
  for (std::size_t k = 0; k < measured.size(); ++k) {
    state = multiply(family.evolutions()[k], state);
    state = multiply(*measured[k], state);
    const double p = squared_length(state);
    if (p == 0.0) return 0.0;
    probability *= p;
    const double scale = 1.0 / std::sqrt(p);
    for (Complex& a : state) a *= scale;
  }
  return probability;
}

}  // namespace

double sequential_probability(const HistoryFamily& family, const OutcomeSequence& seq) {
  if (seq.labels.size() != family.slot_count()) {
    throw Error(ErrorCode::UnknownLabel, "sequence has " + std::to_string(seq.labels.size()) +
                                             " labels for " +
                                             std::to_string(family.slot_count()) + " times");
  }
  std::vector<const ComplexMatrix*> measured;
  for (std::size_t k = 0; k < seq.labels.size(); ++k) {
    const ProjectiveDecomposition& d = family.slots()[k];
    const ComplexMatrix* hit = nullptr;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (d.labels()[i] == seq.labels[k]) hit = &d.projectors()[i];
    }
    if (!hit) {
      throw Error(ErrorCode::UnknownLabel, "'" + seq.labels[k] + "' is not an outcome at " +
                                               family.grid().slot_label(k), k);
    }
    measured.push_back(hit);
  }
  return run_measurements(family, measured);
}

OutcomeSequence sequence_of(const HistoryFamily& family, const History& history) {
  OutcomeSequence seq;
  for (std::size_t k = 0; k < history.outcomes.size(); ++k) {
    seq.labels.push_back(family.slots().at(k).labels().at(history.outcomes[k]));
  }
  return seq;
}

CrossCheck cross_check(const HistoryFamily& family) {
  CrossCheck out;
  for (const History& h : family.histories()) {
    const double a = sequential_probability(family, sequence_of(family, h));
    const double b = history_probability(family, h);
    ++out.histories;
    const double d = std::abs(a - b);
    if (d > out.max_discrepancy || out.worst_history.empty()) {
      out.max_discrepancy = std::max(out.max_discrepancy, d);
      out.worst_history = family.label_of(h);
    }
  }
  return out;
}

std::vector<AdditivityViolation> exhaustive_additivity_scan(const HistoryFamily& family,
                                                            const Tolerance& tol,
                                                            std::size_t max_histories) {
  const std::size_t n = family.slot_count();
  if (family.histories().size() > max_histories) {
    throw Error(ErrorCode::SizeCap, "additivity scan limited to " +
                                        std::to_string(max_histories) + " histories");
  }
  std::vector<double> fine;
  for (const History& h : family.histories()) {
    fine.push_back(sequential_probability(family, sequence_of(family, h)));
  }

  // Each slot either stays fine (choice 0) or merges one unordered pair of
  // outcomes (choice 1 … C(k,2)).
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> pairs(n);
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t k = family.slots()[s].size();
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = a + 1; b < k; ++b) pairs[s].emplace_back(a, b);
    }
  }

  std::vector<AdditivityViolation> out;
  std::vector<std::size_t> choice(n, 0);
  const double limit = 10.0 * tol.cons;
  while (true) {
    std::size_t s = n;
    while (s-- > 0) {
      if (++choice[s] <= pairs[s].size()) break;
      choice[s] = 0;
    }
    if (s == static_cast<std::size_t>(-1)) break;

    std::vector<SlotMerge> merges;
    std::vector<std::string> times;
    std::vector<std::string> merged_labels;
    for (std::size_t t = 0; t < n; ++t) {
      if (choice[t] == 0) continue;
      const ProjectiveDecomposition& d = family.slots()[t];
      const auto [a, b] = pairs[t][choice[t] - 1];
      SlotMerge m{t, {}};
      for (std::size_t i = 0; i < d.size(); ++i) {
        if (i == a) {
          m.groups.push_back({d.label(a), d.label(b)});
        } else if (i != b) {
          m.groups.push_back({d.label(i)});
        }
      }
      merges.push_back(std::move(m));
      times.push_back(family.grid().slot_label(t));
      merged_labels.push_back(d.label(a) + std::string(kOrSeparator) + d.label(b));
    }
    const HistoryFamily coarse = coarse_grain(family, merges, tol);

    // Only coarse histories sitting on the merged outcome at every merged slot
    // are new; the rest are covered by a smaller merge set. In the coarse slot
    // the merged pair {a, b} sits at index a.
    for (const History& ch : coarse.histories()) {
      bool on_merge = true;
      for (std::size_t t = 0; t < n && on_merge; ++t) {
        if (choice[t] != 0) on_merge = ch.outcomes[t] == pairs[t][choice[t] - 1].first;
      }
      if (!on_merge) continue;

      double fine_sum = 0.0;
      for (std::size_t h = 0; h < family.histories().size(); ++h) {
        const History& fh = family.histories()[h];
        bool covered = true;
        for (std::size_t t = 0; t < n && covered; ++t) {
          if (choice[t] == 0) {
            covered = fh.outcomes[t] == ch.outcomes[t];
          } else {
            const auto [a, b] = pairs[t][choice[t] - 1];
            covered = fh.outcomes[t] == a || fh.outcomes[t] == b;
          }
        }
        if (covered) fine_sum += fine[h];
      }
      const double merged = sequential_probability(coarse, sequence_of(coarse, ch));
      if (std::abs(merged - fine_sum) > limit) {
        out.push_back({times, merged_labels, coarse.label_of(ch), merged, fine_sum});
      }
    }
  }
  return out;
}

}  // namespace qhist::oracle
