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
#include <random>
#include <string>
#include <vector>

#include "qhist/histories.hpp"
#include "qhist/linalg.hpp"
#include "qhist/scenario.hpp"

namespace qhist::testing {

using Rng = std::mt19937_64;

inline const Complex kI{0.0, 1.0};

ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng);
ComplexMatrix random_hermitian(std::size_t dim, Rng& rng);
/// Haar-distributed unitary (QR of a complex Gaussian matrix).
ComplexMatrix random_unitary(std::size_t dim, Rng& rng);
Ket random_state(std::size_t dim, Rng& rng);

/// Groups the columns of `basis` into `parts` non-empty blocks at random.
ProjectiveDecomposition random_decomposition(const ComplexMatrix& basis, std::size_t parts,
                                             Rng& rng);

struct FamilyShape {
  std::size_t dim;
  std::size_t slots;
};

/// Random evolutions and slot decompositions; generically inconsistent.
HistoryFamily random_family(const FamilyShape& shape, Rng& rng);

/// Slot k's sample space is the Heisenberg-evolved image of one fixed basis,
/// so all slots commute after pulling back: always consistent.
HistoryFamily random_consistent_family(const FamilyShape& shape, Rng& rng);

/// Measurement model of dimension d: system ⊗ detector(d+1). The t1 slot holds
/// [s_i]⊗[M0] (labels s1…sd), t2 holds [s_i]⊗[M_i] (labels M1…Md), with the
/// system basis {s_i} random and the t1→t2 unitary swapping M0↔M_i
/// conditioned on s_i. `phases` adds random detector phases to the unitary.
HistoryFamily measurement_family(std::size_t system_dim, Rng& rng, bool phases = true);

/// Random valid scenario (dims ≤ 8, ≤ 3 slots) for round-trip testing.
Scenario random_scenario(Rng& rng);

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

std::string read_file(const std::string& path);

}  // namespace qhist::testing
