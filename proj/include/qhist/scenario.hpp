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

#include "qhist/linalg.hpp"
#include "qhist/stablefacts.hpp"

namespace qhist {

inline constexpr int kScenarioFormat = 1;
inline constexpr std::size_t kDefaultMaxDim = 64;

/// One named qubit preset per subsystem: up_z, down_z, plus_x, minus_x,
/// plus_y, minus_y.
struct PresetState {
  std::vector<std::string> factors;
  friend bool operator==(const PresetState&, const PresetState&) = default;
};

struct ExplicitState {
  std::vector<Complex> amplitudes;
  friend bool operator==(const ExplicitState&, const ExplicitState&) = default;
};

using InitialState = std::variant<PresetState, ExplicitState>;

/// "sigma_x", "sigma_y", "sigma_z", "identity", optionally suffixed "@k"
/// (1-based subsystem index).
struct NamedObservable {
  std::string name;
  friend bool operator==(const NamedObservable&, const NamedObservable&) = default;
};

struct HermitianObservable {
  ComplexMatrix matrix;
  std::vector<std::string> labels;  ///< optional, ascending eigenvalue order
  friend bool operator==(const HermitianObservable&, const HermitianObservable&) = default;
};

struct LabeledProjector {
  std::string label;
  ComplexMatrix matrix;
  friend bool operator==(const LabeledProjector&, const LabeledProjector&) = default;
};

struct ProjectorObservable {
  std::vector<LabeledProjector> projectors;
  friend bool operator==(const ProjectorObservable&, const ProjectorObservable&) = default;
};

using ObservableSpec = std::variant<NamedObservable, HermitianObservable, ProjectorObservable>;

struct Measurement {
  std::string time;
  ObservableSpec observable;
  friend bool operator==(const Measurement&, const Measurement&) = default;
};

struct ObserverSpec {
  std::string name;
  std::vector<Measurement> measurements;
  friend bool operator==(const ObserverSpec&, const ObserverSpec&) = default;
};

struct Scenario {
  std::string name;
  std::string description;
  std::vector<std::size_t> subsystem_dims;
  InitialState initial_state;
  std::vector<std::string> times;
  /// One per interval; nullopt is the identity.
  std::vector<std::optional<ComplexMatrix>> evolutions;
  std::vector<ObserverSpec> observers;
  std::optional<Tolerance> tolerance;

  std::size_t total_dim() const;
  const ObserverSpec* find_observer(std::string_view name) const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct ParseOptions {
  std::size_t max_dim = kDefaultMaxDim;
};

/// Parses and validates a scenario document. Errors carry a line:column
/// (SyntaxError) or a JSON path (UnknownField, DimMismatch,
/// UnknownOperatorName, InvalidValue, …).
Scenario parse_scenario(std::string_view text, const ParseOptions& options = {});

/// Reads and parses a file; I/O failures raise Io.
Scenario load_scenario(const std::string& path, const ParseOptions& options = {});

/// Canonical JSON form; every defaulted field is written out.
std::string serialize_scenario(const Scenario& s);

struct ResolveOptions {
  std::optional<Tolerance> tolerance;  ///< overrides the scenario's own
  std::size_t max_histories = kDefaultMaxHistories;
};

/// Tolerance in force: override, else the scenario's, else defaults.
Tolerance effective_tolerance(const Scenario& s, const ResolveOptions& options = {});

/// The full-space operator for a named observable, e.g. "sigma_z@1" on
/// dims [2, 2] is σz ⊗ I₂.
ComplexMatrix named_operator(std::string_view name, const std::vector<std::size_t>& dims);

Ket initial_ket(const Scenario& s);
std::vector<ComplexMatrix> evolution_operators(const Scenario& s);

/// One history family per observer; times an observer does not measure get
/// the trivial sample space {I}.
std::vector<ObserverRecord> resolve(const Scenario& s, const ResolveOptions& options = {});

}  // namespace qhist
