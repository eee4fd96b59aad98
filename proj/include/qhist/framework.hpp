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
#include <string_view>
#include <vector>

#include "qhist/linalg.hpp"

namespace qhist {

/// Label joining the two parents of a product projector, e.g. "+x∧-z".
inline constexpr std::string_view kAndSeparator = "∧";
/// Label joining coarse-grained outcomes, e.g. "+x∨-x".
inline constexpr std::string_view kOrSeparator = "∨";
/// Label of the complement projector added to an incomplete slot.
inline constexpr std::string_view kRestLabel = "rest";
/// Label of the single projector of the trivial decomposition {I}.
inline constexpr std::string_view kIdentityLabel = "I";

/// A quantum sample space: labeled, mutually orthogonal projectors summing to
/// the identity. Only constructible through make_decomposition.
class ProjectiveDecomposition {
 public:
  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return projectors_.size(); }
  const std::vector<ComplexMatrix>& projectors() const noexcept { return projectors_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const ComplexMatrix& projector(std::size_t i) const { return projectors_.at(i); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  std::optional<std::size_t> find(std::string_view label) const;

  /// {I} with label "I".
  static ProjectiveDecomposition trivial(std::size_t dim);

  friend bool operator==(const ProjectiveDecomposition&,
                         const ProjectiveDecomposition&) = default;

 private:
  friend ProjectiveDecomposition make_decomposition(std::vector<ComplexMatrix>,
                                                    std::vector<std::string>,
                                                    const Tolerance&);
  ProjectiveDecomposition() = default;

  std::size_t dim_ = 0;
  std::vector<ComplexMatrix> projectors_;
  std::vector<std::string> labels_;
};

/// Validates and wraps a decomposition of the identity. Errors, each naming
/// the first offending index: NotAProjector, DuplicateLabel, NotOrthogonal,
/// NotComplete (and DimMismatch for ragged input).
ProjectiveDecomposition make_decomposition(std::vector<ComplexMatrix> projectors,
                                           std::vector<std::string> labels,
                                           const Tolerance& tol);

/// PQ when [P,Q] vanishes within tol.comm, std::nullopt (undefined) otherwise.
std::optional<ComplexMatrix> conjunction(const ComplexMatrix& p, const ComplexMatrix& q,
                                         const Tolerance& tol);

/// I − P.
ComplexMatrix negation(const ComplexMatrix& p, const Tolerance& tol = {});

struct FrameworkCompatibility {
  bool compatible = true;
  double max_residual = 0.0;  ///< max over pairs of ‖[P_j, Q_k]‖_max
  std::size_t worst_first = 0;
  std::size_t worst_second = 0;
};

FrameworkCompatibility decompositions_compatible(const ProjectiveDecomposition& a,
                                                 const ProjectiveDecomposition& b,
                                                 const Tolerance& tol);

/// All nonzero products P_j Q_k labeled "j∧k". Throws IncompatibleFrameworks
/// unless the inputs commute.
ProjectiveDecomposition refine(const ProjectiveDecomposition& a,
                               const ProjectiveDecomposition& b, const Tolerance& tol);

/// Left fold of refine over a non-empty list.
ProjectiveDecomposition refine_all(std::span<const ProjectiveDecomposition> parts,
                                   const Tolerance& tol);

/// Slot-wise product set without the compatibility precondition. Returns
/// std::nullopt when the nonzero products do not form a valid decomposition.
std::optional<ProjectiveDecomposition> try_product_decomposition(
    const ProjectiveDecomposition& a, const ProjectiveDecomposition& b,
    const Tolerance& tol);

}  // namespace qhist
