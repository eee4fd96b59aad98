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

#include "qhist/framework.hpp"

#include <set>
#include <string>

#include "qhist/error.hpp"

namespace qhist {

std::optional<std::size_t> ProjectiveDecomposition::find(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return i;
  }
  return std::nullopt;
}

ProjectiveDecomposition ProjectiveDecomposition::trivial(std::size_t dim) {
  return make_decomposition({ComplexMatrix::identity(dim)}, {std::string(kIdentityLabel)},
                            Tolerance{});
}

ProjectiveDecomposition make_decomposition(std::vector<ComplexMatrix> projectors,
                                           std::vector<std::string> labels,
                                           const Tolerance& tol) {
  if (projectors.empty()) {
    throw Error(ErrorCode::NotComplete, "a decomposition needs at least one projector");
  }
  if (labels.size() != projectors.size()) {
    throw Error(ErrorCode::DimMismatch, std::to_string(labels.size()) + " labels for " +
                                            std::to_string(projectors.size()) +
                                            " projectors");
  }
  const std::size_t dim = projectors.front().rows();
  for (std::size_t i = 0; i < projectors.size(); ++i) {
    const ComplexMatrix& p = projectors[i];
    if (!p.is_square() || p.rows() != dim) {
      throw Error(ErrorCode::DimMismatch,
                  "projector " + std::to_string(i) + " is not " + std::to_string(dim) + "x" +
                      std::to_string(dim),
                  i);
    }
    if (!is_projector(p, tol)) {
      throw Error(ErrorCode::NotAProjector,
                  "element " + std::to_string(i) + " ('" + labels[i] + "') is not a projector",
                  i);
    }
  }
  std::set<std::string> seen;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!seen.insert(labels[i]).second) {
      throw Error(ErrorCode::DuplicateLabel, "label '" + labels[i] + "' repeated", i);
    }
  }
  for (std::size_t i = 0; i < projectors.size(); ++i) {
    for (std::size_t j = i + 1; j < projectors.size(); ++j) {
      if ((projectors[i] * projectors[j]).max_abs() > tol.proj) {
        throw Error(ErrorCode::NotOrthogonal,
                    "projectors " + std::to_string(i) + " and " + std::to_string(j) +
                        " overlap",
                    j);
      }
    }
  }
  ComplexMatrix sum = ComplexMatrix::zero(dim, dim);
  for (const ComplexMatrix& p : projectors) sum += p;
  if ((sum - ComplexMatrix::identity(dim)).max_abs() > tol.proj) {
    throw Error(ErrorCode::NotComplete, "projectors do not sum to the identity",
                projectors.size() - 1);
  }
  ProjectiveDecomposition d;
  d.dim_ = dim;
  d.projectors_ = std::move(projectors);
  d.labels_ = std::move(labels);
  return d;
}

std::optional<ComplexMatrix> conjunction(const ComplexMatrix& p, const ComplexMatrix& q,
                                         const Tolerance& tol) {
  if (!is_projector(p, tol) || !is_projector(q, tol)) {
    throw Error(ErrorCode::NotAProjector, "conjunction operands must be projectors");
  }
  if (commutator(p, q).max_abs() > tol.comm) return std::nullopt;
  return p * q;
}

ComplexMatrix negation(const ComplexMatrix& p, const Tolerance& tol) {
  if (!is_projector(p, tol)) {
    throw Error(ErrorCode::NotAProjector, "negation operand must be a projector");
  }
  return ComplexMatrix::identity(p.rows()) - p;
}

FrameworkCompatibility decompositions_compatible(const ProjectiveDecomposition& a,
                                                 const ProjectiveDecomposition& b,
                                                 const Tolerance& tol) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimMismatch, "decompositions act on spaces of dim " +
                                            std::to_string(a.dim()) + " and " +
                                            std::to_string(b.dim()));
  }
  FrameworkCompatibility out;
  for (std::size_t j = 0; j < a.size(); ++j) {
    for (std::size_t k = 0; k < b.size(); ++k) {
      const double r = commutator(a.projector(j), b.projector(k)).max_abs();
      if (r > out.max_residual) {
        out.max_residual = r;
        out.worst_first = j;
        out.worst_second = k;
      }
    }
  }
  out.compatible = out.max_residual <= tol.comm;
  return out;
}

namespace {

struct ProductSet {
  std::vector<ComplexMatrix> projectors;
  std::vector<std::string> labels;
};

ProductSet nonzero_products(const ProjectiveDecomposition& a,
                            const ProjectiveDecomposition& b, const Tolerance& tol) {
  ProductSet out;
  for (std::size_t j = 0; j < a.size(); ++j) {
    for (std::size_t k = 0; k < b.size(); ++k) {
      ComplexMatrix prod = a.projector(j) * b.projector(k);
      if (prod.max_abs() <= tol.proj) continue;
      out.projectors.push_back(std::move(prod));
      out.labels.push_back(a.label(j) + std::string(kAndSeparator) + b.label(k));
    }
  }
  return out;
}

}  // namespace

ProjectiveDecomposition refine(const ProjectiveDecomposition& a,
                               const ProjectiveDecomposition& b, const Tolerance& tol) {
  const FrameworkCompatibility compat = decompositions_compatible(a, b, tol);
  if (!compat.compatible) {
    throw Error(ErrorCode::IncompatibleFrameworks,
                "'" + a.label(compat.worst_first) + "' and '" + b.label(compat.worst_second) +
                    "' do not commute (residual " + std::to_string(compat.max_residual) + ")");
  }
  if (b.size() == 1) return a;
  if (a.size() == 1) return b;
  ProductSet products = nonzero_products(a, b, tol);
  return make_decomposition(std::move(products.projectors), std::move(products.labels), tol);
}

ProjectiveDecomposition refine_all(std::span<const ProjectiveDecomposition> parts,
                                   const Tolerance& tol) {
  if (parts.empty()) throw Error(ErrorCode::InvalidValue, "refine_all of an empty list");
  ProjectiveDecomposition acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = refine(acc, parts[i], tol);
  return acc;
}

std::optional<ProjectiveDecomposition> try_product_decomposition(
    const ProjectiveDecomposition& a, const ProjectiveDecomposition& b,
    const Tolerance& tol) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimMismatch, "product of decompositions with different dims");
  }
  ProductSet products = nonzero_products(a, b, tol);
  try {
    return make_decomposition(std::move(products.projectors), std::move(products.labels), tol);
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace qhist
