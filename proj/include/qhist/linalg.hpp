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

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace qhist {

using Complex = std::complex<double>;

/// Absolute thresholds for the numerical predicates. All checks compare the
/// max-absolute-entry norm of a residual against one of these.
struct Tolerance {
  double norm = 1e-9;  ///< ket normalization
  double herm = 1e-9;  ///< Hermiticity, unitarity, eigenvalue clustering
  double proj = 1e-9;  ///< idempotence, orthogonality, completeness, zero products
  double comm = 1e-9;  ///< commutators
  double cons = 1e-9;  ///< consistency (relative to the largest Gram diagonal)

  static Tolerance uniform(double eps);

  /// Throws InvalidValue unless every field lies in [0, 1e-3].
  void validate() const;

  friend bool operator==(const Tolerance&, const Tolerance&) = default;
};

/// Dense complex matrix, row-major, at least 1x1, finite entries only.
class ComplexMatrix {
 public:
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zero(std::size_t rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Complex operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  std::span<const Complex> entries() const noexcept { return data_; }

  /// ‖·‖_max
  double max_abs() const noexcept;
  Complex trace() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scale);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

  /// Exact entrywise equality.
  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Complex> data_;
};

/// Column state vector. Kets are not normalized implicitly.
class Ket {
 public:
  explicit Ket(std::vector<Complex> amplitudes);
  Ket(std::initializer_list<Complex> amplitudes);

  static Ket zero(std::size_t dim);
  /// Computational basis vector |index⟩.
  static Ket basis(std::size_t dim, std::size_t index);

  std::size_t dim() const noexcept { return amps_.size(); }
  Complex operator[](std::size_t i) const { return amps_[i]; }
  Complex& operator[](std::size_t i) { return amps_[i]; }
  std::span<const Complex> amplitudes() const noexcept { return amps_; }

  double norm_squared() const noexcept;
  bool is_normalized(const Tolerance& tol) const noexcept;
  Ket normalized() const;

  Ket& operator+=(const Ket& other);
  Ket& operator*=(Complex scale);
  friend Ket operator+(Ket a, const Ket& b) { return a += b; }
  friend Ket operator*(Complex s, Ket a) { return a *= s; }

  friend bool operator==(const Ket&, const Ket&) = default;

 private:
  std::vector<Complex> amps_;
};

Ket operator*(const ComplexMatrix& m, const Ket& k);

/// ⟨a|b⟩, conjugate-linear in the first argument.
Complex inner(const Ket& a, const Ket& b);

/// |a⟩⟨b|
ComplexMatrix outer(const Ket& a, const Ket& b);

/// |k⟩⟨k| / ⟨k|k⟩
ComplexMatrix projector_onto(const Ket& k);

/// Kronecker product; the first factor is the most significant index.
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);
Ket tensor_product(const Ket& a, const Ket& b);

ComplexMatrix dagger(const ComplexMatrix& a);

/// ab − ba. Throws DimMismatch unless both are square of equal size.
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

bool is_hermitian(const ComplexMatrix& h, const Tolerance& tol);
bool is_projector(const ComplexMatrix& p, const Tolerance& tol);
bool is_unitary(const ComplexMatrix& u, const Tolerance& tol);

struct EigenProjector {
  double eigenvalue;
  ComplexMatrix projector;
};

/// Spectral projectors of a Hermitian matrix, ascending by eigenvalue.
/// Eigenvalues closer than tol.herm are merged into one projector.
std::vector<EigenProjector> hermitian_eigenprojectors(const ComplexMatrix& h,
                                                      const Tolerance& tol);

namespace pauli {
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
}  // namespace pauli

}  // namespace qhist
