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

#include "qhist/linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "qhist/error.hpp"

namespace qhist {

namespace {

void require_finite(std::span<const Complex> values, const char* what) {
  for (const Complex& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw Error(ErrorCode::InvalidValue, std::string(what) + " has a non-finite entry");
    }
  }
}

void require_square(const ComplexMatrix& m, const char* what) {
  if (!m.is_square()) {
    throw Error(ErrorCode::NotSquare, std::string(what) + " must be square, got " +
                                          std::to_string(m.rows()) + "x" +
                                          std::to_string(m.cols()));
  }
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimMismatch,
                std::string(what) + ": " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                    std::to_string(b.cols()));
  }
}

}  // namespace

Tolerance Tolerance::uniform(double eps) {
  Tolerance t{eps, eps, eps, eps, eps};
  t.validate();
  return t;
}

void Tolerance::validate() const {
  for (double v : {norm, herm, proj, comm, cons}) {
    if (!(v >= 0.0 && v <= 1e-3)) {
      throw Error(ErrorCode::InvalidValue,
                  "tolerance " + std::to_string(v) + " outside [0, 1e-3]");
    }
  }
}

// ---------------------------------------------------------------------------
// ComplexMatrix

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {
  if (rows == 0 || cols == 0) {
    throw Error(ErrorCode::InvalidValue, "matrix dimensions must be at least 1x1");
  }
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (rows == 0 || cols == 0) {
    throw Error(ErrorCode::InvalidValue, "matrix dimensions must be at least 1x1");
  }
  if (data_.size() != rows * cols) {
    throw Error(ErrorCode::DimMismatch, "entry count " + std::to_string(data_.size()) +
                                            " != " + std::to_string(rows * cols));
  }
  require_finite(data_, "matrix");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  if (rows_ == 0 || cols_ == 0) {
    throw Error(ErrorCode::InvalidValue, "matrix dimensions must be at least 1x1");
  }
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) {
      throw Error(ErrorCode::DimMismatch, "ragged matrix literal");
    }
    data_.insert(data_.end(), row.begin(), row.end());
  }
  require_finite(data_, "matrix");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::zero(std::size_t rows, std::size_t cols) {
  return ComplexMatrix(rows, cols);
}

double ComplexMatrix::max_abs() const noexcept {
  double best = 0.0;
  for (const Complex& v : data_) best = std::max(best, std::abs(v));
  return best;
}

Complex ComplexMatrix::trace() const {
  require_square(*this, "trace operand");
  Complex t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "matrix sum");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "matrix difference");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
  for (Complex& v : data_) v *= scale;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::DimMismatch, "matrix product: inner dimensions " +
                                            std::to_string(a.cols()) + " and " +
                                            std::to_string(b.rows()));
  }
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ket

Ket::Ket(std::vector<Complex> amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.empty()) throw Error(ErrorCode::InvalidValue, "ket dimension must be at least 1");
  require_finite(amps_, "ket");
}

Ket::Ket(std::initializer_list<Complex> amplitudes)
    : Ket(std::vector<Complex>(amplitudes)) {}

Ket Ket::zero(std::size_t dim) { return Ket(std::vector<Complex>(dim)); }

Ket Ket::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw Error(ErrorCode::DimMismatch, "basis index out of range");
  std::vector<Complex> v(dim);
  v[index] = 1.0;
  return Ket(std::move(v));
}

double Ket::norm_squared() const noexcept {
  double s = 0.0;
  for (const Complex& a : amps_) s += std::norm(a);
  return s;
}

bool Ket::is_normalized(const Tolerance& tol) const noexcept {
  return std::abs(norm_squared() - 1.0) <= tol.norm;
}

Ket Ket::normalized() const {
  const double n = std::sqrt(norm_squared());
  if (n == 0.0) throw Error(ErrorCode::InvalidValue, "cannot normalize the zero ket");
  Ket out = *this;
  out *= 1.0 / n;
  return out;
}

Ket& Ket::operator+=(const Ket& other) {
  if (dim() != other.dim()) throw Error(ErrorCode::DimMismatch, "ket sum dimension mismatch");
  for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] += other.amps_[i];
  return *this;
}

Ket& Ket::operator*=(Complex scale) {
  for (Complex& a : amps_) a *= scale;
  return *this;
}

Ket operator*(const ComplexMatrix& m, const Ket& k) {
  if (m.cols() != k.dim()) {
    throw Error(ErrorCode::DimMismatch, "operator of width " + std::to_string(m.cols()) +
                                            " applied to ket of dim " +
                                            std::to_string(k.dim()));
  }
  std::vector<Complex> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) acc += m(i, j) * k[j];
    out[i] = acc;
  }
  return Ket(std::move(out));
}

Complex inner(const Ket& a, const Ket& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimMismatch, "inner product dimension mismatch");
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

ComplexMatrix outer(const Ket& a, const Ket& b) {
  ComplexMatrix m(a.dim(), b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < b.dim(); ++j) m(i, j) = a[i] * std::conj(b[j]);
  }
  return m;
}

ComplexMatrix projector_onto(const Ket& k) {
  const double n = k.norm_squared();
  if (n == 0.0) throw Error(ErrorCode::InvalidValue, "projector onto the zero ket");
  return outer(k, k) * Complex(1.0 / n);
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ar = 0; ar < a.rows(); ++ar) {
    for (std::size_t ac = 0; ac < a.cols(); ++ac) {
      const Complex s = a(ar, ac);
      if (s == Complex{}) continue;
      for (std::size_t br = 0; br < b.rows(); ++br) {
        for (std::size_t bc = 0; bc < b.cols(); ++bc) {
          out(ar * b.rows() + br, ac * b.cols() + bc) = s * b(br, bc);
        }
      }
    }
  }
  return out;
}

Ket tensor_product(const Ket& a, const Ket& b) {
  std::vector<Complex> out;
  out.reserve(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < b.dim(); ++j) out.push_back(a[i] * b[j]);
  }
  return Ket(std::move(out));
}

ComplexMatrix dagger(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out(c, r) = std::conj(a(r, c));
  }
  return out;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.is_square() || !b.is_square() || a.rows() != b.rows()) {
    throw Error(ErrorCode::DimMismatch, "commutator requires square operands of equal size");
  }
  return a * b - b * a;
}

bool is_hermitian(const ComplexMatrix& h, const Tolerance& tol) {
  require_square(h, "Hermiticity operand");
  return (h - dagger(h)).max_abs() <= tol.herm;
}

bool is_projector(const ComplexMatrix& p, const Tolerance& tol) {
  require_square(p, "projector candidate");
  if ((p - dagger(p)).max_abs() > tol.herm) return false;
  return (p * p - p).max_abs() <= tol.proj;
}

bool is_unitary(const ComplexMatrix& u, const Tolerance& tol) {
  require_square(u, "unitary candidate");
  return (dagger(u) * u - ComplexMatrix::identity(u.rows())).max_abs() <= tol.herm;
}

std::vector<EigenProjector> hermitian_eigenprojectors(const ComplexMatrix& h,
                                                      const Tolerance& tol) {
  require_square(h, "eigen decomposition operand");
  if (!is_hermitian(h, tol)) {
    throw Error(ErrorCode::NotHermitian, "eigenprojectors need a Hermitian operand");
  }
  const auto n = static_cast<Eigen::Index>(h.rows());
  Eigen::MatrixXcd m(n, n);
  // Symmetrize so the solver sees an exactly Hermitian input.
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      const auto ur = static_cast<std::size_t>(r);
      const auto uc = static_cast<std::size_t>(c);
      m(r, c) = 0.5 * (h(ur, uc) + std::conj(h(uc, ur)));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::InvalidValue, "Hermitian eigensolver did not converge");
  }
  const Eigen::VectorXd& values = solver.eigenvalues();  // ascending
  const Eigen::MatrixXcd& vectors = solver.eigenvectors();

  std::vector<EigenProjector> out;
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && values(end) - values(end - 1) <= tol.herm) ++end;
    ComplexMatrix proj(h.rows(), h.rows());
    double sum = 0.0;
    for (Eigen::Index k = start; k < end; ++k) {
      sum += values(k);
      for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
          proj(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) +=
              vectors(r, k) * std::conj(vectors(c, k));
        }
      }
    }
    out.push_back({sum / static_cast<double>(end - start), std::move(proj)});
    start = end;
  }
  return out;
}

namespace pauli {
ComplexMatrix x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
ComplexMatrix y() { return {{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}}; }
ComplexMatrix z() { return {{1.0, 0.0}, {0.0, -1.0}}; }
}  // namespace pauli

}  // namespace qhist
