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

#include "support.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace qhist::testing {

namespace {

Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
  Eigen::MatrixXcd out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m(r, c);
    }
  }
  return out;
}

ComplexMatrix from_eigen(const Eigen::MatrixXcd& m) {
  ComplexMatrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = m(r, c);
    }
  }
  return out;
}

Ket column(const ComplexMatrix& m, std::size_t c) {
  std::vector<Complex> v(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) v[r] = m(r, c);
  return Ket(std::move(v));
}

std::string unique_label(Rng& rng, std::size_t i) {
  static const char* stems[] = {"up", "dn", "a", "b", "s", "m", "+x", "-x", "k"};
  return std::string(stems[rng() % 9]) + std::to_string(i);
}

}  // namespace

ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = Complex(g(rng), g(rng));
  }
  return m;
}

ComplexMatrix random_hermitian(std::size_t dim, Rng& rng) {
  const ComplexMatrix a = random_matrix(dim, dim, rng);
  return (a + dagger(a)) * Complex(0.5);
}

ComplexMatrix random_unitary(std::size_t dim, Rng& rng) {
  const Eigen::MatrixXcd z = to_eigen(random_matrix(dim, dim, rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < q.cols(); ++i) {
    const std::complex<double> d = r(i, i);
    q.col(i) *= std::abs(d) > 0 ? d / std::abs(d) : 1.0;
  }
  return from_eigen(q);
}

Ket random_state(std::size_t dim, Rng& rng) {
  std::normal_distribution<double> g;
  std::vector<Complex> v(dim);
  for (auto& a : v) a = Complex(g(rng), g(rng));
  return Ket(std::move(v)).normalized();
}

ProjectiveDecomposition random_decomposition(const ComplexMatrix& basis, std::size_t parts,
                                             Rng& rng) {
  const std::size_t dim = basis.rows();
  parts = std::clamp<std::size_t>(parts, 1, dim);
  std::vector<std::size_t> owner(dim);
  std::iota(owner.begin(), owner.end(), 0);
  std::shuffle(owner.begin(), owner.end(), rng);
  // The first `parts` shuffled columns seed each block; the rest join at random.
  std::vector<std::size_t> block(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    block[owner[i]] = i < parts ? i : static_cast<std::size_t>(rng() % parts);
  }
  std::vector<ComplexMatrix> projectors(parts, ComplexMatrix::zero(dim, dim));
  for (std::size_t c = 0; c < dim; ++c) {
    const Ket v = column(basis, c);
    projectors[block[c]] += outer(v, v);
  }
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < parts; ++i) labels.push_back(unique_label(rng, i));
  return make_decomposition(std::move(projectors), std::move(labels), Tolerance::uniform(1e-8));
}

HistoryFamily random_family(const FamilyShape& shape, Rng& rng) {
  std::vector<std::string> times;
  for (std::size_t i = 0; i <= shape.slots; ++i) times.push_back("t" + std::to_string(i));
  std::vector<ComplexMatrix> evolutions;
  std::vector<ProjectiveDecomposition> slots;
  for (std::size_t s = 0; s < shape.slots; ++s) {
    evolutions.push_back(random_unitary(shape.dim, rng));
    const std::size_t parts = 1 + rng() % shape.dim;
    slots.push_back(random_decomposition(random_unitary(shape.dim, rng), std::max<std::size_t>(parts, 2), rng));
  }
  return make_family(random_state(shape.dim, rng), TimeGrid(times), std::move(evolutions),
                     std::move(slots), Tolerance{});
}

HistoryFamily random_consistent_family(const FamilyShape& shape, Rng& rng) {
  std::vector<std::string> times;
  for (std::size_t i = 0; i <= shape.slots; ++i) times.push_back("t" + std::to_string(i));
  const ComplexMatrix basis = random_unitary(shape.dim, rng);
  std::vector<ComplexMatrix> evolutions;
  std::vector<ProjectiveDecomposition> slots;
  ComplexMatrix carry = ComplexMatrix::identity(shape.dim);
  for (std::size_t s = 0; s < shape.slots; ++s) {
    evolutions.push_back(random_unitary(shape.dim, rng));
    carry = evolutions.back() * carry;
    // Coarsenings of one basis commute with each other; conjugating by the
    // accumulated evolution keeps the pulled-back slots commuting.
    const std::size_t parts = 2 + rng() % (shape.dim - 1);
    slots.push_back(random_decomposition(carry * basis, parts, rng));
  }
  return make_family(random_state(shape.dim, rng), TimeGrid(times), std::move(evolutions),
                     std::move(slots), Tolerance::uniform(1e-8));
}

HistoryFamily measurement_family(std::size_t d, Rng& rng, bool phases) {
  const std::size_t det = d + 1;
  const std::size_t dim = d * det;
  const ComplexMatrix sys_basis = random_unitary(d, rng);
  const Ket m0 = Ket::basis(det, 0);

  // U = Σ_i |s_i⟩⟨s_i| ⊗ V_i, V_i swapping M0 and M_i (with phases).
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  ComplexMatrix u = ComplexMatrix::zero(dim, dim);
  std::vector<Ket> s;
  for (std::size_t i = 0; i < d; ++i) s.push_back(column(sys_basis, i));
  for (std::size_t i = 0; i < d; ++i) {
    ComplexMatrix v = ComplexMatrix::zero(det, det);
    for (std::size_t k = 0; k < det; ++k) {
      const std::size_t to = k == 0 ? i + 1 : (k == i + 1 ? 0 : k);
      v(to, k) = phases ? std::polar(1.0, angle(rng)) : Complex(1.0);
    }
    u += tensor_product(outer(s[i], s[i]), v);
  }

  const Ket sys0 = random_state(d, rng);
  const Ket psi0 = tensor_product(sys0, m0);

  std::vector<ComplexMatrix> t1;
  std::vector<std::string> t1_labels;
  std::vector<ComplexMatrix> t2;
  std::vector<std::string> t2_labels;
  for (std::size_t i = 0; i < d; ++i) {
    t1.push_back(projector_onto(tensor_product(s[i], m0)));
    t1_labels.push_back("s" + std::to_string(i + 1));
    t2.push_back(projector_onto(tensor_product(s[i], Ket::basis(det, i + 1))));
    t2_labels.push_back("M" + std::to_string(i + 1));
  }
  const Tolerance tol = Tolerance::uniform(1e-8);
  std::vector<SlotSpec> slots = {ProjectorSet{t1, t1_labels}, ProjectorSet{t2, t2_labels}};
  return build_family(psi0, TimeGrid({"t0", "t1", "t2"}),
                      {ComplexMatrix::identity(dim), u}, slots, tol);
}

Scenario random_scenario(Rng& rng) {
  Scenario s;
  s.name = "generated-" + std::to_string(rng() % 100000);
  if (rng() % 2) s.description = "random scenario";
  const std::size_t nsub = 1 + rng() % 3;
  bool all_qubits = true;
  for (std::size_t k = 0; k < nsub; ++k) {
    const std::size_t d = (rng() % 3 == 0 && k == nsub - 1 && nsub < 3) ? 3 : 2;
    all_qubits = all_qubits && d == 2;
    s.subsystem_dims.push_back(d);
  }
  const std::size_t dim = s.total_dim();
  static const char* preset_names[] = {"up_z", "down_z", "plus_x", "minus_x", "plus_y", "minus_y"};
  if (all_qubits && rng() % 2) {
    PresetState ps;
    for (std::size_t k = 0; k < nsub; ++k) ps.factors.push_back(preset_names[rng() % 6]);
    s.initial_state = ps;
  } else {
    const Ket k = random_state(dim, rng);
    s.initial_state = ExplicitState{{k.amplitudes().begin(), k.amplitudes().end()}};
  }
  const std::size_t nslots = 1 + rng() % 3;
  for (std::size_t i = 0; i <= nslots; ++i) s.times.push_back("t" + std::to_string(i));
  for (std::size_t i = 0; i < nslots; ++i) {
    if (rng() % 2) {
      s.evolutions.emplace_back(std::nullopt);
    } else {
      s.evolutions.emplace_back(random_unitary(dim, rng));
    }
  }
  const std::size_t nobs = rng() % 4;
  for (std::size_t o = 0; o < nobs; ++o) {
    ObserverSpec spec{"O" + std::to_string(o + 1), {}};
    for (std::size_t t = 1; t <= nslots; ++t) {
      const auto kind = rng() % 4;
      if (kind == 0) continue;  // trivial slot
      Measurement m{s.times[t], NamedObservable{"identity"}};
      if (kind == 1) {
        std::vector<std::size_t> qubits;
        for (std::size_t k = 0; k < nsub; ++k) {
          if (s.subsystem_dims[k] == 2) qubits.push_back(k);
        }
        if (!qubits.empty()) {
          static const char* ops[] = {"sigma_x", "sigma_y", "sigma_z", "identity"};
          const std::size_t q = qubits[rng() % qubits.size()];
          m.observable = NamedObservable{std::string(ops[rng() % 4]) + "@" + std::to_string(q + 1)};
        }
      } else if (kind == 2) {
        HermitianObservable h{random_hermitian(dim, rng), {}};
        if (rng() % 2) {
          for (std::size_t i = 0; i < dim; ++i) h.labels.push_back("e" + std::to_string(i));
        }
        m.observable = std::move(h);
      } else {
        const ComplexMatrix basis = random_unitary(dim, rng);
        const std::size_t parts = 1 + rng() % dim;
        ProjectorObservable p;
        // Possibly incomplete: drop the last block to exercise padding.
        const ProjectiveDecomposition d = random_decomposition(basis, parts, rng);
        const std::size_t keep = (d.size() > 1 && rng() % 2) ? d.size() - 1 : d.size();
        for (std::size_t i = 0; i < keep; ++i) p.projectors.push_back({d.label(i), d.projector(i)});
        m.observable = std::move(p);
      }
      spec.measurements.push_back(std::move(m));
    }
    s.observers.push_back(std::move(spec));
  }
  if (rng() % 3 == 0) s.tolerance = Tolerance{1e-8, 1e-8, 1e-8, 1e-9, 1e-10};
  return s;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).max_abs(); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace qhist::testing
