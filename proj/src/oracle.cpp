/*
 * Copyright 2026 The nuvqe Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "nuvqe/oracle.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

namespace nuvqe::oracle {

namespace {

void guard(int n) {
  if (n > kDenseQubitGuard) {
    throw std::length_error("oracle: " + std::to_string(n) + " qubits exceeds the dense guard of " +
                            std::to_string(kDenseQubitGuard));
  }
}

}  // namespace

Eigen::Matrix2cd pauli_matrix(char op) {
  Eigen::Matrix2cd m;
  switch (op) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("pauli_matrix: bad operator");
  }
  return m;
}

Eigen::MatrixXcd kron_matrix(const PauliString& p) {
  guard(p.n_qubits());
  // Qubit 0 is the least significant index bit, i.e. the rightmost factor.
  Eigen::MatrixXcd m = pauli_matrix(p.op_at(p.n_qubits() - 1));
  for (int q = p.n_qubits() - 2; q >= 0; --q) {
    Eigen::MatrixXcd next = Eigen::kroneckerProduct(m, pauli_matrix(p.op_at(q))).eval();
    m.swap(next);
  }
  return m * p.phase_value();
}

Eigen::MatrixXcd dense_matrix(const PauliSum& s) {
  guard(s.n_qubits());
  const int n = s.n_qubits();
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  // Each column of a tensor product of 2x2 factors has one nonzero entry;
  // walk the factors qubit by qubit instead of materializing the product.
  std::vector<Eigen::Matrix2cd> factors(n);
  for (const auto& [p, c] : s.terms()) {
    for (int q = 0; q < n; ++q) factors[q] = pauli_matrix(p.op_at(q));
    const cplx scale = c * p.phase_value();
    for (Eigen::Index col = 0; col < dim; ++col) {
      cplx amp = scale;
      Eigen::Index row = 0;
      for (int q = 0; q < n; ++q) {
        const int in = static_cast<int>((col >> q) & 1);
        const int out = factors[q](0, in) != cplx(0.0) ? 0 : 1;
        amp *= factors[q](out, in);
        row |= static_cast<Eigen::Index>(out) << q;
      }
      m(row, col) += amp;
    }
  }
  return m;
}

SpectrumResult spectrum(const Eigen::MatrixXcd& m, bool with_ground_vector) {
  if (m.rows() != m.cols()) throw std::invalid_argument("spectrum: matrix is not square");
  SpectrumResult out;
  out.n_qubits = static_cast<int>(std::lround(std::log2(static_cast<double>(m.rows()))));
  const auto options = with_ground_vector ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly;
  if (m.imag().cwiseAbs().maxCoeff() == 0.0) {
    // Real symmetric matrices (all molecular Hamiltonians here) take the
    // cheaper real solver.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.real(), options);
    if (solver.info() != Eigen::Success) throw std::runtime_error("spectrum: eigensolver failed");
    const auto& ev = solver.eigenvalues();
    out.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    if (with_ground_vector) out.ground_vector = solver.eigenvectors().col(0).cast<cplx>();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, options);
    if (solver.info() != Eigen::Success) throw std::runtime_error("spectrum: eigensolver failed");
    const auto& ev = solver.eigenvalues();
    out.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    if (with_ground_vector) out.ground_vector = solver.eigenvectors().col(0);
  }
  return out;
}

SpectrumResult spectrum(const PauliSum& h, bool with_ground_vector) {
  if (!h.is_hermitian()) throw std::invalid_argument("spectrum: operator is not Hermitian");
  auto out = spectrum(dense_matrix(h), with_ground_vector);
  out.n_qubits = h.n_qubits();
  return out;
}

double ground_energy(const PauliSum& h) { return spectrum(h).eigenvalues.front(); }

double sector_ground_energy(const PauliSum& h, int n_up, int n_down) {
  const Eigen::MatrixXcd m = dense_matrix(h);
  std::vector<Eigen::Index> basis;
  for (Eigen::Index b = 0; b < m.rows(); ++b) {
    int up = 0, down = 0;
    for (int q = 0; q < h.n_qubits(); ++q) {
      if ((b >> q) & 1) (q % 2 == 0 ? up : down) += 1;
    }
    if (up == n_up && down == n_down) basis.push_back(b);
  }
  if (basis.empty()) throw std::invalid_argument("sector_ground_energy: empty sector");
  const auto k = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd sub(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) sub(i, j) = m(basis[i], basis[j]);
  return spectrum(sub).eigenvalues.front();
}

double power_iteration_ground(const Eigen::MatrixXcd& m, int iterations, std::uint64_t seed) {
  // Gershgorin bound on the largest eigenvalue makes shift - H positive
  // semidefinite, so its dominant eigenvector is the ground state.
  double shift = 0.0;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    shift = std::max(shift, m.row(r).cwiseAbs().sum());
  }
  const Eigen::MatrixXcd a = shift * Eigen::MatrixXcd::Identity(m.rows(), m.cols()) - m;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXcd v(m.rows());
  for (auto& x : v) x = cplx(normal(rng), normal(rng));
  v.normalize();
  for (int it = 0; it < iterations; ++it) {
    v = a * v;
    v.normalize();
  }
  return rayleigh_quotient(m, v);
}

Eigen::Matrix2cd ry_matrix(double theta) {
  Eigen::Matrix2cd m;
  const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
  m << c, -s, s, c;
  return m;
}

namespace {

Eigen::MatrixXcd embed_single(int n, int qubit, const Eigen::Matrix2cd& g) {
  Eigen::MatrixXcd m = (n - 1 == qubit) ? Eigen::MatrixXcd(g) : Eigen::MatrixXcd(pauli_matrix('I'));
  for (int q = n - 2; q >= 0; --q) {
    const Eigen::Matrix2cd f = (q == qubit) ? g : pauli_matrix('I');
    Eigen::MatrixXcd next = Eigen::kroneckerProduct(m, f).eval();
    m.swap(next);
  }
  return m;
}

Eigen::MatrixXcd cnot_matrix(int n, int control, int target) {
  // |0><0|_c (x) I + |1><1|_c (x) X_t
  Eigen::Matrix2cd p0, p1;
  p0 << 1, 0, 0, 0;
  p1 << 0, 0, 0, 1;
  return embed_single(n, control, p0) + embed_single(n, control, p1) * embed_single(n, target, pauli_matrix('X'));
}

}  // namespace

Eigen::MatrixXcd circuit_unitary(const AnsatzSpec& spec, std::span<const double> theta) {
  spec.validate();
  if (spec.n_qubits > 8) throw std::length_error("circuit_unitary: at most 8 qubits");
  if (static_cast<int>(theta.size()) != spec.parameter_count()) {
    throw std::invalid_argument("circuit_unitary: parameter-count mismatch");
  }
  const int n = spec.n_qubits;
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  for (int q = 0; q < n; ++q) u = embed_single(n, q, ry_matrix(theta[q])) * u;
  for (int block = 1; block <= spec.n_blocks; ++block) {
    for (int q = 0; q + 1 < n; ++q) u = cnot_matrix(n, q, q + 1) * u;
    for (int q = 0; q < n; ++q) u = embed_single(n, q, ry_matrix(theta[block * n + q])) * u;
  }
  return u;
}

Eigen::VectorXcd dense_state(const AnsatzSpec& spec, std::span<const double> theta) {
  return circuit_unitary(spec, theta).col(static_cast<Eigen::Index>(spec.reference));
}

StateVector exponential_jastrow_state(const StateVector& state, const JastrowParams& params) {
  params.validate();
  if (params.n_qubits != state.n_qubits()) throw std::invalid_argument("exponential_jastrow_state: qubit mismatch");
  const int n = params.n_qubits;
  std::vector<cplx> out(state.dimension());
  for (std::size_t b = 0; b < out.size(); ++b) {
    double exponent = 0.0;
    for (int i = 0; i < n; ++i) {
      const double zi = ((b >> i) & 1U) ? -1.0 : 1.0;
      exponent -= params.alpha[i] * zi;
      for (int j = i + 1; j < n; ++j) {
        const double zj = ((b >> j) & 1U) ? -1.0 : 1.0;
        exponent -= params.pair(i, j) * zi * zj;
      }
    }
    out[b] = std::exp(exponent) * state[b];
  }
  return {n, std::move(out)};
}

double rayleigh_quotient(const Eigen::MatrixXcd& m, const Eigen::VectorXcd& v) {
  return (v.adjoint() * m * v)(0, 0).real() / v.squaredNorm();
}

}  // namespace nuvqe::oracle
