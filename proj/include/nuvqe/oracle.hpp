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

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nuvqe/circuit.hpp"
#include "nuvqe/jastrow.hpp"
#include "nuvqe/pauli.hpp"

// Brute-force reference implementations. Nothing in here shares code with the
// bit-twiddling paths it is used to check: matrices come from explicit
// Kronecker products and circuits from dense gate matrices.
namespace nuvqe::oracle {

struct SpectrumResult {
  std::vector<double> eigenvalues;  // ascending, Hartree
  std::optional<Eigen::VectorXcd> ground_vector;
  int n_qubits = 0;
};

/// 2x2 matrix of 'I', 'X', 'Y' or 'Z'.
Eigen::Matrix2cd pauli_matrix(char op);

/// P_{N-1} (x) ... (x) P_0 including the string's phase.
Eigen::MatrixXcd kron_matrix(const PauliString& p);

/// Dense matrix of a PauliSum through kron_matrix (N <= kDenseQubitGuard).
Eigen::MatrixXcd dense_matrix(const PauliSum& s);

/// Full spectrum of a Hermitian matrix.
SpectrumResult spectrum(const Eigen::MatrixXcd& m, bool with_ground_vector = false);
SpectrumResult spectrum(const PauliSum& h, bool with_ground_vector = false);

/// Lowest eigenvalue of the dense Hermitian matrix of `h`.
double ground_energy(const PauliSum& h);

/// Lowest eigenvalue of a Jordan-Wigner (interleaved spin order) qubit
/// Hamiltonian restricted to basis states with the given up/down counts.
double sector_ground_energy(const PauliSum& h_jordan_wigner, int n_up, int n_down);

/// Estimate of the lowest eigenvalue by power iteration on (shift - H).
double power_iteration_ground(const Eigen::MatrixXcd& m, int iterations, std::uint64_t seed);

/// Ry(theta) as a 2x2 matrix, exp(-i theta Y / 2).
Eigen::Matrix2cd ry_matrix(double theta);

/// Full circuit unitary built from dense gate matrices (N <= 8).
Eigen::MatrixXcd circuit_unitary(const AnsatzSpec& spec, std::span<const double> theta);

/// U(theta)|reference> through circuit_unitary.
Eigen::VectorXcd dense_state(const AnsatzSpec& spec, std::span<const double> theta);

/// exp(-sum_i alpha_i Z_i - sum_{i<j} lambda_ij Z_i Z_j) applied elementwise
/// (unnormalized).
StateVector exponential_jastrow_state(const StateVector& state, const JastrowParams& params);

/// <v|M|v> / <v|v>.
double rayleigh_quotient(const Eigen::MatrixXcd& m, const Eigen::VectorXcd& v);

}  // namespace nuvqe::oracle
