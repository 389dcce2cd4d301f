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
#include <iosfwd>
#include <span>
#include <vector>

#include "nuvqe/pauli.hpp"

namespace nuvqe {

/// Largest register handled by the statevector simulator.
inline constexpr int kStateVectorQubitGuard = 24;

/**
 * @brief Hardware-efficient Ry ansatz with a linear CNOT ladder.
 *
 * The circuit is an initial Ry layer followed by `n_blocks` repetitions of
 * (CNOT ladder, Ry layer), acting on the computational basis state
 * `reference`. Angles are laid out layer-major: theta[layer * n + qubit].
 */
struct AnsatzSpec {
  int n_qubits = 1;
  int n_blocks = 0;
  std::uint64_t reference = 0;

  int parameter_count() const { return n_qubits * (n_blocks + 1); }
  void validate() const;
};

class StateVector {
 public:
  /// Computational basis state |basis_index>.
  explicit StateVector(int n_qubits, std::uint64_t basis_index = 0);
  StateVector(int n_qubits, std::vector<cplx> amplitudes);

  int n_qubits() const { return n_qubits_; }
  std::size_t dimension() const { return amps_.size(); }
  std::span<const cplx> amplitudes() const { return amps_; }
  std::span<cplx> amplitudes() { return amps_; }
  cplx operator[](std::size_t i) const { return amps_[i]; }

  double norm_squared() const;
  cplx inner(const StateVector& other) const;  // <this|other>

  /// Ry(theta) = exp(-i theta Y / 2).
  void apply_ry(int qubit, double theta);
  void apply_cnot(int control, int target);
  void apply_h(int qubit);
  void apply_sdg(int qubit);
  /// Applies the Pauli string (including its phase).
  void apply_pauli(const PauliString& p);

 private:
  int n_qubits_;
  std::vector<cplx> amps_;
};

/// |Psi(theta)> for the ansatz; throws on a parameter-count mismatch.
StateVector prepare_state(const AnsatzSpec& spec, std::span<const double> theta);

/// Amplitudes of prepare_state as doubles; Ry and CNOT keep a basis-state
/// reference real.
std::vector<double> prepare_real_state(const AnsatzSpec& spec, std::span<const double> theta);

/// Sum_j h_j <psi|P_j|psi>. Throws for non-Hermitian operators or a qubit
/// mismatch, and when the imaginary residual exceeds 1e-10.
double exact_expectation(const StateVector& state, const PauliSum& op);

/// Diagonal of an I/Z-only operator as a length 2^N vector.
std::vector<cplx> diagonal_of(const PauliSum& op);

/// Elementwise product with the operator's diagonal; the result is not
/// normalized. Throws if a term carries an X or Y factor.
StateVector apply_diagonal_operator(const StateVector& state, const PauliSum& op);

/// |<reference|psi>|^2.
double reference_overlap(const StateVector& state, std::uint64_t reference);

/**
 * @brief Pauli sum precompiled for repeated expectation values.
 *
 * Terms sharing an x mask are merged into a single diagonal, so that
 * op = sum_x X^x D_x and each application costs one pass per distinct x mask.
 */
class CompiledOperator {
 public:
  explicit CompiledOperator(const PauliSum& op);

  int n_qubits() const { return n_qubits_; }
  std::size_t group_count() const { return groups_.size(); }

  /// <psi|op|psi> without normalization.
  cplx expectation(std::span<const cplx> psi) const;
  /// Re <psi|op|psi> for a real state, visiting each (b, b ^ x) pair once.
  double real_expectation(std::span<const double> psi) const;

 private:
  struct Group {
    std::uint64_t x_mask;
    std::vector<cplx> diagonal;
  };
  // Real part of the diagonal folded over each pair; indexed by b with the
  // pivot bit (highest bit of x) removed.
  struct RealGroup {
    std::uint64_t x_mask;
    int pivot;
    std::vector<double> folded;
  };
  int n_qubits_;
  std::vector<Group> groups_;
  std::vector<RealGroup> real_groups_;
};

/// Plain-text debug dump: `index re im` per amplitude.
void write_state(std::ostream& out, const StateVector& state);

}  // namespace nuvqe
