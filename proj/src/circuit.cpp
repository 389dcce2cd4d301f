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

#include "nuvqe/circuit.hpp"

#include <bit>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>

namespace nuvqe {

namespace {

constexpr cplx kPhases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

void check_qubit(int q, int n) {
  if (q < 0 || q >= n) throw std::out_of_range("qubit index " + std::to_string(q) + " out of range");
}

}  // namespace

void AnsatzSpec::validate() const {
  if (n_qubits < 1 || n_qubits > kStateVectorQubitGuard) {
    throw std::invalid_argument("AnsatzSpec: qubit count out of range");
  }
  if (n_blocks < 0) throw std::invalid_argument("AnsatzSpec: negative block count");
  if (n_qubits < 64 && (reference >> n_qubits) != 0) {
    throw std::invalid_argument("AnsatzSpec: reference has bits beyond the register");
  }
}

StateVector::StateVector(int n_qubits, std::uint64_t basis_index) : n_qubits_(n_qubits) {
  if (n_qubits < 1 || n_qubits > kStateVectorQubitGuard) {
    throw std::invalid_argument("StateVector: qubit count out of range");
  }
  amps_.assign(std::size_t{1} << n_qubits, cplx{});
  if (basis_index >= amps_.size()) throw std::out_of_range("StateVector: basis index out of range");
  amps_[basis_index] = 1.0;
}

StateVector::StateVector(int n_qubits, std::vector<cplx> amplitudes)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
  if (n_qubits < 1 || n_qubits > kStateVectorQubitGuard ||
      amps_.size() != (std::size_t{1} << n_qubits)) {
    throw std::invalid_argument("StateVector: amplitude count does not match qubit count");
  }
}

double StateVector::norm_squared() const {
  double s = 0;
  for (const auto& a : amps_) s += std::norm(a);
  return s;
}

cplx StateVector::inner(const StateVector& other) const {
  if (other.n_qubits_ != n_qubits_) throw std::invalid_argument("StateVector::inner: qubit mismatch");
  cplx s{};
  for (std::size_t i = 0; i < amps_.size(); ++i) s += std::conj(amps_[i]) * other.amps_[i];
  return s;
}

void StateVector::apply_ry(int qubit, double theta) {
  check_qubit(qubit, n_qubits_);
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  const std::size_t stride = std::size_t{1} << qubit;
  const std::size_t dim = amps_.size();
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const cplx a0 = amps_[i];
      const cplx a1 = amps_[i + stride];
      amps_[i] = c * a0 - s * a1;
      amps_[i + stride] = s * a0 + c * a1;
    }
  }
}

void StateVector::apply_cnot(int control, int target) {
  check_qubit(control, n_qubits_);
  check_qubit(target, n_qubits_);
  if (control == target) throw std::invalid_argument("CNOT: control equals target");
  const std::size_t cbit = std::size_t{1} << control;
  const std::size_t tbit = std::size_t{1} << target;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if ((i & cbit) && !(i & tbit)) std::swap(amps_[i], amps_[i | tbit]);
  }
}

void StateVector::apply_h(int qubit) {
  check_qubit(qubit, n_qubits_);
  const double r = 1.0 / std::sqrt(2.0);
  const std::size_t stride = std::size_t{1} << qubit;
  for (std::size_t base = 0; base < amps_.size(); base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const cplx a0 = amps_[i];
      const cplx a1 = amps_[i + stride];
      amps_[i] = r * (a0 + a1);
      amps_[i + stride] = r * (a0 - a1);
    }
  }
}

void StateVector::apply_sdg(int qubit) {
  check_qubit(qubit, n_qubits_);
  const std::size_t bit = std::size_t{1} << qubit;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if (i & bit) amps_[i] *= cplx{0, -1};
  }
}

void StateVector::apply_pauli(const PauliString& p) {
  if (p.n_qubits() != n_qubits_) throw std::invalid_argument("apply_pauli: qubit mismatch");
  const cplx base = p.phase_value() * kPhases[std::popcount(p.x_mask() & p.z_mask()) & 3];
  std::vector<cplx> out(amps_.size());
  for (std::size_t b = 0; b < amps_.size(); ++b) {
    const bool odd = std::popcount(p.z_mask() & b) & 1;
    out[b ^ p.x_mask()] = (odd ? -base : base) * amps_[b];
  }
  amps_.swap(out);
}

StateVector prepare_state(const AnsatzSpec& spec, std::span<const double> theta) {
  spec.validate();
  if (static_cast<int>(theta.size()) != spec.parameter_count()) {
    throw std::invalid_argument("prepare_state: expected " + std::to_string(spec.parameter_count()) +
                                " angles, got " + std::to_string(theta.size()));
  }
  const int n = spec.n_qubits;
  StateVector psi(n, spec.reference);
  for (int q = 0; q < n; ++q) psi.apply_ry(q, theta[q]);
  for (int block = 1; block <= spec.n_blocks; ++block) {
    for (int q = 0; q + 1 < n; ++q) psi.apply_cnot(q, q + 1);
    for (int q = 0; q < n; ++q) psi.apply_ry(q, theta[block * n + q]);
  }
  return psi;
}

std::vector<double> prepare_real_state(const AnsatzSpec& spec, std::span<const double> theta) {
  spec.validate();
  if (static_cast<int>(theta.size()) != spec.parameter_count()) {
    throw std::invalid_argument("prepare_real_state: expected " + std::to_string(spec.parameter_count()) +
                                " angles, got " + std::to_string(theta.size()));
  }
  const int n = spec.n_qubits;
  const std::size_t dim = std::size_t{1} << n;
  std::vector<double> psi(dim, 0.0);
  psi[spec.reference] = 1.0;
  auto ry_layer = [&](int offset) {
    for (int q = 0; q < n; ++q) {
      const double c = std::cos(0.5 * theta[offset + q]);
      const double s = std::sin(0.5 * theta[offset + q]);
      const std::size_t stride = std::size_t{1} << q;
      for (std::size_t base = 0; base < dim; base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; ++i) {
          const double a0 = psi[i], a1 = psi[i + stride];
          psi[i] = c * a0 - s * a1;
          psi[i + stride] = s * a0 + c * a1;
        }
      }
    }
  };
  ry_layer(0);
  for (int block = 1; block <= spec.n_blocks; ++block) {
    for (int q = 0; q + 1 < n; ++q) {
      // Indices with control set and target clear: insert the bit pair 01 at q.
      const std::size_t cbit = std::size_t{1} << q;
      const std::size_t tbit = cbit << 1;
      const std::size_t low = cbit - 1;
      for (std::size_t k = 0; k < dim / 4; ++k) {
        const std::size_t i = ((k & ~low) << 2) | (k & low) | cbit;
        std::swap(psi[i], psi[i | tbit]);
      }
    }
    ry_layer(block * n);
  }
  return psi;
}

double exact_expectation(const StateVector& state, const PauliSum& op) {
  if (op.n_qubits() != state.n_qubits()) {
    throw std::invalid_argument("exact_expectation: qubit-count mismatch");
  }
  if (!op.is_hermitian()) throw std::invalid_argument("exact_expectation: operator is not Hermitian");
  const auto amps = state.amplitudes();
  cplx total{};
  for (const auto& [p, c] : op.terms()) {
    const cplx base = kPhases[std::popcount(p.x_mask() & p.z_mask()) & 3];
    cplx term{};
    for (std::size_t b = 0; b < amps.size(); ++b) {
      const bool odd = std::popcount(p.z_mask() & b) & 1;
      const cplx v = std::conj(amps[b ^ p.x_mask()]) * amps[b];
      term += odd ? -v : v;
    }
    total += c * base * term;
  }
  if (std::abs(total.imag()) > 1e-10 * std::max(1.0, std::abs(total.real()))) {
    throw std::runtime_error("exact_expectation: imaginary residual " + std::to_string(total.imag()));
  }
  return total.real();
}

std::vector<cplx> diagonal_of(const PauliSum& op) {
  if (op.n_qubits() > kStateVectorQubitGuard) throw std::length_error("diagonal_of: register too large");
  const std::size_t dim = std::size_t{1} << op.n_qubits();
  std::vector<cplx> diag(dim, cplx{});
  for (const auto& [p, c] : op.terms()) {
    if (!p.is_diagonal()) {
      throw std::invalid_argument("diagonal operator expected, found term " + p.label());
    }
    for (std::size_t b = 0; b < dim; ++b) {
      diag[b] += (std::popcount(p.z_mask() & b) & 1) ? -c : c;
    }
  }
  return diag;
}

StateVector apply_diagonal_operator(const StateVector& state, const PauliSum& op) {
  if (op.n_qubits() != state.n_qubits()) {
    throw std::invalid_argument("apply_diagonal_operator: qubit-count mismatch");
  }
  const auto diag = diagonal_of(op);
  std::vector<cplx> out(state.dimension());
  for (std::size_t b = 0; b < out.size(); ++b) out[b] = diag[b] * state[b];
  return {state.n_qubits(), std::move(out)};
}

double reference_overlap(const StateVector& state, std::uint64_t reference) {
  return std::norm(state[reference]);
}

CompiledOperator::CompiledOperator(const PauliSum& op) : n_qubits_(op.n_qubits()) {
  if (n_qubits_ > kStateVectorQubitGuard) throw std::length_error("CompiledOperator: register too large");
  const std::size_t dim = std::size_t{1} << n_qubits_;
  std::map<std::uint64_t, std::vector<cplx>> by_x;
  for (const auto& [p, c] : op.terms()) {
    auto& diag = by_x[p.x_mask()];
    if (diag.empty()) diag.assign(dim, cplx{});
    const cplx base = c * kPhases[std::popcount(p.x_mask() & p.z_mask()) & 3];
    for (std::size_t b = 0; b < dim; ++b) {
      diag[b] += (std::popcount(p.z_mask() & b) & 1) ? -base : base;
    }
  }
  groups_.reserve(by_x.size());
  real_groups_.reserve(by_x.size());
  for (auto& [x, diag] : by_x) {
    RealGroup g{x, -1, {}};
    if (x == 0) {
      g.folded.resize(dim);
      for (std::size_t b = 0; b < dim; ++b) g.folded[b] = diag[b].real();
    } else {
      g.pivot = std::bit_width(x) - 1;
      const std::size_t low = (std::size_t{1} << g.pivot) - 1;
      g.folded.resize(dim / 2);
      for (std::size_t k = 0; k < dim / 2; ++k) {
        const std::size_t b = ((k & ~low) << 1) | (k & low);
        g.folded[k] = diag[b].real() + diag[b ^ x].real();
      }
    }
    real_groups_.push_back(std::move(g));
    groups_.push_back({x, std::move(diag)});
  }
}

double CompiledOperator::real_expectation(std::span<const double> psi) const {
  if (psi.size() != (std::size_t{1} << n_qubits_)) {
    throw std::invalid_argument("CompiledOperator: state dimension mismatch");
  }
  double total = 0.0;
  for (const auto& g : real_groups_) {
    double acc = 0.0;
    if (g.pivot < 0) {
      for (std::size_t b = 0; b < psi.size(); ++b) acc += g.folded[b] * psi[b] * psi[b];
    } else {
      const std::size_t low = (std::size_t{1} << g.pivot) - 1;
      const std::size_t x = g.x_mask;
      for (std::size_t k = 0; k < g.folded.size(); ++k) {
        const std::size_t b = ((k & ~low) << 1) | (k & low);
        acc += g.folded[k] * psi[b] * psi[b ^ x];
      }
    }
    total += acc;
  }
  return total;
}

cplx CompiledOperator::expectation(std::span<const cplx> psi) const {
  if (psi.size() != (std::size_t{1} << n_qubits_)) {
    throw std::invalid_argument("CompiledOperator: state dimension mismatch");
  }
  cplx total{};
  for (const auto& g : groups_) {
    cplx acc{};
    const std::uint64_t x = g.x_mask;
    for (std::size_t b = 0; b < psi.size(); ++b) acc += std::conj(psi[b ^ x]) * (g.diagonal[b] * psi[b]);
    total += acc;
  }
  return total;
}

void write_state(std::ostream& out, const StateVector& state) {
  const auto flags = out.flags();
  const auto prec = out.precision();
  out << std::setprecision(17);
  for (std::size_t i = 0; i < state.dimension(); ++i) {
    out << i << ' ' << state[i].real() << ' ' << state[i].imag() << '\n';
  }
  out.flags(flags);
  out.precision(prec);
}

}  // namespace nuvqe
