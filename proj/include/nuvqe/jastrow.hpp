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

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "nuvqe/circuit.hpp"
#include "nuvqe/pauli.hpp"
#include "nuvqe/sampling.hpp"

namespace nuvqe {

/// Exact-mode floor on <J J>.
inline constexpr double kDenominatorFloor = 1e-6;
/// Sampled mode requires <J J> > kDenominatorSigmas * std_error.
inline constexpr double kDenominatorSigmas = 5.0;
/// Energy handed to optimizers when the denominator is unstable (Hartree).
inline constexpr double kInstabilityPenalty = 1e3;
/// Reference-overlap level below which a warning is reported.
inline constexpr double kReferenceOverlapWarning = 0.25;

/**
 * @brief Coefficients of the linear Jastrow operator
 *
 *   J = 1 - sum_i alpha_i Z_i - sum_{i<j} lambda_ij Z_i Z_j.
 *
 * `lambda` is the strict upper triangle packed row by row:
 * (0,1), (0,2), ..., (0,N-1), (1,2), ...
 */
struct JastrowParams {
  int n_qubits = 1;
  std::vector<double> alpha;
  std::vector<double> lambda;

  static int count(int n_qubits) { return n_qubits + n_qubits * (n_qubits - 1) / 2; }
  static JastrowParams zeros(int n_qubits);
  /// Unpacks alpha followed by the packed lambda values.
  static JastrowParams from_flat(int n_qubits, std::span<const double> flat);

  std::vector<double> flat() const;
  double pair(int i, int j) const;
  void validate() const;
};

/// Index of lambda_ij (i < j) in the packed layout.
int pair_index(int n_qubits, int i, int j);

/// Diagonal PauliSum of the linear Jastrow operator (zero terms omitted).
PauliSum build_linear_jastrow(const JastrowParams& params);

struct TransformedHamiltonian {
  PauliSum numerator;    // J H J
  PauliSum denominator;  // J J
};

/// Symbolic sandwich J H J and J J; `j` must be diagonal and Hermitian.
TransformedHamiltonian transform(const PauliSum& h, const PauliSum& j);

/// Raised when <J J> falls below the stability floor.
class DenominatorUnstable : public std::runtime_error {
 public:
  DenominatorUnstable(const std::string& what, double denominator, double std_error)
      : std::runtime_error(what), denominator_(denominator), std_error_(std_error) {}
  double denominator() const { return denominator_; }
  double std_error() const { return std_error_; }

 private:
  double denominator_;
  double std_error_;
};

/// Estimator selection: exact statevector or finite shots (optionally noisy).
struct EstimatorSpec {
  bool sampled = false;
  int shots = 0;
  NoiseModel noise{};
  SamplerKind sampler = SamplerKind::kExactMixture;

  static EstimatorSpec exact() { return {}; }
  static EstimatorSpec sampling(int shots, NoiseModel noise,
                                SamplerKind kind = SamplerKind::kExactMixture) {
    return {true, shots, noise, kind};
  }
};

struct NuEnergyResult {
  double energy = 0.0;
  double energy_std_error = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
  double denominator_std_error = 0.0;
  double reference_overlap = 0.0;
  bool overlap_warning = false;
};

/**
 * @brief Evaluates the Rayleigh quotient <psi|J H J|psi> / <psi|J J|psi>.
 *
 * The exact estimator applies J to the statevector directly; the sampled
 * estimator measures every string of J H J and J J with `shots` shots and
 * propagates the standard error through the ratio. Throws
 * DenominatorUnstable when the denominator sits below the floor.
 */
NuEnergyResult nu_energy(const AnsatzSpec& spec, std::span<const double> theta,
                         const JastrowParams& params, const PauliSum& h,
                         const EstimatorSpec& estimator);

/**
 * @brief Cached evaluator for the exact nu-VQE objective.
 *
 * Holds the compiled Hamiltonian so repeated evaluations only pay for the
 * state preparation and one sparse pass. Results match nu_energy(exact).
 */
class ExactNuEvaluator {
 public:
  ExactNuEvaluator(const AnsatzSpec& spec, const PauliSum& h);

  const AnsatzSpec& spec() const { return spec_; }
  NuEnergyResult operator()(std::span<const double> theta,
                            const JastrowParams* params) const;

 private:
  AnsatzSpec spec_;
  CompiledOperator h_;
};

}  // namespace nuvqe
