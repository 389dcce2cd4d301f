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
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "nuvqe/circuit.hpp"
#include "nuvqe/pauli.hpp"

namespace nuvqe {

/// Largest register for the mixed-state (gate noise) estimator.
inline constexpr int kDensityQubitGuard = 10;

/**
 * @brief Parametric device noise.
 *
 * A depolarizing channel with probability `p1` follows every Ry gate and a
 * two-qubit depolarizing channel with probability `p2` follows every CNOT.
 * Readout flips act independently per measured qubit: `readout_p10` is the
 * probability that a qubit in |0> is reported as 1, `readout_p01` that a
 * qubit in |1> is reported as 0.
 */
struct NoiseModel {
  double p1 = 0.0;
  double p2 = 0.0;
  double readout_p01 = 0.0;
  double readout_p10 = 0.0;
  std::uint64_t seed = 0;

  bool has_gate_noise() const { return p1 > 0.0 || p2 > 0.0; }
  bool is_noiseless() const {
    return !has_gate_noise() && readout_p01 == 0.0 && readout_p10 == 0.0;
  }
  void validate() const;

  /// "noiseless" or "boeblingen-like".
  static NoiseModel preset(const std::string& name);
};

/// Parses `key=value` lines (p1, p2, readout_p01, readout_p10, seed). A
/// `preset=<name>` line seeds the values before later keys override them.
NoiseModel parse_noise_config(std::istream& in);
NoiseModel load_noise_config(const std::filesystem::path& path);

/**
 * How single-shot outcomes are generated.
 *
 * kExactMixture computes the exact outcome distribution of each measured
 * term (the statevector, or the density matrix when gate noise is on) and
 * draws the shot counts from it. kTrajectory simulates every shot as its own
 * circuit run with stochastically inserted Pauli errors. Both produce
 * identically distributed estimates.
 */
enum class SamplerKind { kExactMixture, kTrajectory };

struct TermEstimate {
  PauliString term;
  double mean = 0.0;      // shot average of the +-1 outcomes
  double variance = 0.0;  // single-shot variance, 1 - mean^2
};

struct EstimatorReport {
  double energy = 0.0;
  double std_error = 0.0;
  int shots_per_term = 0;
  std::vector<TermEstimate> per_term;  // non-identity terms, canonical order
};

/// Draws `shots` outcomes for each string in `strings` (phase +1, any order;
/// the position in the list selects the sub-seed). Identity strings return
/// mean 1 and zero variance.
std::vector<TermEstimate> sample_terms(const AnsatzSpec& spec, std::span<const double> theta,
                                       std::span<const PauliString> strings, int shots,
                                       const NoiseModel& noise,
                                       SamplerKind kind = SamplerKind::kExactMixture);

/**
 * @brief Shot-based estimate of a Hermitian PauliSum.
 *
 * Every non-identity term gets `shots` shots after the basis change
 * (H for X, S^dagger then H for Y). The identity coefficient is added
 * exactly. Deterministic for a given noise.seed.
 */
EstimatorReport sample_expectation(const AnsatzSpec& spec, std::span<const double> theta,
                                   const PauliSum& op, int shots, const NoiseModel& noise,
                                   SamplerKind kind = SamplerKind::kExactMixture);

struct ScalingRow {
  int shots = 0;
  double mean = 0.0;
  double empirical_std = 0.0;  // across repeats
  double predicted_std = 0.0;  // sqrt((1 - m^2) / shots) using the exact mean
};

/// Repeats single-term estimation `repeats` times per shot count.
std::vector<ScalingRow> std_error_scaling_probe(const AnsatzSpec& spec,
                                                std::span<const double> theta,
                                                const PauliString& term,
                                                std::span<const int> shot_counts, int repeats,
                                                const NoiseModel& noise);

/// Exact per-shot mean of the +-1 outcome of `term` under the noise model
/// (gate noise and readout included). Used by the estimator and its tests.
double noisy_term_mean(const AnsatzSpec& spec, std::span<const double> theta,
                       const PauliString& term, const NoiseModel& noise);

/// Deterministic 64-bit mixer for deriving sub-seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace nuvqe
