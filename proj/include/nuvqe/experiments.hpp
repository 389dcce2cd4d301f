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
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nuvqe/circuit.hpp"
#include "nuvqe/fermion.hpp"
#include "nuvqe/optimizer.hpp"
#include "nuvqe/pauli.hpp"
#include "nuvqe/sampling.hpp"

namespace nuvqe {

enum class Variant { kVqe, kNuVqe };
std::string to_string(Variant v);
Variant parse_variant(const std::string& name);

/// Invalid or inconsistent experiment configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Every start of a run was abandoned as unstable.
class AllStartsFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Qubit Hamiltonian of a fixture plus the numbers every experiment needs.
struct System {
  Fixture fixture;
  MappingSpec mapping;
  PauliSum hamiltonian{1};
  std::uint64_t reference = 0;  // Hartree-Fock basis state
  double exact_ground = 0.0;    // dense lowest eigenvalue of `hamiltonian`

  int n_qubits() const { return hamiltonian.n_qubits(); }
};

System prepare_system(const std::string& fixture_id, const MappingSpec& mapping,
                      const std::filesystem::path& fixture_dir);

struct SolveOptions {
  Variant variant = Variant::kNuVqe;
  int n_blocks = 2;
  Method method = Method::kQuasiNewton;
  OptimizerOptions optimizer;
  int n_starts = 100;
  std::uint64_t seed = 1;
  int threads = 1;
  bool sampled = false;
  int shots = 8192;
  NoiseModel noise;
  int final_shots = 100'000;  // re-measurement of each start's final point (sampled mode)
  int jastrow_switch_off_step = 0;  // > 0: zero the Jastrow factor after this many iterations
};

struct StartSummary {
  double optimizer_energy = 0.0;  // best value seen by the optimizer
  double final_energy = 0.0;      // exact value, or the re-measurement when sampled
  double final_std_error = 0.0;
  int iterations = 0;
  bool failed = false;
};

struct SolveResult {
  MultiStartResult runs;
  std::vector<StartSummary> starts;  // parallel to runs.traces
  std::optional<std::size_t> best;   // lowest final_energy among non-failed starts
  int n_circuit_params = 0;
  int n_jastrow_params = 0;

  double best_energy() const;
  double best_std_error() const;
  int n_failed() const;
};

/// The (nu-)VQE objective for `system` as an optimization problem.
OptimizationProblem make_problem(const System& system, Variant variant, const AnsatzSpec& ansatz, bool sampled,
                                 int shots, const NoiseModel& noise);

/// Multi-start minimization. Throws AllStartsFailed when no start survives.
SolveResult solve(const System& system, const SolveOptions& options);

/// Final-energy histogram with bins [lo + k w, lo + (k+1) w), lo a multiple of w.
struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;
};
std::vector<HistogramBin> histogram(const std::vector<double>& values, double width);

struct ExperimentConfig {
  std::string command;
  std::vector<std::string> fixtures;  // explicit ids; otherwise molecule/basis/bonds
  std::string molecule = "h2";
  std::string basis = "631g";
  std::vector<double> bonds;
  std::optional<MappingSpec> mapping;  // default: per command
  std::vector<int> blocks{2};
  std::vector<Variant> variants{Variant::kVqe, Variant::kNuVqe};
  std::optional<Method> method;  // default: quasi_newton exact, linear_trust_region sampled
  bool sampled = false;
  int shots = 8192;
  std::string noise_preset = "noiseless";
  std::vector<int> shot_grid{2048, 8192, 32768, 100'000};
  int final_shots = 100'000;
  int n_starts = 100;
  std::uint64_t seed = 1;
  int max_evaluations = 10'000;
  int threads = 1;
  int jastrow_switch_off_step = 0;
  double histogram_width = 0.05;
  std::filesystem::path fixture_dir;
  std::filesystem::path out_dir = ".";

  /// Throws ConfigError.
  void validate() const;
  /// Fixture ids in run order.
  std::vector<std::string> fixture_ids() const;
  Method effective_method() const;
  /// Parity with two-qubit reduction for correlation-recovery,
  /// shots-noise-study and trace-report, Jordan-Wigner otherwise.
  MappingSpec effective_mapping() const;
  /// `key=value` lines, one per field, fixed order.
  std::string canonical() const;
  std::uint64_t hash() const;
  std::string hash_hex() const;
};

struct ExperimentOutput {
  std::vector<std::filesystem::path> files;
};

/// Runs config.command ("dissociation-scan", "blocks-sweep", "mapping-sweep",
/// "qubit-scaling", "correlation-recovery", "shots-noise-study",
/// "trace-report") and writes CSV files under config.out_dir.
ExperimentOutput run_experiment(const ExperimentConfig& config, std::ostream& log);

std::vector<std::string> experiment_commands();

}  // namespace nuvqe
