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
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace nuvqe {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct EvalDiagnostics {
  double denominator = kNaN;
  double denominator_std_error = kNaN;
  double energy_std_error = kNaN;
  double reference_overlap = kNaN;
};

struct Evaluation {
  double energy = 0.0;
  bool penalized = false;  // objective could not be evaluated stably
  EvalDiagnostics diagnostics;
};

/// `eval_seed` is unique per evaluation within a run; sampled objectives seed
/// their shot noise from it, exact objectives ignore it.
using Objective = std::function<Evaluation(std::span<const double> params, std::uint64_t eval_seed)>;

struct OptimizationProblem {
  Objective objective;
  int n_circuit_params = 0;
  int n_jastrow_params = 0;
  bool exact = true;  // deterministic objective; required by quasi_newton
  std::vector<std::pair<double, double>> bounds;  // empty or one per parameter

  int dimension() const { return n_circuit_params + n_jastrow_params; }
  void validate() const;
};

enum class Method { kQuasiNewton, kLinearTrustRegion, kSimplex };
std::string to_string(Method m);
Method parse_method(const std::string& name);

enum class Termination { kConverged, kBudgetExhausted, kIterationLimit, kNoImprovement, kUnstable };
std::string to_string(Termination t);

struct OptimizerOptions {
  int max_evaluations = 10'000;
  int max_iterations = 0;  // 0 = no limit
  double energy_tolerance = 1e-9;
  double radius_tolerance = 1e-4;
  double initial_radius = 0.5;
  double fd_step = 1e-6;
  double gradient_tolerance = 1e-10;
  int max_consecutive_penalties = 20;
};

struct TraceRecord {
  int iteration = 0;
  std::uint64_t params_hash = 0;
  double energy = 0.0;       // energy at the optimizer's current iterate
  double best_energy = 0.0;  // best accepted energy so far
  int n_evaluations = 0;
  EvalDiagnostics diagnostics;
};

struct RunTrace {
  std::vector<TraceRecord> records;
  std::vector<double> initial_params;
  std::vector<double> final_params;
  double final_energy = 0.0;
  EvalDiagnostics final_diagnostics;
  Termination termination = Termination::kConverged;
  std::uint64_t seed = 0;
  int n_evaluations = 0;
  bool failed = false;
};

/// Minimizes `problem` from `init`. The returned final point is the best
/// non-penalized point evaluated.
RunTrace minimize(const OptimizationProblem& problem, Method method, std::span<const double> init,
                  const OptimizerOptions& options = {}, std::uint64_t seed = 0);

struct MultiStartResult {
  std::vector<RunTrace> traces;  // in start order
  std::optional<std::size_t> best_index;  // lowest final energy among non-failed starts

  const RunTrace& best() const;
};

/// Start point drawn from `start_seed`: circuit angles uniform on [0, 2pi), Jastrow
/// coefficients uniform on (-0.1, 0.1).
std::vector<double> initial_point(const OptimizationProblem& problem, std::uint64_t start_seed);

/// Per-start seed derived from the master seed.
std::uint64_t start_seed(std::uint64_t master_seed, int start_index);

/// Runs `n_starts` independent minimizations. Results do not depend on
/// `threads`.
MultiStartResult multi_start(const OptimizationProblem& problem, int n_starts, std::uint64_t seed,
                             Method method, const OptimizerOptions& options = {}, int threads = 1);

/// Calls fn(0..n-1) on up to `threads` worker threads; the first exception is
/// rethrown after all workers finish.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

/// Central differences with step `h`.
std::vector<double> central_difference_gradient(const std::function<double(std::span<const double>)>& f,
                                                std::span<const double> x, double h);

/// FNV-1a over the IEEE bytes of the parameters.
std::uint64_t hash_params(std::span<const double> params);

}  // namespace nuvqe
