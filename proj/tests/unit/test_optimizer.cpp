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

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nuvqe/experiments.hpp"
#include "nuvqe/optimizer.hpp"
#include "support.hpp"

using namespace nuvqe;

namespace {

OptimizationProblem quadratic() {
  OptimizationProblem p;
  p.n_circuit_params = 2;
  p.objective = [](std::span<const double> x, std::uint64_t) {
    return Evaluation{(x[0] - 1.0) * (x[0] - 1.0) + (x[1] + 2.0) * (x[1] + 2.0)};
  };
  return p;
}

OptimizationProblem noisy_quadratic(double sigma) {
  OptimizationProblem p;
  p.n_circuit_params = 2;
  p.exact = false;
  p.objective = [sigma](std::span<const double> x, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    return Evaluation{(x[0] - 1.0) * (x[0] - 1.0) + (x[1] + 2.0) * (x[1] + 2.0) + noise(rng)};
  };
  return p;
}

void check_trace_invariants(const RunTrace& t) {
  for (std::size_t k = 1; k < t.records.size(); ++k) {
    CHECK(t.records[k].iteration > t.records[k - 1].iteration);
    CHECK(t.records[k].best_energy <= t.records[k - 1].best_energy);
  }
  if (!t.failed && !t.records.empty()) CHECK(t.records.back().best_energy == t.final_energy);
}

const std::filesystem::path kNoDir;

}  // namespace

TEST_CASE("quasi-Newton solves a 2D quadratic") {
  const std::vector<double> init{0.0, 0.0};
  const auto t = minimize(quadratic(), Method::kQuasiNewton, init);
  CHECK(t.termination == Termination::kConverged);
  CHECK(t.n_evaluations <= 200);
  CHECK(std::abs(t.final_params[0] - 1.0) < 1e-6);
  CHECK(std::abs(t.final_params[1] + 2.0) < 1e-6);
  check_trace_invariants(t);
}

TEST_CASE("derivative-free methods solve the quadratic") {
  const std::vector<double> init{0.0, 0.0};
  for (Method m : {Method::kLinearTrustRegion, Method::kSimplex}) {
    CAPTURE(to_string(m));
    const auto t = minimize(quadratic(), m, init);
    CHECK(t.final_energy < 1e-6);
    CHECK(t.n_evaluations <= 2000);
    check_trace_invariants(t);
  }
}

TEST_CASE("derivative-free methods tolerate noisy objectives") {
  const std::vector<double> init{0.0, 0.0};
  OptimizerOptions o;
  o.max_evaluations = 3000;
  for (Method m : {Method::kLinearTrustRegion, Method::kSimplex}) {
    CAPTURE(to_string(m));
    const auto t = minimize(noisy_quadratic(1e-3), m, init, o, 9);
    CHECK(std::abs(t.final_params[0] - 1.0) < 0.1);
    CHECK(std::abs(t.final_params[1] + 2.0) < 0.1);
    check_trace_invariants(t);
  }
  CHECK_THROWS(minimize(noisy_quadratic(1e-3), Method::kQuasiNewton, init));
}

TEST_CASE("zero-gradient start reports no improvement") {
  OptimizationProblem p;
  p.n_circuit_params = 2;
  p.objective = [](std::span<const double> x, std::uint64_t) { return Evaluation{std::cos(x[0]) + std::cos(x[1])}; };
  const std::vector<double> init{0.0, 0.0};
  const auto t = minimize(p, Method::kQuasiNewton, init);
  CHECK(t.termination == Termination::kNoImprovement);
  CHECK(t.n_evaluations < 100);
}

TEST_CASE("budget exhaustion is a termination reason, not a failure") {
  OptimizerOptions o;
  o.max_evaluations = 15;
  const std::vector<double> init{5.0, 5.0};
  for (Method m : {Method::kQuasiNewton, Method::kLinearTrustRegion, Method::kSimplex}) {
    const auto t = minimize(quadratic(), m, init, o);
    CHECK(t.termination == Termination::kBudgetExhausted);
    CHECK_FALSE(t.failed);
    CHECK(t.n_evaluations <= 15);
  }
}

TEST_CASE("persistent penalties abandon the start") {
  OptimizationProblem p;
  p.n_circuit_params = 2;
  p.exact = false;
  p.objective = [](std::span<const double>, std::uint64_t) { return Evaluation{1e3, true, {}}; };
  const std::vector<double> init{0.0, 0.0};
  for (Method m : {Method::kLinearTrustRegion, Method::kSimplex}) {
    const auto t = minimize(p, m, init);
    CHECK(t.failed);
    CHECK(t.termination == Termination::kUnstable);
    CHECK(t.n_evaluations <= 21);
  }
}

TEST_CASE("occasional penalties are survivable") {
  OptimizationProblem p;
  p.n_circuit_params = 2;
  p.exact = false;
  p.objective = [](std::span<const double> x, std::uint64_t) {
    if (x[0] > 2.0) return Evaluation{1e3, true, {}};
    return Evaluation{(x[0] - 1.9) * (x[0] - 1.9) + x[1] * x[1]};
  };
  const std::vector<double> init{0.0, 0.0};
  const auto t = minimize(p, Method::kLinearTrustRegion, init);
  CHECK_FALSE(t.failed);
  CHECK(t.final_energy < 1e-4);
}

TEST_CASE("finite-difference gradient agrees with a one-sided estimate") {
  std::mt19937_64 rng(137);
  const auto f = [](std::span<const double> x) { return std::sin(x[0]) * std::exp(0.3 * x[1]) + x[2] * x[0]; };
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 10; ++k) {
    std::vector<double> x{u(rng), u(rng), u(rng)};
    const auto g = central_difference_gradient(f, x, 1e-6);
    for (int i = 0; i < 3; ++i) {
      auto xp = x;
      xp[i] += 1e-7;
      const double one_sided = (f(xp) - f(x)) / 1e-7;
      CHECK(std::abs(g[i] - one_sided) <= 1e-4 * std::max(1.0, std::abs(g[i])));
    }
  }
}

TEST_CASE("initial points respect the sampling ranges and are reproducible") {
  OptimizationProblem p;
  p.n_circuit_params = 6;
  p.n_jastrow_params = 9;
  p.objective = [](std::span<const double>, std::uint64_t) { return Evaluation{}; };
  const auto a = initial_point(p, 77);
  REQUIRE(a.size() == 15);
  for (int i = 0; i < 6; ++i) CHECK((a[i] >= 0.0 && a[i] < 2.0 * std::numbers::pi));
  for (int i = 6; i < 15; ++i) CHECK((a[i] > -0.1 && a[i] < 0.1));
  CHECK(initial_point(p, 77) == a);
  CHECK(initial_point(p, 78) != a);
}

TEST_CASE("multi-start determinism, thread independence and single-start equality") {
  const auto sys = prepare_system("h2_sto3g_0.74", {}, kNoDir);
  const AnsatzSpec ansatz{4, 1, sys.reference};
  const auto problem = make_problem(sys, Variant::kNuVqe, ansatz, false, 0, {});
  OptimizerOptions o;
  o.max_evaluations = 3000;
  const auto serial = multi_start(problem, 6, 42, Method::kQuasiNewton, o, 1);
  const auto threaded = multi_start(problem, 6, 42, Method::kQuasiNewton, o, 3);
  REQUIRE(serial.traces.size() == 6);
  for (std::size_t k = 0; k < 6; ++k) {
    CHECK(serial.traces[k].final_energy == threaded.traces[k].final_energy);
    CHECK(serial.traces[k].final_params == threaded.traces[k].final_params);
    CHECK(serial.traces[k].records.size() == threaded.traces[k].records.size());
    check_trace_invariants(serial.traces[k]);
  }
  CHECK(serial.best_index == threaded.best_index);

  const auto one = multi_start(problem, 1, 42, Method::kQuasiNewton, o);
  const auto direct =
      minimize(problem, Method::kQuasiNewton, initial_point(problem, start_seed(42, 0)), o, start_seed(42, 0));
  CHECK(one.best().final_energy == direct.final_energy);
  CHECK(one.best().final_params == direct.final_params);
  CHECK(one.traces.front().final_energy == serial.traces.front().final_energy);
}

TEST_CASE("H2 STO-3G plain VQE with 50 restarts reaches chemical accuracy") {
  const auto sys = prepare_system("h2_sto3g_0.74", {}, kNoDir);
  SolveOptions o;
  o.variant = Variant::kVqe;
  o.n_blocks = 2;
  o.n_starts = 50;
  o.seed = 2024;
  const auto r = solve(sys, o);
  CHECK(r.n_circuit_params == 12);
  CHECK(r.best_energy() - sys.exact_ground < 1.6e-3);
  CHECK(r.best_energy() >= sys.exact_ground - 1e-9);

  // More restarts with the same seed include the first ones, so the best
  // energy can only improve.
  double running = std::numeric_limits<double>::infinity();
  for (const auto& s : r.starts) {
    const double before = running;
    running = std::min(running, s.final_energy);
    CHECK(running <= before);
  }
  o.n_starts = 10;
  const auto fewer = solve(sys, o);
  CHECK(r.best_energy() <= fewer.best_energy());
  for (std::size_t k = 0; k < 10; ++k) CHECK(fewer.starts[k].final_energy == r.starts[k].final_energy);
}

TEST_CASE("method names") {
  CHECK(parse_method("bfgs") == Method::kQuasiNewton);
  CHECK(parse_method("cobyla") == Method::kLinearTrustRegion);
  CHECK(parse_method("nelder_mead") == Method::kSimplex);
  CHECK(parse_method(to_string(Method::kSimplex)) == Method::kSimplex);
  CHECK_THROWS(parse_method("adam"));
}

TEST_CASE("hash_params distinguishes points") {
  const std::vector<double> a{0.1, 0.2}, b{0.1, 0.2000000001};
  CHECK(hash_params(a) == hash_params(a));
  CHECK(hash_params(a) != hash_params(b));
}

TEST_CASE("parallel_for covers every index and propagates exceptions") {
  std::vector<int> hits(50, 0);
  parallel_for(50, 4, [&](int i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS(parallel_for(10, 3, [](int i) {
    if (i == 7) throw std::runtime_error("boom");
  }));
}
