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

#include "doctest.h"
#include "nuvqe/fermion.hpp"
#include "nuvqe/jastrow.hpp"
#include "nuvqe/oracle.hpp"
#include "support.hpp"

using namespace nuvqe;

TEST_CASE("small ground energies") {
  CHECK(oracle::ground_energy(PauliSum(PauliString::from_label("Z"))) == doctest::Approx(-1.0));
  const auto s = oracle::spectrum(PauliSum(PauliString::from_label("XX")));
  REQUIRE(s.eigenvalues.size() == 4);
  CHECK(s.eigenvalues[0] == doctest::Approx(-1.0));
  CHECK(s.eigenvalues[1] == doctest::Approx(-1.0));
  CHECK(s.eigenvalues[2] == doctest::Approx(1.0));
  CHECK(s.eigenvalues[3] == doctest::Approx(1.0));
  CHECK(s.n_qubits == 2);
}

TEST_CASE("H2 STO-3G ground energy matches the recorded FCI value") {
  const auto f = load_fixture("h2_sto3g_0.74");
  CHECK(std::abs(oracle::ground_energy(map_to_qubits(f.hamiltonian, {})) - f.fci_energy()) < 1e-8);
}

TEST_CASE("ground vector is an eigenvector") {
  std::mt19937_64 rng(103);
  const auto h = testing::random_sum(4, 20, rng, true);
  const auto s = oracle::spectrum(h, true);
  REQUIRE(s.ground_vector.has_value());
  const Eigen::MatrixXcd m = oracle::dense_matrix(h);
  CHECK((m * *s.ground_vector - s.eigenvalues[0] * *s.ground_vector).norm() < 1e-10);
  for (std::size_t k = 1; k < s.eigenvalues.size(); ++k) CHECK(s.eigenvalues[k - 1] <= s.eigenvalues[k]);
}

TEST_CASE("constant shift moves the ground energy") {
  std::mt19937_64 rng(107);
  std::normal_distribution<double> normal;
  for (int k = 0; k < 10; ++k) {
    const auto h = testing::random_sum(4, 15, rng, true);
    const double c = 3.0 * normal(rng);
    CHECK(std::abs(oracle::ground_energy(h + PauliSum::identity(4, c)) - oracle::ground_energy(h) - c) < 1e-10);
  }
}

TEST_CASE("power iteration agrees with the dense eigensolve") {
  std::mt19937_64 rng(109);
  for (int k = 0; k < 4; ++k) {
    const auto h = testing::random_sum(6, 30, rng, true);
    const Eigen::MatrixXcd m = oracle::dense_matrix(h);
    const double dense = oracle::spectrum(m).eigenvalues.front();
    CHECK(std::abs(oracle::power_iteration_ground(m, 20000, 5 + k) - dense) < 1e-6);
  }
}

TEST_CASE("dense matrices of random sums are Hermitian") {
  std::mt19937_64 rng(113);
  const auto m = oracle::dense_matrix(testing::random_sum(5, 25, rng, true));
  CHECK(testing::max_abs_diff(m, m.adjoint()) < 1e-14);
}

TEST_CASE("exponential Jastrow: zero, single qubit and small-parameter scaling") {
  std::mt19937_64 rng(127);
  const AnsatzSpec spec{3, 1, 0};
  const auto psi = prepare_state(spec, testing::random_angles(spec.parameter_count(), rng));
  const auto same = oracle::exponential_jastrow_state(psi, JastrowParams::zeros(3));
  for (std::size_t b = 0; b < psi.dimension(); ++b) CHECK(same[b] == psi[b]);

  StateVector plus(1, std::vector<cplx>{1.0, 1.0});
  JastrowParams one = JastrowParams::zeros(1);
  one.alpha = {0.3};
  const auto out = oracle::exponential_jastrow_state(plus, one);
  CHECK(std::abs(out[0] - std::exp(-0.3)) < 1e-15);
  CHECK(std::abs(out[1] - std::exp(0.3)) < 1e-15);

  // Exponential vs linearized energies differ at second order in the
  // parameters; halving the parameters should cut the gap by about four.
  const auto f = load_fixture("h2_sto3g_0.74");
  const auto h = map_to_qubits(f.hamiltonian, {});
  const AnsatzSpec hs{4, 2, 0b0011};
  const auto theta = testing::random_angles(hs.parameter_count(), rng);
  const auto state = prepare_state(hs, theta);
  const auto base = testing::random_jastrow(4, rng, 1.0);
  std::vector<double> gaps;
  for (int k = 0; k < 5; ++k) {
    const double scale = 0.05 / std::pow(2.0, k);
    JastrowParams p = base;
    for (auto& a : p.alpha) a *= scale;
    for (auto& l : p.lambda) l *= scale;
    const auto e = oracle::exponential_jastrow_state(state, p);
    const double exp_energy = exact_expectation(e, h) / e.norm_squared();
    const double lin_energy = nu_energy(hs, theta, p, h, EstimatorSpec::exact()).energy;
    gaps.push_back(std::abs(exp_energy - lin_energy));
  }
  for (std::size_t k = 2; k < gaps.size(); ++k) {
    CAPTURE(k);
    CHECK(gaps[k - 1] / gaps[k] == doctest::Approx(4.0).epsilon(0.1));
  }
}

TEST_CASE("dense guard and circuit unitary size limit") {
  CHECK_THROWS_AS(oracle::dense_matrix(PauliSum::identity(kDenseQubitGuard + 1)), std::length_error);
  const std::vector<double> theta(9, 0.0);
  CHECK_THROWS_AS(oracle::circuit_unitary(AnsatzSpec{9, 0, 0}, theta), std::length_error);
}

TEST_CASE("circuit unitary is unitary") {
  std::mt19937_64 rng(131);
  const AnsatzSpec spec{4, 3, 0};
  const auto u = oracle::circuit_unitary(spec, testing::random_angles(spec.parameter_count(), rng));
  CHECK(testing::max_abs_diff(u.adjoint() * u, Eigen::MatrixXcd::Identity(16, 16)) < 1e-13);
}
