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
#include "nuvqe/fermion.hpp"
#include "nuvqe/jastrow.hpp"
#include "nuvqe/oracle.hpp"
#include "support.hpp"

using namespace nuvqe;
using nuvqe::testing::max_abs_diff;

TEST_CASE("linear Jastrow construction") {
  auto p = JastrowParams::zeros(2);
  CHECK((build_linear_jastrow(p) - PauliSum::identity(2)).simplified().empty());
  p.alpha = {0.1, 0.0};
  p.lambda = {0.2};
  PauliSum expected = PauliSum::identity(2);
  expected.add(PauliString::from_label("ZI"), -0.1);
  expected.add(PauliString::from_label("ZZ"), -0.2);
  CHECK((build_linear_jastrow(p) - expected).simplified().empty());

  std::mt19937_64 rng(71);
  CHECK(build_linear_jastrow(testing::random_jastrow(8, rng, 0.1)).size() == 37);
  CHECK(JastrowParams::count(8) == 36);
}

TEST_CASE("flat layout and validation") {
  std::vector<double> flat(JastrowParams::count(4));
  for (std::size_t k = 0; k < flat.size(); ++k) flat[k] = static_cast<double>(k);
  const auto p = JastrowParams::from_flat(4, flat);
  CHECK(p.alpha[3] == 3.0);
  CHECK(p.pair(0, 1) == 4.0);
  CHECK(p.pair(2, 3) == 9.0);
  CHECK_THROWS(p.pair(3, 2));
  CHECK(p.flat() == flat);
  auto bad = p;
  bad.alpha[0] = std::nan("");
  CHECK_THROWS(bad.validate());
  CHECK_THROWS(JastrowParams::from_flat(4, std::span<const double>(flat).first(5)));
}

TEST_CASE("transform with identity J returns H") {
  std::mt19937_64 rng(73);
  const auto h = testing::random_sum(4, 12, rng, true);
  const auto t = transform(h, PauliSum::identity(4));
  CHECK((t.numerator - h).simplified().empty());
  CHECK((t.denominator - PauliSum::identity(4)).simplified().empty());
}

TEST_CASE("transform agrees with dense J H J") {
  std::mt19937_64 rng(79);
  for (int k = 0; k < 20; ++k) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const auto h = testing::random_sum(n, 15, rng, true);
    const auto j = build_linear_jastrow(testing::random_jastrow(n, rng, 0.5));
    const auto t = transform(h, j);
    const Eigen::MatrixXcd dj = oracle::dense_matrix(j);
    CHECK(max_abs_diff(oracle::dense_matrix(t.numerator), dj * oracle::dense_matrix(h) * dj) < 1e-12);
    CHECK(max_abs_diff(oracle::dense_matrix(t.denominator), dj * dj) < 1e-12);
  }
}

TEST_CASE("transformed strings stay within four extra qubits of H's support") {
  std::mt19937_64 rng(83);
  const auto f = load_fixture("h2_631g_0.74");
  const auto h = map_to_qubits(f.hamiltonian, {});
  const auto t = transform(h, build_linear_jastrow(testing::random_jastrow(8, rng, 0.1)));
  int max_h = 0;
  for (const auto& [p, c] : h.terms()) max_h = std::max(max_h, p.weight());
  for (const auto& [p, c] : t.numerator.terms()) CHECK(p.weight() <= max_h + 4);
  CHECK(t.numerator.size() <= 37 * 37 * h.size());
  CHECK(t.numerator.is_hermitian());
}

TEST_CASE("transform rejects bad Jastrow operators") {
  CHECK_THROWS(transform(PauliSum::identity(2), PauliSum::identity(3)));
  CHECK_THROWS(transform(PauliSum::identity(1), PauliSum(PauliString::from_label("X"))));
  CHECK_THROWS(transform(PauliSum::identity(1), PauliSum(PauliString::from_label("Z"), cplx(0, 1))));
}

TEST_CASE("single qubit example gives -0.8") {
  // Dense check first: J = I - 0.5 Z applied to |+>.
  Eigen::Vector2cd plus(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0));
  Eigen::Matrix2cd j = Eigen::Matrix2cd::Identity() - 0.5 * oracle::pauli_matrix('Z');
  const Eigen::Vector2cd phi = j * plus;
  CHECK(oracle::rayleigh_quotient(oracle::pauli_matrix('Z'), phi) == doctest::Approx(-0.8).epsilon(1e-14));

  const AnsatzSpec spec{1, 0, 0};
  const std::vector<double> theta{std::numbers::pi / 2};
  JastrowParams p = JastrowParams::zeros(1);
  p.alpha = {0.5};
  const PauliSum h(PauliString::from_label("Z"));
  const auto r = nu_energy(spec, theta, p, h, EstimatorSpec::exact());
  CHECK(std::abs(r.energy + 0.8) < 1e-12);
  CHECK(std::abs(r.denominator - 1.25) < 1e-12);
  ExactNuEvaluator eval(spec, h);
  CHECK(std::abs(eval(theta, &p).energy + 0.8) < 1e-12);
}

TEST_CASE("zero Jastrow reduces to the plain expectation") {
  std::mt19937_64 rng(89);
  const auto f = load_fixture("h2_sto3g_0.74");
  const auto h = map_to_qubits(f.hamiltonian, {});
  const AnsatzSpec spec{4, 2, 0b0011};
  for (int k = 0; k < 10; ++k) {
    const auto theta = testing::random_angles(spec.parameter_count(), rng);
    const double plain = exact_expectation(prepare_state(spec, theta), h);
    CHECK(std::abs(nu_energy(spec, theta, JastrowParams::zeros(4), h, EstimatorSpec::exact()).energy - plain) < 1e-12);
    ExactNuEvaluator eval(spec, h);
    CHECK(std::abs(eval(theta, nullptr).energy - plain) < 1e-12);
  }
}

TEST_CASE("variational bound, consistency and gauge invariance") {
  std::mt19937_64 rng(97);
  for (const char* id : {"h2_sto3g_0.74", "h2_631g_0.74"}) {
    const auto f = load_fixture(id);
    const auto h = map_to_qubits(f.hamiltonian, {});
    const int n = h.n_qubits();
    const double ground = oracle::ground_energy(h);
    const AnsatzSpec spec{n, 2, hartree_fock_bitstring(f.hamiltonian, {})};
    ExactNuEvaluator eval(spec, h);
    for (int k = 0; k < 25; ++k) {
      const auto theta = testing::random_angles(spec.parameter_count(), rng);
      const auto params = testing::random_jastrow(n, rng, 0.6);
      const auto r = nu_energy(spec, theta, params, h, EstimatorSpec::exact());
      CHECK(r.energy >= ground - 1e-9);
      // Phi = J psi evaluated through the diagonal operator path.
      const auto phi = apply_diagonal_operator(prepare_state(spec, theta), build_linear_jastrow(params));
      CHECK(std::abs(r.energy - exact_expectation(phi, h) / phi.norm_squared()) < 1e-10);
      CHECK(std::abs(eval(theta, &params).energy - r.energy) < 1e-10);
      // Scaling the whole operator by c leaves the ratio unchanged.
      const double c = 0.3 + 2.0 * static_cast<double>(k) / 25.0;
      const auto scaled = apply_diagonal_operator(prepare_state(spec, theta), build_linear_jastrow(params) * c);
      CHECK(std::abs(exact_expectation(scaled, h) / scaled.norm_squared() - r.energy) < 1e-10);
    }
  }
}

TEST_CASE("denominator floor raises in exact mode") {
  // J = I - Z annihilates |0>.
  const AnsatzSpec spec{1, 0, 0};
  const std::vector<double> theta{0.0};
  JastrowParams p = JastrowParams::zeros(1);
  p.alpha = {1.0};
  const PauliSum h(PauliString::from_label("X"));
  CHECK_THROWS_AS(nu_energy(spec, theta, p, h, EstimatorSpec::exact()), DenominatorUnstable);
  ExactNuEvaluator eval(spec, h);
  CHECK_THROWS_AS(eval(theta, &p), DenominatorUnstable);
}

TEST_CASE("sampled nu energy converges to the exact value") {
  std::mt19937_64 rng(101);
  const auto f = load_fixture("h2_sto3g_0.74");
  const auto h = map_to_qubits(f.hamiltonian, {MappingKind::kParity, true});
  const AnsatzSpec spec{2, 1, hartree_fock_bitstring(f.hamiltonian, {MappingKind::kParity, true})};
  const auto theta = testing::random_angles(spec.parameter_count(), rng);
  const auto params = testing::random_jastrow(2, rng, 0.1);
  const double exact = nu_energy(spec, theta, params, h, EstimatorSpec::exact()).energy;
  NoiseModel noise;
  noise.seed = 3;
  const auto r = nu_energy(spec, theta, params, h, EstimatorSpec::sampling(200000, noise));
  CHECK(r.energy_std_error > 0.0);
  CHECK(r.denominator_std_error > 0.0);
  CHECK(std::abs(r.energy - exact) < 5.0 * r.energy_std_error);
}

TEST_CASE("sampled mode rejects denominators within five standard errors of zero") {
  const AnsatzSpec spec{1, 0, 0};
  const std::vector<double> theta{0.3};
  JastrowParams p = JastrowParams::zeros(1);
  p.alpha = {1.0};
  NoiseModel noise;
  noise.seed = 1;
  CHECK_THROWS_AS(nu_energy(spec, theta, p, PauliSum(PauliString::from_label("X")), EstimatorSpec::sampling(100, noise)),
                  DenominatorUnstable);
}

TEST_CASE("reference overlap warning") {
  const AnsatzSpec spec{1, 0, 0};
  const PauliSum h(PauliString::from_label("Z"));
  const std::vector<double> near{0.1}, far{2.5};
  CHECK_FALSE(nu_energy(spec, near, JastrowParams::zeros(1), h, EstimatorSpec::exact()).overlap_warning);
  const auto r = nu_energy(spec, far, JastrowParams::zeros(1), h, EstimatorSpec::exact());
  CHECK(r.overlap_warning);
  CHECK(r.reference_overlap == doctest::Approx(std::pow(std::cos(1.25), 2)));
}
