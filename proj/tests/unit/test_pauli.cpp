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

#include <sstream>

#include "doctest.h"
#include "nuvqe/oracle.hpp"
#include "nuvqe/pauli.hpp"
#include "support.hpp"

using namespace nuvqe;
using nuvqe::testing::max_abs_diff;

TEST_CASE("single-qubit multiplication table matches 2x2 matrices") {
  const char ops[] = {'I', 'X', 'Y', 'Z'};
  for (char a : ops) {
    for (char b : ops) {
      const auto pa = PauliString::single(1, 0, a);
      const auto pb = PauliString::single(1, 0, b);
      const Eigen::MatrixXcd expected = oracle::pauli_matrix(a) * oracle::pauli_matrix(b);
      CHECK(max_abs_diff(oracle::kron_matrix(pauli_mul(pa, pb)), expected) < 1e-15);
    }
  }
}

TEST_CASE("XY = iZ and YX = -iZ") {
  const auto xy = pauli_mul(PauliString::from_label("X"), PauliString::from_label("Y"));
  CHECK(xy.label() == "Z");
  CHECK(xy.phase() == 1);
  const auto yx = pauli_mul(PauliString::from_label("Y"), PauliString::from_label("X"));
  CHECK(yx.phase() == 3);
}

TEST_CASE("labels round-trip and qubit 0 is the leftmost character") {
  const auto p = PauliString::from_label("XIZY");
  CHECK(p.op_at(0) == 'X');
  CHECK(p.op_at(3) == 'Y');
  CHECK(p.label() == "XIZY");
  CHECK(p.weight() == 3);
  CHECK(PauliString::from_label("-iZZ").phase() == 3);
  CHECK(PauliString::from_label("-ZZ").phase() == 2);
  CHECK(PauliString::from_label("iZZ").phase() == 1);
  CHECK_THROWS(PauliString::from_label("XQ"));
  CHECK_THROWS(PauliString::from_label(""));
}

TEST_CASE("string matrices agree with explicit Kronecker products") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 50; ++k) {
    const int n = 1 + static_cast<int>(rng() % 5);
    const auto p = testing::random_string(n, rng, true);
    CHECK(max_abs_diff(to_dense_matrix(PauliSum(p)), oracle::kron_matrix(p)) < 1e-15);
  }
}

TEST_CASE("group laws on 64-qubit strings") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 500; ++k) {
    const auto a = testing::random_string(64, rng, true);
    const auto b = testing::random_string(64, rng, true);
    const auto c = testing::random_string(64, rng, true);
    CHECK(pauli_mul(pauli_mul(a, b), c) == pauli_mul(a, pauli_mul(b, c)));
    CHECK(pauli_mul(a, PauliString(64)) == a);
    CHECK(pauli_mul(PauliString(64), a) == a);
    // P^2 = phase^2 * I for the unsigned part.
    const auto u = a.unsigned_part();
    CHECK(pauli_mul(u, u) == PauliString(64));
    // ab = +-ba according to the symplectic form.
    const auto ab = pauli_mul(a, b);
    const auto ba = pauli_mul(b, a);
    CHECK(ab.x_mask() == ba.x_mask());
    CHECK(ab.z_mask() == ba.z_mask());
    CHECK(((ab.phase() - ba.phase() + 4) % 4) == (a.commutes_with(b) ? 0 : 2));
  }
}

TEST_CASE("sum_mul agrees with the dense product") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 40; ++k) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const auto a = testing::random_sum(n, 1 + static_cast<int>(rng() % 8), rng, false);
    const auto b = testing::random_sum(n, 1 + static_cast<int>(rng() % 8), rng, false);
    const auto prod = sum_mul(a, b);
    CHECK(max_abs_diff(oracle::dense_matrix(prod), oracle::dense_matrix(a) * oracle::dense_matrix(b)) < 1e-12);
  }
}

TEST_CASE("canonical form is order independent and simplification is idempotent") {
  std::mt19937_64 rng(9);
  const auto s = testing::random_sum(5, 30, rng, false);
  PauliSum reversed(5);
  std::vector<std::pair<PauliString, cplx>> terms(s.terms().begin(), s.terms().end());
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) reversed.add(it->first, it->second);
  CHECK(reversed.terms() == s.terms());
  const auto once = (s - s * 0.5 - s * 0.5).simplified();
  CHECK(once.empty());
  const auto t = s.simplified();
  CHECK(t.simplified().terms() == t.terms());
}

TEST_CASE("phases fold into coefficients") {
  PauliSum s(2);
  s.add(PauliString::from_label("-iXY"), 2.0);
  CHECK(s.coefficient(PauliString::from_label("XY")) == cplx(0.0, -2.0));
  for (const auto& [p, c] : s.terms()) CHECK(p.phase() == 0);
}

TEST_CASE("adjoint and Hermiticity") {
  std::mt19937_64 rng(13);
  const auto s = testing::random_sum(4, 12, rng, false);
  const Eigen::MatrixXcd m = oracle::dense_matrix(s);
  CHECK(max_abs_diff(oracle::dense_matrix(s.adjoint()), m.adjoint()) < 1e-14);
  CHECK_FALSE(s.is_hermitian());
  CHECK((s + s.adjoint()).is_hermitian());
  CHECK(testing::random_sum(4, 12, rng, true).is_hermitian());
}

TEST_CASE("text serialization round-trips exactly") {
  std::mt19937_64 rng(17);
  const auto s = testing::random_sum(6, 20, rng, false);
  std::stringstream io;
  write_pauli_sum(io, s);
  const auto back = read_pauli_sum(io);
  CHECK(back.terms() == s.terms());
}

TEST_CASE("dense guard") {
  CHECK_THROWS_AS(to_dense_matrix(PauliSum::identity(kDenseQubitGuard + 1)), std::length_error);
  CHECK_THROWS_AS(oracle::dense_matrix(PauliSum::identity(kDenseQubitGuard + 1)), std::length_error);
}

TEST_CASE("qubit-count mismatch is rejected") {
  PauliSum a(2), b(3);
  CHECK_THROWS(a += b);
  CHECK_THROWS(sum_mul(a, b));
  CHECK_THROWS(pauli_mul(PauliString(2), PauliString(3)));
}
