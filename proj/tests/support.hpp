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

// Random instance generators shared by the unit and acceptance tests.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "nuvqe/jastrow.hpp"
#include "nuvqe/pauli.hpp"

namespace nuvqe::testing {

inline PauliString random_string(int n, std::mt19937_64& rng, bool with_phase = false) {
  const std::uint64_t mask = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  const std::uint64_t x = rng() & mask;
  const std::uint64_t z = rng() & mask;
  const int phase = with_phase ? static_cast<int>(rng() % 4) : 0;
  return {n, x, z, phase};
}

/// Random sum with `terms` draws; Hermitian sums get real coefficients.
inline PauliSum random_sum(int n, int terms, std::mt19937_64& rng, bool hermitian = true) {
  std::normal_distribution<double> normal;
  PauliSum s(n);
  for (int k = 0; k < terms; ++k) {
    const cplx c = hermitian ? cplx(normal(rng), 0.0) : cplx(normal(rng), normal(rng));
    s.add(random_string(n, rng), c);
  }
  return s;
}

/// Random I/Z-only Hermitian sum.
inline PauliSum random_diagonal_sum(int n, int terms, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
  PauliSum s(n);
  for (int k = 0; k < terms; ++k) s.add(PauliString(n, 0, rng() & mask), normal(rng));
  return s;
}

inline JastrowParams random_jastrow(int n, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  auto p = JastrowParams::zeros(n);
  for (auto& a : p.alpha) a = u(rng);
  for (auto& l : p.lambda) l = u(rng);
  return p;
}

inline std::vector<double> random_angles(int count, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 6.283185307179586);
  std::vector<double> t(count);
  for (auto& v : t) v = u(rng);
  return t;
}

inline double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace nuvqe::testing
