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

#include "nuvqe/jastrow.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>

namespace nuvqe {

namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

}  // namespace

int pair_index(int n_qubits, int i, int j) {
  if (!(0 <= i && i < j && j < n_qubits)) throw std::out_of_range("pair_index: need 0 <= i < j < n");
  return i * n_qubits - i * (i + 1) / 2 + (j - i - 1);
}

JastrowParams JastrowParams::zeros(int n_qubits) {
  if (n_qubits < 1) throw std::invalid_argument("JastrowParams: qubit count must be positive");
  return {n_qubits, std::vector<double>(n_qubits, 0.0),
          std::vector<double>(n_qubits * (n_qubits - 1) / 2, 0.0)};
}

JastrowParams JastrowParams::from_flat(int n_qubits, std::span<const double> flat) {
  if (static_cast<int>(flat.size()) != count(n_qubits)) {
    throw std::invalid_argument("JastrowParams::from_flat: expected " + std::to_string(count(n_qubits)) +
                                " values, got " + std::to_string(flat.size()));
  }
  JastrowParams p;
  p.n_qubits = n_qubits;
  p.alpha.assign(flat.begin(), flat.begin() + n_qubits);
  p.lambda.assign(flat.begin() + n_qubits, flat.end());
  p.validate();
  return p;
}

std::vector<double> JastrowParams::flat() const {
  std::vector<double> out = alpha;
  out.insert(out.end(), lambda.begin(), lambda.end());
  return out;
}

double JastrowParams::pair(int i, int j) const { return lambda[pair_index(n_qubits, i, j)]; }

void JastrowParams::validate() const {
  if (n_qubits < 1) throw std::invalid_argument("JastrowParams: qubit count must be positive");
  if (static_cast<int>(alpha.size()) != n_qubits ||
      static_cast<int>(lambda.size()) != n_qubits * (n_qubits - 1) / 2) {
    throw std::invalid_argument("JastrowParams: coefficient count does not match qubit count");
  }
  for (double v : alpha)
    if (!std::isfinite(v)) throw std::invalid_argument("JastrowParams: non-finite alpha");
  for (double v : lambda)
    if (!std::isfinite(v)) throw std::invalid_argument("JastrowParams: non-finite lambda");
}

PauliSum build_linear_jastrow(const JastrowParams& params) {
  params.validate();
  const int n = params.n_qubits;
  PauliSum j = PauliSum::identity(n);
  for (int i = 0; i < n; ++i) {
    if (params.alpha[i] != 0.0) j.add(PauliString(n, 0, std::uint64_t{1} << i), -params.alpha[i]);
  }
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double l = params.pair(a, b);
      if (l != 0.0) j.add(PauliString(n, 0, (std::uint64_t{1} << a) | (std::uint64_t{1} << b)), -l);
    }
  }
  return j;
}

TransformedHamiltonian transform(const PauliSum& h, const PauliSum& j) {
  if (h.n_qubits() != j.n_qubits()) throw std::invalid_argument("transform: qubit-count mismatch");
  if (!j.is_hermitian()) throw std::invalid_argument("transform: Jastrow operator is not Hermitian");
  if (!j.is_diagonal()) throw std::invalid_argument("transform: Jastrow operator is not diagonal");
  // J is Hermitian, so J^dagger H J = J H J.
  return {sum_mul(sum_mul(j, h), j), sum_mul(j, j)};
}

namespace {

NuEnergyResult exact_ratio(const std::vector<double>& psi, const std::vector<double>& diag,
                           const CompiledOperator& h) {
  std::vector<double> phi(psi.size());
  double den = 0.0;
  for (std::size_t b = 0; b < phi.size(); ++b) {
    phi[b] = diag[b] * psi[b];
    den += phi[b] * phi[b];
  }
  if (!(den >= kDenominatorFloor)) {
    throw DenominatorUnstable("nu_energy: <J J> = " + fmt_double(den) + " below floor", den, 0.0);
  }
  NuEnergyResult r;
  r.numerator = h.real_expectation(phi);
  r.denominator = den;
  r.energy = r.numerator / den;
  return r;
}

std::vector<double> jastrow_diagonal(const JastrowParams& p) {
  // Grow w(b) = sum alpha_i z_i + sum lambda_ij z_i z_j one qubit at a time.
  // cross[b] = sum_{i<q} lambda_iq z_i(b) follows from b with its lowest set
  // bit cleared, so each qubit costs O(2^q).
  const int n = p.n_qubits;
  const std::size_t dim = std::size_t{1} << n;
  std::vector<double> w(dim, 0.0), cross(dim / 2 + 1, 0.0);
  for (int q = 0; q < n; ++q) {
    const std::size_t half = std::size_t{1} << q;
    std::vector<double> column(q);
    double all_up = 0.0;
    for (int i = 0; i < q; ++i) all_up += column[i] = p.pair(i, q);
    cross[0] = all_up;
    for (std::size_t b = 1; b < half; ++b) cross[b] = cross[b & (b - 1)] - 2.0 * column[std::countr_zero(b)];
    for (std::size_t b = 0; b < half; ++b) {
      const double shift = p.alpha[q] + cross[b];
      w[b | half] = w[b] - shift;
      w[b] += shift;
    }
  }
  for (auto& v : w) v = 1.0 - v;
  return w;
}

}  // namespace

NuEnergyResult nu_energy(const AnsatzSpec& spec, std::span<const double> theta, const JastrowParams& params,
                         const PauliSum& h, const EstimatorSpec& estimator) {
  if (h.n_qubits() != spec.n_qubits || params.n_qubits != spec.n_qubits) {
    throw std::invalid_argument("nu_energy: qubit-count mismatch");
  }
  if (!h.is_hermitian()) throw std::invalid_argument("nu_energy: Hamiltonian is not Hermitian");
  const PauliSum j = build_linear_jastrow(params);
  const StateVector psi = prepare_state(spec, theta);
  const double overlap = reference_overlap(psi, spec.reference);

  NuEnergyResult r;
  if (!estimator.sampled) {
    const StateVector phi = apply_diagonal_operator(psi, j);
    const double den = phi.norm_squared();
    if (!(den >= kDenominatorFloor)) {
      throw DenominatorUnstable("nu_energy: <J J> = " + fmt_double(den) + " below floor", den, 0.0);
    }
    r.numerator = exact_expectation(phi, h);
    r.denominator = den;
    r.energy = r.numerator / den;
  } else {
    const auto sandwich = transform(h, j);
    // Measure the union of strings once; both sums reuse the estimates.
    std::map<PauliString, std::pair<double, double>, PauliOrder> coeffs;
    for (const auto& [s, c] : sandwich.numerator.terms()) coeffs[s].first = c.real();
    for (const auto& [s, c] : sandwich.denominator.terms()) coeffs[s].second = c.real();
    std::vector<PauliString> strings;
    std::vector<std::pair<double, double>> weights;
    double num = 0.0, den = 0.0;
    for (const auto& [s, w] : coeffs) {
      if (s.is_identity()) {
        num += w.first;
        den += w.second;
      } else {
        strings.push_back(s);
        weights.push_back(w);
      }
    }
    const auto est = sample_terms(spec, theta, strings, estimator.shots, estimator.noise, estimator.sampler);
    for (std::size_t k = 0; k < est.size(); ++k) {
      num += weights[k].first * est[k].mean;
      den += weights[k].second * est[k].mean;
    }
    double den_var = 0.0;
    for (std::size_t k = 0; k < est.size(); ++k) {
      den_var += weights[k].second * weights[k].second * est[k].variance / estimator.shots;
    }
    r.denominator_std_error = std::sqrt(den_var);
    if (!(den > kDenominatorSigmas * r.denominator_std_error) || !(den > 0.0)) {
      throw DenominatorUnstable("nu_energy: sampled <J J> = " + fmt_double(den) + " +- " +
                                    fmt_double(r.denominator_std_error) + " is not resolved from zero",
                                den, r.denominator_std_error);
    }
    r.numerator = num;
    r.denominator = den;
    r.energy = num / den;
    // Delta method: dE/dm_s = (n_s - E d_s) / D.
    double e_var = 0.0;
    for (std::size_t k = 0; k < est.size(); ++k) {
      const double g = (weights[k].first - r.energy * weights[k].second) / den;
      e_var += g * g * est[k].variance / estimator.shots;
    }
    r.energy_std_error = std::sqrt(e_var);
  }
  r.reference_overlap = overlap;
  r.overlap_warning = overlap < kReferenceOverlapWarning;
  return r;
}

ExactNuEvaluator::ExactNuEvaluator(const AnsatzSpec& spec, const PauliSum& h) : spec_(spec), h_(h) {
  spec.validate();
  if (h.n_qubits() != spec.n_qubits) throw std::invalid_argument("ExactNuEvaluator: qubit-count mismatch");
  if (!h.is_hermitian()) throw std::invalid_argument("ExactNuEvaluator: Hamiltonian is not Hermitian");
}

NuEnergyResult ExactNuEvaluator::operator()(std::span<const double> theta, const JastrowParams* params) const {
  const std::vector<double> psi = prepare_real_state(spec_, theta);
  NuEnergyResult r;
  if (params) {
    if (params->n_qubits != spec_.n_qubits) throw std::invalid_argument("ExactNuEvaluator: qubit-count mismatch");
    r = exact_ratio(psi, jastrow_diagonal(*params), h_);
  } else {
    double norm = 0.0;
    for (double a : psi) norm += a * a;
    r.numerator = h_.real_expectation(psi);
    r.denominator = norm;
    r.energy = r.numerator / r.denominator;
  }
  r.reference_overlap = psi[spec_.reference] * psi[spec_.reference];
  r.overlap_warning = r.reference_overlap < kReferenceOverlapWarning;
  return r;
}

}  // namespace nuvqe
