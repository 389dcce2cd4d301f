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

#include "nuvqe/pauli.hpp"

#include <bit>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace nuvqe {

namespace {

std::uint64_t low_mask(int n) {
  return n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
}

void check_qubits(int n) {
  if (n < 1 || n > kMaxQubits) {
    throw std::invalid_argument("PauliString: qubit count must be in [1, 64], got " +
                                std::to_string(n));
  }
}

constexpr cplx kPhases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

struct MaskPair {
  std::uint64_t x, z;
  bool operator==(const MaskPair&) const = default;
};

struct MaskPairHash {
  std::size_t operator()(const MaskPair& m) const {
    std::uint64_t h = m.x * 0x9E3779B97F4A7C15ULL;
    h ^= m.z + 0xBF58476D1CE4E5B9ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

PauliString::PauliString(int n_qubits) : PauliString(n_qubits, 0, 0, 0) {}

PauliString::PauliString(int n_qubits, std::uint64_t x_mask,
                         std::uint64_t z_mask, int phase)
    : n_qubits_(n_qubits), x_(x_mask), z_(z_mask), phase_(((phase % 4) + 4) % 4) {
  check_qubits(n_qubits);
  if (((x_ | z_) & ~low_mask(n_qubits)) != 0) {
    throw std::invalid_argument("PauliString: mask has bits beyond qubit count");
  }
}

PauliString PauliString::from_label(std::string_view label) {
  int phase = 0;
  if (label.starts_with("-i")) {
    phase = 3;
    label.remove_prefix(2);
  } else if (label.starts_with("+i")) {
    phase = 1;
    label.remove_prefix(2);
  } else if (label.starts_with("i")) {
    phase = 1;
    label.remove_prefix(1);
  } else if (label.starts_with("-")) {
    phase = 2;
    label.remove_prefix(1);
  } else if (label.starts_with("+")) {
    label.remove_prefix(1);
  }
  const int n = static_cast<int>(label.size());
  check_qubits(n);
  std::uint64_t x = 0, z = 0;
  for (int q = 0; q < n; ++q) {
    const std::uint64_t bit = std::uint64_t{1} << q;
    switch (label[q]) {
      case 'I': break;
      case 'X': x |= bit; break;
      case 'Y': x |= bit; z |= bit; break;
      case 'Z': z |= bit; break;
      default:
        throw std::invalid_argument("PauliString: bad label character '" +
                                    std::string(1, label[q]) + "'");
    }
  }
  return {n, x, z, phase};
}

PauliString PauliString::single(int n_qubits, int qubit, char op) {
  check_qubits(n_qubits);
  if (qubit < 0 || qubit >= n_qubits) {
    throw std::out_of_range("PauliString: qubit index out of range");
  }
  const std::uint64_t bit = std::uint64_t{1} << qubit;
  switch (op) {
    case 'I': return PauliString(n_qubits);
    case 'X': return {n_qubits, bit, 0};
    case 'Y': return {n_qubits, bit, bit};
    case 'Z': return {n_qubits, 0, bit};
    default: throw std::invalid_argument("PauliString: bad operator");
  }
}

cplx PauliString::phase_value() const { return kPhases[phase_]; }

char PauliString::op_at(int qubit) const {
  const bool x = (x_ >> qubit) & 1U;
  const bool z = (z_ >> qubit) & 1U;
  if (x && z) return 'Y';
  if (x) return 'X';
  if (z) return 'Z';
  return 'I';
}

std::string PauliString::label() const {
  std::string out;
  out.reserve(n_qubits_);
  for (int q = 0; q < n_qubits_; ++q) out.push_back(op_at(q));
  return out;
}

int PauliString::weight() const { return std::popcount(x_ | z_); }

bool PauliString::commutes_with(const PauliString& other) const {
  return (std::popcount((x_ & other.z_) ^ (z_ & other.x_)) & 1) == 0;
}

PauliString pauli_mul(const PauliString& a, const PauliString& b) {
  if (a.n_qubits() != b.n_qubits()) {
    throw std::invalid_argument("pauli_mul: qubit-count mismatch");
  }
  const std::uint64_t x1 = a.x_mask(), z1 = a.z_mask();
  const std::uint64_t x2 = b.x_mask(), z2 = b.z_mask();
  const std::uint64_t xa = x1 & ~z1, ya = x1 & z1, za = ~x1 & z1;
  const std::uint64_t xb = x2 & ~z2, yb = x2 & z2, zb = ~x2 & z2;
  // Cyclic products X*Y, Y*Z, Z*X pick up +i; the reverse order picks up -i.
  const int plus = std::popcount((xa & yb) | (ya & zb) | (za & xb));
  const int minus = std::popcount((ya & xb) | (za & yb) | (xa & zb));
  return {a.n_qubits(), x1 ^ x2, z1 ^ z2, a.phase() + b.phase() + plus - minus};
}

PauliSum::PauliSum(int n_qubits) : n_qubits_(n_qubits) { check_qubits(n_qubits); }

PauliSum::PauliSum(const PauliString& s, cplx coeff) : PauliSum(s.n_qubits()) {
  add(s, coeff);
}

PauliSum PauliSum::identity(int n_qubits, cplx coeff) {
  return {PauliString(n_qubits), coeff};
}

void PauliSum::add(const PauliString& s, cplx coeff) {
  if (s.n_qubits() != n_qubits_) {
    throw std::invalid_argument("PauliSum::add: qubit-count mismatch");
  }
  terms_[s.unsigned_part()] += coeff * s.phase_value();
}

void PauliSum::add(const PauliSum& other, cplx scale) {
  if (other.n_qubits_ != n_qubits_) {
    throw std::invalid_argument("PauliSum::add: qubit-count mismatch");
  }
  for (const auto& [s, c] : other.terms_) terms_[s] += scale * c;
}

cplx PauliSum::coefficient(const PauliString& s) const {
  auto it = terms_.find(s.unsigned_part());
  return it == terms_.end() ? cplx{} : it->second * s.phase_value();
}

PauliSum PauliSum::simplified(double tol) const {
  PauliSum out(n_qubits_);
  for (const auto& [s, c] : terms_) {
    if (std::abs(c) >= tol) out.terms_.emplace_hint(out.terms_.end(), s, c);
  }
  return out;
}

bool PauliSum::is_hermitian(double tol) const {
  for (const auto& [s, c] : terms_) {
    if (std::abs(c.imag()) > tol) return false;
  }
  return true;
}

bool PauliSum::is_diagonal() const {
  for (const auto& [s, c] : terms_) {
    if (!s.is_diagonal()) return false;
  }
  return true;
}

int PauliSum::max_weight() const {
  int w = 0;
  for (const auto& [s, c] : terms_) w = std::max(w, s.weight());
  return w;
}

PauliSum PauliSum::adjoint() const {
  PauliSum out(n_qubits_);
  for (const auto& [s, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), s, std::conj(c));
  return out;
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
  add(other, 1.0);
  return *this;
}

PauliSum& PauliSum::operator-=(const PauliSum& other) {
  add(other, -1.0);
  return *this;
}

PauliSum& PauliSum::operator*=(cplx scale) {
  for (auto& [s, c] : terms_) c *= scale;
  return *this;
}

PauliSum sum_mul(const PauliSum& a, const PauliSum& b, double tol) {
  if (a.n_qubits() != b.n_qubits()) {
    throw std::invalid_argument("sum_mul: qubit-count mismatch");
  }
  std::unordered_map<MaskPair, cplx, MaskPairHash> acc;
  acc.reserve(a.size() * b.size());
  for (const auto& [sa, ca] : a.terms()) {
    for (const auto& [sb, cb] : b.terms()) {
      const PauliString p = pauli_mul(sa, sb);
      acc[{p.x_mask(), p.z_mask()}] += ca * cb * p.phase_value();
    }
  }
  PauliSum out(a.n_qubits());
  for (const auto& [m, c] : acc) {
    if (std::abs(c) >= tol) out.add(PauliString(a.n_qubits(), m.x, m.z), c);
  }
  return out;
}

Eigen::MatrixXcd to_dense_matrix(const PauliSum& s) {
  const int n = s.n_qubits();
  if (n > kDenseQubitGuard) {
    throw std::length_error("to_dense_matrix: " + std::to_string(n) +
                            " qubits exceeds the dense guard of " +
                            std::to_string(kDenseQubitGuard));
  }
  const std::size_t dim = std::size_t{1} << n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [p, c] : s.terms()) {
    // <b ^ x| P |b> = i^{#Y} (-1)^{popcount(z & b)}
    const cplx base = c * kPhases[std::popcount(p.x_mask() & p.z_mask()) & 3];
    for (std::size_t b = 0; b < dim; ++b) {
      const bool odd = std::popcount(p.z_mask() & b) & 1;
      m(b ^ p.x_mask(), b) += odd ? -base : base;
    }
  }
  return m;
}

void write_pauli_sum(std::ostream& out, const PauliSum& s) {
  const auto old_flags = out.flags();
  const auto old_prec = out.precision();
  out << std::setprecision(17);
  for (const auto& [p, c] : s.terms()) {
    out << c.real() << ' ' << c.imag() << ' ' << p.label() << '\n';
  }
  out.flags(old_flags);
  out.precision(old_prec);
}

PauliSum read_pauli_sum(std::istream& in) {
  std::string line;
  std::vector<std::pair<PauliString, cplx>> parsed;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    double re = 0, im = 0;
    std::string label;
    if (!(ls >> re >> im >> label)) {
      throw std::runtime_error("read_pauli_sum: malformed line " + std::to_string(line_no));
    }
    parsed.emplace_back(PauliString::from_label(label), cplx{re, im});
  }
  if (parsed.empty()) throw std::runtime_error("read_pauli_sum: no terms");
  PauliSum out(parsed.front().first.n_qubits());
  for (const auto& [p, c] : parsed) out.add(p, c);
  return out;
}

std::string to_string(const PauliSum& s) {
  std::ostringstream os;
  write_pauli_sum(os, s);
  return os.str();
}

}  // namespace nuvqe
