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

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace nuvqe {

using cplx = std::complex<double>;

/// Largest register a PauliString can describe (one machine word per mask).
inline constexpr int kMaxQubits = 64;

/// Largest register for which dense 2^N x 2^N matrices are built.
inline constexpr int kDenseQubitGuard = 12;

/// Coefficients below this magnitude are dropped at simplify points.
inline constexpr double kDropTolerance = 1e-12;

/**
 * @brief N-qubit Pauli string in symplectic (x, z) encoding.
 *
 * Qubit i carries X when only bit i of the x mask is set, Z when only the z
 * bit is set, Y when both are set and the identity otherwise. The phase is a
 * power of i stored modulo 4 (0 -> +1, 1 -> +i, 2 -> -1, 3 -> -i).
 *
 * Qubit 0 is the least significant bit of both masks and the leftmost
 * character of the text label.
 */
class PauliString {
 public:
  explicit PauliString(int n_qubits);
  PauliString(int n_qubits, std::uint64_t x_mask, std::uint64_t z_mask,
              int phase = 0);

  /// Parses a label over {I,X,Y,Z}; an optional leading sign ("+", "-",
  /// "i", "-i") sets the phase.
  static PauliString from_label(std::string_view label);

  /// Single-qubit operator `op` in {'I','X','Y','Z'} on `qubit`.
  static PauliString single(int n_qubits, int qubit, char op);

  int n_qubits() const { return n_qubits_; }
  std::uint64_t x_mask() const { return x_; }
  std::uint64_t z_mask() const { return z_; }
  int phase() const { return phase_; }
  cplx phase_value() const;

  /// Same string with phase reset to +1.
  PauliString unsigned_part() const { return {n_qubits_, x_, z_, 0}; }

  char op_at(int qubit) const;
  std::string label() const;

  /// Number of non-identity factors.
  int weight() const;
  bool is_identity() const { return (x_ | z_) == 0; }
  /// True when only I and Z factors appear.
  bool is_diagonal() const { return x_ == 0; }
  bool is_hermitian() const { return (phase_ & 1) == 0; }

  bool commutes_with(const PauliString& other) const;

  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  int n_qubits_;
  std::uint64_t x_;
  std::uint64_t z_;
  int phase_;
};

/// Exact product a * b, including the accumulated phase.
PauliString pauli_mul(const PauliString& a, const PauliString& b);

/// Orders strings lexicographically on (z_mask, x_mask); phase is ignored.
struct PauliOrder {
  bool operator()(const PauliString& a, const PauliString& b) const {
    if (a.z_mask() != b.z_mask()) return a.z_mask() < b.z_mask();
    return a.x_mask() < b.x_mask();
  }
};

/**
 * @brief Complex-weighted linear combination of Pauli strings.
 *
 * Stored strings always carry phase +1; the phase of an inserted string is
 * folded into its coefficient. Iteration order is the canonical
 * (z_mask, x_mask) lexicographic order.
 */
class PauliSum {
 public:
  using TermMap = std::map<PauliString, cplx, PauliOrder>;

  explicit PauliSum(int n_qubits);
  PauliSum(const PauliString& s, cplx coeff = 1.0);

  static PauliSum identity(int n_qubits, cplx coeff = 1.0);

  int n_qubits() const { return n_qubits_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const TermMap& terms() const { return terms_; }

  /// Accumulates coeff * s into the sum.
  void add(const PauliString& s, cplx coeff);
  void add(const PauliSum& other, cplx scale = 1.0);

  /// Coefficient of the phase-free string `s` (zero if absent).
  cplx coefficient(const PauliString& s) const;

  /// Drops terms whose coefficient magnitude is below `tol`.
  PauliSum simplified(double tol = kDropTolerance) const;

  /// All coefficients real to within `tol`.
  bool is_hermitian(double tol = 1e-12) const;
  /// Every string is built from I and Z only.
  bool is_diagonal() const;

  /// Largest weight among the stored strings.
  int max_weight() const;

  PauliSum adjoint() const;

  PauliSum& operator+=(const PauliSum& other);
  PauliSum& operator-=(const PauliSum& other);
  PauliSum& operator*=(cplx scale);

  friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
  friend PauliSum operator-(PauliSum a, const PauliSum& b) { return a -= b; }
  friend PauliSum operator*(PauliSum a, cplx s) { return a *= s; }
  friend PauliSum operator*(cplx s, PauliSum a) { return a *= s; }

 private:
  int n_qubits_;
  TermMap terms_;
};

/// Term-by-term product, canonicalized and simplified at `tol`.
PauliSum sum_mul(const PauliSum& a, const PauliSum& b,
                 double tol = kDropTolerance);

/// Exact 2^N x 2^N matrix (N <= kDenseQubitGuard). Basis index bit q is
/// qubit q.
Eigen::MatrixXcd to_dense_matrix(const PauliSum& s);

/// Writes one `<re> <im> <label>` line per term with 17 significant digits.
void write_pauli_sum(std::ostream& out, const PauliSum& s);
/// Reads the format produced by write_pauli_sum; blank and '#' lines are
/// skipped.
PauliSum read_pauli_sum(std::istream& in);

std::string to_string(const PauliSum& s);

}  // namespace nuvqe
