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
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nuvqe/pauli.hpp"

namespace nuvqe {

/**
 * @brief Second-quantized molecular Hamiltonian over spin orbitals.
 *
 *   H = e_nuclear + sum_pq h1(p,q) a+_p a_q
 *       + 1/2 sum_pqrs h2(p,q,r,s) a+_p a+_r a_s a_q
 *
 * with h2 in chemist notation (pq|rs). Spin orbitals are interleaved:
 * 2k is spatial orbital k with spin up, 2k+1 the same orbital spin down.
 * All energies are in Hartree.
 */
struct FermionHamiltonian {
  int n_spin_orbitals = 0;
  std::vector<double> h1;  // row-major n x n
  std::vector<double> h2;  // row-major n^4, chemist order
  double e_nuclear = 0.0;
  int n_electrons = 0;
  int multiplicity = 1;

  double one_body(int p, int q) const { return h1[p * n_spin_orbitals + q]; }
  double two_body(int p, int q, int r, int s) const {
    const std::size_t n = n_spin_orbitals;
    return h2[((p * n + q) * n + r) * n + s];
  }

  int n_alpha() const { return (n_electrons + multiplicity - 1) / 2; }
  int n_beta() const { return n_electrons - n_alpha(); }

  /// Throws std::invalid_argument when a symmetry or count invariant fails.
  void validate(double tol = 1e-10) const;
};

/// Reads an FCIDUMP stream (chemist-notation integrals over spatial orbitals)
/// and expands it to interleaved spin orbitals.
FermionHamiltonian parse_fcidump(std::istream& in);
FermionHamiltonian load_fcidump(const std::filesystem::path& path);

enum class MappingKind { kJordanWigner, kParity, kBravyiKitaev };

std::string to_string(MappingKind kind);
/// Accepts "jordan_wigner"/"jw", "parity", "bravyi_kitaev"/"bk".
MappingKind parse_mapping_kind(std::string_view name);

struct MappingSpec {
  MappingKind kind = MappingKind::kJordanWigner;
  bool two_qubit_reduction = false;

  /// Throws when reduction is requested for a non-parity mapping.
  void validate() const;
};

/**
 * @brief Binary encoding matrix of a fermion-to-qubit transform.
 *
 * Row i is the set of modes whose occupations are summed (mod 2) into qubit
 * i. The matrix is unit lower triangular for all supported mappings.
 */
std::vector<std::uint64_t> encoding_matrix(MappingKind kind, int n_modes);

/// Qubit image of a+_mode (creation) or a_mode (annihilation).
PauliSum ladder_operator(MappingKind kind, int n_modes, int mode, bool creation);

/// Number of qubits produced by map_to_qubits.
int qubit_count(const FermionHamiltonian& h, const MappingSpec& spec);

/**
 * @brief Maps the Hamiltonian to a Hermitian PauliSum.
 *
 * Occupied modes correspond to qubit state |1>. With two-qubit reduction the
 * modes are first reordered spin-block-wise (all up, then all down) so that
 * qubits n/2-1 and n-1 hold the up-spin and total number parities; those two
 * qubits are then replaced by their eigenvalues in the target sector.
 */
PauliSum map_to_qubits(const FermionHamiltonian& h, const MappingSpec& spec);

/// Aufbau occupation of the lowest n_electrons spin orbitals, encoded in the
/// mapping's qubit basis. Bit q of the result is qubit q.
std::uint64_t hartree_fock_bitstring(const FermionHamiltonian& h,
                                     const MappingSpec& spec);

/// Reference energies recorded next to a fixture (`key=value` per line).
struct FixtureMetadata {
  std::map<std::string, std::string> values;

  std::optional<double> number(const std::string& key) const;
  double require_number(const std::string& key) const;
};

FixtureMetadata parse_metadata(std::istream& in);
FixtureMetadata load_metadata(const std::filesystem::path& path);

struct Fixture {
  std::string id;
  FermionHamiltonian hamiltonian;
  FixtureMetadata metadata;

  double rhf_energy() const { return metadata.require_number("rhf_energy"); }
  double fci_energy() const { return metadata.require_number("fci_energy"); }
  std::optional<double> uhf_energy() const { return metadata.number("uhf_energy"); }
  std::optional<double> bond_length() const {
    return metadata.number("bond_length_angstrom");
  }
};

/// Directory holding the bundled fixtures; NUVQE_FIXTURE_DIR overrides the
/// compiled-in default.
std::filesystem::path fixture_directory();

/// Thrown when `<dir>/<id>.fcidump` or its `.meta` sidecar is absent.
class FixtureNotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Fixture load_fixture(const std::string& id);
Fixture load_fixture(const std::string& id, const std::filesystem::path& dir);

}  // namespace nuvqe
