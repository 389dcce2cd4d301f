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
#include "nuvqe/circuit.hpp"
#include "nuvqe/fermion.hpp"
#include "nuvqe/oracle.hpp"

using namespace nuvqe;

namespace {

FermionHamiltonian parse(const std::string& text) {
  std::istringstream in(text);
  return parse_fcidump(in);
}

constexpr MappingKind kAllKinds[] = {MappingKind::kJordanWigner, MappingKind::kParity, MappingKind::kBravyiKitaev};

}  // namespace

TEST_CASE("minimal FCIDUMP with only the core constant") {
  const auto h = parse("&FCI NORB=1,NELEC=0,MS2=0,\n ORBSYM=1,\n ISYM=1,\n&END\n 0.5 0 0 0 0\n");
  CHECK(h.n_spin_orbitals == 2);
  CHECK(h.e_nuclear == 0.5);
  for (double v : h.h1) CHECK(v == 0.0);
  for (double v : h.h2) CHECK(v == 0.0);
}

TEST_CASE("FCIDUMP parsing expands integrals to interleaved spin orbitals") {
  const auto h = parse(
      "&FCI NORB=2,NELEC=2,MS2=0,\n&END\n"
      "  0.25D0 1 1 1 1\n"
      "  0.125 2 1 1 1\n"
      " -1.0 1 1 0 0\n"
      " -0.5 2 1 0 0\n"
      "  0.7 0 0 0 0\n");
  CHECK(h.n_spin_orbitals == 4);
  CHECK(h.one_body(0, 0) == -1.0);
  CHECK(h.one_body(1, 1) == -1.0);
  CHECK(h.one_body(0, 1) == 0.0);  // spin-flip is zero
  CHECK(h.one_body(2, 0) == -0.5);
  CHECK(h.one_body(0, 2) == -0.5);
  CHECK(h.two_body(0, 0, 1, 1) == 0.25);
  CHECK(h.two_body(0, 1, 0, 1) == 0.0);
  // (21|11) and all its permutations, in every spin combination.
  CHECK(h.two_body(2, 0, 0, 0) == 0.125);
  CHECK(h.two_body(0, 0, 0, 2) == 0.125);
  CHECK(h.two_body(1, 1, 2, 0) == 0.125);
  CHECK(h.e_nuclear == 0.7);
  CHECK_NOTHROW(h.validate());
}

TEST_CASE("FCIDUMP errors") {
  CHECK_THROWS(parse("&FCI NELEC=2,\n&END\n"));                       // no NORB
  CHECK_THROWS(parse("&FCI NORB=2,\n&END\n"));                        // no NELEC
  CHECK_THROWS(parse("&FCI NORB=1,NELEC=0,\n&END\n 0.5 2 1 1 1\n"));  // index out of range
  CHECK_THROWS(parse("&FCI NORB=1,NELEC=0,\n&END\n 0.5 1 1\n"));      // short record
  CHECK_THROWS(parse("&FCI NORB=1,NELEC=0,\n&END\n abc 1 1 1 1\n"));  // bad value
  CHECK_THROWS(parse("&FCI NORB=1,NELEC=4,\n&END\n"));                // too many electrons
}

TEST_CASE("bundled fixture sizes") {
  const auto sto = load_fixture("h2_sto3g_0.74");
  CHECK(sto.hamiltonian.n_spin_orbitals == 4);
  CHECK(sto.hamiltonian.n_electrons == 2);
  CHECK(load_fixture("h2_631g_0.74").hamiltonian.n_spin_orbitals == 8);
  CHECK(load_fixture("lih_sto3g_eq").hamiltonian.n_spin_orbitals == 12);
  CHECK(load_fixture("h2o_sto3g_eq").hamiltonian.n_spin_orbitals == 14);
  CHECK_THROWS_AS(load_fixture("no_such_fixture"), FixtureNotFound);
}

TEST_CASE("Jordan-Wigner number operator is (I - Z)/2") {
  const auto n0 = sum_mul(ladder_operator(MappingKind::kJordanWigner, 3, 0, true),
                          ladder_operator(MappingKind::kJordanWigner, 3, 0, false));
  PauliSum expected = PauliSum::identity(3, 0.5);
  expected.add(PauliString::single(3, 0, 'Z'), -0.5);
  CHECK((n0 - expected).simplified().empty());
}

TEST_CASE("canonical anticommutation relations hold in every mapping") {
  const int n = 6;
  for (MappingKind kind : kAllKinds) {
    CAPTURE(to_string(kind));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const auto ai = ladder_operator(kind, n, i, false);
        const auto aj = ladder_operator(kind, n, j, false);
        const auto cj = ladder_operator(kind, n, j, true);
        const auto ac = (sum_mul(ai, cj) + sum_mul(cj, ai)).simplified();
        const auto aa = (sum_mul(ai, aj) + sum_mul(aj, ai)).simplified();
        if (i == j) {
          CHECK((ac - PauliSum::identity(n)).simplified().empty());
        } else {
          CHECK(ac.empty());
        }
        CHECK(aa.empty());
      }
    }
  }
}

TEST_CASE("H2 STO-3G under Jordan-Wigner has 15 terms") {
  const auto h = map_to_qubits(load_fixture("h2_sto3g_0.74").hamiltonian, {});
  CHECK(h.size() == 15);
  CHECK(h.n_qubits() == 4);
  CHECK(h.is_hermitian());
}

TEST_CASE("full spectra agree across mappings") {
  for (const char* id : {"h2_sto3g_0.74", "h2_sto3g_2.00", "h2_631g_0.74"}) {
    CAPTURE(id);
    const auto f = load_fixture(id);
    const auto ref = oracle::spectrum(map_to_qubits(f.hamiltonian, {MappingKind::kJordanWigner, false})).eigenvalues;
    for (MappingKind kind : {MappingKind::kParity, MappingKind::kBravyiKitaev}) {
      const auto ev = oracle::spectrum(map_to_qubits(f.hamiltonian, {kind, false})).eigenvalues;
      REQUIRE(ev.size() == ref.size());
      double worst = 0.0;
      for (std::size_t k = 0; k < ev.size(); ++k) worst = std::max(worst, std::abs(ev[k] - ref[k]));
      CHECK(worst < 1e-9);
    }
  }
}

TEST_CASE("parity two-qubit reduction keeps the electron sector") {
  for (const char* id : {"h2_sto3g_0.74", "h2_sto3g_2.50", "h2_631g_0.74", "h2_631g_2.00"}) {
    CAPTURE(id);
    const auto f = load_fixture(id);
    const auto jw = map_to_qubits(f.hamiltonian, {});
    const auto reduced = map_to_qubits(f.hamiltonian, {MappingKind::kParity, true});
    CHECK(reduced.n_qubits() == jw.n_qubits() - 2);
    const double sector = oracle::sector_ground_energy(jw, f.hamiltonian.n_alpha(), f.hamiltonian.n_beta());
    CHECK(std::abs(oracle::ground_energy(reduced) - sector) < 1e-9);
    CHECK(std::abs(sector - f.fci_energy()) < 1e-8);
  }
}

TEST_CASE("two-qubit reduction is only allowed with parity") {
  const auto f = load_fixture("h2_sto3g_0.74");
  CHECK_THROWS(map_to_qubits(f.hamiltonian, {MappingKind::kJordanWigner, true}));
  CHECK_THROWS(map_to_qubits(f.hamiltonian, {MappingKind::kBravyiKitaev, true}));
}

TEST_CASE("Hartree-Fock bitstrings reproduce the RHF energy") {
  SUBCASE("Jordan-Wigner H2 STO-3G occupies qubits 0 and 1") {
    const auto f = load_fixture("h2_sto3g_0.74");
    CHECK(hartree_fock_bitstring(f.hamiltonian, {}) == 0b0011);
  }
  SUBCASE("zero electrons") {
    FermionHamiltonian h;
    h.n_spin_orbitals = 4;
    h.h1.assign(16, 0.0);
    h.h2.assign(256, 0.0);
    for (MappingKind kind : kAllKinds) CHECK(hartree_fock_bitstring(h, {kind, false}) == 0);
  }
  for (const char* id : {"h2_sto3g_0.74", "h2_631g_0.74", "h2_631g_1.30"}) {
    const auto f = load_fixture(id);
    for (MappingSpec m : {MappingSpec{MappingKind::kJordanWigner, false}, MappingSpec{MappingKind::kParity, false},
                          MappingSpec{MappingKind::kBravyiKitaev, false}, MappingSpec{MappingKind::kParity, true}}) {
      CAPTURE(id);
      CAPTURE(to_string(m.kind));
      CAPTURE(m.two_qubit_reduction);
      const auto h = map_to_qubits(f.hamiltonian, m);
      const StateVector hf(h.n_qubits(), hartree_fock_bitstring(f.hamiltonian, m));
      CHECK(std::abs(exact_expectation(hf, h) - f.rhf_energy()) < 1e-8);
    }
  }
}

TEST_CASE("larger molecules: reduced ground energy equals FCI and HF energy matches") {
  for (const char* id : {"lih_sto3g_eq"}) {
    const auto f = load_fixture(id);
    const MappingSpec m{MappingKind::kParity, true};
    const auto h = map_to_qubits(f.hamiltonian, m);
    CHECK(h.n_qubits() == 10);
    const StateVector hf(h.n_qubits(), hartree_fock_bitstring(f.hamiltonian, m));
    CHECK(std::abs(exact_expectation(hf, h) - f.rhf_energy()) < 1e-8);
    CHECK(std::abs(oracle::ground_energy(h) - f.fci_energy()) < 1e-8);
  }
}

TEST_CASE("metadata parsing") {
  std::istringstream in("# comment\nmolecule=H2\nfci_energy=-1.5\n\nbasis = sto-3g\n");
  const auto m = parse_metadata(in);
  CHECK(m.require_number("fci_energy") == -1.5);
  CHECK(m.values.at("molecule") == "H2");
  CHECK_FALSE(m.number("rhf_energy").has_value());
  CHECK_THROWS(m.require_number("rhf_energy"));
}
