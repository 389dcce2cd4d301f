#!/usr/bin/env python3
# Copyright 2026 The nuvqe Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the bundled FCIDUMP fixtures and their metadata sidecars.

Requires PySCF. The C++ code never calls this script; fixtures are committed.

    python3 tools/make_fixtures.py fixtures/
"""

import argparse
import os

import numpy as np
from pyscf import ao2mo, fci, gto, scf
from pyscf.tools import fcidump

H2_GRID = [0.3, 0.5, 0.6, 0.74, 0.9, 1.1, 1.3, 1.6, 2.0, 2.5]

# Experimental equilibrium geometries (Angstrom / degrees).
LIH_BOND = 1.5949
H2O_BOND = 0.9578
H2O_ANGLE = 104.478


def _stable_uhf(mol):
    mf = scf.UHF(mol)
    mf.conv_tol = 1e-12
    # Break spin symmetry so stretched bonds can localize.
    dm_a, dm_b = mf.get_init_guess()
    if mol.nelectron > 1:
        dm_b = dm_b * 0.0 + dm_a * 0.9
    mf.kernel(dm0=(dm_a, dm_b))
    for _ in range(10):
        mo_new = mf.stability()[0]
        if all(np.allclose(a, b) for a, b in zip(mo_new, mf.mo_coeff)):
            break
        dm = mf.make_rdm1(mo_new, mf.mo_occ)
        mf.kernel(dm0=dm)
    return mf.e_tot


def _write(outdir, fixture_id, mol, bond, molecule, basis):
    rhf = scf.RHF(mol)
    rhf.conv_tol = 1e-12
    rhf.kernel()
    if not rhf.converged:
        raise RuntimeError(f"RHF did not converge for {fixture_id}")

    mo = rhf.mo_coeff
    nmo = mo.shape[1]
    h1 = mo.T @ rhf.get_hcore() @ mo
    eri = ao2mo.restore(8, ao2mo.kernel(mol, mo), nmo)
    nuc = mol.energy_nuc()

    fcidump.from_integrals(os.path.join(outdir, fixture_id + ".fcidump"),
                           h1, eri, nmo, mol.nelectron, nuc=nuc,
                           ms=mol.spin, tol=1e-14, float_format=" %.17g")

    solver = fci.direct_spin1.FCI()
    solver.conv_tol = 1e-13
    e_fci, _ = solver.kernel(h1, ao2mo.restore(1, eri, nmo), nmo,
                             mol.nelectron, ecore=nuc, nroots=1)

    e_uhf = _stable_uhf(mol)
    with open(os.path.join(outdir, fixture_id + ".meta"), "w") as f:
        f.write(f"molecule={molecule}\n")
        f.write(f"basis={basis}\n")
        f.write(f"bond_length_angstrom={bond:.4f}\n")
        f.write(f"n_electrons={mol.nelectron}\n")
        f.write(f"multiplicity={mol.spin + 1}\n")
        f.write(f"rhf_energy={rhf.e_tot:.15f}\n")
        f.write(f"uhf_energy={e_uhf:.15f}\n")
        f.write(f"fci_energy={e_fci:.15f}\n")
    print(f"{fixture_id}: nmo={nmo} rhf={rhf.e_tot:.10f} "
          f"uhf={e_uhf:.10f} fci={e_fci:.10f}")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("outdir")
    args = parser.parse_args()
    os.makedirs(args.outdir, exist_ok=True)

    for basis, tag in (("sto-3g", "sto3g"), ("6-31g", "631g")):
        for r in H2_GRID:
            mol = gto.M(atom=f"H 0 0 0; H 0 0 {r}", basis=basis, unit="Angstrom",
                        verbose=0)
            _write(args.outdir, f"h2_{tag}_{r:.2f}", mol, r, "H2", basis)

    mol = gto.M(atom=f"Li 0 0 0; H 0 0 {LIH_BOND}", basis="sto-3g",
                unit="Angstrom", verbose=0)
    _write(args.outdir, "lih_sto3g_eq", mol, LIH_BOND, "LiH", "sto-3g")

    half = np.deg2rad(H2O_ANGLE / 2.0)
    y = H2O_BOND * np.sin(half)
    z = H2O_BOND * np.cos(half)
    mol = gto.M(atom=f"O 0 0 0; H 0 {y} {z}; H 0 {-y} {z}", basis="sto-3g",
                unit="Angstrom", verbose=0)
    _write(args.outdir, "h2o_sto3g_eq", mol, H2O_BOND, "H2O", "sto-3g")


if __name__ == "__main__":
    main()
