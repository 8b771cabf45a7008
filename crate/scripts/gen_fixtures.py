#!/usr/bin/env python3
"""Regenerate the FCIDUMP fixtures under data/fixtures.

Requires pyscf. Molecular orbitals come from a restricted Hartree-Fock
calculation; the active space is the lowest `norb` canonical orbitals with
every electron active, so the core energy is the nuclear repulsion.

A JSON sidecar records the FCI ground energy of every fixture (pyscf
direct_spin1 solver) for cross-checking.
"""

import json
import os
import sys

from pyscf import ao2mo, fci, gto, scf
from pyscf.tools import fcidump

OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "data", "fixtures")

H2_DISTANCES = [0.35, 0.55, 0.7, 1.4, 1.8, 2.8, 4.4, 6.0]
LIH_DISTANCES = [1.0, 1.6, 2.4, 3.2]

# (molecule, spin orbitals, basis, distances)
JOBS = [
    ("h2", 4, "sto-3g", H2_DISTANCES + [0.7414]),
    ("h2", 8, "6-31g", H2_DISTANCES),
    ("h2", 10, "cc-pvtz", H2_DISTANCES),
    ("h2", 16, "cc-pvtz", H2_DISTANCES),
    ("h2", 22, "cc-pvtz", H2_DISTANCES),
    ("h2", 30, "cc-pvtz", H2_DISTANCES),
    ("lih", 6, "sto-3g", LIH_DISTANCES),
    ("lih", 8, "sto-3g", LIH_DISTANCES),
    ("lih", 10, "sto-3g", LIH_DISTANCES),
]


def atoms(molecule, distance):
    if molecule == "h2":
        return f"H 0 0 0; H 0 0 {distance}"
    if molecule == "lih":
        return f"Li 0 0 0; H 0 0 {distance}"
    raise ValueError(molecule)


def fmt_distance(d):
    s = f"{d:.4f}".rstrip("0")
    if s.endswith("."):
        s += "0"
    return s


def main():
    os.makedirs(OUT, exist_ok=True)
    reference = {}
    for molecule, nso, basis, distances in JOBS:
        norb = nso // 2
        for d in distances:
            mol = gto.M(atom=atoms(molecule, d), basis=basis, unit="Angstrom", verbose=0)
            mf = scf.RHF(mol)
            mf.conv_tol = 1e-12
            mf.kernel()
            if not mf.converged:
                print(f"warning: RHF not converged for {molecule} {basis} {d}", file=sys.stderr)
            mo = mf.mo_coeff[:, :norb]
            h1 = mo.T @ mf.get_hcore() @ mo
            eri = ao2mo.restore(1, ao2mo.kernel(mol, mo), norb)
            nelec = mol.nelectron
            ecore = mol.energy_nuc()
            name = f"{molecule}_{nso}so_{fmt_distance(d)}A.fcidump"
            fcidump.from_integrals(os.path.join(OUT, name), h1, eri, norb, nelec, nuc=ecore, ms=0)
            e_fci, _ = fci.direct_spin1.kernel(h1, eri, norb, (nelec // 2, nelec // 2), ecore=ecore,
                                               conv_tol=1e-12)
            reference[name] = {"basis": basis, "distance_angstrom": d, "norb": norb,
                               "nelec": nelec, "e_core": ecore, "e_rhf": mf.e_tot, "e_fci": e_fci}
            print(name, e_fci)
    with open(os.path.join(OUT, "reference_energies.json"), "w") as fh:
        json.dump(reference, fh, indent=2, sort_keys=True)
        fh.write("\n")


if __name__ == "__main__":
    main()
