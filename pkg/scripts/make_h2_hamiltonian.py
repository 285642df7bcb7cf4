"""Regenerate the packaged H2 coefficient file.

Needs pyscf and openfermion (not runtime dependencies). H2 / STO-6G at
1.75 Angstrom, Bravyi-Kitaev mapping, then the two qubits that carry only Z
operators (BK qubits 1 and 3) are replaced by their +1 eigenvalue in the
two-electron singlet sector. The remaining BK qubits (0, 2) are relabelled
(2 -> 0, 0 -> 1) so the Hartree-Fock determinant is |01>.

    python3 scripts/make_h2_hamiltonian.py > src/qugstep/data/h2_sto6g_r175_bk.txt
"""

import numpy as np
import openfermion as of
from pyscf import ao2mo, fci, gto, scf

BOND = 1.75

mol = gto.M(atom=f"H 0 0 0; H 0 0 {BOND}", basis="sto-6g", unit="Angstrom")
mf = scf.RHF(mol).run(verbose=0)
h1 = mf.mo_coeff.T @ mf.get_hcore() @ mf.mo_coeff
eri = ao2mo.restore(1, ao2mo.kernel(mol, mf.mo_coeff), 2)
e_fci = fci.FCI(mf).kernel()[0]

one, two = of.chem.molecular_data.spinorb_from_spatial(h1, eri.transpose(0, 2, 3, 1))
bk = of.bravyi_kitaev(of.get_fermion_operator(of.InteractionOperator(mol.energy_nuc(), one, 0.5 * two)))

relabel = {2: 0, 0: 1}
coeffs = {}
for term, c in bk.terms.items():
    letters = ["I", "I"]
    for q, op in term:
        if q in (1, 3):
            assert op == "Z"
            continue
        letters[relabel[q]] = op
    key = "".join(letters)
    coeffs[key] = coeffs.get(key, 0.0) + c.real

order = ["II", "ZI", "IZ", "ZZ", "YY", "XX"]
h = sum(coeffs[k] * of.QubitOperator(" ".join(f"{ch}{i}" for i, ch in enumerate(k) if ch != "I")) for k in order)
ground = np.linalg.eigvalsh(of.get_sparse_operator(h, 2).toarray())[0]
assert abs(ground - e_fci) < 1e-9

print(f"# H2, STO-6G, R = {BOND} Angstrom, Bravyi-Kitaev, BK qubits 1 and 3 tapered (Z -> +1)")
print("# qubit 0 = BK qubit 2, qubit 1 = BK qubit 0; Hartree-Fock reference |01>")
print(f"# RHF energy {mf.e_tot:.10f} Ha, FCI energy {e_fci:.10f} Ha")
for k in order:
    print(f"{coeffs[k]:.15f} {k}")
