"""Regenerate the packaged 4-qubit toy Hamiltonian.

The toy shares its spectrum with a 4-qubit LiH model (STO-3G, 1.45 Angstrom,
frozen 1s core, active orbitals 1, 2, 5, symmetry-conserving Bravyi-Kitaev;
needs pyscf and openfermion) but its ground state is exactly reachable by the
2-layer RotY + CNOT-chain ansatz:

    H_toy = V D V^dag,   V = ansatz(theta_star),   D = diag(LiH spectrum)

where D gives the reference |0000> the lowest eigenvalue and the remaining
eigenvalues go to basis states in order of Hamming weight, then index.
theta_star is drawn uniformly from [-1, 1] with seed 2024.

    python3 scripts/make_toy4_hamiltonian.py > src/qugstep/data/toy4_lih_isospectral.txt
"""

import itertools

import numpy as np
import openfermion as of
from pyscf import ao2mo, gto, scf

from qugstep.models import builtin_hw_efficient
from qugstep.pauli import PauliString
from qugstep.simulator import StateVector

mol = gto.M(atom="Li 0 0 0; H 0 0 1.45", basis="sto-3g", verbose=0)
mf = scf.RHF(mol).run()
C = mf.mo_coeff
core, active = [0], [1, 2, 5]
hcore = C.T @ mf.get_hcore() @ C
eri = ao2mo.restore(1, ao2mo.kernel(mol, C), C.shape[1])
ecore = mol.energy_nuc()
for i in core:
    ecore += 2 * hcore[i, i]
    for j in core:
        ecore += 2 * eri[i, i, j, j] - eri[i, j, j, i]
h1 = hcore[np.ix_(active, active)].copy()
for i in core:
    h1 += 2 * eri[np.ix_(active, active, [i], [i])][:, :, 0, 0] - eri[np.ix_(active, [i], [i], active)][:, 0, 0, :]
h2 = eri[np.ix_(active, active, active, active)]
one, two = of.chem.molecular_data.spinorb_from_spatial(h1, h2.transpose(0, 2, 3, 1))
ferm = of.reorder(of.get_fermion_operator(of.InteractionOperator(ecore, one, 0.5 * two)), of.up_then_down)
qop = of.symmetry_conserving_bravyi_kitaev(ferm, 6, 2)

dim = 16
lih = np.zeros((dim, dim), dtype=complex)
for term, c in qop.terms.items():
    letters = ["I"] * 4
    for q, op in term:
        letters[q] = op
    lih += c * PauliString("".join(letters)).matrix()
spectrum = np.linalg.eigvalsh(lih)

order = sorted(range(dim), key=lambda b: (bin(b).count("1"), b))
diag = np.empty(dim)
diag[order] = spectrum

ansatz = builtin_hw_efficient(4, 2, False, 0.0)
theta_star = np.random.default_rng(2024).uniform(-1.0, 1.0, ansatz.n_params)
cols = []
for b in range(dim):
    st = StateVector(4, np.eye(dim, dtype=complex)[b])
    for g in ansatz.gates:
        st.apply_gate(g, theta_star[g.param] if hasattr(g, "param") else 0.0)
    cols.append(st.amplitudes)
v = np.column_stack(cols)
toy = v @ np.diag(diag) @ v.conj().T

print("# 4-qubit toy: isospectral to a 4-qubit LiH model, ground state reachable by")
print("# the 2-layer RotY + CNOT-chain ansatz from |0000>; see scripts/make_toy4_hamiltonian.py")
print(f"# ground energy {spectrum[0]:.10f} Ha at theta* = {np.array2string(theta_star, precision=6, separator=',', max_line_width=200)}")
for letters in itertools.product("IXYZ", repeat=4):
    p = PauliString("".join(letters))
    c = np.trace(p.matrix() @ toy) / dim
    assert abs(c.imag) < 1e-12
    if abs(c.real) > 1e-10:
        print(f"{c.real:.15f} {p}")
