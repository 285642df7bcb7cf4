"""NumPy implementations of the statevector kernels.

Used when the compiled ``_kernels`` extension is unavailable or disabled with
``QUGSTEP_PURE_PYTHON=1``. Both modules expose the same functions and must
agree to round-off.

Bit convention: qubit ``q`` of an ``n``-qubit register is bit ``n - 1 - q`` of
the basis index, so qubit 0 is the most significant bit.
"""

from __future__ import annotations

import numpy as np

_PHASES = np.array([1.0, 1.0j, -1.0, -1.0j])


def _signs(dim: int, zmask: int) -> np.ndarray:
    idx = np.arange(dim, dtype=np.int64)
    parity = np.bitwise_count(idx & zmask) & 1
    return 1.0 - 2.0 * parity


def apply_pauli(psi: np.ndarray, xmask: int, zmask: int, ny: int) -> np.ndarray:
    """Return ``P @ psi`` for the Pauli string encoded by the masks."""
    dim = psi.shape[0]
    idx = np.arange(dim, dtype=np.int64)
    out = np.empty_like(psi)
    out[idx ^ xmask] = psi * _signs(dim, zmask) * _PHASES[ny % 4]
    return out


def pauli_rotation(psi: np.ndarray, xmask: int, zmask: int, ny: int, theta: float) -> None:
    """In place: ``psi <- cos(theta) psi - i sin(theta) P psi``."""
    p_psi = apply_pauli(psi, xmask, zmask, ny)
    psi *= np.cos(theta)
    psi -= 1j * np.sin(theta) * p_psi


def apply_1q(psi: np.ndarray, n_qubits: int, qubit: int, u: np.ndarray) -> None:
    """In place: apply the 2x2 matrix ``u`` to ``qubit``."""
    view = psi.reshape(1 << qubit, 2, 1 << (n_qubits - qubit - 1))
    a0 = view[:, 0, :].copy()
    a1 = view[:, 1, :]
    view[:, 0, :] = u[0, 0] * a0 + u[0, 1] * a1
    view[:, 1, :] = u[1, 0] * a0 + u[1, 1] * a1


def cnot(psi: np.ndarray, n_qubits: int, control: int, target: int) -> None:
    cbit = 1 << (n_qubits - 1 - control)
    tbit = 1 << (n_qubits - 1 - target)
    idx = np.arange(psi.shape[0], dtype=np.int64)
    sel = idx[((idx & cbit) != 0) & ((idx & tbit) == 0)]
    tmp = psi[sel].copy()
    psi[sel] = psi[sel | tbit]
    psi[sel | tbit] = tmp


def pauli_expectation(psi: np.ndarray, xmask: int, zmask: int, ny: int) -> float:
    """Return ``Re <psi|P|psi>``."""
    return float(np.vdot(psi, apply_pauli(psi, xmask, zmask, ny)).real)


def parity_sums(weights: np.ndarray, zmasks: np.ndarray) -> np.ndarray:
    """``out[k] = sum_b weights[b] * (-1)**popcount(b & zmasks[k])``."""
    idx = np.arange(weights.shape[0], dtype=np.int64)
    parity = np.bitwise_count(idx[None, :] & np.asarray(zmasks, dtype=np.int64)[:, None]) & 1
    return (1.0 - 2.0 * parity) @ weights
