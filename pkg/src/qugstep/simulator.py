"""Dense statevector simulation of parameterized circuits.

Rotation conventions:

* ``PauliRotation(P, k)`` applies ``exp(-i theta_k P)`` (full angle); an
  optional ``scale`` gives ``exp(-i scale theta_k P)``.
* ``RotY(q, k)`` / ``RotZ(q, k)`` apply ``exp(-i theta_k Y/2)`` /
  ``exp(-i theta_k Z/2)`` (half angle).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence, Union

import numpy as np

from . import kernels
from .pauli import MAX_DENSE_QUBITS, Hamiltonian, PauliString, QubitLimitError, parse_pauli


@dataclass(frozen=True)
class PauliRotation:
    """``exp(-i * scale * theta * P)``."""

    pauli: PauliString
    param: int
    scale: float = 1.0

    def __post_init__(self):
        if isinstance(self.pauli, str):
            object.__setattr__(self, "pauli", parse_pauli(self.pauli))


@dataclass(frozen=True)
class RotY:
    qubit: int
    param: int


@dataclass(frozen=True)
class RotZ:
    qubit: int
    param: int


@dataclass(frozen=True)
class CNOT:
    control: int
    target: int


Gate = Union[PauliRotation, RotY, RotZ, CNOT]


@dataclass(frozen=True)
class Ansatz:
    """Reference bitstring followed by an ordered gate list.

    ``init`` is the value every parameter starts from in a VQE run.
    """

    n_qubits: int
    reference: str
    gates: tuple[Gate, ...]
    n_params: int
    init: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if not 1 <= self.n_qubits <= MAX_DENSE_QUBITS:
            raise QubitLimitError(f"n_qubits={self.n_qubits} outside [1, {MAX_DENSE_QUBITS}]")
        if len(self.reference) != self.n_qubits or set(self.reference) - {"0", "1"}:
            raise ValueError(f"reference {self.reference!r} is not a {self.n_qubits}-bit string")
        used = set()
        for g in self.gates:
            if isinstance(g, PauliRotation):
                if g.pauli.n_qubits != self.n_qubits:
                    raise ValueError(f"rotation {g.pauli} does not act on {self.n_qubits} qubits")
            elif isinstance(g, (RotY, RotZ)):
                if not 0 <= g.qubit < self.n_qubits:
                    raise ValueError(f"qubit {g.qubit} out of range")
            elif isinstance(g, CNOT):
                if g.control == g.target or not (
                    0 <= g.control < self.n_qubits and 0 <= g.target < self.n_qubits
                ):
                    raise ValueError(f"bad CNOT({g.control}, {g.target})")
                continue
            else:
                raise TypeError(f"unknown gate {g!r}")
            if not 0 <= g.param < self.n_params:
                raise ValueError(f"param index {g.param} outside [0, {self.n_params})")
            used.add(g.param)
        missing = set(range(self.n_params)) - used
        if missing:
            raise ValueError(f"parameters never used by any gate: {sorted(missing)}")

    def initial_params(self) -> np.ndarray:
        return np.full(self.n_params, float(self.init))

    @property
    def parameterized_gates(self) -> list[int]:
        return [i for i, g in enumerate(self.gates) if not isinstance(g, CNOT)]


class StateVector:
    """Mutable dense state of ``n_qubits`` qubits."""

    def __init__(self, n_qubits: int, amplitudes: np.ndarray | None = None):
        self.n_qubits = n_qubits
        if amplitudes is None:
            amplitudes = np.zeros(1 << n_qubits, dtype=np.complex128)
            amplitudes[0] = 1.0
        amplitudes = np.ascontiguousarray(amplitudes, dtype=np.complex128)
        if amplitudes.shape != (1 << n_qubits,):
            raise ValueError(f"expected {1 << n_qubits} amplitudes, got {amplitudes.shape}")
        self.amplitudes = amplitudes

    @classmethod
    def basis(cls, bits: str) -> "StateVector":
        state = cls(len(bits))
        state.amplitudes[0] = 0.0
        state.amplitudes[int(bits, 2)] = 1.0
        return state

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def apply_pauli_rotation(self, pauli: PauliString, theta: float) -> None:
        x, z, ny = pauli.masks
        kernels.pauli_rotation(self.amplitudes, x, z, ny, float(theta))

    def apply_ry(self, qubit: int, theta: float) -> None:
        c, s = np.cos(theta / 2), np.sin(theta / 2)
        kernels.apply_1q(self.amplitudes, self.n_qubits, qubit, np.array([[c, -s], [s, c]], dtype=complex))

    def apply_rz(self, qubit: int, theta: float) -> None:
        ph = np.exp(-0.5j * theta)
        u = np.array([[ph, 0], [0, np.conj(ph)]], dtype=complex)
        kernels.apply_1q(self.amplitudes, self.n_qubits, qubit, u)

    def apply_matrix(self, qubit: int, u: np.ndarray) -> None:
        kernels.apply_1q(self.amplitudes, self.n_qubits, qubit, np.asarray(u, dtype=complex))

    def apply_cnot(self, control: int, target: int) -> None:
        kernels.cnot(self.amplitudes, self.n_qubits, control, target)

    def apply_gate(self, gate: Gate, theta: float = 0.0) -> None:
        if isinstance(gate, PauliRotation):
            self.apply_pauli_rotation(gate.pauli, gate.scale * theta)
        elif isinstance(gate, RotY):
            self.apply_ry(gate.qubit, theta)
        elif isinstance(gate, RotZ):
            self.apply_rz(gate.qubit, theta)
        elif isinstance(gate, CNOT):
            self.apply_cnot(gate.control, gate.target)
        else:
            raise TypeError(f"unknown gate {gate!r}")


def _check_params(ansatz: Ansatz, params) -> np.ndarray:
    params = np.asarray(params, dtype=float).reshape(-1)
    if params.shape[0] != ansatz.n_params:
        raise ValueError(f"expected {ansatz.n_params} parameters, got {params.shape[0]}")
    return params


def prepare(
    ansatz: Ansatz, params: Sequence[float], shifts: Mapping[int, float] | None = None
) -> StateVector:
    """Apply the ansatz to its reference state.

    ``shifts`` maps gate positions to an extra angle added to that single gate
    occurrence only (used by the parameter-shift oracle).
    """
    params = _check_params(ansatz, params)
    state = StateVector.basis(ansatz.reference)
    for pos, gate in enumerate(ansatz.gates):
        if isinstance(gate, CNOT):
            state.apply_cnot(gate.control, gate.target)
            continue
        theta = params[gate.param]
        if shifts and pos in shifts:
            theta = theta + shifts[pos]
        state.apply_gate(gate, theta)
    return state


def exact_energy(state: StateVector, h: Hamiltonian) -> float:
    """``<psi|H|psi>`` summed term by term."""
    if state.n_qubits != h.n_qubits:
        raise ValueError(f"state has {state.n_qubits} qubits, Hamiltonian {h.n_qubits}")
    psi = state.amplitudes
    total = 0.0
    for c, p in h.terms:
        x, z, ny = p.masks
        total += c * kernels.pauli_expectation(psi, x, z, ny)
    return total


def exact_energy_at(ansatz: Ansatz, params: Sequence[float], h: Hamiltonian) -> float:
    if ansatz.n_qubits != h.n_qubits:
        raise ValueError(f"ansatz has {ansatz.n_qubits} qubits, Hamiltonian {h.n_qubits}")
    return exact_energy(prepare(ansatz, params), h)
