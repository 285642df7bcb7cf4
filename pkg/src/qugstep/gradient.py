"""Finite-difference gradients of a noisy oracle and exact derivative oracles."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .pauli import Hamiltonian, dense_matrix
from .simulator import (
    CNOT,
    Ansatz,
    PauliRotation,
    RotY,
    RotZ,
    StateVector,
    exact_energy,
    exact_energy_at,
    prepare,
)


class CapabilityError(ValueError):
    """The ansatz is outside what an exact oracle supports."""


@dataclass(frozen=True)
class GradientEstimate:
    values: np.ndarray
    evaluations_used: int
    shots_used: int
    baseline_energy: float


def forward_diff(oracle: Callable[[np.ndarray], float], params, h: float) -> GradientEstimate:
    """Forward differences sharing one baseline evaluation.

    Component ``i`` is ``(f(theta + h e_i) - f(theta)) / h``; ``d + 1`` oracle
    calls in total. ``shots_used`` reads ``oracle.shots_per_call`` when present.
    """
    if not h > 0:
        raise ValueError(f"step size must be positive, got {h}")
    params = np.asarray(params, dtype=float)
    if not np.all(np.isfinite(params)):
        raise FloatingPointError("non-finite parameters")
    base = float(oracle(params))
    if not np.isfinite(base):
        raise FloatingPointError(f"oracle returned {base} at the baseline point")
    grad = np.empty(params.shape[0])
    shifted = params.copy()
    for i in range(params.shape[0]):
        shifted[i] += h
        value = float(oracle(shifted))
        if not np.isfinite(value):
            raise FloatingPointError(f"oracle returned {value} for component {i}")
        grad[i] = (value - base) / h
        shifted[i] = params[i]
    evals = params.shape[0] + 1
    per_call = int(getattr(oracle, "shots_per_call", 0))
    return GradientEstimate(grad, evals, evals * per_call, base)


def _shift_radius(gate) -> float:
    if isinstance(gate, PauliRotation):
        return abs(gate.scale)
    if isinstance(gate, (RotY, RotZ)):
        return 0.5
    raise CapabilityError(f"no shift rule for {gate!r}")


def parameter_shift_grad(ansatz: Ansatz, params, h: Hamiltonian) -> np.ndarray:
    """Exact gradient by the two-term shift rule, per gate occurrence.

    For a generator with eigenvalues ``+-r`` the occurrence contributes
    ``r * (E(+pi/(4r)) - E(-pi/(4r)))``.
    """
    params = np.asarray(params, dtype=float)
    grad = np.zeros(ansatz.n_params)
    for pos, gate in enumerate(ansatz.gates):
        if isinstance(gate, CNOT):
            continue
        r = _shift_radius(gate)
        if r == 0.0:
            continue
        s = np.pi / (4 * r)
        plus = prepare(ansatz, params, {pos: s})
        minus = prepare(ansatz, params, {pos: -s})
        grad[gate.param] += r * (exact_energy(plus, h) - exact_energy(minus, h))
    return grad


def _single_rotation(ansatz: Ansatz) -> tuple[int, PauliRotation]:
    param_gates = [(i, g) for i, g in enumerate(ansatz.gates) if not isinstance(g, CNOT)]
    if ansatz.n_params != 1 or len(param_gates) != 1 or not isinstance(param_gates[0][1], PauliRotation):
        raise CapabilityError("expected exactly one PauliRotation and no other parameterized gate")
    return param_gates[0]


def _heisenberg_frame(ansatz: Ansatz, pos: int, theta: float, h: Hamiltonian):
    """State right after the rotation and ``V^dag H V`` for the gates after it."""
    state = StateVector.basis(ansatz.reference)
    for g in ansatz.gates[:pos]:
        state.apply_gate(g)
    state.apply_gate(ansatz.gates[pos], theta)
    dim = 1 << ansatz.n_qubits
    v = np.empty((dim, dim), dtype=complex)
    for col in range(dim):
        e = StateVector(ansatz.n_qubits, np.eye(dim, dtype=complex)[col])
        for g in ansatz.gates[pos + 1 :]:
            e.apply_gate(g)
        v[:, col] = e.amplitudes
    h_eff = v.conj().T @ dense_matrix(h) @ v
    return state.amplitudes, h_eff


def first_derivative_commutator(ansatz: Ansatz, theta: float, h: Hamiltonian) -> float:
    """``dE/dtheta = i <psi(theta)| [P, H] |psi(theta)>`` via dense matrices."""
    pos, gate = _single_rotation(ansatz)
    psi, h_eff = _heisenberg_frame(ansatz, pos, theta, h)
    p = gate.pauli.matrix()
    comm = p @ h_eff - h_eff @ p
    return gate.scale * float((1j * np.vdot(psi, comm @ psi)).real)


def second_derivative_exact(ansatz: Ansatz, theta: float, h: Hamiltonian) -> float:
    """``d2E/dtheta2 = -<psi(theta)| [P, [P, H]] |psi(theta)>`` via dense matrices."""
    pos, gate = _single_rotation(ansatz)
    psi, h_eff = _heisenberg_frame(ansatz, pos, theta, h)
    p = gate.pauli.matrix()
    inner = p @ h_eff - h_eff @ p
    outer = p @ inner - inner @ p
    return -(gate.scale**2) * float(np.vdot(psi, outer @ psi).real)


def exact_gradient_fd(ansatz: Ansatz, params, h: Hamiltonian, delta: float = 1e-6) -> np.ndarray:
    """Central differences of the exact energy; a cheap cross-check only."""
    params = np.asarray(params, dtype=float)
    out = np.empty(ansatz.n_params)
    for i in range(ansatz.n_params):
        e = np.zeros_like(params)
        e[i] = delta
        out[i] = (exact_energy_at(ansatz, params + e, h) - exact_energy_at(ansatz, params - e, h)) / (2 * delta)
    return out
