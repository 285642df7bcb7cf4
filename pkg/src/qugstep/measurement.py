"""Shot-budgeted energy estimation.

An evaluation with ``N`` shots returns ``E(theta) + eps_N`` where ``eps_N`` has
zero mean and variance ``sigma(theta)**2 / N``. Two backends realize it:

``sampled``
    Each qubit-wise commuting group is rotated into its measurement basis and
    bitstrings are drawn from the Born distribution.
``gaussian_surrogate``
    Exact energy plus ``z * sigma / sqrt(N)`` with ``z`` standard normal and
    ``sigma`` from :func:`exact_sigma` (or a fixed override).

Random streams use NumPy's Philox counter-based generator keyed by
``SeedSequence(seed, spawn_key=stream)`` so a ``(seed, stream)`` pair produces
the same numbers on every platform.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .pauli import Hamiltonian, MeasurementGrouping, group_qubitwise
from .simulator import Ansatz, StateVector, exact_energy, prepare

SHOT_INTERPRETATIONS = ("total_per_evaluation", "per_group")
NOISE_KINDS = ("sampled", "gaussian_surrogate")

_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
# H @ S^dagger maps the Y eigenbasis onto the Z eigenbasis
_Y_TO_Z = _HADAMARD @ np.array([[1, 0], [0, -1j]], dtype=complex)


class BudgetError(ValueError):
    """Shot budget cannot cover the measurement groups."""


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Philox generator for the substream ``stream`` of ``seed``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(s) for s in stream))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class ShotBudget:
    shots: int
    interpretation: str = "total_per_evaluation"

    def __post_init__(self):
        if int(self.shots) < 1:
            raise BudgetError(f"shots must be >= 1, got {self.shots}")
        if self.interpretation not in SHOT_INTERPRETATIONS:
            raise ValueError(f"unknown shot interpretation {self.interpretation!r}")

    def allocation(self, n_groups: int) -> np.ndarray:
        """Shots assigned to each of ``n_groups`` measured groups."""
        if n_groups == 0:
            return np.zeros(0, dtype=np.int64)
        if self.interpretation == "per_group":
            return np.full(n_groups, int(self.shots), dtype=np.int64)
        return split_shots(int(self.shots), n_groups)

    def shots_per_evaluation(self, n_groups: int) -> int:
        return int(self.allocation(n_groups).sum())


@dataclass(frozen=True)
class NoiseBackend:
    kind: str = "sampled"
    seed: int = 0
    fixed_sigma: float | None = None

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise ValueError(f"unknown noise backend {self.kind!r}; choose from {NOISE_KINDS}")

    def rng(self, *stream: int) -> np.random.Generator:
        return make_rng(self.seed, *stream)


def split_shots(total: int, n_groups: int) -> np.ndarray:
    """Even split with the remainder going one each to the first groups."""
    if n_groups < 1:
        raise BudgetError("need at least one group")
    if total < n_groups:
        raise BudgetError(f"{total} shots cannot cover {n_groups} groups")
    base, extra = divmod(total, n_groups)
    out = np.full(n_groups, base, dtype=np.int64)
    out[:extra] += 1
    return out


class _Group:
    __slots__ = ("terms", "coeffs", "zmasks", "rotations")

    def __init__(self, h: Hamiltonian, members: Sequence[int], basis: str):
        n = h.n_qubits
        self.terms = [i for i in members if not h.terms[i][1].is_identity]
        self.coeffs = np.array([h.terms[i][0] for i in self.terms], dtype=float)
        zmasks = []
        for i in self.terms:
            z = 0
            for q in h.terms[i][1].support:
                z |= 1 << (n - 1 - q)
            zmasks.append(z)
        self.zmasks = np.array(zmasks, dtype=np.int64)
        self.rotations = []
        for q, letter in enumerate(basis):
            used = any(h.terms[i][1].letters[q] != "I" for i in self.terms)
            if used and letter == "X":
                self.rotations.append((q, _HADAMARD))
            elif used and letter == "Y":
                self.rotations.append((q, _Y_TO_Z))


class MeasurementPlan:
    """Precomputed per-group data for a Hamiltonian and shot budget.

    Identity terms are folded into a constant offset; groups left with only
    identity terms consume no shots.
    """

    def __init__(
        self,
        h: Hamiltonian,
        budget: ShotBudget,
        grouping: MeasurementGrouping | None = None,
    ):
        self.hamiltonian = h
        self.budget = budget
        self.grouping = grouping if grouping is not None else group_qubitwise(h)
        self.offset = float(sum(c for c, p in h.terms if p.is_identity))
        groups = [_Group(h, m, b) for m, b in zip(self.grouping.groups, self.grouping.bases)]
        self.groups = [g for g in groups if g.terms]
        self.shots = budget.allocation(len(self.groups))
        if np.any(self.shots < 1):
            raise BudgetError("a nonempty measurement group was assigned zero shots")

    @property
    def shots_per_evaluation(self) -> int:
        return int(self.shots.sum())

    def sample(self, state: StateVector, rng: np.random.Generator) -> float:
        total = self.offset
        for g, n_g in zip(self.groups, self.shots):
            psi = state.amplitudes
            if g.rotations:
                psi = psi.copy()
                for q, u in g.rotations:
                    kernels.apply_1q(psi, state.n_qubits, q, u)
            probs = psi.real**2 + psi.imag**2
            probs /= probs.sum()
            counts = rng.multinomial(int(n_g), probs).astype(np.float64)
            total += float(g.coeffs @ kernels.parity_sums(counts, g.zmasks)) / n_g
        return total

    def group_variances(self, state: StateVector) -> np.ndarray:
        """Single-shot variance ``<O_g^2> - <O_g>^2`` of each measured group."""
        psi = state.amplitudes
        out = np.empty(len(self.groups))
        for k, g in enumerate(self.groups):
            o_psi = np.zeros_like(psi)
            for c, i in zip(g.coeffs, g.terms):
                x, z, ny = self.hamiltonian.terms[i][1].masks
                o_psi += c * kernels.apply_pauli(psi, x, z, ny)
            mean = np.vdot(psi, o_psi).real
            out[k] = max(np.vdot(o_psi, o_psi).real - mean * mean, 0.0)
        return out

    def sigma(self, state: StateVector) -> float:
        """``sigma`` such that ``Var[estimate] = sigma**2 / budget.shots``."""
        if not self.groups:
            return 0.0
        var = float(np.sum(self.group_variances(state) / self.shots))
        return float(np.sqrt(self.budget.shots * var))


class EnergyEstimator:
    """Noisy energy oracle ``params -> estimate`` with its own random stream.

    Each call consumes ``shots_per_call`` shots.
    """

    def __init__(
        self,
        ansatz: Ansatz,
        h: Hamiltonian,
        budget: ShotBudget,
        rng: np.random.Generator,
        kind: str = "sampled",
        grouping: MeasurementGrouping | None = None,
        fixed_sigma: float | None = None,
    ):
        if ansatz.n_qubits != h.n_qubits:
            raise ValueError(f"ansatz has {ansatz.n_qubits} qubits, Hamiltonian {h.n_qubits}")
        if kind not in NOISE_KINDS:
            raise ValueError(f"unknown noise backend {kind!r}")
        self.ansatz = ansatz
        self.hamiltonian = h
        self.plan = MeasurementPlan(h, budget, grouping)
        self.rng = rng
        self.kind = kind
        self.fixed_sigma = fixed_sigma
        self.calls = 0

    @property
    def shots_per_call(self) -> int:
        return self.plan.shots_per_evaluation

    def __call__(self, params) -> float:
        self.calls += 1
        state = prepare(self.ansatz, params)
        if self.kind == "sampled":
            return self.plan.sample(state, self.rng)
        sigma = self.fixed_sigma if self.fixed_sigma is not None else self.plan.sigma(state)
        z = self.rng.standard_normal()
        return exact_energy(state, self.hamiltonian) + z * sigma / np.sqrt(self.plan.budget.shots)

    def sigma(self, params) -> float:
        if self.fixed_sigma is not None:
            return float(self.fixed_sigma)
        return self.plan.sigma(prepare(self.ansatz, params))


def sample_energy(
    ansatz: Ansatz,
    params,
    h: Hamiltonian,
    grouping: MeasurementGrouping | None,
    budget: ShotBudget,
    backend: NoiseBackend,
    rng: np.random.Generator | None = None,
) -> float:
    """One noisy energy estimate.

    Without ``rng`` the stream is ``backend.rng()``, so repeated calls with the
    same seed return the same value.
    """
    rng = backend.rng() if rng is None else rng
    est = EnergyEstimator(ansatz, h, budget, rng, backend.kind, grouping, backend.fixed_sigma)
    return est(params)


def exact_sigma(
    ansatz: Ansatz,
    params,
    h: Hamiltonian,
    grouping: MeasurementGrouping | None,
    budget: ShotBudget,
) -> float:
    return MeasurementPlan(h, budget, grouping).sigma(prepare(ansatz, params))
