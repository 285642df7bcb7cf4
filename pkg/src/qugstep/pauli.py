"""Pauli strings, Pauli-sum Hamiltonians and qubit-wise commuting groups.

Qubit convention: character ``i`` of a label acts on qubit ``i`` (leftmost is
qubit 0), and qubit 0 is the most significant bit of a basis index. The label
``"01"`` therefore names the basis state with qubit 0 in ``|0>`` and qubit 1 in
``|1>``, and ``dense_matrix`` builds ``kron(P_0, P_1, ...)``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

import numpy as np

PAULI_LETTERS = "IXYZ"
MAX_DENSE_QUBITS = 12
_MERGE_TOL = 1e-14

_SINGLE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class PauliParseError(ValueError):
    """Malformed Pauli label or Hamiltonian file line."""


class QubitLimitError(ValueError):
    """Requested dense object exceeds the qubit cap."""


@dataclass(frozen=True)
class PauliString:
    """Tensor product of single-qubit Paulis, one letter per qubit."""

    letters: str

    def __post_init__(self):
        if not self.letters:
            raise PauliParseError("empty Pauli label")
        for pos, ch in enumerate(self.letters):
            if ch not in PAULI_LETTERS:
                raise PauliParseError(f"invalid Pauli letter {ch!r} at position {pos}")

    @property
    def n_qubits(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return self.letters

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def is_identity(self) -> bool:
        return set(self.letters) == {"I"}

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(q for q, ch in enumerate(self.letters) if ch != "I")

    @cached_property
    def masks(self) -> tuple[int, int, int]:
        """Return ``(xmask, zmask, n_y)`` in the basis-index bit convention.

        ``P|b> = i**n_y * (-1)**popcount(b & zmask) |b ^ xmask>``.
        """
        n = self.n_qubits
        x = z = 0
        ny = 0
        for q, ch in enumerate(self.letters):
            bit = 1 << (n - 1 - q)
            if ch in "XY":
                x |= bit
            if ch in "YZ":
                z |= bit
            if ch == "Y":
                ny += 1
        return x, z, ny

    def matrix(self) -> np.ndarray:
        if self.n_qubits > MAX_DENSE_QUBITS:
            raise QubitLimitError(f"{self.n_qubits} qubits exceeds cap {MAX_DENSE_QUBITS}")
        out = np.ones((1, 1), dtype=complex)
        for ch in self.letters:
            out = np.kron(out, _SINGLE[ch])
        return out

    def qubitwise_commutes(self, other: "PauliString") -> bool:
        return all(a == "I" or b == "I" or a == b for a, b in zip(self.letters, other.letters))


def parse_pauli(label: str, n_qubits: int | None = None) -> PauliString:
    """Parse a label such as ``"XZII"``.

    Raises:
        PauliParseError: on an invalid letter (the message names its position)
            or when ``len(label) != n_qubits``.
    """
    label = label.strip()
    for pos, ch in enumerate(label):
        if ch not in PAULI_LETTERS:
            raise PauliParseError(f"invalid Pauli letter {ch!r} at position {pos}")
    if n_qubits is not None and len(label) != n_qubits:
        raise PauliParseError(
            f"label {label!r} has length {len(label)}, expected {n_qubits} "
            f"(mismatch at position {min(len(label), n_qubits)})"
        )
    return PauliString(label)


@dataclass(frozen=True)
class Hamiltonian:
    """Real-weighted sum of Pauli strings on a fixed number of qubits.

    Use :meth:`from_terms` to build one; it merges duplicate strings and drops
    terms whose merged coefficient is below 1e-14 in magnitude.
    """

    n_qubits: int
    terms: tuple[tuple[float, PauliString], ...] = field(default=())

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        seen = set()
        for coeff, p in self.terms:
            if p.n_qubits != self.n_qubits:
                raise ValueError(f"term {p} acts on {p.n_qubits} qubits, expected {self.n_qubits}")
            if not np.isreal(coeff):
                raise ValueError("Hamiltonian coefficients must be real")
            if p in seen:
                raise ValueError(f"duplicate term {p}; use Hamiltonian.from_terms")
            seen.add(p)

    @classmethod
    def from_terms(
        cls, terms: Iterable[tuple[float, PauliString | str]], n_qubits: int | None = None
    ) -> "Hamiltonian":
        merged: dict[PauliString, float] = {}
        for coeff, p in terms:
            if isinstance(p, str):
                p = parse_pauli(p, n_qubits)
            if n_qubits is None:
                n_qubits = p.n_qubits
            merged[p] = merged.get(p, 0.0) + float(coeff)
        if n_qubits is None:
            raise ValueError("cannot infer n_qubits from an empty term list")
        kept = tuple((c, p) for p, c in merged.items() if abs(c) >= _MERGE_TOL)
        return cls(n_qubits, kept)

    @classmethod
    def from_text(cls, text: str) -> "Hamiltonian":
        """Parse ``<coefficient> <label>`` lines; ``#`` starts a comment line."""
        terms = []
        n_qubits = None
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise PauliParseError(f"line {lineno}: expected '<coefficient> <label>', got {raw!r}")
            try:
                coeff = float(parts[0])
            except ValueError:
                raise PauliParseError(f"line {lineno}: bad coefficient {parts[0]!r}") from None
            try:
                p = parse_pauli(parts[1], n_qubits)
            except PauliParseError as err:
                raise PauliParseError(f"line {lineno}: {err}") from None
            n_qubits = p.n_qubits
            terms.append((coeff, p))
        if not terms:
            raise PauliParseError("no Hamiltonian terms found")
        return cls.from_terms(terms, n_qubits)

    @classmethod
    def from_file(cls, path: str | os.PathLike) -> "Hamiltonian":
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read())

    def to_text(self) -> str:
        return "".join(f"{c!r} {p}\n" for c, p in self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([c for c, _ in self.terms], dtype=float)

    @property
    def strings(self) -> tuple[PauliString, ...]:
        return tuple(p for _, p in self.terms)

    def scaled(self, factor: float) -> "Hamiltonian":
        return Hamiltonian.from_terms(((factor * c, p) for c, p in self.terms), self.n_qubits)


@dataclass(frozen=True)
class MeasurementGrouping:
    """Partition of term indices into qubit-wise commuting groups.

    ``bases[g][q]`` is the letter measured on qubit ``q`` for group ``g`` (``Z``
    where every term in the group is the identity on ``q``).
    """

    groups: tuple[tuple[int, ...], ...]
    bases: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.groups)


def group_qubitwise(h: Hamiltonian) -> MeasurementGrouping:
    """Greedy first-fit grouping in term order."""
    if len(h) == 0:
        raise ValueError("cannot group an empty Hamiltonian")
    groups: list[list[int]] = []
    bases: list[list[str]] = []
    for idx, (_, p) in enumerate(h.terms):
        for members, basis in zip(groups, bases):
            if all(b == "I" or ch == "I" or b == ch for b, ch in zip(basis, p.letters)):
                members.append(idx)
                for q, ch in enumerate(p.letters):
                    if ch != "I":
                        basis[q] = ch
                break
        else:
            groups.append([idx])
            bases.append(list(p.letters))
    return MeasurementGrouping(
        groups=tuple(tuple(g) for g in groups),
        bases=tuple("".join(ch if ch != "I" else "Z" for ch in b) for b in bases),
    )


def norm_bound(h: Hamiltonian) -> float:
    """Sum of absolute coefficients; an upper bound on the operator norm."""
    return float(np.sum(np.abs(h.coefficients)))


def curvature_bound(h: Hamiltonian) -> float:
    """Bound on ``|E''(theta)|`` for a single ``exp(-i theta P)`` parameter."""
    return 4.0 * norm_bound(h)


def dense_matrix(h: Hamiltonian, max_qubits: int = MAX_DENSE_QUBITS) -> np.ndarray:
    if h.n_qubits > max_qubits:
        raise QubitLimitError(f"{h.n_qubits} qubits exceeds dense cap {max_qubits}")
    dim = 1 << h.n_qubits
    out = np.zeros((dim, dim), dtype=complex)
    for c, p in h.terms:
        out += c * p.matrix()
    return out


def ground_energy(h: Hamiltonian, max_qubits: int = MAX_DENSE_QUBITS) -> float:
    """Smallest eigenvalue of the dense Hamiltonian."""
    return float(np.linalg.eigvalsh(dense_matrix(h, max_qubits))[0])


def random_hamiltonian(
    rng: np.random.Generator, n_qubits: int, n_terms: int, scale: float = 1.0
) -> Hamiltonian:
    """Random Pauli sum, mostly useful for tests and benchmarks."""
    labels = ["".join(rng.choice(list(PAULI_LETTERS), size=n_qubits)) for _ in range(n_terms)]
    coeffs = rng.normal(scale=scale, size=n_terms)
    return Hamiltonian.from_terms(zip(coeffs, labels), n_qubits)


def check_grouping(h: Hamiltonian, grouping: MeasurementGrouping) -> list[str]:
    """Return a list of problems with ``grouping``; empty means valid."""
    problems = []
    counts = np.zeros(len(h), dtype=int)
    strings = h.strings
    for g, (members, basis) in enumerate(zip(grouping.groups, grouping.bases)):
        for i in members:
            counts[i] += 1
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                if not strings[members[a]].qubitwise_commutes(strings[members[b]]):
                    problems.append(f"group {g}: terms {members[a]} and {members[b]} conflict")
        for q in range(h.n_qubits):
            letters = {strings[i].letters[q] for i in members} - {"I"}
            expected = letters.pop() if len(letters) == 1 else ("Z" if not letters else None)
            if expected is None or basis[q] != expected:
                problems.append(f"group {g}: basis letter on qubit {q} is {basis[q]!r}")
    for i, n in enumerate(counts):
        if n != 1:
            problems.append(f"term {i} appears in {n} groups")
    return problems

