"""Built-in Hamiltonians and ansatz constructors."""

from __future__ import annotations

import os
from importlib import resources

from .pauli import Hamiltonian, parse_pauli
from .simulator import CNOT, Ansatz, PauliRotation, RotY, RotZ

H2_TERMS = ("II", "ZI", "IZ", "ZZ", "YY", "XX")
H2_DATA_FILE = "h2_sto6g_r175_bk.txt"

# Generator of the one-parameter pair excitation.  With a real Hamiltonian,
# exp(-i theta XX)|01> keeps the |01>,|10> amplitudes a relative phase of -i
# apart, so the XX/YY coupling never lowers the energy; XY gives the same
# excitation with real amplitudes.
H2_GENERATOR = "XY"


class ConfigurationError(ValueError):
    """Missing or inconsistent model data."""


def _data_path(name: str):
    return resources.files("qugstep") / "data" / name


def load_hamiltonian(source: str | os.PathLike) -> Hamiltonian:
    """Load a Hamiltonian from a path or a ``builtin:<name>`` tag."""
    text = str(source)
    if text.startswith("builtin:"):
        name = text.split(":", 1)[1]
        if name == "h2":
            return h2_hamiltonian()
        path = _data_path(f"{name}.txt")
        if not path.is_file():
            raise ConfigurationError(f"no builtin Hamiltonian named {name!r}")
        return Hamiltonian.from_text(path.read_text(encoding="utf-8"))
    return Hamiltonian.from_file(text)


def h2_hamiltonian(path: str | os.PathLike | None = None) -> Hamiltonian:
    """Two-qubit H2 Hamiltonian with terms I, Z0, Z1, Z0Z1, Y0Y1, X0X1."""
    if path is None:
        res = _data_path(H2_DATA_FILE)
        if not res.is_file():
            raise ConfigurationError(f"H2 coefficient file {H2_DATA_FILE!r} missing from package data")
        h = Hamiltonian.from_text(res.read_text(encoding="utf-8"))
    else:
        if not os.path.exists(path):
            raise ConfigurationError(f"H2 coefficient file not found: {path}")
        h = Hamiltonian.from_file(path)
    if h.n_qubits != 2 or set(map(str, h.strings)) - set(H2_TERMS):
        raise ConfigurationError(f"H2 model must use only the strings {H2_TERMS}")
    return h


def h2_ansatz(generator: str = H2_GENERATOR, init: float = 0.0) -> Ansatz:
    """``exp(-i theta P)|01>`` with a two-qubit generator ``P``."""
    return Ansatz(
        n_qubits=2,
        reference="01",
        gates=(PauliRotation(parse_pauli(generator, 2), 0),),
        n_params=1,
        init=init,
    )


def builtin_h2(path: str | os.PathLike | None = None, generator: str = H2_GENERATOR):
    return h2_hamiltonian(path), h2_ansatz(generator)


def builtin_hw_efficient(
    n_qubits: int,
    layers: int,
    two_rotations: bool = False,
    init: float = 0.0,
    reference: str | None = None,
) -> Ansatz:
    """Layers of RotY (then RotZ if ``two_rotations``) on every qubit plus a CNOT chain.

    Parameter order is layer-major; within a layer all RotY angles come before
    the RotZ angles.
    """
    if n_qubits < 2 or layers < 1:
        raise ValueError("need n_qubits >= 2 and layers >= 1")
    gates = []
    k = 0
    for _ in range(layers):
        for q in range(n_qubits):
            gates.append(RotY(q, k))
            k += 1
        if two_rotations:
            for q in range(n_qubits):
                gates.append(RotZ(q, k))
                k += 1
        for q in range(n_qubits - 1):
            gates.append(CNOT(q, q + 1))
    return Ansatz(
        n_qubits=n_qubits,
        reference=reference or "0" * n_qubits,
        gates=tuple(gates),
        n_params=k,
        init=init,
    )
