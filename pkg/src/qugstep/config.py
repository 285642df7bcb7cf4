"""JSON experiment configs.

A config is one JSON object::

    {
      "hamiltonian": "builtin:h2",
      "ansatz": {"builtin": "h2_uccsd"},
      "optimizer": {"kind": "adam", "gamma0": 0.1},
      "schedule": {"kind": "cosine"},
      "iterations": 200,
      "shots": 360,
      "step_size": 0.398,
      "noise_backend": "sampled",
      "seed": 0
    }

Relative file paths (Hamiltonian files, ``output_dir``) are resolved against
the directory holding the config file.
"""

from __future__ import annotations

import json
import os
from typing import Any

from .experiment import RunConfig
from .models import ConfigurationError, builtin_hw_efficient, h2_ansatz, h2_hamiltonian, load_hamiltonian
from .pauli import Hamiltonian, parse_pauli
from .simulator import CNOT, Ansatz, PauliRotation, RotY, RotZ

TOP_LEVEL_KEYS = {
    "hamiltonian",
    "ansatz",
    "optimizer",
    "schedule",
    "iterations",
    "shots",
    "shot_interpretation",
    "step_size",
    "qugstep",
    "bound_optimal",
    "noise_backend",
    "fixed_sigma",
    "gradient",
    "seed",
    "repeats",
    "output_dir",
    "label",
}


def _resolve(path: str, base_dir: str) -> str:
    return path if os.path.isabs(path) else os.path.normpath(os.path.join(base_dir, path))


def _hamiltonian(spec: Any, base_dir: str) -> Hamiltonian:
    if isinstance(spec, str):
        if spec.startswith("builtin:"):
            return load_hamiltonian(spec)
        return Hamiltonian.from_file(_resolve(spec, base_dir))
    if isinstance(spec, dict):
        if "builtin" in spec:
            name = spec["builtin"]
            if name == "h2" and "file" in spec:
                return h2_hamiltonian(_resolve(spec["file"], base_dir))
            return load_hamiltonian(f"builtin:{name}")
        if "file" in spec:
            return Hamiltonian.from_file(_resolve(spec["file"], base_dir))
        if "terms" in spec:
            return Hamiltonian.from_terms(
                [(float(c), parse_pauli(p)) for c, p in spec["terms"]], spec.get("n_qubits")
            )
    raise ConfigurationError(f"cannot read Hamiltonian spec {spec!r}")


def _gate(g: dict):
    kind = g.get("gate", "").lower()
    if kind in ("pauli", "pauli_rotation"):
        return PauliRotation(parse_pauli(g["pauli"]), int(g["param"]), float(g.get("scale", 1.0)))
    if kind == "ry":
        return RotY(int(g["qubit"]), int(g["param"]))
    if kind == "rz":
        return RotZ(int(g["qubit"]), int(g["param"]))
    if kind == "cnot":
        return CNOT(int(g["control"]), int(g["target"]))
    raise ConfigurationError(f"unknown gate {g!r}")


def _ansatz(spec: Any, n_qubits: int) -> Ansatz:
    if spec is None or spec == "h2_uccsd":
        spec = {"builtin": "h2_uccsd"}
    if not isinstance(spec, dict):
        raise ConfigurationError(f"cannot read ansatz spec {spec!r}")
    init = float(spec.get("init", 0.0))
    name = spec.get("builtin")
    if name == "h2_uccsd":
        a = h2_ansatz(spec.get("generator", "XY"), init=init)
        scale = float(spec.get("scale", 1.0))
        if scale != 1.0:
            g = a.gates[0]
            a = Ansatz(a.n_qubits, a.reference, (PauliRotation(g.pauli, g.param, scale),), 1, init)
        return a
    if name == "hw_efficient":
        return builtin_hw_efficient(
            int(spec.get("qubits", n_qubits)),
            int(spec["layers"]),
            bool(spec.get("two_rotations", False)),
            init,
            spec.get("reference"),
        )
    if "gates" in spec:
        gates = tuple(_gate(g) for g in spec["gates"])
        n_params = spec.get("n_params")
        if n_params is None:
            n_params = 1 + max((g.param for g in gates if not isinstance(g, CNOT)), default=-1)
        return Ansatz(
            int(spec.get("qubits", n_qubits)),
            spec.get("reference", "0" * n_qubits),
            gates,
            int(n_params),
            init,
        )
    raise ConfigurationError(f"cannot read ansatz spec {spec!r}")


def config_from_dict(data: dict, base_dir: str = ".") -> RunConfig:
    unknown = set(data) - TOP_LEVEL_KEYS
    if unknown:
        raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
    if "hamiltonian" not in data or "shots" not in data:
        raise ConfigurationError("config needs at least 'hamiltonian' and 'shots'")
    ham = _hamiltonian(data["hamiltonian"], base_dir)
    ansatz = _ansatz(data.get("ansatz"), ham.n_qubits)
    opt = data.get("optimizer", {})
    if isinstance(opt, str):
        opt = {"kind": opt}
    sched = data.get("schedule", {})
    if isinstance(sched, str):
        sched = {"kind": sched}
    iterations = int(data.get("iterations", sched.get("iterations", 200)))

    step = data.get("step_size")
    qugstep = data.get("qugstep")
    if step == "qugstep":
        step = None
        if qugstep is None:
            raise ConfigurationError("step_size 'qugstep' needs a 'qugstep' block")
    elif step is not None and qugstep is not None:
        raise ConfigurationError("give either a numeric step_size or a qugstep block, not both")

    out = data.get("output_dir")
    return RunConfig(
        hamiltonian=ham,
        ansatz=ansatz,
        shots=int(data["shots"]),
        step_size=None if step is None else float(step),
        qugstep=qugstep,
        bound_optimal=data.get("bound_optimal"),
        iterations=iterations,
        optimizer=opt.get("kind", "adam"),
        optimizer_hyper=dict(opt.get("hyperparams", {})),
        schedule=sched.get("kind", "cosine"),
        gamma0=float(opt.get("gamma0", sched.get("gamma0", 0.1))),
        shot_interpretation=data.get("shot_interpretation", "total_per_evaluation"),
        noise_backend=data.get("noise_backend", "sampled"),
        fixed_sigma=data.get("fixed_sigma"),
        gradient=data.get("gradient", "forward"),
        seed=int(data.get("seed", 0)),
        repeats=int(data.get("repeats", 1)),
        output_dir=None if out is None else _resolve(out, base_dir),
        label=data.get("label", ""),
    )


def load_config(path: str | os.PathLike) -> RunConfig:
    path = os.fspath(path)
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as err:
            raise ConfigurationError(f"{path}: invalid JSON ({err})") from err
    if not isinstance(data, dict):
        raise ConfigurationError(f"{path}: top level must be an object")
    return config_from_dict(data, os.path.dirname(os.path.abspath(path)))
