"""VQE run loop, traces, sweeps and shot accounting."""

from __future__ import annotations

import csv
import io
import json
import logging
import os
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Sequence

import numpy as np

from .gradient import forward_diff, parameter_shift_grad
from .measurement import EnergyEstimator, MeasurementPlan, ShotBudget, exact_sigma, make_rng
from .optimize import Schedule, init_state, rate_at, update
from .pauli import Hamiltonian, curvature_bound, ground_energy
from .simulator import Ansatz, exact_energy_at

log = logging.getLogger(__name__)

TRACE_COLUMNS = (
    "iter",
    "noisy_energy",
    "exact_energy",
    "grad_inf_norm",
    "learning_rate",
    "cumulative_shots",
)
GRADIENT_METHODS = ("forward", "parameter_shift")


def fmt_float(x: float) -> str:
    """17 significant digits, round-trip exact."""
    return f"{float(x):.16e}"


@dataclass(frozen=True)
class RunConfig:
    """Everything one VQE run needs.

    Exactly one of ``step_size`` (fixed h), ``qugstep`` (tuner settings) or
    ``bound_optimal`` (``{"mu": ..., "sigma": ...}`` sources) must be given.
    """

    hamiltonian: Hamiltonian
    ansatz: Ansatz
    shots: int
    step_size: float | None = None
    qugstep: dict | None = None
    bound_optimal: dict | None = None
    iterations: int = 200
    optimizer: str = "adam"
    optimizer_hyper: dict = field(default_factory=dict)
    schedule: str = "cosine"
    gamma0: float = 0.1
    shot_interpretation: str = "total_per_evaluation"
    noise_backend: str = "sampled"
    fixed_sigma: float | None = None
    gradient: str = "forward"
    seed: int = 0
    repeats: int = 1
    output_dir: str | None = None
    label: str = ""

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        sources = [s for s in (self.step_size, self.qugstep, self.bound_optimal) if s is not None]
        if len(sources) != 1:
            raise ValueError("exactly one of step_size, qugstep, bound_optimal must be set")
        if self.step_size is not None and not self.step_size > 0:
            raise ValueError("step_size must be positive")
        if self.ansatz.n_qubits != self.hamiltonian.n_qubits:
            raise ValueError(
                f"ansatz acts on {self.ansatz.n_qubits} qubits, Hamiltonian on {self.hamiltonian.n_qubits}"
            )
        if self.gradient not in GRADIENT_METHODS:
            raise ValueError(f"unknown gradient method {self.gradient!r}")

    @property
    def budget(self) -> ShotBudget:
        return ShotBudget(self.shots, self.shot_interpretation)

    def with_step(self, h: float) -> "RunConfig":
        return replace(self, step_size=float(h), qugstep=None, bound_optimal=None)


class TraceRow(NamedTuple):
    iter: int
    noisy_energy: float
    exact_energy: float
    grad_inf_norm: float
    learning_rate: float
    cumulative_shots: int


@dataclass
class RunTrace:
    rows: list[TraceRow]
    step_size: float
    n_params: int
    shots_per_evaluation: int
    ground_energy: float | None = None
    error: str | None = None
    final_params: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def noisy_energies(self) -> np.ndarray:
        return np.array([r.noisy_energy for r in self.rows])

    @property
    def exact_energies(self) -> np.ndarray:
        return np.array([r.exact_energy for r in self.rows])

    @property
    def total_shots(self) -> int:
        return self.rows[-1].cumulative_shots if self.rows else 0

    @property
    def failed(self) -> bool:
        return self.error is not None

    def profile(self, window: int = 20, exact: bool = False) -> float:
        from .stepsize import performance_profile

        return performance_profile(self.exact_energies if exact else self.noisy_energies, window)

    def summary(self, window: int = 20) -> dict:
        out = {
            "step_size": self.step_size,
            "n_params": self.n_params,
            "iterations": len(self.rows),
            "shots_per_evaluation": self.shots_per_evaluation,
            "total_shots": self.total_shots,
            "ground_energy": self.ground_energy,
            "error": self.error,
        }
        if len(self.rows) >= window:
            out["final_profile"] = self.profile(window)
            out["final_exact_profile"] = self.profile(window, exact=True)
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(TRACE_COLUMNS)
        for r in self.rows:
            w.writerow(
                [
                    r.iter,
                    fmt_float(r.noisy_energy),
                    fmt_float(r.exact_energy),
                    fmt_float(r.grad_inf_norm),
                    fmt_float(r.learning_rate),
                    r.cumulative_shots,
                ]
            )
        return buf.getvalue()

    def write(self, path: str | os.PathLike) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(self.to_csv())


def read_trace_csv(path: str | os.PathLike) -> list[TraceRow]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != TRACE_COLUMNS:
            raise ValueError(f"unexpected trace header {header}")
        return [
            TraceRow(int(r[0]), float(r[1]), float(r[2]), float(r[3]), float(r[4]), int(r[5]))
            for r in reader
        ]


def resolve_step_size(config: RunConfig) -> tuple[float, dict]:
    """Return the finite-difference step and a description of where it came from."""
    if config.step_size is not None:
        return float(config.step_size), {"source": "fixed"}
    if config.bound_optimal is not None:
        from .stepsize import optimal_step

        spec = config.bound_optimal
        mu = spec.get("mu", "curvature_bound")
        if mu == "curvature_bound":
            mu = curvature_bound(config.hamiltonian)
        sigma = spec.get("sigma", "exact_initial")
        if sigma == "exact_initial":
            sigma = exact_sigma(
                config.ansatz, config.ansatz.initial_params(), config.hamiltonian, None, config.budget
            )
        h = optimal_step(float(mu), float(sigma), config.shots)
        return h, {"source": "bound_optimal", "mu": float(mu), "sigma": float(sigma)}
    from .stepsize import tune, tuner_config_from_dict

    result = tune(tuner_config_from_dict(config.qugstep, config))
    return result.h_n, {"source": "qugstep", "tuner": result.to_dict()}


def run_vqe(
    config: RunConfig,
    run_index: int = 0,
    rng: np.random.Generator | None = None,
    with_ground: bool = True,
) -> RunTrace:
    """One VQE optimization; the noise stream is ``(config.seed, run_index)``.

    Each iteration spends ``(d + 1) * N`` shots on a forward-difference gradient
    and records the gradient's baseline estimate as the noisy energy.
    """
    h_step, _ = resolve_step_size(config)
    ham, ansatz = config.hamiltonian, config.ansatz
    rng = make_rng(config.seed, run_index) if rng is None else rng
    oracle = EnergyEstimator(
        ansatz, ham, config.budget, rng, config.noise_backend, fixed_sigma=config.fixed_sigma
    )
    schedule = Schedule(config.schedule, config.gamma0, config.iterations)
    opt = init_state(config.optimizer, ansatz.n_params, **config.optimizer_hyper)
    params = ansatz.initial_params()
    trace = RunTrace(
        rows=[],
        step_size=h_step,
        n_params=ansatz.n_params,
        shots_per_evaluation=oracle.shots_per_call,
        ground_energy=ground_energy(ham) if with_ground else None,
    )
    cumulative = 0
    for t in range(config.iterations):
        rate = rate_at(schedule, t)
        exact = exact_energy_at(ansatz, params, ham)
        try:
            if config.gradient == "forward":
                est = forward_diff(oracle, params, h_step)
                grad, noisy = est.values, est.baseline_energy
                cumulative += est.shots_used
            else:
                grad, noisy = parameter_shift_grad(ansatz, params, ham), exact
        except FloatingPointError as err:
            trace.error = f"iteration {t}: {err}"
            log.warning("run aborted: %s", trace.error)
            break
        trace.rows.append(
            TraceRow(t, noisy, exact, float(np.max(np.abs(grad), initial=0.0)), rate, cumulative)
        )
        params, opt = update(opt, params, grad, rate)
        if not np.all(np.isfinite(params)):
            trace.error = f"iteration {t}: non-finite parameters after update"
            log.warning("run aborted: %s", trace.error)
            break
    trace.final_params = params
    return trace


@dataclass
class SweepCell:
    value: float
    traces: list[RunTrace]
    window: int = 20

    @property
    def profiles(self) -> np.ndarray:
        return np.array(
            [t.profile(self.window, exact=True) for t in self.traces if not t.failed and len(t) >= self.window]
        )

    @property
    def mean_profile(self) -> float:
        p = self.profiles
        return float(p.mean()) if p.size else float("nan")

    @property
    def std_profile(self) -> float:
        p = self.profiles
        return float(p.std()) if p.size else float("nan")

    def curves(self) -> tuple[np.ndarray, np.ndarray]:
        """Per-iteration mean and standard deviation of exact energies."""
        ok = [t.exact_energies for t in self.traces if not t.failed]
        if not ok:
            return np.array([]), np.array([])
        stack = np.vstack(ok)
        return stack.mean(axis=0), stack.std(axis=0)


SWEEP_AXES = ("step_size", "shots")


def sweep(
    base: RunConfig,
    axis: str,
    values: Sequence[float],
    repeats: int | None = None,
    window: int = 20,
) -> list[SweepCell]:
    """Run ``repeats`` seeded runs for each axis value.

    Run ``r`` of every cell uses stream ``(seed, r)``, so cells share noise
    seeds. A failing run is kept in the cell with its error set.
    """
    if axis not in SWEEP_AXES:
        raise ValueError(f"sweep axis must be one of {SWEEP_AXES}")
    if not values:
        raise ValueError("empty sweep axis")
    repeats = base.repeats if repeats is None else repeats
    g = ground_energy(base.hamiltonian)
    cells = []
    for v in values:
        cfg = base.with_step(v) if axis == "step_size" else replace(base, shots=int(v))
        traces = []
        for r in range(repeats):
            try:
                tr = run_vqe(cfg, run_index=r, with_ground=False)
            except (ValueError, FloatingPointError) as err:
                tr = RunTrace([], cfg.step_size or float("nan"), base.ansatz.n_params, 0, error=str(err))
            tr.ground_energy = g
            traces.append(tr)
        cells.append(SweepCell(int(v) if axis == "shots" else float(v), traces, window))
    return cells


def write_json(path: str | os.PathLike, payload) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_sweep(cells: Sequence[SweepCell], axis: str, out_dir: str | os.PathLike) -> dict:
    """Write one CSV per run plus mean/std curves and ``sweep_summary.json``."""
    os.makedirs(out_dir, exist_ok=True)
    summary = {"axis": axis, "cells": []}
    for ci, cell in enumerate(cells):
        paths = []
        for r, tr in enumerate(cell.traces):
            name = f"{axis}_{ci:02d}_run{r:03d}.csv"
            tr.write(os.path.join(out_dir, name))
            paths.append(name)
        mean, std = cell.curves()
        curve_name = f"{axis}_{ci:02d}_curve.csv"
        with open(os.path.join(out_dir, curve_name), "w", encoding="utf-8", newline="") as fh:
            fh.write("iter,mean_exact_energy,std_exact_energy\n")
            for t, (m, s) in enumerate(zip(mean, std)):
                fh.write(f"{t},{fmt_float(m)},{fmt_float(s)}\n")
        summary["cells"].append(
            {
                "value": cell.value,
                "mean_profile": cell.mean_profile,
                "std_profile": cell.std_profile,
                "failures": [tr.error for tr in cell.traces if tr.failed],
                "traces": paths,
                "curve": curve_name,
            }
        )
    summary["ground_energy"] = cells[0].traces[0].ground_energy if cells and cells[0].traces else None
    write_json(os.path.join(out_dir, "sweep_summary.json"), summary)
    return summary


def shot_plan(config: RunConfig) -> dict:
    """Shot accounting of a fixed-step run: ``T * (d + 1) * N``."""
    per_eval = MeasurementPlan(config.hamiltonian, config.budget).shots_per_evaluation
    d = config.ansatz.n_params
    return {
        "shots_per_evaluation": per_eval,
        "evaluations_per_iteration": d + 1,
        "total_shots": config.iterations * (d + 1) * per_eval,
    }
