"""First-order optimizers and learning-rate schedules."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

OPTIMIZER_KINDS = ("gd", "mgd", "adagrad", "rmsprop", "adam")
SCHEDULE_KINDS = ("constant", "cosine")

DEFAULT_HYPERPARAMS = {
    "gd": {},
    "mgd": {"beta": 0.9},
    "adagrad": {"eps": 1e-8},
    "rmsprop": {"rho": 0.9, "eps": 1e-8},
    "adam": {"beta1": 0.9, "beta2": 0.999, "eps": 1e-8},
}


@dataclass(frozen=True)
class OptimizerState:
    """Accumulators of one optimizer; ``update`` returns a new state.

    ``m`` holds the momentum / Adam first moment, ``v`` the squared-gradient
    accumulator. Unused accumulators stay empty.
    """

    kind: str
    n_params: int
    hyper: dict = field(default_factory=dict)
    t: int = 0
    m: np.ndarray = field(default=None, repr=False)
    v: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in OPTIMIZER_KINDS:
            raise ValueError(f"unknown optimizer {self.kind!r}; choose from {OPTIMIZER_KINDS}")
        unknown = set(self.hyper) - set(DEFAULT_HYPERPARAMS[self.kind])
        if unknown:
            raise ValueError(f"unknown hyperparameters for {self.kind}: {sorted(unknown)}")
        object.__setattr__(self, "hyper", {**DEFAULT_HYPERPARAMS[self.kind], **self.hyper})
        if self.m is None:
            object.__setattr__(self, "m", np.zeros(self.n_params))
        if self.v is None:
            object.__setattr__(self, "v", np.zeros(self.n_params))


def init_state(kind: str, n_params: int, **hyper) -> OptimizerState:
    return OptimizerState(kind, n_params, hyper)


def update(state: OptimizerState, params, grad, rate: float) -> tuple[np.ndarray, OptimizerState]:
    """One optimizer step with learning rate ``rate``."""
    params = np.asarray(params, dtype=float)
    g = np.asarray(grad, dtype=float)
    if params.shape != (state.n_params,) or g.shape != (state.n_params,):
        raise ValueError(
            f"expected length-{state.n_params} params and gradient, got {params.shape} and {g.shape}"
        )
    if rate < 0:
        raise ValueError("learning rate must be nonnegative")
    hp = state.hyper
    t = state.t + 1
    m, v = state.m, state.v
    if state.kind == "gd":
        new = params - rate * g
    elif state.kind == "mgd":
        m = hp["beta"] * m + g
        new = params - rate * m
    elif state.kind == "adagrad":
        v = v + g * g
        new = params - rate * g / (np.sqrt(v) + hp["eps"])
    elif state.kind == "rmsprop":
        v = hp["rho"] * v + (1 - hp["rho"]) * g * g
        new = params - rate * g / (np.sqrt(v) + hp["eps"])
    else:
        b1, b2 = hp["beta1"], hp["beta2"]
        m = b1 * m + (1 - b1) * g
        v = b2 * v + (1 - b2) * g * g
        m_hat = m / (1 - b1**t)
        v_hat = v / (1 - b2**t)
        new = params - rate * m_hat / (np.sqrt(v_hat) + hp["eps"])
    return new, replace(state, t=t, m=m, v=v)


@dataclass(frozen=True)
class Schedule:
    kind: str = "cosine"
    gamma0: float = 0.1
    total: int = 200

    def __post_init__(self):
        if self.kind not in SCHEDULE_KINDS:
            raise ValueError(f"unknown schedule {self.kind!r}")
        if not self.gamma0 > 0:
            raise ValueError("gamma0 must be positive")
        if self.total < 1:
            raise ValueError("schedule length must be >= 1")


def rate_at(schedule: Schedule, t: int) -> float:
    """Learning rate at iteration ``t``; cosine decays from gamma0 at 0 to 0 at T."""
    if not 0 <= t <= schedule.total:
        raise ValueError(f"iteration {t} outside [0, {schedule.total}]")
    if schedule.kind == "constant":
        return schedule.gamma0
    return schedule.gamma0 * 0.5 * (math.cos(math.pi * t / schedule.total) + 1.0)
