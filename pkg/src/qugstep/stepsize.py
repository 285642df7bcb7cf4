"""Step-size selection for forward differences under a shot budget.

For a forward difference with noisy evaluations the mean squared error of the
derivative estimate is bounded by

    error_bound(mu, sigma, h, N) = mu**2 * h**2 / 4 + 2 * sigma**2 / (h**2 * N)

where ``mu`` bounds ``|E''|`` and ``sigma`` bounds the single-shot standard
deviation. The bound is minimized at ``h_N = (8 sigma**2 / (mu**2 N))**(1/4)``,
so step sizes for two budgets are related by ``h_N = h_M * (M / N)**(1/4)``.
:func:`tune` uses that relation: a grid search over candidate steps with a
cheap test budget, then a rescale to the target budget.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .experiment import RunConfig, run_vqe
from .measurement import make_rng

_TUNER_STREAM = 1


def error_bound(mu: float, sigma: float, h: float, n: int) -> float:
    if not h > 0:
        raise ValueError(f"step size must be positive, got {h}")
    if n < 1:
        raise ValueError("shot count must be >= 1")
    return 0.25 * mu * mu * h * h + 2.0 * sigma * sigma / (h * h * n)


def bound_terms(mu: float, sigma: float, h: float, n: int) -> tuple[float, float]:
    """Truncation and noise parts of :func:`error_bound`."""
    return 0.25 * mu * mu * h * h, 2.0 * sigma * sigma / (h * h * n)


def optimal_step(mu: float, sigma: float, n: int) -> float:
    """Minimizer of :func:`error_bound` over ``h > 0``."""
    if not mu > 0:
        raise ValueError("curvature bound mu must be positive")
    if not sigma > 0:
        raise ValueError("noise bound sigma must be positive")
    if n < 1:
        raise ValueError("shot count must be >= 1")
    return 8.0**0.25 * math.sqrt(sigma) / (math.sqrt(mu) * n**0.25)


def scale_step(h_hat: float, n_hat: int, n: int) -> float:
    """Carry a step tuned at ``n_hat`` shots over to ``n`` shots."""
    if not h_hat > 0 or n_hat < 1 or n < 1:
        raise ValueError("scale_step needs h_hat > 0 and shot counts >= 1")
    return h_hat * (n_hat / n) ** 0.25


def performance_profile(values: Sequence[float], window: int = 20) -> float:
    """Mean of the last ``window`` objective values."""
    values = np.asarray(values, dtype=float)
    if window < 1 or values.shape[0] < window:
        raise ValueError(f"need at least {window} values, got {values.shape[0]}")
    return float(values[-window:].mean())


@dataclass(frozen=True)
class TunerConfig:
    candidates: tuple[float, ...]
    target_shots: int
    test_shots: int
    recipe: RunConfig
    runs: int = 5
    window: int = 20
    test_iterations: int | None = None
    seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "candidates", tuple(float(c) for c in self.candidates))
        if not self.candidates or any(not c > 0 for c in self.candidates):
            raise ValueError("candidate set must be nonempty and positive")
        if not 1 <= self.test_shots <= self.target_shots:
            raise ValueError("need 1 <= test_shots <= target_shots")
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if self.window > self.iterations:
            raise ValueError(f"window {self.window} exceeds {self.iterations} test iterations")

    @property
    def iterations(self) -> int:
        return self.test_iterations or self.recipe.iterations

    @property
    def master_seed(self) -> int:
        return self.recipe.seed if self.seed is None else self.seed


@dataclass
class TunerResult:
    h_hat: float
    h_n: float
    profiles: dict[float, float]
    trial_profiles: dict[float, list[float]]
    shots_spent_tuning: int
    shots_tuning_evaluations: int
    test_shots: int
    target_shots: int
    failures: dict[float, list[str]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        def num(x):
            return x if math.isfinite(x) else None

        return {
            "h_hat": self.h_hat,
            "h_N": self.h_n,
            "test_shots": self.test_shots,
            "target_shots": self.target_shots,
            "profiles": [{"h": h, "profile": num(p)} for h, p in self.profiles.items()],
            "trial_profiles": [
                {"h": h, "profiles": [num(p) for p in ps]} for h, ps in self.trial_profiles.items()
            ],
            "shots_spent_tuning": self.shots_spent_tuning,
            "shots_per_evaluation_with_tuning": self.shots_tuning_evaluations + self.target_shots,
            "shots_tuning_without_gradient_factor": self.shots_tuning_evaluations,
            "failures": [{"h": h, "errors": e} for h, e in self.failures.items()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def tune(config: TunerConfig) -> TunerResult:
    """Grid search over candidate steps at the test budget, then rescale.

    Trial ``r`` of candidate ``c`` draws from stream ``(seed, 1, c, r)``. The
    score of a candidate is the mean noisy-energy profile over its trials; a
    trial that fails scores ``+inf``. Ties go to the larger step.
    """
    base = replace(config.recipe, shots=config.test_shots, iterations=config.iterations)
    profiles: dict[float, float] = {}
    trial_profiles: dict[float, list[float]] = {}
    failures: dict[float, list[str]] = {}
    shots = 0
    for ci, h in enumerate(config.candidates):
        cfg = base.with_step(h)
        scores = []
        for r in range(config.runs):
            rng = make_rng(config.master_seed, _TUNER_STREAM, ci, r)
            trace = run_vqe(cfg, rng=rng, with_ground=False)
            shots += trace.total_shots
            if trace.failed or len(trace) < config.window:
                failures.setdefault(h, []).append(trace.error or "short trace")
                scores.append(math.inf)
                continue
            p = trace.profile(config.window)
            scores.append(p if math.isfinite(p) else math.inf)
        trial_profiles[h] = scores
        profiles[h] = float(np.mean(scores))
    best = min(profiles.values())
    h_hat = max(h for h, p in profiles.items() if p == best)
    return TunerResult(
        h_hat=h_hat,
        h_n=scale_step(h_hat, config.test_shots, config.target_shots),
        profiles=profiles,
        trial_profiles=trial_profiles,
        shots_spent_tuning=shots,
        shots_tuning_evaluations=len(config.candidates) * config.runs * config.test_shots,
        test_shots=config.test_shots,
        target_shots=config.target_shots,
        failures=failures,
    )


def tuner_config_from_dict(block: dict, recipe: RunConfig) -> TunerConfig:
    """Build a :class:`TunerConfig` from a ``qugstep`` config block."""
    known = {"candidates", "test_shots", "target_shots", "runs", "window", "test_iterations", "seed"}
    unknown = set(block) - known
    if unknown:
        raise ValueError(f"unknown qugstep keys: {sorted(unknown)}")
    return TunerConfig(
        candidates=tuple(block["candidates"]),
        target_shots=int(block.get("target_shots", recipe.shots)),
        test_shots=int(block["test_shots"]),
        recipe=recipe.with_step(1.0),
        runs=int(block.get("runs", 5)),
        window=int(block.get("window", 20)),
        test_iterations=block.get("test_iterations"),
        seed=block.get("seed"),
    )
