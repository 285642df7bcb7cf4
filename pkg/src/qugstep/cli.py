"""Command-line interface: ``qugstep run|tune|sweep|bound|ground|sigma``.

Every subcommand that writes files produces the same bytes for the same
config and seed.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import replace

import numpy as np

from . import kernels
from .config import load_config
from .experiment import SWEEP_AXES, resolve_step_size, run_vqe, shot_plan, sweep, write_json, write_sweep
from .measurement import MeasurementPlan, exact_sigma
from .models import load_hamiltonian
from .pauli import ground_energy, norm_bound
from .stepsize import bound_terms, error_bound, optimal_step, tune, tuner_config_from_dict

DEFAULT_OUTPUT_DIR = "qugstep_out"


def _dump(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _config(args):
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    out = args.output_dir or cfg.output_dir or DEFAULT_OUTPUT_DIR
    return replace(cfg, output_dir=out)


def cmd_run(args) -> int:
    cfg = _config(args)
    h, source = resolve_step_size(cfg)
    fixed = cfg.with_step(h)
    os.makedirs(cfg.output_dir, exist_ok=True)
    runs = []
    for r in range(cfg.repeats):
        trace = run_vqe(fixed, run_index=r)
        name = f"run_{r:03d}.csv"
        trace.write(os.path.join(cfg.output_dir, name))
        runs.append({"trace": name, **trace.summary()})
    summary = {
        "step_size": h,
        "step_source": source,
        "seed": cfg.seed,
        "shot_plan": shot_plan(fixed),
        "runs": runs,
    }
    write_json(os.path.join(cfg.output_dir, "run_summary.json"), summary)
    sys.stdout.write(_dump(summary))
    return 1 if any(r["error"] for r in runs) else 0


def cmd_tune(args) -> int:
    cfg = _config(args)
    if cfg.qugstep is None:
        raise SystemExit("tune needs a 'qugstep' block in the config")
    result = tune(tuner_config_from_dict(cfg.qugstep, cfg))
    text = result.to_json()
    os.makedirs(cfg.output_dir, exist_ok=True)
    with open(os.path.join(cfg.output_dir, "tune_result.json"), "w", encoding="utf-8") as fh:
        fh.write(text)
    sys.stdout.write(text)
    return 0


def cmd_sweep(args) -> int:
    cfg = _config(args)
    # Shot sweeps need a fixed step; a tuned or derived source is resolved once.
    base = cfg if cfg.step_size is not None else cfg.with_step(resolve_step_size(cfg)[0])
    values = [int(v) for v in args.values] if args.axis == "shots" else list(args.values)
    cells = sweep(base, args.axis, values, repeats=args.repeats, window=args.window)
    summary = write_sweep(cells, args.axis, cfg.output_dir)
    sys.stdout.write(_dump(summary))
    return 0


def cmd_bound(args) -> int:
    if args.hmin <= 0 or args.hmax <= args.hmin or args.points < 2:
        raise SystemExit("need 0 < hmin < hmax and points >= 2")
    h_opt = optimal_step(args.mu, args.sigma, args.shots)
    grid = np.geomspace(args.hmin, args.hmax, args.points)
    curve = []
    for h in grid:
        trunc, noise = bound_terms(args.mu, args.sigma, float(h), args.shots)
        curve.append({"h": float(h), "bound": trunc + noise, "truncation": trunc, "noise": noise})
    payload = {
        "mu": args.mu,
        "sigma": args.sigma,
        "shots": args.shots,
        "optimal_step": h_opt,
        "bound_at_optimal_step": error_bound(args.mu, args.sigma, h_opt, args.shots),
        "curve": curve,
    }
    sys.stdout.write(_dump(payload))
    return 0


def cmd_ground(args) -> int:
    ham = load_hamiltonian(args.hamiltonian)
    payload = {
        "n_qubits": ham.n_qubits,
        "n_terms": len(ham),
        "ground_energy": ground_energy(ham),
        "norm_bound": norm_bound(ham),
    }
    sys.stdout.write(_dump(payload))
    return 0


def cmd_sigma(args) -> int:
    cfg = _config(args)
    params = cfg.ansatz.initial_params()
    plan = MeasurementPlan(cfg.hamiltonian, cfg.budget)
    payload = {
        "sigma": exact_sigma(cfg.ansatz, params, cfg.hamiltonian, None, cfg.budget),
        "shots": cfg.shots,
        "shot_interpretation": cfg.shot_interpretation,
        "measured_groups": len(plan.groups),
        "shots_per_evaluation": plan.shots_per_evaluation,
    }
    sys.stdout.write(_dump(payload))
    return 0


def _global_flags(parser: argparse.ArgumentParser, default) -> None:
    parser.add_argument("--seed", type=int, default=default, help="override the config's master seed")
    parser.add_argument("--output-dir", default=default, help="directory for CSV/JSON outputs")
    parser.add_argument("--backend", choices=kernels.BACKENDS, default=default, help="statevector kernels")
    parser.add_argument("-v", "--verbose", action="store_true", default=False if default is None else default)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qugstep", description=__doc__.splitlines()[0])
    _global_flags(parser, None)
    # Flags may also follow the subcommand; SUPPRESS keeps the subparser from
    # resetting values given before it.
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", parents=[common], help="run VQE from a config")
    p.add_argument("config")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("tune", parents=[common], help="grid-search the step size, print the result JSON")
    p.add_argument("config")
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("sweep", parents=[common], help="repeat runs over step sizes or shot budgets")
    p.add_argument("config")
    p.add_argument("--axis", choices=SWEEP_AXES, required=True)
    p.add_argument("--values", type=float, nargs="+", required=True)
    p.add_argument("--repeats", type=int, default=None)
    p.add_argument("--window", type=int, default=20)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bound", parents=[common], help="error bound curve and its minimizer")
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--shots", type=int, required=True)
    p.add_argument("--hmin", type=float, default=1e-3)
    p.add_argument("--hmax", type=float, default=10.0)
    p.add_argument("--points", type=int, default=41)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("ground", parents=[common], help="exact ground energy of a Hamiltonian file")
    p.add_argument("hamiltonian", help="path or builtin:<name>")
    p.set_defaults(func=cmd_ground)

    p = sub.add_parser("sigma", parents=[common], help="single-shot noise scale at the initial point")
    p.add_argument("config")
    p.set_defaults(func=cmd_sigma)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.backend:
        kernels.set_backend(args.backend)
    try:
        return args.func(args)
    except (ValueError, OSError) as err:
        print(f"qugstep: error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
