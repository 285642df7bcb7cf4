"""Compare the compiled kernels with the NumPy fallback.

Times each kernel on random states, then a short end-to-end VQE run with each
backend. Usage::

    python3 benchmarks/bench_kernels.py [--qubits 10] [--repeat 200]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from qugstep import _kernels_py, kernels
from qugstep.experiment import RunConfig, run_vqe
from qugstep.models import builtin_hw_efficient, load_hamiltonian

try:
    from qugstep import _kernels as _compiled
except ImportError:
    _compiled = None


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(5):
        t0 = time.perf_counter()
        for _ in range(repeat):
            fn()
        times.append(time.perf_counter() - t0)
    return min(times) / repeat


def kernel_cases(n: int, rng: np.random.Generator):
    dim = 1 << n
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    psi /= np.linalg.norm(psi)
    x, z = int(rng.integers(dim)), int(rng.integers(dim))
    ny = bin(x & z).count("1")
    u = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))[0]
    counts = rng.integers(0, 5, size=dim).astype(np.float64)
    zmasks = rng.integers(0, dim, size=8).astype(np.int64)
    return {
        "apply_pauli": lambda m: m.apply_pauli(psi, x, z, ny),
        "pauli_rotation": lambda m: m.pauli_rotation(psi.copy(), x, z, ny, 0.3),
        "apply_1q": lambda m: m.apply_1q(psi.copy(), n, n // 2, u),
        "cnot": lambda m: m.cnot(psi.copy(), n, 0, n - 1),
        "pauli_expectation": lambda m: m.pauli_expectation(psi, x, z, ny),
        "parity_sums": lambda m: m.parity_sums(counts, zmasks),
    }


def end_to_end(backend: str, iterations: int) -> float:
    kernels.set_backend(backend)
    ham = load_hamiltonian("builtin:toy4_lih_isospectral")
    cfg = RunConfig(ham, builtin_hw_efficient(4, 2), shots=3600, step_size=0.2236, iterations=iterations)
    t0 = time.perf_counter()
    run_vqe(cfg, with_ground=False)
    return time.perf_counter() - t0


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--qubits", type=int, default=10)
    ap.add_argument("--repeat", type=int, default=200)
    ap.add_argument("--iterations", type=int, default=50)
    args = ap.parse_args()

    if _compiled is None:
        print("compiled kernels not built; only the fallback can be timed")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<20}{'python [us]':>14}{'cython [us]':>14}{'speedup':>10}")
    for name, call in kernel_cases(args.qubits, rng).items():
        t_py = best_of(lambda: call(_kernels_py), args.repeat) * 1e6
        if _compiled is None:
            print(f"{name:<20}{t_py:>14.2f}{'-':>14}{'-':>10}")
            continue
        t_c = best_of(lambda: call(_compiled), args.repeat) * 1e6
        print(f"{name:<20}{t_py:>14.2f}{t_c:>14.2f}{t_py / t_c:>9.1f}x")

    t_py = end_to_end("python", args.iterations)
    line = f"\nVQE run (4 qubits, 8 params, {args.iterations} iterations): python {t_py:.3f} s"
    if _compiled is not None:
        t_c = end_to_end("cython", args.iterations)
        line += f", cython {t_c:.3f} s, speedup {t_py / t_c:.1f}x"
    print(line)


if __name__ == "__main__":
    main()
