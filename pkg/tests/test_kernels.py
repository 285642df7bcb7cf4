import numpy as np
import pytest

from qugstep import _kernels_py, kernels
from qugstep.experiment import RunConfig, run_vqe

compiled = pytest.importorskip("qugstep._kernels", reason="compiled kernels not built")


def _state(rng, n):
    psi = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return psi / np.linalg.norm(psi)


def _masks(rng, n):
    x, z = int(rng.integers(1 << n)), int(rng.integers(1 << n))
    return x, z, bin(x & z).count("1")


@pytest.mark.parametrize("n", [1, 2, 5, 9])
def test_backends_agree(n, rng):
    for _ in range(10):
        psi = _state(rng, n)
        x, z, ny = _masks(rng, n)
        assert np.allclose(compiled.apply_pauli(psi, x, z, ny), _kernels_py.apply_pauli(psi, x, z, ny))
        assert compiled.pauli_expectation(psi, x, z, ny) == pytest.approx(
            _kernels_py.pauli_expectation(psi, x, z, ny), abs=1e-12
        )
        a, b = psi.copy(), psi.copy()
        compiled.pauli_rotation(a, x, z, ny, 0.37)
        _kernels_py.pauli_rotation(b, x, z, ny, 0.37)
        assert np.allclose(a, b)
        u = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))[0]
        q = int(rng.integers(n))
        a, b = psi.copy(), psi.copy()
        compiled.apply_1q(a, n, q, u)
        _kernels_py.apply_1q(b, n, q, u)
        assert np.allclose(a, b)
        if n > 1:
            c, t = rng.choice(n, 2, replace=False)
            a, b = psi.copy(), psi.copy()
            compiled.cnot(a, n, int(c), int(t))
            _kernels_py.cnot(b, n, int(c), int(t))
            assert np.array_equal(a, b)
        w = rng.integers(0, 10, 1 << n).astype(float)
        zm = rng.integers(0, 1 << n, 4).astype(np.int64)
        assert np.allclose(compiled.parity_sums(w, zm), _kernels_py.parity_sums(w, zm))


def test_set_backend_switches_and_runs_agree(h2):
    ham, a = h2
    cfg = RunConfig(ham, a, shots=36, step_size=0.4, iterations=20)
    try:
        assert kernels.set_backend("python") == "python"
        assert kernels.cnot is _kernels_py.cnot
        slow = run_vqe(cfg)
        assert kernels.set_backend("cython") == "cython"
        fast = run_vqe(cfg)
    finally:
        kernels.set_backend("auto")
    assert np.allclose(slow.exact_energies, fast.exact_energies, atol=1e-12)
    assert np.allclose(slow.noisy_energies, fast.noisy_energies, atol=1e-12)


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.set_backend("fortran")
