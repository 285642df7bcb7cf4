"""Kernel backend selection.

The compiled extension is preferred. Set ``QUGSTEP_PURE_PYTHON=1`` to force
the NumPy fallback at import, or call :func:`set_backend` later. Callers must
reach the kernels through this module (``kernels.cnot(...)``) so a switch
takes effect everywhere.
"""

from __future__ import annotations

import os

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

BACKENDS = ("auto", "cython", "python")
_NAMES = ("apply_pauli", "pauli_rotation", "apply_1q", "cnot", "pauli_expectation", "parity_sums")

BACKEND = "python"


def available() -> tuple[str, ...]:
    return ("cython", "python") if _compiled is not None else ("python",)


def set_backend(name: str = "auto") -> str:
    """Rebind the kernel functions; returns the backend actually in use."""
    global BACKEND
    if name not in BACKENDS:
        raise ValueError(f"unknown backend {name!r}; choose from {BACKENDS}")
    if name == "cython" and _compiled is None:
        raise ImportError("compiled kernels are not built; reinstall with Cython available")
    use_compiled = _compiled is not None and name != "python"
    impl = _compiled if use_compiled else _kernels_py
    g = globals()
    for fn in _NAMES:
        g[fn] = getattr(impl, fn)
    BACKEND = "cython" if use_compiled else "python"
    return BACKEND


set_backend("python" if os.environ.get("QUGSTEP_PURE_PYTHON", "") not in ("", "0") else "auto")

__all__ = ["BACKEND", "BACKENDS", "available", "set_backend", *_NAMES]
