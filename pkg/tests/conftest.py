import numpy as np
import pytest

from qugstep.models import builtin_h2, builtin_hw_efficient, load_hamiltonian


@pytest.fixture(scope="session")
def h2():
    return builtin_h2()


@pytest.fixture(scope="session")
def toy4():
    return load_hamiltonian("builtin:toy4_lih_isospectral"), builtin_hw_efficient(4, 2)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


_ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


@pytest.fixture
def acceptance(request):
    """``report(criterion, ok, detail)`` records one summary line."""
    lines = request.config.stash[_ACCEPTANCE]

    def report(criterion, ok, detail):
        line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}"
        lines.append((criterion, line))
        print(line)
        return ok

    return report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
