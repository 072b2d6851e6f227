import numpy as np
import pytest

from clusterpeierls import _kernels_numba, _kernels_numpy

ACCEPTANCE_LINES = []


@pytest.fixture(params=[_kernels_numba, _kernels_numpy], ids=lambda m: m.NAME)
def kern(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20080618)


def random_qubit(rng):
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    return v / np.linalg.norm(v)


def random_amplitudes(rng, n):
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return v / np.linalg.norm(v)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
