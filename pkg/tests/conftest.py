import numpy as np
import pytest

from matnormtest import _kernels_py

try:
    from matnormtest import _kernels as _kernels_c
except ImportError:  # extension not built
    _kernels_c = None

BACKENDS = [_kernels_py] + ([_kernels_c] if _kernels_c is not None else [])


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(params=BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def backend(request):
    return request.param


def random_spd_array(rng, d, ridge=0.5):
    A = rng.standard_normal((d, d))
    return A @ A.T + ridge * np.eye(d)


ACCEPTANCE_LINES = []


def record_acceptance(criterion, passed, detail):
    """``passed`` is True, False, or None for a skipped criterion."""
    status = {True: "PASS", False: "FAIL", None: "SKIP"}[passed]
    ACCEPTANCE_LINES.append(f"criterion {criterion}: {status}  {detail}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
