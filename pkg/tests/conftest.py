import sys

import numpy as np
import pytest

from wavebie.fundamental import compute_coefficients
from wavebie.laguerre import LaguerreParams


@pytest.fixture(scope="session")
def table_unit():
    """kappa = c = 1, N = 5."""
    return compute_coefficients(LaguerreParams(1.0, 1.0, 5))


@pytest.fixture(scope="session")
def table_gamma2():
    """kappa = 1, c = 1/2, N = 5 (gamma = 2)."""
    return compute_coefficients(LaguerreParams(1.0, 0.5, 5))


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for label in sorted(results):
            terminalreporter.write_line(results[label])
