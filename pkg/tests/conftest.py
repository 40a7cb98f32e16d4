import numpy as np
import pytest

from factorscreen.linalg import center_response, standardize_columns


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def standardized_pair(rng, n, p, factors=2):
    """Standardized design with a few common factors and a centred response."""
    Z = rng.standard_normal((n, factors))
    raw = Z @ rng.standard_normal((factors, p)) + rng.standard_normal((n, p))
    beta = np.zeros(p)
    beta[:3] = (3.0, -2.0, 1.5)
    X = standardize_columns(raw)
    y = center_response(X.values @ beta + 0.5 * rng.standard_normal(n))
    return X, y


@pytest.fixture
def small_pair(rng):
    return standardized_pair(rng, 10, 30)


# one line per acceptance criterion, printed at the end of the session
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
