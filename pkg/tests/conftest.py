import numpy as np
import pytest

# lines recorded by the acceptance tests, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def rel_err(X, Y) -> float:
    """Spectral-norm distance scaled by ``max(1, ||Y||)``."""
    X = np.asarray(X)
    Y = np.asarray(Y)
    return float(np.linalg.norm(X - Y, 2) / max(1.0, np.linalg.norm(Y, 2)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
