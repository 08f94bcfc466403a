import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

_ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record one acceptance line; printed in the terminal summary."""

    def _report(criterion, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)

    return _report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_stochastic(rng, n, sparsity=0.0):
    T = rng.random((n, n))
    if sparsity:
        T = T * (rng.random((n, n)) > sparsity)
        T[np.arange(n), (np.arange(n) + 1) % n] += 0.1  # keep irreducible
    return T / T.sum(axis=1, keepdims=True)


def random_rate(rng, n):
    G = rng.random((n, n)) * (rng.random((n, n)) > 0.3)
    G[np.arange(n), (np.arange(n) + 1) % n] += 0.2
    np.fill_diagonal(G, 0.0)
    np.fill_diagonal(G, -G.sum(axis=1))
    return G
