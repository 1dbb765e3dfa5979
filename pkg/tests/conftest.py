import itertools

import numpy as np
import pytest

from svardag.model import build_lagged_design
from svardag.simulate import SvarmSpec, simulate_svarm


def offdiag_positions(n):
    return [(i, j) for i in range(n) for j in range(n) if i != j]


def enumerate_supports(n, max_edges):
    """Every off-diagonal support of an n-node graph with at most ``max_edges`` edges."""
    pos = offdiag_positions(n)
    for k in range(max_edges + 1):
        for edges in itertools.combinations(pos, k):
            s = np.zeros((n, n), dtype=bool)
            for e in edges:
                s[e] = True
            yield s


def random_in_domain(rng, n, s=1.0, density=0.5, radius=0.9):
    """Non-negative zero-diagonal matrix rescaled to spectral radius radius*U(0,1)*s."""
    w = rng.uniform(0, 1, (n, n)) * (rng.random((n, n)) < density)
    np.fill_diagonal(w, 0)
    rho = np.max(np.abs(np.linalg.eigvals(w)))
    if rho > 0:
        w *= radius * rng.uniform(0.05, 1.0) * s / rho
    return w


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def small_problem():
    gt = simulate_svarm(SvarmSpec(n=5, p=2, t=400, seed=3))
    return gt, build_lagged_design(gt.x, 2)
