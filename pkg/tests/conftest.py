import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from rieszmd.fourier import dft_soliton
from rieszmd.soliton import SolitonProblem, newton_solve, transfer_callable
from rieszmd.tridomain import DomainPartition, RationalOrder

settings.register_profile(
    "default",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
settings.load_profile("default")

# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def dft_soliton_45():
    return dft_soliton(0.8)


@pytest.fixture(scope="session")
def soliton_45(dft_soliton_45):
    """Converged alpha = 4/5 profile on b = -a = 1, N = 200, seeded from the DFT solution."""
    problem = SolitonProblem(RationalOrder(4, 5), DomainPartition.uniform(-1.0, 1.0, 200, 1e-2))
    sol = dft_soliton_45
    far = float(sol.values[-1]) * (math.pi * sol.grid.L) ** 1.8
    Q0 = transfer_callable(sol, problem.grid, far_limit=far)
    Q, record = newton_solve(problem, Q0)
    return problem, Q, record


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
