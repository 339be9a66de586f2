import math

import numpy as np
import pytest

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def hermite_direct(x: float, k: int) -> float:
    """h_k(x) from the explicit sum for H_k with exact integer factorials."""
    poly = sum(
        (-1) ** m * math.factorial(k) // (math.factorial(m) * math.factorial(k - 2 * m))
        * (2 * x) ** (k - 2 * m)
        for m in range(k // 2 + 1)
    )
    return poly * math.exp(-x * x / 2) / math.sqrt(2**k * math.factorial(k) * math.sqrt(math.pi))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
