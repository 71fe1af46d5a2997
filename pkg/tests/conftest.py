from __future__ import annotations

import random
from fractions import Fraction

import pytest

from lastsuccess import validate

EXAMPLE_P = ["1/6", "1/10", "1/12", "1/3", "1/12", "1/10", "1/5", "1/10", "1/12"]
EXAMPLE_W = [7, 4, 9, 10, 6, 3, 9, 9, 1]

ACCEPTANCE_LINES: list[str] = []


def random_fraction_instance(rng: random.Random, n_max: int = 12, unit_payoffs: bool = False):
    """Random exact instance: mostly interior p, occasionally 0 or 1."""
    n = rng.randint(1, n_max)
    p = []
    for _ in range(n):
        u = rng.random()
        if u < 0.05:
            p.append(Fraction(0))
        elif u < 0.10:
            p.append(Fraction(1))
        else:
            d = rng.randint(2, 12)
            p.append(Fraction(rng.randint(1, d - 1), d))
    if unit_payoffs:
        w = [Fraction(1)] * n
    else:
        w = [Fraction(rng.randint(1, 20), rng.randint(1, 4)) for _ in range(n)]
    return validate(p, w)


def corpus(seed: int, count: int, **kwargs):
    rng = random.Random(seed)
    return [random_fraction_instance(rng, **kwargs) for _ in range(count)]


@pytest.fixture
def example():
    return validate(EXAMPLE_P, EXAMPLE_W)


@pytest.fixture
def example_float():
    return validate([float(Fraction(x)) for x in EXAMPLE_P], [float(x) for x in EXAMPLE_W])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
