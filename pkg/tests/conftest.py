import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from expcond.polytope import Polytope

settings.register_profile(
    "default",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def rand_rat(rng: random.Random, lo=-3, hi=3, den=2) -> Fraction:
    return Fraction(rng.randint(lo * den, hi * den), rng.randint(1, den))


def rand_points(rng, m, k, lo=-3, hi=3, den=2):
    return [tuple(rand_rat(rng, lo, hi, den) for _ in range(m)) for _ in range(k)]


def rand_polytope(rng, m, k, lo=-3, hi=3, den=2, full=False) -> Polytope:
    while True:
        P = Polytope(rand_points(rng, m, k, lo, hi, den))
        if not full or P.dim == m:
            return P


small_rat = st.fractions(min_value=-3, max_value=3, max_denominator=3)


def points(m, min_size=1, max_size=5):
    return st.lists(st.tuples(*[small_rat] * m), min_size=min_size, max_size=max_size)


def polytopes(m, min_size=1, max_size=5):
    return points(m, min_size, max_size).map(Polytope)


# -- acceptance summary ------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    def _report(line: str) -> None:
        ACCEPTANCE_LINES.append(line)
        print(line)

    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
