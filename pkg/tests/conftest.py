import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from finitefree.polycore import from_roots


def negative_rational_roots(rng: random.Random, N: int):
    return [-Fraction(rng.randint(1, 40), rng.randint(1, 12)) for _ in range(N)]


def rational_roots(rng: random.Random, N: int):
    return [Fraction(rng.randint(-30, 30), rng.randint(1, 9)) for _ in range(N)]


@pytest.fixture
def rng():
    return random.Random(20261018)


@pytest.fixture
def p12():
    """(x + 1)(x + 2)."""
    return from_roots([-1, -2])


fractions_st = st.fractions(min_value=-5, max_value=5, max_denominator=7)
negative_fractions_st = st.fractions(min_value=-5, max_value=Fraction(-1, 7), max_denominator=7)


def root_lists(elements, min_size=1, max_size=6):
    return st.lists(elements, min_size=min_size, max_size=max_size)


_ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def acceptance(request):
    """``acceptance(k, ok, detail)`` records one criterion line for the summary."""
    lines = request.config.stash.setdefault(_ACCEPTANCE_KEY, [])

    def record(k, ok, detail):
        line = f"criterion {k:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        lines.append((k, line))
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
