"""Shared fixtures and brute-force oracles.

The oracles here deliberately avoid the package's dlog tables and
convolutions: they enumerate tuples directly and evaluate the quadratic
character by Euler's criterion.
"""

from itertools import product

import pytest

from charsums.field import euler_criterion, make_field
from charsums.sets import residue_set

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def F7():
    return make_field(7)


def rset(p, values):
    return residue_set(make_field(p), values)


def brute_additive_energy(A, B):
    return sum(1 for a, a2, b, b2 in product(A, A, B, B) if (a + b - a2 - b2) % A.p == 0)


def brute_multiplicative_energy(A, B):
    p = A.p
    A1 = [a for a in A if a]
    B1 = [b for b in B if b]
    return sum(1 for x1, x2, y1, y2 in product(A1, A1, B1, B1) if (x1 * y1 - x2 * y2) % p == 0)


def brute_sumset(A, B):
    return sorted({(a + b) % A.p for a in A for b in B})


def legendre_sum(p, terms):
    """Sum of Legendre symbols by Euler's criterion."""
    return sum(euler_criterion(p, t) for t in terms)
