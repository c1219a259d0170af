from fractions import Fraction

import pytest

from gcsimplex.simplex import DomainSpec


@pytest.fixture
def fixture_domain():
    return DomainSpec("fixture", 6, 1, e_neutral=-100.0, e_anion=-99.0, e_cation=-90.0)


@pytest.fixture
def symmetric_domain():
    return DomainSpec("symmetric", 8, 1, e_neutral=-50.0, e_anion=-47.0, e_cation=-47.0)


def exact_weights(nu, nu0, q):
    """Rational reference weights on the line through the edge point nu0."""
    nu, nu0, q = Fraction(nu), Fraction(nu0), Fraction(q)
    w_zero = 1 - abs(nu0) / q
    return ((abs(nu0) - nu) / (2 * q), w_zero, (abs(nu0) + nu) / (2 * q))


def exact_energy(domain, weights):
    w_minus, w_zero, w_plus = (Fraction(w) for w in weights)
    return (w_minus * Fraction(domain.e_cation) + w_zero * Fraction(domain.e_neutral)
            + w_plus * Fraction(domain.e_anion))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
