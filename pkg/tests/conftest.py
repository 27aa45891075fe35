from fractions import Fraction

import numpy as np
import pytest

from ellgenus import elliptic as ell
from ellgenus.genus import GenusSpec

TAUS = (1.2j, 0.3 + 1.1j, -0.2 + 0.9j, 0.45 + 1.6j, 1j)


def random_spec(rng, tau, omega=1.0):
    """Generic member: nu well inside the period cell, away from half-periods."""
    L = ell.LatticeParams.from_tau(tau, omega)
    while True:
        s, t = rng.uniform(0.15, 0.85, 2)
        if abs(s - 0.5) + abs(t - 0.5) > 0.1:
            break
    nu = s * L.omega + t * L.omega_prime
    mu = complex(*rng.normal(size=2)) * 0.5
    return GenusSpec(mu, nu, L)


def random_seed(rng, bound=9):
    return tuple(Fraction(int(rng.integers(-bound, bound + 1)), int(rng.integers(1, bound + 1))) for _ in range(4))


def rel_err(a, b):
    return abs(a - b) / max(1.0, abs(b))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=TAUS[:3], ids=lambda t: f"tau={t}")
def lattice(request):
    return ell.LatticeParams.from_tau(request.param)


@pytest.fixture
def spec():
    L = ell.LatticeParams.from_tau(0.3 + 1.1j)
    return GenusSpec(0.2 - 0.1j, 0.4 + 0.3j, L)


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
