"""Weierstrass and Jacobi functions: numeric evaluation and Laurent expansions.

Conventions: the lattice is generated by the full periods ``2*omega`` and
``2*omega_prime`` with ``tau = omega_prime / omega`` in the upper half plane,
``nome_bar = exp(i*pi*tau)``, and ``eta = zeta(omega)``.  Numeric evaluation
goes through the theta series

    theta1(z | tau) = 2 * sum_n (-1)^n nome_bar^((n+1/2)^2) sin((2n+1) z)

after reducing the argument into the fundamental parallelogram centred at 0.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .series import COMPLEX, EXACT, LaurentSeries, coerce, field_of

THETA_TOL = 1e-18
THETA_MAX_TERMS = 64
POLE_GUARD = 1e-8


class LatticeError(ValueError):
    pass


class PoleError(ArithmeticError):
    pass


class ConvergenceError(RuntimeError):
    pass


def _check_tau(tau):
    if complex(tau).imag <= 0:
        raise LatticeError(f"Im(tau) must be positive, got tau={tau}")


# ---------------------------------------------------------------------------
# theta_1


def _sin_shift(w, k):
    # sin(w + k*pi/2) without rounding k*pi/2
    k %= 4
    if k == 0:
        return cmath.sin(w)
    if k == 1:
        return cmath.cos(w)
    if k == 2:
        return -cmath.sin(w)
    return -cmath.cos(w)


def theta1(z, tau, deriv=0):
    """``d^deriv/dz^deriv theta1(z | tau)`` by the truncated sine series."""
    _check_tau(tau)
    z = complex(z)
    tau = complex(tau)
    total = 0j
    prev = math.inf
    for n in range(THETA_MAX_TERMS):
        m = 2 * n + 1
        term = cmath.exp(1j * math.pi * tau * (n + 0.5) ** 2) * m ** deriv * _sin_shift(m * z, deriv)
        if n % 2:
            term = -term
        total += term
        size = abs(term)
        if size <= THETA_TOL * abs(total) and size <= prev:
            break
        prev = size
    return 2 * total


def theta1_dz(z, tau):
    return theta1(z, tau, 1)


def theta1_prime0(tau):
    return theta1(0, tau, 1)


def triple_product_rhs(x, tau, tol=1e-18, max_terms=10_000):
    """``i sinh(x/2) prod_k (1-q^2k e^x)(1-q^2k e^-x)/(1-q^2k)^2`` with ``q = nome_bar``."""
    _check_tau(tau)
    q2 = cmath.exp(2j * math.pi * complex(tau))
    ex, emx = cmath.exp(x), cmath.exp(-x)
    prod = 1j * cmath.sinh(x / 2)
    qk = 1
    for _ in range(max_terms):
        qk *= q2
        factor = (1 - qk * ex) * (1 - qk * emx) / (1 - qk) ** 2
        prod *= factor
        if abs(factor - 1) < tol:
            break
    return prod


def triple_product_residual(x, tau):
    """Relative gap between ``theta1(ix/2)/theta1'(0)`` and :func:`triple_product_rhs`."""
    lhs = theta1(0.5j * x, tau) / theta1_prime0(tau)
    rhs = triple_product_rhs(x, tau)
    return abs(lhs - rhs) / max(abs(rhs), 1e-300)


# ---------------------------------------------------------------------------
# Eisenstein series and the lattice


def _lambert(q, power, tol=1e-18, max_terms=20_000):
    total = 0j
    qn = 1
    for n in range(1, max_terms):
        qn *= q
        term = n ** power * qn / (1 - qn)
        total += term
        if abs(term) <= tol * max(abs(total), 1e-300) and abs(qn) < 0.5:
            return total
    raise ConvergenceError("Lambert series did not converge; reduce the lattice basis first")


def _eisenstein(tau):
    q = cmath.exp(2j * math.pi * tau)
    e2 = 1 - 24 * _lambert(q, 1)
    e4 = 1 + 240 * _lambert(q, 3)
    e6 = 1 - 504 * _lambert(q, 5)
    return e2, e4, e6


def invariants_from_lattice(omega, omega_prime):
    """``(g2, g3)`` for the lattice with half-periods ``omega``, ``omega_prime``."""
    omega, omega_prime = complex(omega), complex(omega_prime)
    tau = omega_prime / omega
    if abs(tau.imag) < 1e-14 * abs(tau):
        raise LatticeError("degenerate lattice: periods are collinear")
    _check_tau(tau)
    _, e4, e6 = _eisenstein(tau)
    s = math.pi / omega
    return s ** 4 * e4 / 12, s ** 6 * e6 / 216


def eta_from_lattice(omega, omega_prime):
    """``eta = zeta(omega)`` via the weight-two Eisenstein series."""
    omega, omega_prime = complex(omega), complex(omega_prime)
    tau = omega_prime / omega
    _check_tau(tau)
    e2, _, _ = _eisenstein(tau)
    return math.pi ** 2 * e2 / (12 * omega)


@dataclass(frozen=True)
class LatticeParams:
    omega: complex
    omega_prime: complex
    tau: complex
    nome_bar: complex
    g2: complex
    g3: complex
    eta: complex
    eta_prime: complex

    def __post_init__(self):
        if self.tau.imag <= 0:
            raise LatticeError(f"Im(tau) must be positive, got {self.tau}")
        if abs(self.nome_bar) >= 1:
            raise LatticeError("nome must lie inside the unit disc")

    @classmethod
    def from_periods(cls, omega, omega_prime):
        omega, omega_prime = complex(omega), complex(omega_prime)
        if omega == 0:
            raise LatticeError("omega must be nonzero")
        tau = omega_prime / omega
        if tau.imag <= 0:
            raise LatticeError(f"Im(omega'/omega) must be positive, got tau={tau}")
        g2, g3 = invariants_from_lattice(omega, omega_prime)
        eta = eta_from_lattice(omega, omega_prime)
        # eta' = zeta(omega') straight from the theta quotient at pi*tau/2,
        # kept independent of the Legendre relation so that it can be tested
        v = math.pi * tau / 2
        eta_prime = eta * omega_prime / omega + math.pi / (2 * omega) * theta1(v, tau, 1) / theta1(v, tau)
        return cls(omega, omega_prime, tau, cmath.exp(1j * math.pi * tau), g2, g3, eta, eta_prime)

    @classmethod
    def from_tau(cls, tau, omega=1.0):
        return cls.from_periods(omega, complex(tau) * omega)

    @classmethod
    def from_invariants(cls, g2, g3):
        return lattice_from_invariants(g2, g3)

    @property
    def min_period(self):
        w1, w2 = 2 * self.omega, 2 * self.omega_prime
        return min(abs(w1), abs(w2), abs(w1 + w2), abs(w1 - w2))

    def coords(self, x):
        """Real coordinates ``(s, t)`` with ``x = 2*omega*s + 2*omega_prime*t``."""
        w1, w2 = 2 * self.omega, 2 * self.omega_prime
        x = complex(x)
        det = w1.real * w2.imag - w1.imag * w2.real
        s = (x.real * w2.imag - x.imag * w2.real) / det
        t = (w1.real * x.imag - w1.imag * x.real) / det
        return s, t

    def reduce(self, x):
        """``(xr, m, n)`` with ``x = xr + 2m*omega + 2n*omega_prime``, ``xr`` centred."""
        s, t = self.coords(x)
        m, n = math.floor(s + 0.5), math.floor(t + 0.5)
        return complex(x) - 2 * m * self.omega - 2 * n * self.omega_prime, m, n

    def distance_to_lattice(self, x):
        xr, _, _ = self.reduce(x)
        return abs(xr)

    def roots(self):
        """``(e1, e2, e3) = (wp(omega), wp(omega+omega'), wp(omega'))``."""
        return (wp(self.omega, self), wp(self.omega + self.omega_prime, self), wp(self.omega_prime, self))

    def scaled(self, s):
        return LatticeParams.from_periods(s * self.omega, s * self.omega_prime)


# ---------------------------------------------------------------------------
# numeric Weierstrass functions


def _guard(xr, L):
    if abs(xr) < POLE_GUARD * L.min_period:
        raise PoleError(f"argument within {POLE_GUARD:g} periods of a lattice point")


def _theta_tower(xr, L, upto):
    v = math.pi * xr / (2 * L.omega)
    return [theta1(v, L.tau, k) for k in range(upto + 1)]


def sigma(x, L):
    xr, m, n = L.reduce(x)
    v = math.pi * xr / (2 * L.omega)
    base = (2 * L.omega / math.pi) * cmath.exp(L.eta * xr * xr / (2 * L.omega)) * theta1(v, L.tau) / theta1_prime0(L.tau)
    if m == 0 and n == 0:
        return base
    sign = -1 if (m + n + m * n) % 2 else 1
    big_eta = 2 * m * L.eta + 2 * n * L.eta_prime
    return sign * cmath.exp(big_eta * (xr + m * L.omega + n * L.omega_prime)) * base


def zeta_w(x, L):
    xr, m, n = L.reduce(x)
    _guard(xr, L)
    t0, t1 = _theta_tower(xr, L, 1)
    k = math.pi / (2 * L.omega)
    return L.eta * xr / L.omega + k * t1 / t0 + 2 * m * L.eta + 2 * n * L.eta_prime


def wp(x, L):
    xr, _, _ = L.reduce(x)
    _guard(xr, L)
    t0, t1, t2 = _theta_tower(xr, L, 2)
    k = math.pi / (2 * L.omega)
    r = t1 / t0
    return -L.eta / L.omega - k * k * (t2 / t0 - r * r)


def wp_prime(x, L):
    xr, _, _ = L.reduce(x)
    _guard(xr, L)
    t0, t1, t2, t3 = _theta_tower(xr, L, 3)
    k = math.pi / (2 * L.omega)
    r = t1 / t0
    return -k ** 3 * (t3 / t0 - 3 * t2 * t1 / (t0 * t0) + 2 * r ** 3)


def wp_ode_residual(x, L):
    p, dp = wp(x, L), wp_prime(x, L)
    return dp * dp - (4 * p ** 3 - L.g2 * p - L.g3)


# ---------------------------------------------------------------------------
# Laurent expansions at 0


def _field_for(*values):
    return EXACT if all(field_of(v) == EXACT for v in values) else COMPLEX


def _wp_coeffs(g2, g3, kmax, field):
    """``c[k]``, k >= 2, with wp = x^-2 + sum c_k x^(2k-2)."""
    g2, g3 = coerce(g2, field), coerce(g3, field)
    c = {2: g2 / 20, 3: g3 / 28}
    for k in range(4, kmax + 1):
        s = sum(c[m] * c[k - m] for m in range(2, k - 1))
        c[k] = s * 3 / ((2 * k + 1) * (k - 3))
    return c


def wp_series(g2, g3, N=16, var="x"):
    """Laurent series of wp through degree ``N`` from the recursion of wp'' = 6 wp^2 - g2/2."""
    field = _field_for(g2, g3)
    kmax = N // 2 + 1
    c = _wp_coeffs(g2, g3, max(kmax, 3), field)
    terms = {-2: 1}
    for k, v in c.items():
        if 2 * k - 2 <= N:
            terms[2 * k - 2] = v
    return LaurentSeries.from_dict(terms, N, var, field)


def zeta_series(g2, g3, N=16, var="x"):
    """``1/x - integral(wp - x^-2)`` through degree ``N``."""
    field = _field_for(g2, g3)
    regular = wp_series(g2, g3, max(N - 1, 0), var) - LaurentSeries.monomial(coerce(1, field), -2, max(N - 1, 0), var, field)
    return LaurentSeries.monomial(coerce(1, field), -1, N, var, field) - regular.integrate()


def sigma_series(g2, g3, N=16, var="x"):
    """``x * exp(integral(zeta - 1/x))`` through degree ``N``."""
    field = _field_for(g2, g3)
    z = zeta_series(g2, g3, max(N - 2, 0), var)
    inner = (z - LaurentSeries.monomial(coerce(1, field), -1, z.order, var, field)).integrate()
    return inner.exp().shift(1)


def wp_taylor(p0, p1, g2, N, var="x"):
    """Taylor series of wp about a point where wp = p0 and wp' = p1.

    Coefficients come from wp'' = 6 wp^2 - g2/2, so only ``g2`` is needed.
    """
    field = _field_for(p0, p1, g2)
    t = [coerce(p0, field), coerce(p1, field)]
    half_g2 = coerce(g2, field) / 2
    for k in range(0, N - 1):
        sq = sum(t[i] * t[k - i] for i in range(k + 1))
        val = 6 * sq - (half_g2 if k == 0 else 0)
        t.append(val / ((k + 1) * (k + 2)))
    return LaurentSeries(t[: N + 1], 0, N, var, field)


# ---------------------------------------------------------------------------
# inverse problems


def _agm(a, b, tol=4e-16, max_iter=200):
    for _ in range(max_iter):
        a1 = (a + b) / 2
        b1 = cmath.sqrt(a * b)
        if abs(a1 - b1) > abs(a1 + b1):
            b1 = -b1
        if abs(a1 - b1) <= tol * abs(a1) or (a1, b1) == (a, b):
            return a1
        a, b = a1, b1
    raise ConvergenceError("AGM did not converge")


def reduce_basis(w1, w2):
    """Gauss-reduce a pair of periods; returns ``(w1, w2)`` with Im(w2/w1) > 0."""
    w1, w2 = complex(w1), complex(w2)
    for _ in range(200):
        if abs(w2) < abs(w1):
            w1, w2 = w2, w1
        k = round((w2 / w1).real)
        if k == 0:
            break
        w2 -= k * w1
    if (w2 / w1).imag < 0:
        w2 = -w2
    return w1, w2


def lattice_from_invariants(g2, g3, tol=1e-9):
    """A reduced lattice basis whose invariants are ``(g2, g3)``.

    Candidate periods come from the complex AGM applied to differences of the
    roots of 4t^3 - g2 t - g3; every non-collinear pair is Gauss-reduced and the
    pair whose recomputed invariants match best is kept.
    """
    g2, g3 = complex(g2), complex(g3)
    disc = g2 ** 3 - 27 * g3 ** 2
    if abs(disc) <= 1e-12 * max(abs(g2) ** 3, abs(g3) ** 2, 1e-300):
        raise LatticeError("singular cubic: g2^3 = 27 g3^2, no lattice")
    roots = [complex(r) for r in np.roots([4, 0, -g2, -g3])]
    cands = []
    for i, j, k in itertools.permutations(range(3)):
        ei, ej, ek = roots[i], roots[j], roots[k]
        m = _agm(cmath.sqrt(ei - ek), cmath.sqrt(ei - ej))
        cands.append(math.pi / m)  # a full period 2*omega
    best, best_err = None, math.inf
    scale = max(abs(g2) ** (1 / 2), abs(g3) ** (1 / 3), 1e-300)
    for w1, w2 in itertools.combinations(cands, 2):
        if abs((w2 / w1).imag) < 1e-8:
            continue
        w1, w2 = reduce_basis(w1, w2)
        try:
            h2, h3 = invariants_from_lattice(w1 / 2, w2 / 2)
        except (LatticeError, ConvergenceError):
            continue
        err = max(abs(h2 - g2) / scale ** 2, abs(h3 - g3) / scale ** 3)
        if err < best_err:
            best, best_err = (w1, w2), err
    if best is None or best_err > tol:
        raise LatticeError(f"could not find a lattice for g2={g2}, g3={g3} (best mismatch {best_err:.3g})")
    return LatticeParams.from_periods(best[0] / 2, best[1] / 2)


def canonical_nu(nu, L, tol=1e-9):
    """Representative of ``+-nu`` modulo the lattice: centred, Im >= 0, then Re >= 0."""
    a, _, _ = L.reduce(nu)
    b, _, _ = L.reduce(-nu)
    scale = L.min_period
    if abs(a.imag - b.imag) > tol * scale:
        pick = a if a.imag > b.imag else b
    else:
        pick = a if a.real >= b.real else b
    # snap points on the far edge of the parallelogram onto the near edge
    s, t = L.coords(pick)
    if s < -0.5 + tol:
        pick += 2 * L.omega
    if t < -0.5 + tol:
        pick += 2 * L.omega_prime
    return pick


def _refine_critical(z, c, L):
    # Near a half-period wp - c has a double root and Newton stalls at
    # sqrt(machine eps); polish by locating the zero of wp' instead.
    p, d = wp(z, L), wp_prime(z, L)
    dd = 6 * p * p - L.g2 / 2
    if dd == 0 or abs(d / dd) > 1e-5 * L.min_period:
        return z
    w = z
    for _ in range(30):
        d = wp_prime(w, L)
        dd = 6 * wp(w, L) ** 2 - L.g2 / 2
        step = d / dd
        w -= step
        if abs(step) <= 1e-16 * L.min_period:
            break
    if abs(wp(w, L) - c) <= max(abs(p - c), 1e-14 * (1 + abs(c))):
        return w
    return z


def invert_wp(c, L, grid=12, max_iter=200, tol=1e-13):
    """Solve ``wp(nu) = c`` by a grid-seeded Newton iteration."""
    c = complex(c)
    best, best_err = None, math.inf
    for i in range(grid):
        for j in range(grid):
            s = (i + 0.5) / grid - 0.5
            t = (j + 0.5) / grid - 0.5
            z = 2 * L.omega * s + 2 * L.omega_prime * t
            err = abs(wp(z, L) - c)
            if err < best_err:
                best, best_err = z, err
    z = best
    for _ in range(max_iter):
        r = wp(z, L) - c
        if abs(r) <= tol * (1 + abs(c)):
            return canonical_nu(_refine_critical(z, c, L), L)
        d = wp_prime(z, L)
        if d == 0:
            z += 1e-6 * L.min_period
            continue
        step = r / d
        # damp steps that would jump across the parallelogram
        if abs(step) > 0.25 * L.min_period:
            step *= 0.25 * L.min_period / abs(step)
        z -= step
        if L.distance_to_lattice(z) < POLE_GUARD * L.min_period:
            z += 1e-3 * L.min_period
    raise ConvergenceError(f"Newton iteration for wp(nu) = {c} did not converge")

