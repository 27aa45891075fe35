"""Genus models: the two-parameter elliptic genus, its series, and relatives.

A genus is described either in closed form (:class:`GenusSpec`, slope ``mu``,
zero ``nu`` and a lattice) with

    g(x) = exp(mu x) sigma(nu - x) / (sigma(nu) sigma(x)),

or by the coefficients of ``f(x) = x g(x) = 1 + a1 x + a2 x^2 + ...``
(:class:`SeriesGenus`).  The even part ``g(x) g(-x) = wp(nu) - wp(x)`` links
the two descriptions.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from . import elliptic as ell
from .series import COMPLEX, EXACT, LaurentSeries, SeriesError, coerce, field_of


class NotAGenusSeries(SeriesError):
    pass


@dataclass(frozen=True)
class GenusSpec:
    mu: complex
    nu: complex
    lattice: ell.LatticeParams

    def __post_init__(self):
        object.__setattr__(self, "mu", complex(self.mu))
        object.__setattr__(self, "nu", complex(self.nu))
        L = self.lattice
        if L.distance_to_lattice(self.nu) < ell.POLE_GUARD * L.min_period:
            raise ell.PoleError("nu must not lie on the period lattice")

    def __call__(self, x):
        return g_eval(x, self)

    def reduced(self):
        """Same genus with ``nu`` moved into the centred fundamental parallelogram.

        Shifting ``nu`` by a period multiplies g by exp(-H x) with H the
        matching quasi-period, so ``mu`` moves by H to compensate.
        """
        L = self.lattice
        nr, m, n = L.reduce(self.nu)
        shift = 2 * m * L.eta + 2 * n * L.eta_prime
        return GenusSpec(self.mu - shift, nr, L)

    @classmethod
    def ochanine(cls, lattice):
        """Odd member: ``nu`` the half-period ``omega`` and ``mu = eta``."""
        return cls(lattice.eta, lattice.omega, lattice)

    @classmethod
    def bridge(cls, nu, lattice):
        """Member with ``mu = eta nu / omega``, the normalisation of the theta quotient."""
        return cls(lattice.eta * nu / lattice.omega, nu, lattice)


@dataclass(frozen=True)
class SeriesGenus:
    """Coefficients ``(a1, ..., aN)`` of ``f(x) = 1 + a1 x + ... + aN x^N``."""

    alphas: tuple
    field: str = field(default=None)

    def __post_init__(self):
        alphas = tuple(self.alphas)
        fld = self.field
        if fld is None:
            fld = COMPLEX if any(field_of(a) == COMPLEX for a in alphas) else EXACT
        object.__setattr__(self, "alphas", tuple(coerce(a, fld) for a in alphas))
        object.__setattr__(self, "field", fld)

    @property
    def order(self):
        return len(self.alphas)

    def alpha(self, n):
        if n == 0:
            return coerce(1, self.field)
        if n > self.order:
            raise SeriesError(f"alpha_{n} is beyond truncation order {self.order}")
        return self.alphas[n - 1]

    def f_series(self, var="x"):
        return LaurentSeries([1, *self.alphas], 0, self.order, var, self.field)

    def g_series(self, var="x"):
        return self.f_series(var).shift(-1)

    @classmethod
    def from_f(cls, f):
        if f.val < 0 or f.coeff(0) != 1:
            raise SeriesError("f must be a power series with constant term 1")
        return cls(tuple(f.coeff(k) for k in range(1, f.order + 1)), f.field)

    @classmethod
    def from_g(cls, g):
        return cls.from_f(g.shift(1))

    def truncate(self, n):
        return SeriesGenus(self.alphas[:n], self.field)

    def perturbed(self, n, delta=1):
        alphas = list(self.alphas)
        alphas[n - 1] += coerce(delta, self.field)
        return SeriesGenus(tuple(alphas), self.field)

    def to_complex(self):
        return SeriesGenus(tuple(complex(a) for a in self.alphas), COMPLEX)


@dataclass(frozen=True)
class LoopGenusParams:
    y: complex
    q_tilde: complex
    K: int = 40

    def __post_init__(self):
        if abs(self.q_tilde) >= 1:
            raise ValueError("|q_tilde| must be < 1")


# ---------------------------------------------------------------------------
# closed form


def g_eval(x, spec):
    L = spec.lattice
    if L.distance_to_lattice(x) < ell.POLE_GUARD * L.min_period:
        raise ell.PoleError(f"g has a pole at the lattice point near {x}")
    nu = spec.nu
    return cmath.exp(spec.mu * x) * ell.sigma(nu - x, L) / (ell.sigma(nu, L) * ell.sigma(x, L))


def g_log_deriv(x, spec):
    """``g'/g = mu - zeta(nu - x) - zeta(x)``."""
    L = spec.lattice
    return spec.mu - ell.zeta_w(spec.nu - x, L) - ell.zeta_w(x, L)


def g_prime(x, spec):
    return g_eval(x, spec) * g_log_deriv(x, spec)


def g_series(spec, N=16):
    """Coefficients ``a1..aN`` of ``x g(x)`` for a closed-form genus.

    ``log(sigma(nu - x)/sigma(nu)) = -zeta(nu) x - double integral of wp(nu - t)``
    and ``log(x/sigma(x)) = double integral of (wp(t) - t^-2)``; the Taylor
    tower of wp at nu comes from the wp differential equation.
    """
    L = spec.lattice
    p_nu, dp_nu = ell.wp(spec.nu, L), ell.wp_prime(spec.nu, L)
    z_nu = ell.zeta_w(spec.nu, L)
    shifted = ell.wp_taylor(p_nu, dp_nu, L.g2, N).reflect()
    at_zero = ell.wp_series(L.g2, L.g3, N) - LaurentSeries.monomial(1 + 0j, -2, N, field=COMPLEX)
    at_zero = at_zero.truncate(N)
    linear = LaurentSeries([0, spec.mu - z_nu], 0, N, field=COMPLEX)
    exponent = linear - shifted.integrate().integrate() + at_zero.integrate().integrate()
    f = exponent.truncate(N).exp()
    return SeriesGenus.from_f(f)


# ---------------------------------------------------------------------------
# parameter extraction


def p_series(sg):
    """``P(x) = g(x) g(-x)``, an even Laurent series starting at ``-x^-2``."""
    g = sg.g_series()
    return g * g.reflect()


@dataclass(frozen=True)
class ExtractedParams:
    g2: object
    g3: object
    wp_nu: object
    mu: complex = None
    nu: complex = None
    lattice: ell.LatticeParams = None

    def spec(self):
        return GenusSpec(self.mu, self.nu, self.lattice)


def _near_zero(value, scale, fld, tol):
    if fld == EXACT:
        return value == 0
    return abs(value) <= tol * max(scale, 1.0)


def series_invariants(sg, tol=1e-9):
    """``(g2, g3, wp(nu))`` read from ``P = g reflect(g)``, exact for rational input.

    Raises :class:`NotAGenusSeries` if P has odd terms or if its higher
    coefficients disagree with the wp recursion for the extracted invariants.
    """
    if sg.order < 6:
        raise SeriesError("need at least 6 coefficients to read off g2, g3 and wp(nu)")
    P = p_series(sg)
    scale = P.max_abs()
    for d in range(P.val, P.order + 1):
        if d % 2 and not _near_zero(P.coeff(d), scale, sg.field, tol):
            raise NotAGenusSeries(f"P has a nonzero odd coefficient at degree {d}")
    wp_nu = P.coeff(0)
    g2 = -20 * P.coeff(2)
    g3 = -28 * P.coeff(4)
    model = ell.wp_series(g2, g3, P.order)
    for d in range(6, P.order + 1, 2):
        if not _near_zero(P.coeff(d) + model.coeff(d), scale, sg.field, tol):
            raise NotAGenusSeries(f"P disagrees with wp(nu) - wp(x) at degree {d}")
    return g2, g3, wp_nu


def extract_params(sg, tol=1e-9):
    """Recover ``(g2, g3, wp(nu), mu, nu)`` and the lattice from a series.

    ``nu`` solves ``wp(nu) = P_0``; of the two roots ``+-nu`` the one whose
    closed-form series best reproduces the given coefficients is kept, and
    ``mu = a1 + zeta(nu)``.
    """
    g2, g3, wp_nu = series_invariants(sg, tol)
    L = ell.lattice_from_invariants(complex(g2), complex(g3))
    root = ell.invert_wp(complex(wp_nu), L)
    a1 = complex(sg.alpha(1))
    n_cmp = min(sg.order, 8)
    best = None
    for nu in (root, -root):
        if L.distance_to_lattice(nu) < ell.POLE_GUARD * L.min_period:
            continue
        mu = a1 + ell.zeta_w(nu, L)
        trial = g_series(GenusSpec(mu, nu, L), n_cmp)
        err = max(abs(complex(sg.alpha(k)) - trial.alpha(k)) / max(1.0, abs(complex(sg.alpha(k))))
                  for k in range(1, n_cmp + 1))
        if best is None or err < best[0]:
            best = (err, mu, nu)
    _, mu, nu = best
    return ExtractedParams(g2, g3, wp_nu, mu, nu, L)


def wronskian_check(sg):
    """``g' reflect(g) - g reflect(g') + wp'`` with wp' built from the series' own g2, g3."""
    if sg.order < 8:
        raise SeriesError("need at least 8 coefficients")
    g = sg.g_series()
    dg = g.deriv()
    W = dg * g.reflect() - g * dg.reflect()
    g2, g3, _ = series_invariants_unchecked(sg)
    dwp = ell.wp_series(g2, g3, W.order + 1).deriv()
    return W + dwp


def series_invariants_unchecked(sg):
    P = p_series(sg)
    return -20 * P.coeff(2), -28 * P.coeff(4), P.coeff(0)


def p_identity_residual(sg):
    """``g reflect(g) - (wp(nu) - wp)`` with invariants read from the series itself."""
    P = p_series(sg)
    g2, g3, wp_nu = series_invariants_unchecked(sg)
    model = -ell.wp_series(g2, g3, P.order) + wp_nu
    return P - model


# ---------------------------------------------------------------------------
# chi_y, Ochanine, loop space


def _check_y(y):
    if y == -1:
        raise ValueError("y = -1 is degenerate for the chi_y series")


def chi_y_R(x, y):
    """``x (1 + y e^{-x(1+y)}) / (1 - e^{-x(1+y)})`` at a number, with R(0) = 1."""
    _check_y(y)
    if x == 0:
        return 1.0
    e = cmath.exp(-x * (1 + y))
    return x * (1 + y * e) / (1 - e)


def chi_y_series(y, N=16, var="x"):
    """Power series of R through degree N; exact when ``y`` is rational."""
    _check_y(y)
    fld = field_of(y)
    y = coerce(y, fld)
    u = LaurentSeries([0, -(1 + y)], 0, N + 1, var, fld)
    e = u.exp()  # e^{-x(1+y)}
    num = 1 + e * y
    den = (1 - e).shift(-1)  # (1 - e^{-x(1+y)}) / x, constant term 1+y
    return (num / den).truncate(N)


def ochanine_Q(x, q, K=40):
    """Truncated product ``(x/2)/tanh(x/2) * prod_{n<=K} (...)``."""
    if abs(q) >= 1:
        raise ValueError("|q| must be < 1")
    if x == 0:
        base = 1.0
    else:
        base = 0.5 * x / cmath.tanh(x / 2)
    ex, emx = cmath.exp(x), cmath.exp(-x)
    prod = 1
    qn = 1
    for _ in range(K):
        qn *= q
        prod *= (1 + qn * ex) * (1 + qn * emx) / ((1 - qn * ex) * (1 - qn * emx)) * (1 - qn) ** 2 / (1 + qn) ** 2
    return base * prod


def loop_chiy_factor(x, params):
    """Per-Chern-root factor of the loop-space chi_y genus."""
    y, q, K = params.y, params.q_tilde, params.K
    _check_y(y)
    u = x * (1 + y)
    value = chi_y_R(x, y)
    if q == 0:
        return value
    if y == 0:
        raise ValueError("y = 0 is only allowed together with q_tilde = 0")
    em, ep = cmath.exp(-u), cmath.exp(u)
    qk = 1
    for _ in range(K):
        qk *= q
        d1, d2 = 1 - qk * em, 1 - qk * ep
        if d1 == 0 or d2 == 0:
            raise ZeroDivisionError("pole of a loop-space factor")
        value *= (1 + y * qk * em) / d1 * (1 + qk * ep / y) / d2
    return value


# ---------------------------------------------------------------------------
# theta-quotient bridge


def _theta_quotient(x, nu_s, tau):
    """``theta1'(0) / (2i theta1(i nu_s/2)) * theta1(i(x - nu_s)/2) / theta1(i x/2)``."""
    return (ell.theta1_prime0(tau) / (2j * ell.theta1(1j * nu_s / 2, tau))
            * ell.theta1(1j * (x - nu_s) / 2, tau) / ell.theta1(1j * x / 2, tau))


def _check_bridge_spec(spec, tol=1e-10):
    L = spec.lattice
    want = L.eta * spec.nu / L.omega
    if abs(spec.mu - want) > tol * max(1.0, abs(want)):
        raise ValueError("the theta bridge needs mu = eta * nu / omega")


def scaled_nu(spec):
    """``nu`` in the rescaled variable of the theta quotient: pi nu / (i omega)."""
    return math.pi * spec.nu / (1j * spec.lattice.omega)


def theta_bridge_residual(x, spec):
    """Relative gap between ``(i omega/pi) g(i omega x/pi)`` and the theta quotient."""
    _check_bridge_spec(spec)
    L = spec.lattice
    k = 1j * L.omega / math.pi
    lhs = k * g_eval(k * x, spec)
    rhs = _theta_quotient(x, scaled_nu(spec), L.tau)
    return abs(lhs - rhs) / abs(rhs)


def theta_bridge_cross_ratio(x1, x2, spec):
    """Normalisation-free version: ``|[g(X1)/g(X2)] / [T(x1)/T(x2)] - 1|``."""
    _check_bridge_spec(spec)
    L = spec.lattice
    k = 1j * L.omega / math.pi
    nu_s = scaled_nu(spec)
    lhs = g_eval(k * x1, spec) / g_eval(k * x2, spec)
    rhs = _theta_quotient(x1, nu_s, L.tau) / _theta_quotient(x2, nu_s, L.tau)
    return abs(lhs / rhs - 1)


def loop_params_for(spec, K=60):
    """Loop-space parameters matched to a bridge genus: q_tilde = nome^2, y = -exp(-nu_s)."""
    _check_bridge_spec(spec)
    return LoopGenusParams(-cmath.exp(-scaled_nu(spec)), spec.lattice.nome_bar ** 2, K)


def chiy_bridge_cross_ratio(x1, x2, spec, K=60):
    """Compare ``loop_chiy_factor(x)/x`` with the theta quotient at ``-x(1+y)``.

    The two agree up to a constant, so the ratio at two points must match.
    """
    params = loop_params_for(spec, K)
    nu_s = scaled_nu(spec)
    tau = spec.lattice.tau

    def ratio(x):
        return loop_chiy_factor(x, params) / x / _theta_quotient(-x * (1 + params.y), nu_s, tau)

    return abs(ratio(x1) / ratio(x2) - 1)


# ---------------------------------------------------------------------------
# evaluation on projective space


def genus_cpn(sg, n):
    """``[x^n] f(x)^(n+1)``, the value of the genus on CP(n)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > sg.order:
        raise SeriesError(f"CP({n}) needs {n} coefficients, series has {sg.order}")
    f = sg.truncate(n).f_series()
    return (f ** (n + 1)).coeff(n)


def chi_y_cpn(y, n):
    """chi_y genus of CP(n) from the R series."""
    R = chi_y_series(y, n)
    return (R ** (n + 1)).coeff(n)
