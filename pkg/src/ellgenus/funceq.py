"""Functional equations for the generating series and their order-by-order solution.

Two routes are kept side by side:

* numeric residuals of the four-point equation (and its ``(a, b, c)`` form,
  ``a = x1 - x2``, ``b = x2 - y1``, ``c = y1 - y2``) for any callable g;
* exact expansions.  For *any* ``g = 1/x + a1 + ...`` the four-point
  expression is a power series in the differences (the simple poles cancel
  pairwise), so it is computed by clearing the six linear denominators and
  dividing exactly.  Its constant term is lambda; its ``b = 0`` restriction is
  the two-variable pole equation that drives :func:`recursion_solve`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import elliptic as ell
from .genus import GenusSpec, SeriesGenus, g_eval, g_prime, p_series
from .series import COMPLEX, EXACT, BiSeries, LaurentSeries, MultiSeries, SeriesError, coerce

ABC = ("a", "b", "c")
AC = ("a", "c")


class RecursionBreakdown(SeriesError):
    pass


class DegeneratePoint(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# numeric residuals


def funl_terms(g, x1, x2, y1, y2):
    return (
        g(x2 - x1) * g(x1 - y1) * g(x1 - y2),
        g(x1 - x2) * g(x2 - y1) * g(x2 - y2),
        -g(x1 - y1) * g(x2 - y1) * g(y1 - y2),
        -g(x1 - y2) * g(x2 - y2) * g(y2 - y1),
    )


def funl_residual(g, x1, x2, y1, y2):
    """Right-hand side of the four-point equation; equals lambda for a solution.

    ``g`` is any callable, e.g. a :class:`GenusSpec`.
    """
    return sum(funl_terms(g, x1, x2, y1, y2))


def funla_terms(g, a, b, c):
    return (
        g(-a) * g(a + b) * g(a + b + c),
        g(a) * g(b) * g(b + c),
        -g(a + b) * g(b) * g(c),
        -g(a + b + c) * g(b + c) * g(-c),
    )


def funla_residual(g, a, b, c):
    return sum(funla_terms(g, a, b, c))


def relative_residual(terms):
    scale = max(abs(t) for t in terms)
    return abs(sum(terms)) / scale if scale else 0.0


# ---------------------------------------------------------------------------
# exact expansions


def _compose(f, coeffs, names, order, cls=MultiSeries):
    return cls.compose(f, coeffs, names, order)


def _poly(terms, names, fld):
    return MultiSeries(terms, None, names, fld)


def _abs_series(f):
    return LaurentSeries([abs(c) for c in f.coeffs()], f.val, f.order, f.var, f.field)


def _divide(num_of, f, divisor, tol):
    """``num_of(f, sign) / divisor``; over the complex field rounding is judged
    against the majorant ``num_of(|f|, +1)``.
    """
    num = num_of(f, True)
    scales = None
    if f.field == COMPLEX:
        major = num_of(_abs_series(f), False)
        scales = {d: major.max_abs(d) for d in major.degrees()}
    return num.exact_divide(divisor, tol, scales)


def funla_expansion(sg, degree=None, tol=1e-9):
    """The four-point expression as a power series in ``(a, b, c)``.

    Known through total degree ``min(N - 3, degree)`` for a series with N
    coefficients.  ``tol`` is the relative rounding allowance used by the
    exact division over the complex field.
    """
    fld = sg.field
    N = sg.order if degree is None else min(sg.order, degree + 3)
    f = sg.f_series().truncate(N)

    def lin(*coeffs):
        return MultiSeries.linear_form(coeffs, ABC, fld)

    a, b, c = lin(1, 0, 0), lin(0, 1, 0), lin(0, 0, 1)
    ab, bc, abc = lin(1, 1, 0), lin(0, 1, 1), lin(1, 1, 1)

    def num_of(s, signed):
        def F(*coeffs):
            if not signed:
                coeffs = tuple(abs(k) for k in coeffs)
            return _compose(s, coeffs, ABC, N)

        sg_ = 1 if signed else -1
        return (
            -(F(-1, 0, 0) * F(1, 1, 0) * F(1, 1, 1)) * (b * c * bc) * sg_
            + (F(1, 0, 0) * F(0, 1, 0) * F(0, 1, 1)) * (c * ab * abc)
            - (F(1, 1, 0) * F(0, 1, 0) * F(0, 0, 1)) * (a * bc * abc) * sg_
            + (F(1, 1, 1) * F(0, 1, 1) * F(0, 0, -1)) * (a * b * ab)
        )

    return _divide(num_of, f, a * b * c * ab * bc * abc, tol)


def lambda_of(sg):
    """Constant term of the four-point expression, exact for rational series."""
    if sg.order < 6:
        raise SeriesError("lambda needs at least 6 coefficients")
    return funla_expansion(sg, 0).coeff((0, 0, 0))


def first_nonzero_degree(series, tol=None, start=0):
    """Lowest total degree >= ``start`` carrying a nonzero coefficient, or None."""
    hi = series.order
    for d in range(start, hi + 1):
        size = series.max_abs(d)
        if (tol is None and size != 0) or (tol is not None and size > tol):
            return d
    return None


@dataclass
class FunlReport:
    lam: object
    max_residual: float
    first_failure_degree: int | None
    per_degree_max: list = field(default_factory=list)
    order: int = 0
    tol: float | None = None

    @property
    def passed(self):
        return self.first_failure_degree is None


def funl_report(sg, degree=None, tol=None):
    """Exact (or toleranced, for complex series) check of the four-point equation."""
    if sg.field == COMPLEX and tol is None:
        tol = 1e-10
    q = funla_expansion(sg, degree)
    per = [q.max_abs(d) for d in range(0, q.order + 1)]
    lam = q.coeff((0, 0, 0))
    return FunlReport(
        lam=lam,
        max_residual=max(per, default=0),
        first_failure_degree=first_nonzero_degree(q, tol),
        per_degree_max=per,
        order=q.order,
        tol=tol,
    )


def funpole_residual(sg, order=None, tol=1e-9):
    """``g(a+c)[P(a) - P(c)] + g(a) g'(c) - g'(a) g(c)`` as a series in ``(a, c)``.

    Cleared of the denominator ``a^2 c^2 (a+c)`` it reads

        f(a+c) [a^2 f(c) f(-c) - c^2 f(a) f(-a)]
          + (a+c) [a f(a) (c f'(c) - f(c)) - c f(c) (a f'(a) - f(a))],

    which is then divided back exactly.  Known through degree ``N - 3``.
    """
    fld = sg.field
    N = sg.order if order is None else min(sg.order, order + 3)
    f = sg.f_series().truncate(N)

    def F(ca, cc, s=f):
        return _compose(s, (ca, cc), AC, N, BiSeries)

    a = BiSeries({(1, 0): 1}, None, AC, fld)
    c = BiSeries({(0, 1): 1}, None, AC, fld)

    def num_of(s, signed):
        ds = s.deriv()
        k = 1 if signed else -1

        def F(ca, cc, t=s):
            if not signed:
                ca, cc = abs(ca), abs(cc)
            return _compose(t, (ca, cc), AC, N, BiSeries)

        fa, fc = F(1, 0), F(0, 1)
        return F(1, 1) * (a * a * fc * F(0, -1) - c * c * fa * F(-1, 0) * k) + (a + c) * (
            a * fa * (c * F(0, 1, ds) - fc * k) - c * fc * (a * F(1, 0, ds) - fa * k) * k)

    den = BiSeries({(3, 2): 1, (2, 3): 1}, None, AC, fld)
    return _divide(num_of, f, den, tol)


def hirzebruch_ode_residual(sg):
    """``g^2 g(-x) - (a1^2 - 3 a2) g - a1 g' + g''/2``, the c^0 part of the pole equation."""
    if sg.order < 6:
        raise SeriesError("need at least 6 coefficients")
    g = sg.g_series()
    a1, a2 = sg.alpha(1), sg.alpha(2)
    half = Fraction(1, 2) if sg.field == EXACT else 0.5
    dg = g.deriv()
    return g * g * g.reflect() - g * (a1 * a1 - 3 * a2) - dg * a1 + dg.deriv() * half


# ---------------------------------------------------------------------------
# order-by-order solution


_UNIT_CACHE = {}


def _unit_multiplier(n, fld):
    key = (n, fld)
    if key not in _UNIT_CACHE:
        unit = SeriesGenus(tuple([0] * (n - 1) + [1]), fld)
        _UNIT_CACHE[key] = funpole_residual(unit).homogeneous(n - 3)
    return _UNIT_CACHE[key]


def recursion_solve(seed, N=16, tol=1e-10):
    """Extend ``(a1, a2, a3, a4)`` to ``(a1, ..., aN)`` solving the pole equation.

    The degree ``n - 3`` slice of the pole equation is linear in ``a_n``; it is
    solved on the lexicographically lowest monomial with a nonzero multiplier
    and the rest of the slice is checked for consistency.
    """
    seed = tuple(seed)
    if len(seed) != 4:
        raise ValueError("seed must hold exactly four coefficients a1..a4")
    if N < 5:
        raise ValueError("N must be at least 5")
    alphas = list(SeriesGenus(seed).alphas)
    fld = SeriesGenus(seed).field
    zero = coerce(0, fld)
    for n in range(5, N + 1):
        trial = SeriesGenus(tuple(alphas) + (zero,), fld)
        rest = funpole_residual(trial).homogeneous(n - 3)
        mult = _unit_multiplier(n, fld)
        if mult.is_zero():
            raise RecursionBreakdown(f"recursion breakdown at order {n}: a_{n} does not enter its slice")
        mono = min(mult.terms)
        an = -rest.coeff(mono) / mult.coeff(mono)
        left = rest + mult * an
        scale = max(rest.max_abs(), abs(an) * mult.max_abs(), 1.0)
        bad = [m for m, v in left.terms.items() if (v != 0 if fld == EXACT else abs(v) > tol * scale)]
        if bad:
            raise RecursionBreakdown(
                f"recursion breakdown at order {n}: slice inconsistent at monomial {min(bad)}")
        alphas.append(an)
    return SeriesGenus(tuple(alphas), fld)


# ---------------------------------------------------------------------------
# master (determinant) form


def master_components(sg):
    """``(phi1, ..., phi5) = (g, g, g', 1, g reflect(g))`` as Laurent series."""
    g = sg.g_series()
    one = LaurentSeries.one(g.order - g.val, field=sg.field)
    return g, g, g.deriv(), one, p_series(sg)


def master_terms(spec, a, c):
    """``(g(a+c) * den, num)`` of the determinant form."""
    ga, gc = g_eval(a, spec), g_eval(c, spec)
    dga, dgc = g_prime(a, spec), g_prime(c, spec)
    Pa = ga * g_eval(-a, spec)
    Pc = gc * g_eval(-c, spec)
    num = ga * dgc - gc * dga
    den = Pc - Pa
    if abs(den) <= 1e-12 * (abs(Pa) + abs(Pc)):
        raise DegeneratePoint("denominator determinant vanishes (wp(a) = wp(c))")
    return g_eval(a + c, spec) * den, num


def master_residual(spec, a, c):
    lhs, num = master_terms(spec, a, c)
    return lhs - num


def phi_eval(x, nu, L):
    """``sigma(nu - x) / (sigma(nu) sigma(x)) * exp(zeta(nu) x)``."""
    return g_eval(x, GenusSpec(ell.zeta_w(nu, L), nu, L))


# ---------------------------------------------------------------------------
# Laurent data at a generic point


@dataclass
class LaurentData:
    """Expansion ``-1/x - lambda + sum F_l x^(l+1)/(l+1)!`` at ``x0`` for one determinant pair."""

    x0: Fraction
    lam: complex
    F: tuple
    pair: int = 2
    series: LaurentSeries | None = None

    @property
    def g2(self):
        F0, _, F2 = self.F[:3]
        return 5 * (F2 + 6 * F0 ** 2) / 3

    @property
    def g3(self):
        F0, F1, F2 = self.F[:3]
        return 6 * F0 ** 3 - F1 ** 2 + 5 * F0 * F2 / 3


def default_x0(L):
    return Fraction(min(abs(L.omega), abs(L.omega_prime)) / 5).limit_denominator(1000)


def _g_taylor(spec, x0, N):
    """Taylor series of g about ``x0`` from the wp towers at ``x0`` and ``nu - x0``."""
    L = spec.lattice
    u = spec.nu - x0
    t_x0 = ell.wp_taylor(ell.wp(x0, L), ell.wp_prime(x0, L), L.g2, N)
    t_u = ell.wp_taylor(ell.wp(u, L), ell.wp_prime(u, L), L.g2, N).reflect()
    zeta_x0 = LaurentSeries([ell.zeta_w(x0, L)], 0, N + 1, field=COMPLEX) - t_x0.integrate()
    zeta_u = LaurentSeries([ell.zeta_w(u, L)], 0, N + 1, field=COMPLEX) + t_u.integrate()
    h = (spec.mu - zeta_u - zeta_x0).truncate(N)
    return h.integrate().truncate(N).exp() * g_eval(x0, spec)


def bb_laurent_data(spec, x0=None, order=6, pair=2):
    """Laurent data of the log-derivative of a determinant pair at ``x0``.

    Pair 2 is ``(1, g(x) g(-x))``: the expansion of ``P'(x0)/(P(x0) - P(x+x0))``
    through the wp Taylor tower at ``x0``.  Pair 1 is ``(g, g')``.
    """
    L = spec.lattice
    x0 = default_x0(L) if x0 is None else Fraction(x0)
    xf = float(x0)
    if L.distance_to_lattice(2 * xf) < 1e-6 * L.min_period:
        raise ValueError("x0 is not generic: 2*x0 lies on the lattice")
    if pair == 2:
        g0, gm = g_eval(xf, spec), g_eval(-xf, spec)
        P0 = g0 * gm
        dP0 = g_prime(xf, spec) * gm - g0 * g_prime(-xf, spec)
        if abs(dP0) < 1e-10 * max(1.0, abs(P0)):
            raise ValueError("x0 is not generic: P'(x0) vanishes")
        p_x0 = ell.wp(spec.nu, L) - P0
        tower = ell.wp_taylor(p_x0, -dP0, L.g2, order + 2)
        series = LaurentSeries([dP0], 0, order + 2, field=COMPLEX) / (tower - p_x0)
    elif pair == 1:
        G = _g_taylor(spec, xf, order + 3)
        dG = G.deriv()
        g0, g1, g2 = G.coeff(0), G.coeff(1), 2 * G.coeff(2)
        series = (G * g2 - dG * g1) / (G * g1 - dG * g0)
    else:
        raise ValueError("pair must be 1 or 2")
    lam = -series.coeff(0)
    F = tuple(series.coeff(l + 1) * math.factorial(l + 1) for l in range(order - 1))
    return LaurentData(x0, lam, F, pair, series)
