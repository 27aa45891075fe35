"""Fixed-point push-forward for the projectivised bundle over BT^4.

The fibre ``CP(xi + eta)`` with ``xi = eta1 + eta2`` and ``eta = eta3 + eta4``
has four fixed sections.  Restricting ``f(gamma_1) ... f(gamma_4)`` to each
section gives a triple product of ``f`` at differences of the equivariant
parameters ``e1..e4``; the push-forward is

    sum_i  s_i* / prod_{j != i} (e_j - e_i),

assembled here over the Vandermonde ``V = prod_{i<j} (e_j - e_i)`` and divided
exactly.  A genus is multiplicative for these fibrations iff the result has no
positive-degree part.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from . import funceq
from .genus import SeriesGenus, g_eval
from .series import EXACT, MultiPoly, MultiSeries, SeriesError

NAMES = ("e1", "e2", "e3", "e4")

# linear forms of each section restriction, 0-based; (j, i) stands for e_j - e_i
SECTIONS = (
    ((1, 0), (0, 2), (0, 3)),
    ((0, 1), (1, 2), (1, 3)),
    ((0, 2), (1, 2), (2, 3)),
    ((0, 3), (1, 3), (3, 2)),
)


class InternalInconsistency(SeriesError):
    pass


@dataclass(frozen=True)
class PushforwardInput:
    series: SeriesGenus
    degree: int = 10

    def __post_init__(self):
        if self.series.field != EXACT:
            raise SeriesError("push-forward input must be an exact rational series")
        if self.degree < 3:
            raise ValueError("degree bound must be at least 3")


@dataclass
class PushforwardReport:
    h0_value: Fraction
    per_degree_max: list
    lands_in_h0: bool
    first_failure_degree: int | None
    degree: int = 10
    quotient: MultiSeries | None = field(default=None, repr=False, compare=False)


def _form(j, i):
    coeffs = [0, 0, 0, 0]
    coeffs[j] += 1
    coeffs[i] -= 1
    return tuple(coeffs)


def _vandermonde(indices):
    out = MultiPoly.constant(1, NAMES)
    for i, j in combinations(indices, 2):
        out = out * MultiPoly.linear_form(_form(j, i), NAMES)
    return out


def section_restrictions(inp):
    """``(s1*, s2*, s3*, s4*)`` truncated at total degree ``D``."""
    D = min(inp.degree, inp.series.order)
    f = inp.series.f_series().truncate(D)
    out = []
    for forms in SECTIONS:
        prod = MultiPoly.constant(1, NAMES, order=D)
        for j, i in forms:
            prod = prod * MultiPoly.compose(f, _form(j, i), NAMES, D)
        out.append(prod)
    return tuple(out)


def gysin_numerator(inp):
    """``sum_i sigma_i s_i* Pi_i`` with ``Pi_i`` the Vandermonde of the other three indices."""
    total = None
    for i, s in enumerate(section_restrictions(inp)):
        rest = [k for k in range(4) if k != i]
        term = s * _vandermonde(rest)
        if i % 2:
            term = -term
        total = term if total is None else total + term
    return total


def gysin_pushforward(inp):
    if inp.degree < 6:
        raise ValueError("degree bound must be at least 6")
    num = gysin_numerator(inp)
    try:
        q = num.exact_divide(_vandermonde(range(4)))
    except SeriesError as exc:
        raise InternalInconsistency(f"push-forward numerator is not divisible by the Vandermonde: {exc}") from exc
    # f is known through degree D, so the quotient is in fact known through
    # D - 3; only degrees up to D - 6 are reported
    top = inp.degree - 6
    q = q.truncate(top)
    per = [q.max_abs(d) for d in range(top + 1)]
    first = next((d for d in range(1, top + 1) if per[d] != 0), None)
    return PushforwardReport(
        h0_value=q.coeff((0, 0, 0, 0)),
        per_degree_max=per,
        lands_in_h0=first is None,
        first_failure_degree=first,
        degree=inp.degree,
        quotient=q,
    )


def equivalence_check(inp):
    """Does the push-forward verdict agree with the pole equation at matched orders?

    Both must vanish through degree ``D - 6``, or both must first fail at the
    same degree.
    """
    rep = gysin_pushforward(inp)
    top = rep.degree - 6
    fp = funceq.funpole_residual(inp.series.truncate(min(inp.degree, inp.series.order)))
    pole_first = funceq.first_nonzero_degree(fp.truncate(top))
    return rep.first_failure_degree == pole_first and rep.h0_value == 0


def gysin_numeric(spec, eps):
    """The push-forward evaluated directly at a complex point, with ``f(u) = u g(u)``."""
    total = 0
    terms = []
    for i, forms in enumerate(SECTIONS):
        value = 1
        for j, k in forms:
            u = eps[j] - eps[k]
            value *= u * g_eval(u, spec)
        for j in range(4):
            if j != i:
                value /= eps[j] - eps[i]
        terms.append(value)
        total += value
    return total, max(abs(t) for t in terms)


def random_distinct_rationals(rng, n=4, bound=9):
    """``n`` distinct nonzero rationals with numerators and denominators up to ``bound``."""
    out = []
    while len(out) < n:
        x = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        if x not in out:
            out.append(x)
    return tuple(out)


def vandermonde_poly():
    return _vandermonde(range(4))
