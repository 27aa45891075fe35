"""Truncated Laurent series in one variable and sparse truncated series in several.

Coefficients live in one of two fields: exact rationals (``fractions.Fraction``)
or complex floats.  A series knows the highest degree it is certain about
(``order``); asking for anything above that raises instead of returning zero.
"""

from __future__ import annotations

import math
import numbers
from fractions import Fraction
from itertools import combinations_with_replacement

EXACT = "exact"
COMPLEX = "complex"


class SeriesError(ValueError):
    pass


class FieldMismatch(SeriesError):
    pass


class TruncationError(SeriesError):
    pass


class NotDivisible(SeriesError):
    """Raised by exact division; carries the offending monomial."""

    def __init__(self, monomial, degree, message=None):
        self.monomial = monomial
        self.degree = degree
        super().__init__(message or f"not divisible: remainder at monomial {monomial} (degree {degree})")


def field_of(value):
    if isinstance(value, (Fraction, numbers.Integral)):
        return EXACT
    if isinstance(value, numbers.Complex):
        return COMPLEX
    raise TypeError(f"unsupported coefficient {value!r}")


def coerce(value, field):
    if field == EXACT:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, numbers.Integral):
            return Fraction(int(value))
        raise FieldMismatch(f"cannot use {value!r} in an exact series")
    if field == COMPLEX:
        return complex(value)
    raise SeriesError(f"unknown field {field!r}")


def _inv_int(n, field):
    return Fraction(1, n) if field == EXACT else 1.0 / n


def _fmt_coeff(c):
    if isinstance(c, Fraction):
        return str(c)
    c = complex(c)
    if c.imag == 0:
        return format(c.real, ".17g")
    return f"({c.real:.17g}{c.imag:+.17g}j)"


class LaurentSeries:
    """Truncated Laurent series ``sum c_d x^d`` for ``val <= d <= order``.

    ``coeffs[k]`` is the coefficient of ``x**(val + k)``.  Leading zeros are
    stripped, so a zero series has ``val == order + 1`` and no coefficients.
    """

    __slots__ = ("_c", "val", "order", "var", "field")

    def __init__(self, coeffs, val=0, order=None, var="x", field=None):
        coeffs = list(coeffs)
        if field is None:
            field = COMPLEX if any(field_of(c) == COMPLEX for c in coeffs) else EXACT
        coeffs = [coerce(c, field) for c in coeffs]
        if order is None:
            order = val + len(coeffs) - 1
        del coeffs[max(order - val + 1, 0):]
        k = 0
        while k < len(coeffs) and coeffs[k] == 0:
            k += 1
        coeffs = coeffs[k:]
        val += k
        if not coeffs:
            val = order + 1
        else:
            # interior gap up to order is implicit zero padding
            coeffs += [coerce(0, field)] * (order - val + 1 - len(coeffs))
        self._c = tuple(coeffs)
        self.val = val
        self.order = order
        self.var = var
        self.field = field

    # -- construction -----------------------------------------------------
    @classmethod
    def zero(cls, order, var="x", field=EXACT):
        return cls([], val=order + 1, order=order, var=var, field=field)

    @classmethod
    def one(cls, order, var="x", field=EXACT):
        return cls([1], 0, order, var, field)

    @classmethod
    def monomial(cls, coeff, degree, order, var="x", field=None):
        return cls([coeff], degree, order, var, field)

    @classmethod
    def from_dict(cls, terms, order, var="x", field=None):
        if not terms:
            return cls.zero(order, var, field or EXACT)
        lo = min(terms)
        if field is None:
            field = COMPLEX if any(field_of(c) == COMPLEX for c in terms.values()) else EXACT
        coeffs = [terms.get(d, 0) for d in range(lo, order + 1)]
        return cls(coeffs, lo, order, var, field)

    @classmethod
    def from_derivatives(cls, derivs, var="x", field=None):
        """Taylor series ``sum derivs[k] x^k / k!`` known through ``len(derivs)-1``."""
        derivs = list(derivs)
        if field is None:
            field = COMPLEX if any(field_of(c) == COMPLEX for c in derivs) else EXACT
        coeffs = []
        for k, d in enumerate(derivs):
            fact = math.factorial(k)
            coeffs.append(coerce(d, field) * _inv_int(fact, field))
        return cls(coeffs, 0, len(derivs) - 1, var, field)

    # -- access -----------------------------------------------------------
    def coeff(self, d):
        if d > self.order:
            raise TruncationError(f"coefficient of {self.var}^{d} is beyond truncation order {self.order}")
        if d < self.val:
            return coerce(0, self.field)
        return self._c[d - self.val]

    __getitem__ = coeff

    def coeffs(self, lo=None, hi=None):
        lo = self.val if lo is None else lo
        hi = self.order if hi is None else hi
        return [self.coeff(d) for d in range(lo, hi + 1)]

    def terms(self):
        return {self.val + k: c for k, c in enumerate(self._c) if c != 0}

    def is_zero(self):
        return not self._c

    def max_abs(self, lo=None, hi=None):
        vals = [abs(c) for c in self.coeffs(lo, hi)]
        return max(vals, default=0)

    def __len__(self):
        return len(self._c)

    # -- helpers ----------------------------------------------------------
    def _check(self, other):
        if not isinstance(other, LaurentSeries):
            raise TypeError(f"expected LaurentSeries, got {type(other).__name__}")
        if other.var != self.var:
            raise SeriesError(f"variable mismatch: {self.var} vs {other.var}")
        if other.field != self.field:
            raise FieldMismatch(f"field mismatch: {self.field} vs {other.field}")

    def _new(self, coeffs, val, order):
        return LaurentSeries(coeffs, val, order, self.var, self.field)

    def _scalar(self, s):
        if isinstance(s, numbers.Integral) or field_of(s) == self.field:
            return coerce(s, self.field)
        raise FieldMismatch(f"scalar {s!r} does not belong to the {self.field} field")

    def to_complex(self):
        return LaurentSeries([complex(c) for c in self._c], self.val, self.order, self.var, COMPLEX)

    def truncate(self, order):
        order = min(order, self.order)
        return self._new(self._c[: max(order - self.val + 1, 0)], self.val, order)

    def with_var(self, var):
        return LaurentSeries(self._c, self.val, self.order, var, self.field)

    # -- ring operations --------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, LaurentSeries):
            other = LaurentSeries([self._scalar(other)], 0, self.order, self.var, self.field)
        self._check(other)
        order = min(self.order, other.order)
        lo = min(self.val, other.val)
        if lo > order:
            return LaurentSeries.zero(order, self.var, self.field)
        return self._new([self.coeff(d) + other.coeff(d) for d in range(lo, order + 1)], lo, order)

    __radd__ = __add__

    def __neg__(self):
        return self._new([-c for c in self._c], self.val, self.order)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentSeries):
            s = self._scalar(other)
            return self._new([c * s for c in self._c], self.val, self.order)
        self._check(other)
        val = self.val + other.val
        order = min(self.order + other.val, other.order + self.val)
        if self.is_zero() or other.is_zero() or val > order:
            return LaurentSeries.zero(order, self.var, self.field)
        n = order - val + 1
        a, b = self._c, other._c
        out = []
        for k in range(n):
            s = 0
            for i in range(max(0, k - len(b) + 1), min(k, len(a) - 1) + 1):
                s += a[i] * b[k - i]
            out.append(s)
        return self._new(out, val, order)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, LaurentSeries):
            s = self._scalar(other)
            if s == 0:
                raise ZeroDivisionError("division of a series by zero")
            inv = 1 / s
            return self._new([c * inv for c in self._c], self.val, self.order)
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by an identically zero series")
        val = self.val - other.val
        rel = min(self.order - self.val, other.order - other.val)
        order = val + rel
        if self.is_zero() or rel < 0:
            return LaurentSeries.zero(order, self.var, self.field)
        a, b = self._c, other._c
        b0 = b[0]
        q = []
        for k in range(rel + 1):
            s = a[k] if k < len(a) else 0
            for j in range(1, min(k, len(b) - 1) + 1):
                s -= b[j] * q[k - j]
            q.append(s / b0)
        return self._new(q, val, order)

    def __rtruediv__(self, other):
        num = LaurentSeries([self._scalar(other)], 0, self.order - self.val, self.var, self.field)
        return num / self

    def __pow__(self, n):
        if not isinstance(n, numbers.Integral):
            raise TypeError("only integer powers are supported")
        if n < 0:
            return 1 / (self ** (-n))
        result = LaurentSeries.one(self.order - self.val, self.var, self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (self.var, self.field, self.order, self.val, self._c) == (
            other.var, other.field, other.order, other.val, other._c)

    def __hash__(self):
        return hash((self.var, self.field, self.order, self.val, self._c))

    # -- calculus ---------------------------------------------------------
    def deriv(self):
        coeffs = [c * (self.val + k) for k, c in enumerate(self._c)]
        return self._new(coeffs, self.val - 1, self.order - 1)

    def integrate(self):
        """Antiderivative with zero constant term; needs no ``x^-1`` term."""
        if self.val <= -1 <= self.order and self.coeff(-1) != 0:
            raise SeriesError("cannot integrate a series with a nonzero x^-1 term")
        coeffs = []
        for k, c in enumerate(self._c):
            d = self.val + k
            coeffs.append(0 if d == -1 else c * _inv_int(d + 1, self.field))
        return self._new(coeffs, self.val + 1, self.order + 1)

    def exp(self):
        if not self.is_zero() and self.val < 1:
            raise SeriesError("exp needs a series with no constant or negative-degree part")
        n = self.order
        one = coerce(1, self.field)
        if n < 0:
            return LaurentSeries.zero(n, self.var, self.field)
        a = [self.coeff(k) if k >= 1 else 0 for k in range(n + 1)]
        e = [one]
        for m in range(1, n + 1):
            s = 0
            for k in range(1, m + 1):
                if a[k]:
                    s += k * a[k] * e[m - k]
            e.append(s * _inv_int(m, self.field))
        return self._new(e, 0, n)

    def log(self):
        if self.val != 0 or self._c[0] != 1:
            raise SeriesError("log needs a series with constant term 1 and no negative part")
        n = self.order
        a = self._c
        ell = [coerce(0, self.field)]
        for m in range(1, n + 1):
            s = m * a[m]
            for k in range(1, m):
                s -= k * ell[k] * a[m - k]
            ell.append(s * _inv_int(m, self.field))
        return self._new(ell, 0, n)

    def reflect(self):
        """Substitute ``x -> -x``."""
        return self.scale(-1)

    def scale(self, k):
        """Substitute ``x -> k x``."""
        k = self._scalar(k)
        return self._new([c * k ** (self.val + i) for i, c in enumerate(self._c)], self.val, self.order)

    def shift(self, k):
        """Multiply by ``x**k``."""
        return self._new(self._c, self.val + k, self.order + k)

    def even_part(self):
        return self._new([c if (self.val + i) % 2 == 0 else 0 for i, c in enumerate(self._c)], self.val, self.order)

    def odd_part(self):
        return self._new([c if (self.val + i) % 2 else 0 for i, c in enumerate(self._c)], self.val, self.order)

    def __call__(self, x):
        total = 0
        for k, c in enumerate(self._c):
            if c:
                total += c * x ** (self.val + k)
        return total

    evaluate = __call__

    # -- text -------------------------------------------------------------
    def __str__(self):
        parts = []
        for d, c in sorted(self.terms().items()):
            if d == 0:
                parts.append(_fmt_coeff(c))
            elif d == 1:
                parts.append(f"{_fmt_coeff(c)}*{self.var}")
            else:
                parts.append(f"{_fmt_coeff(c)}*{self.var}^{d}")
        parts.append(f"O({self.var}^{self.order + 1})")
        return " + ".join(parts)

    def __repr__(self):
        return f"LaurentSeries({self})"


def ser_mul(a, b):
    return a * b


def ser_div(a, b):
    return a / b


def ser_exp(a):
    return a.exp()


def ser_log(a):
    return a.log()


def ser_reflect(a):
    return a.reflect()


def ser_deriv(a):
    return a.deriv()


def ser_coeff(a, d):
    return a.coeff(d)


def ser_compose_shift(derivs, var="x"):
    """Taylor re-expansion about a point from its derivative tower."""
    return LaurentSeries.from_derivatives(derivs, var)


# ---------------------------------------------------------------------------
# several variables


def _deg(m):
    return sum(m)


class MultiSeries:
    """Sparse series in ``n`` variables truncated at a total degree.

    ``terms`` maps exponent tuples (negative entries allowed) to nonzero
    coefficients.  ``order`` is the highest total degree known; ``None``
    marks an exact polynomial with no truncation.
    """

    __slots__ = ("terms", "order", "names", "field")

    def __init__(self, terms, order=None, names=("x1", "x2", "x3", "x4"), field=None):
        names = tuple(names)
        if field is None:
            field = COMPLEX if any(field_of(c) == COMPLEX for c in terms.values()) else EXACT
        clean = {}
        for m, c in terms.items():
            m = tuple(m)
            if len(m) != len(names):
                raise SeriesError(f"monomial {m} does not match {len(names)} variables")
            if order is not None and _deg(m) > order:
                continue
            c = coerce(c, field)
            if c != 0:
                clean[m] = c
        self.terms = clean
        self.order = order
        self.names = names
        self.field = field

    @property
    def nvars(self):
        return len(self.names)

    # -- construction -----------------------------------------------------
    @classmethod
    def constant(cls, value, names, order=None, field=None):
        return cls({(0,) * len(names): value}, order, names, field)

    @classmethod
    def linear_form(cls, coeffs, names, field=EXACT):
        n = len(names)
        terms = {}
        for i, c in enumerate(coeffs):
            if c:
                m = [0] * n
                m[i] = 1
                terms[tuple(m)] = c
        return cls(terms, None, names, field)

    @classmethod
    def compose(cls, series, form_coeffs, names, order):
        """``series(l)`` where ``l`` is the linear form with the given coefficients.

        ``series`` must be a power series (no negative powers); the result is
        known through ``min(order, series.order)``.
        """
        if series.val < 0:
            raise SeriesError("can only substitute a linear form into a power series")
        order = min(order, series.order)
        field = series.field
        n = len(names)
        support = [i for i, c in enumerate(form_coeffs) if c]
        terms = {}
        # multinomial expansion of l^k restricted to the support variables
        for k in range(0, order + 1):
            ck = series.coeff(k) if k >= series.val else 0
            if ck == 0:
                continue
            for combo in combinations_with_replacement(support, k):
                exps = [0] * n
                for i in combo:
                    exps[i] += 1
                mult = math.factorial(k)
                coeff = ck
                for i in support:
                    mult //= math.factorial(exps[i])
                    coeff = coeff * coerce(form_coeffs[i], field) ** exps[i]
                m = tuple(exps)
                terms[m] = terms.get(m, 0) + coeff * mult
        return cls(terms, order, names, field)

    def _new(self, terms, order):
        return MultiSeries(terms, order, self.names, self.field)

    def _check(self, other):
        if not isinstance(other, MultiSeries):
            raise TypeError(f"expected MultiSeries, got {type(other).__name__}")
        if other.names != self.names:
            raise SeriesError(f"variable mismatch: {self.names} vs {other.names}")
        if other.field != self.field:
            raise FieldMismatch(f"field mismatch: {self.field} vs {other.field}")

    def _scalar(self, s):
        if isinstance(s, numbers.Integral) or field_of(s) == self.field:
            return coerce(s, self.field)
        raise FieldMismatch(f"scalar {s!r} does not belong to the {self.field} field")

    # -- queries ----------------------------------------------------------
    def min_degree(self):
        if not self.terms:
            return math.inf if self.order is None else self.order + 1
        return min(_deg(m) for m in self.terms)

    def coeff(self, m):
        m = tuple(m)
        if self.order is not None and _deg(m) > self.order:
            raise TruncationError(f"monomial {m} is beyond truncation order {self.order}")
        return self.terms.get(m, coerce(0, self.field))

    def homogeneous(self, d):
        if self.order is not None and d > self.order:
            raise TruncationError(f"degree {d} is beyond truncation order {self.order}")
        return self._new({m: c for m, c in self.terms.items() if _deg(m) == d}, None)

    def degrees(self):
        return sorted({_deg(m) for m in self.terms})

    def is_zero(self):
        return not self.terms

    def max_abs(self, degree=None):
        vals = [abs(c) for m, c in self.terms.items() if degree is None or _deg(m) == degree]
        return max(vals, default=0)

    def truncate(self, order):
        if self.order is not None:
            order = min(order, self.order)
        return self._new(self.terms, order)

    def slice_var(self, var, exponent=0):
        """Coefficient of ``names[var]**exponent`` as a series in the remaining variables."""
        names = self.names[:var] + self.names[var + 1:]
        terms = {m[:var] + m[var + 1:]: c for m, c in self.terms.items() if m[var] == exponent}
        order = None if self.order is None else self.order - exponent
        return MultiSeries(terms, order, names, self.field)

    def permute(self, perm):
        """Relabel variables: variable ``i`` becomes variable ``perm[i]``."""
        out = {}
        for m, c in self.terms.items():
            new = [0] * self.nvars
            for i, e in enumerate(m):
                new[perm[i]] = e
            out[tuple(new)] = c
        return self._new(out, self.order)

    def substitute(self, point):
        total = 0
        for m, c in self.terms.items():
            t = complex(c) if self.field == COMPLEX else c
            for x, e in zip(point, m):
                if e:
                    t = t * x ** e
            total += t
        return total

    __call__ = substitute

    def to_complex(self):
        return MultiSeries({m: complex(c) for m, c in self.terms.items()}, self.order, self.names, COMPLEX)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, MultiSeries):
            other = MultiSeries.constant(self._scalar(other), self.names, None, self.field)
        self._check(other)
        if self.order is None:
            order = other.order
        elif other.order is None:
            order = self.order
        else:
            order = min(self.order, other.order)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return self._new(out, order)

    __radd__ = __add__

    def __neg__(self):
        return self._new({m: -c for m, c in self.terms.items()}, self.order)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MultiSeries):
            s = self._scalar(other)
            return self._new({m: c * s for m, c in self.terms.items()}, self.order)
        self._check(other)
        va, vb = self.min_degree(), other.min_degree()
        cands = []
        if self.order is not None:
            cands.append(self.order + vb)
        if other.order is not None:
            cands.append(other.order + va)
        order = min(cands) if cands else None
        if order == math.inf:
            order = None  # one factor is the exact zero polynomial
        elif order is not None:
            order = int(order)
        by_deg = {}
        for m, c in other.terms.items():
            by_deg.setdefault(_deg(m), []).append((m, c))
        degs = sorted(by_deg)
        out = {}
        for m1, c1 in self.terms.items():
            d1 = _deg(m1)
            for d2 in degs:
                if order is not None and d1 + d2 > order:
                    break
                for m2, c2 in by_deg[d2]:
                    m = tuple(x + y for x, y in zip(m1, m2))
                    out[m] = out.get(m, 0) + c1 * c2
        return self._new(out, order)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, numbers.Integral) or n < 0:
            raise TypeError("only non-negative integer powers are supported")
        result = MultiSeries.constant(1, self.names, None, self.field)
        for _ in range(n):
            result = result * self
        return result

    def shift(self, exps):
        """Multiply by the monomial with exponent tuple ``exps`` (entries may be negative)."""
        exps = tuple(exps)
        order = None if self.order is None else self.order + _deg(exps)
        return self._new({tuple(a + b for a, b in zip(m, exps)): c for m, c in self.terms.items()}, order)

    def exact_divide(self, divisor, tol=1e-13, scales=None):
        """Divide by an exact homogeneous polynomial; the remainder must vanish.

        Works degree slice by degree slice, since multiplying by a homogeneous
        polynomial never mixes total degrees.  Raises :class:`NotDivisible`
        naming the lexicographically leading monomial of the lowest failing
        slice.  Over the complex field, remainder coefficients up to
        ``tol`` times the slice scale count as rounding and are dropped; the
        scale of degree ``d`` is ``scales[d]`` when given (e.g. from a
        majorant of the dividend), else the largest dividend coefficient.
        """
        self._check(divisor)
        if divisor.order is not None:
            raise SeriesError("divisor must be an exact polynomial")
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        degs = {_deg(m) for m in divisor.terms}
        if len(degs) != 1:
            raise SeriesError("divisor must be homogeneous")
        k = degs.pop()
        if any(e < 0 for m in list(self.terms) + list(divisor.terms) for e in m):
            raise SeriesError("exact division is only defined for polynomials with non-negative exponents")
        lead = max(divisor.terms)
        lead_c = divisor.terms[lead]
        remainder = dict(self.terms)
        quotient = {}
        slices = sorted({_deg(m) for m in remainder})
        for d in slices:
            if scales is not None and d in scales:
                scale = scales[d]
            else:
                scale = max((abs(c) for mm, c in self.terms.items() if _deg(mm) == d), default=0)
            while True:
                if self.field == COMPLEX:
                    for t in [t for t, c in remainder.items() if _deg(t) == d and abs(c) <= tol * scale]:
                        del remainder[t]
                live = [m for m, c in remainder.items() if _deg(m) == d and c != 0]
                if not live:
                    break
                m = max(live)
                if any(a < b for a, b in zip(m, lead)):
                    raise NotDivisible(m, d)
                qm = tuple(a - b for a, b in zip(m, lead))
                qc = remainder[m] / lead_c
                quotient[qm] = quotient.get(qm, 0) + qc
                for dm, dc in divisor.terms.items():
                    t = tuple(a + b for a, b in zip(qm, dm))
                    nv = remainder.get(t, 0) - qc * dc
                    if nv == 0:
                        remainder.pop(t, None)
                    else:
                        remainder[t] = nv
        order = None if self.order is None else self.order - k
        return self._new(quotient, order)

    def __eq__(self, other):
        if not isinstance(other, MultiSeries):
            return NotImplemented
        return (self.names, self.field, self.order, self.terms) == (other.names, other.field, other.order, other.terms)

    def __str__(self):
        parts = []
        for m in sorted(self.terms, key=lambda m: (_deg(m), tuple(-e for e in m))):
            mono = "*".join(
                n if e == 1 else f"{n}^{e}" for n, e in zip(self.names, m) if e)
            c = _fmt_coeff(self.terms[m])
            parts.append(f"{c}*{mono}" if mono else c)
        if self.order is not None:
            parts.append(f"O(deg {self.order + 1})")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"MultiSeries({self})"


class BiSeries(MultiSeries):
    """Two-variable truncated series (default variables ``a`` and ``c``)."""

    def __init__(self, terms, order=None, names=("a", "c"), field=None):
        if len(names) != 2:
            raise SeriesError("BiSeries has exactly two variables")
        super().__init__(terms, order, names, field)

    def _new(self, terms, order):
        return BiSeries(terms, order, self.names, self.field)


class MultiPoly(MultiSeries):
    """Four-variable polynomial over the rationals truncated at a total degree."""

    def __init__(self, terms, order=None, names=("e1", "e2", "e3", "e4"), field=EXACT):
        if len(names) != 4:
            raise SeriesError("MultiPoly has exactly four variables")
        super().__init__(terms, order, names, field)

    def _new(self, terms, order):
        return MultiPoly(terms, order, self.names, self.field)

    @classmethod
    def variable(cls, i, order=None):
        m = [0, 0, 0, 0]
        m[i] = 1
        return cls({tuple(m): 1}, order)
