"""JSON encodings: rationals as ``[num, den]``, complex numbers as ``[re, im]``.

A bare pair is ambiguous, so serialized series carry a ``field`` tag.
"""

from __future__ import annotations

import json
from fractions import Fraction

from . import elliptic as ell
from .genus import GenusSpec, SeriesGenus
from .series import COMPLEX, EXACT


def enc_rational(x):
    x = Fraction(x)
    return [x.numerator, x.denominator]


def enc_complex(z):
    z = complex(z)
    return [z.real, z.imag]


def enc_value(v):
    """Rationals and integers as pairs of ints, everything else as ``[re, im]``."""
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, (int, Fraction)):
        return enc_rational(v)
    return enc_complex(v)


def enc_magnitude(v):
    """A nonnegative size; exact sizes stay exact."""
    if isinstance(v, (int, Fraction)):
        return enc_rational(v)
    return float(v)


def dec_rational(p):
    if isinstance(p, (int, str)):
        return Fraction(p)
    num, den = p
    return Fraction(int(num), int(den))


def dec_complex(p):
    if isinstance(p, (int, float)):
        return complex(p)
    re, im = p
    return complex(float(re), float(im))


def series_to_json(sg):
    enc = enc_rational if sg.field == EXACT else enc_complex
    return {"field": sg.field, "order": sg.order, "alphas": [enc(a) for a in sg.alphas]}


def series_from_json(obj):
    fld = obj.get("field", EXACT)
    if fld not in (EXACT, COMPLEX):
        raise ValueError(f"unknown field {fld!r}")
    dec = dec_rational if fld == EXACT else dec_complex
    return SeriesGenus(tuple(dec(a) for a in obj["alphas"]), fld)


def lattice_to_json(L):
    return {
        "omega": enc_complex(L.omega),
        "omega_prime": enc_complex(L.omega_prime),
        "tau": enc_complex(L.tau),
        "g2": enc_complex(L.g2),
        "g3": enc_complex(L.g3),
    }


def lattice_from_json(obj):
    if "omega" in obj:
        return ell.LatticeParams.from_periods(dec_complex(obj["omega"]), dec_complex(obj["omega_prime"]))
    if "tau" in obj:
        return ell.LatticeParams.from_tau(dec_complex(obj["tau"]))
    return ell.LatticeParams.from_invariants(dec_complex(obj["g2"]), dec_complex(obj["g3"]))


def spec_to_json(spec):
    out = {"kind": "genus_spec", "mu": enc_complex(spec.mu), "nu": enc_complex(spec.nu)}
    out.update(lattice_to_json(spec.lattice))
    return out


def spec_from_json(obj):
    return GenusSpec(dec_complex(obj["mu"]), dec_complex(obj["nu"]), lattice_from_json(obj))


def params_to_json(ep):
    out = {
        "kind": "genus_spec",
        "mu": enc_complex(ep.mu),
        "nu": enc_complex(ep.nu),
        "wp_nu": enc_complex(ep.wp_nu),
    }
    out.update(lattice_to_json(ep.lattice))
    out["g2"] = enc_complex(ep.g2)
    out["g3"] = enc_complex(ep.g3)
    return out


def funl_report_to_json(rep):
    return {
        "lambda": enc_value(rep.lam),
        "max_residual": enc_magnitude(rep.max_residual),
        "per_degree_max": [enc_magnitude(v) for v in rep.per_degree_max],
        "first_failure_degree": rep.first_failure_degree,
        "order": rep.order,
        "tol": rep.tol,
        "pass": rep.passed,
    }


def laurent_to_json(ld):
    return {
        "x0": enc_rational(ld.x0),
        "pair": ld.pair,
        "lambda": enc_complex(ld.lam),
        "F": [enc_complex(v) for v in ld.F],
        "g2": enc_complex(ld.g2),
        "g3": enc_complex(ld.g3),
    }


def pushforward_to_json(rep):
    return {
        "h0_value": enc_rational(rep.h0_value),
        "per_degree_max": [enc_rational(v) for v in rep.per_degree_max],
        "lands_in_h0": rep.lands_in_h0,
        "first_failure_degree": rep.first_failure_degree,
    }


def dumps(obj):
    """Deterministic text: sorted keys, fixed indentation, floats via shortest round-trip repr."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def load(path):
    with open(path) as fh:
        return json.load(fh)
