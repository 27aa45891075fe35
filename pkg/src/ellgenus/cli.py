"""Command-line driver.

    python -m ellgenus solve 0 1/6 0 0 --order 12 --json-out solved.json
    python -m ellgenus verify gysin --input solved.json
    python -m ellgenus special sigma 0.3 --tau 1i

Exit codes: 0 pass, 1 verification failure or domain error, 2 usage error.
Negative positional values go after ``--``, with all flags before it.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, fields, replace
from fractions import Fraction

import numpy as np

from . import elliptic as ell
from . import funceq, genus, gysin, jsonio
from .series import EXACT, SeriesError

MAX_ORDER = 40
MAX_POLY_DEGREE = 14


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    order: int = 16
    poly_degree: int = 10
    tol: float | None = None
    seed: int = 0
    samples: int | None = None
    mode: str = "exact"
    json_out: str | None = None
    pole_guard: float = ell.POLE_GUARD

    def validate(self):
        if not 5 <= self.order <= MAX_ORDER:
            raise UsageError(f"order must be in 5..{MAX_ORDER}")
        if not 6 <= self.poly_degree <= MAX_POLY_DEGREE:
            raise UsageError(f"poly-degree must be in 6..{MAX_POLY_DEGREE}")
        if self.tol is not None and not self.tol > 0:
            raise UsageError("tol must be positive")
        if not self.pole_guard > 0:
            raise UsageError("pole_guard must be positive")
        if self.samples is not None and self.samples < 1:
            raise UsageError("samples must be positive")
        if self.mode not in ("exact", "float"):
            raise UsageError("mode must be exact or float")
        return self


_CASTS = {"order": int, "poly_degree": int, "tol": float, "seed": int, "samples": int,
          "mode": str, "json_out": str, "pole_guard": float}


def read_config(path):
    """Flat ``key = value`` file; blank lines and ``#`` comments are skipped."""
    out = {}
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}") from exc
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in _CASTS:
            raise UsageError(f"{path}:{lineno}: expected one of {sorted(_CASTS)} as key=value")
        try:
            out[key] = _CASTS[key](value.strip())
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: bad value for {key}") from exc
    return out


def parse_number(text):
    """``3``, ``-1/6``, ``0.25`` -> Fraction; ``1i``, ``0.3+1.1j`` -> complex."""
    s = text.strip().replace(" ", "")
    try:
        if s.endswith(("i", "j")):
            return complex(s[:-1] + "j")
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse number {text!r}") from exc


def parse_range(text):
    lo, sep, hi = text.partition("..")
    try:
        lo = int(lo)
        hi = int(hi) if sep else lo
    except ValueError as exc:
        raise UsageError(f"bad range {text!r}; expected a..b") from exc
    if lo < 0 or hi < lo:
        raise UsageError(f"bad range {text!r}")
    return range(lo, hi + 1)


# ---------------------------------------------------------------------------
# commands; each returns (report dict, passed)


def _load_series(path, cfg):
    try:
        sg = jsonio.series_from_json(_load_obj(path, "series"))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path}: not a series JSON ({exc})") from exc
    return sg.to_complex() if cfg.mode == "float" else sg


def _load_obj(path, key):
    if path is None:
        raise UsageError("--input is required")
    try:
        obj = jsonio.load(path)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    return obj.get(key, obj) if isinstance(obj, dict) else obj


def _load_spec(path):
    obj = _load_obj(path, "spec")
    try:
        return jsonio.spec_from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path}: not a genus spec JSON ({exc})") from exc


def _lattice(args, cfg):
    if args.input:
        return _load_spec(args.input).lattice
    tau = parse_number(args.tau or "1i")
    try:
        return ell.LatticeParams.from_tau(complex(tau))
    except ell.LatticeError as exc:
        raise UsageError(str(exc)) from exc


def cmd_solve(args, cfg):
    seed = tuple(parse_number(s) for s in args.seed_values)
    if cfg.mode == "float" or any(isinstance(v, complex) for v in seed):
        seed = tuple(complex(v) for v in seed)
    try:
        sg = funceq.recursion_solve(seed, cfg.order, tol=cfg.tol or 1e-10)
    except funceq.RecursionBreakdown as exc:
        return {"error": str(exc)}, False
    lam = funceq.lambda_of(sg) if sg.order >= 6 else None
    fp = funceq.funpole_residual(sg)
    rep = {
        "series": jsonio.series_to_json(sg),
        "lambda": jsonio.enc_value(lam),
        "funpole_max_residual": jsonio.enc_magnitude(fp.max_abs()),
    }
    tol = cfg.tol or 1e-10
    ok = fp.max_abs() == 0 if sg.field == EXACT else fp.max_abs() <= tol
    return rep, ok


def cmd_params(args, cfg):
    sg = _load_series(args.input, cfg)
    try:
        ep = genus.extract_params(sg, cfg.tol or 1e-9)
    except (genus.NotAGenusSeries, ell.LatticeError, ell.ConvergenceError) as exc:
        return {"error": str(exc)}, False
    return jsonio.params_to_json(ep), True


def _sample_points(rng, n, radius):
    pts = rng.uniform(-radius, radius, size=(n, 2))
    return pts[:, 0] + 1j * pts[:, 1]


def _verify_funl(args, cfg, rng):
    obj = _load_obj(args.input, "series")
    if isinstance(obj, dict) and "alphas" in obj:
        sg = _load_series(args.input, cfg)
        rep = funceq.funl_report(sg, tol=cfg.tol)
        return jsonio.funl_report_to_json(rep), rep.passed
    spec = _load_spec(args.input)
    tol = cfg.tol or 1e-9
    n = cfg.samples or 100
    radius = 0.4 * spec.lattice.min_period
    worst = 0.0
    for _ in range(n):
        pts = _sample_points(rng, 4, radius)
        worst = max(worst, funceq.relative_residual(funceq.funl_terms(spec, *pts)))
    return {"max_residual": worst, "samples": n, "tol": tol}, worst < tol


def _verify_funpole(args, cfg, rng):
    sg = _load_series(args.input, cfg)
    fp = funceq.funpole_residual(sg)
    tol = None if sg.field == EXACT else (cfg.tol or 1e-10)
    first = funceq.first_nonzero_degree(fp, tol)
    rep = {"max_residual": jsonio.enc_magnitude(fp.max_abs()), "first_failure_degree": first,
           "order": fp.order, "tol": tol}
    return rep, first is None


def _verify_gysin(args, cfg, rng):
    sg = _load_series(args.input, cfg)
    if sg.field != EXACT:
        raise UsageError("gysin verification needs an exact rational series")
    inp = gysin.PushforwardInput(sg, cfg.poly_degree)
    rep = gysin.gysin_pushforward(inp)
    out = jsonio.pushforward_to_json(rep)
    out["equivalence"] = gysin.equivalence_check(inp)
    return out, rep.lands_in_h0 and rep.h0_value == 0 and out["equivalence"]


def _verify_bridge(args, cfg, rng):
    base = _load_spec(args.input)
    spec = genus.GenusSpec.bridge(base.nu, base.lattice)
    tol = cfg.tol or 1e-9
    n = cfg.samples or 20
    worst = 0.0
    for _ in range(n):
        x1, x2 = _sample_points(rng, 2, 0.5)
        worst = max(worst, genus.theta_bridge_cross_ratio(x1, x2, spec))
    return {"max_residual": worst, "samples": n, "tol": tol, "mu": jsonio.enc_complex(spec.mu)}, worst < tol


def _verify_triple(args, cfg, rng):
    L = _lattice(args, cfg)
    tol = cfg.tol or 1e-12
    n = cfg.samples or 50
    worst = 0.0
    for x in _sample_points(rng, n, 0.7):
        worst = max(worst, ell.triple_product_residual(x, L.tau))
    return {"max_residual": worst, "samples": n, "tol": tol, "tau": jsonio.enc_complex(L.tau)}, worst < tol


VERIFIERS = {
    "funl": _verify_funl,
    "funpole": _verify_funpole,
    "gysin": _verify_gysin,
    "bridge": _verify_bridge,
    "triple-product": _verify_triple,
}


def cmd_verify(args, cfg):
    rng = np.random.default_rng(cfg.seed)
    rep, ok = VERIFIERS[args.which](args, cfg, rng)
    rep.update({"which": args.which, "seed": cfg.seed, "pass": bool(ok)})
    return rep, ok


def cmd_genus(args, cfg):
    sg = _load_series(args.input, cfg)
    table = []
    for n in parse_range(args.n):
        try:
            table.append({"n": n, "value": jsonio.enc_value(genus.genus_cpn(sg, n))})
        except SeriesError as exc:
            raise UsageError(str(exc)) from exc
    return {"table": table}, True


SPECIAL = {
    "sigma": ell.sigma,
    "zeta": ell.zeta_w,
    "wp": ell.wp,
    "wp_prime": ell.wp_prime,
    "theta1": lambda z, L: ell.theta1(z, L.tau),
}


def cmd_special(args, cfg):
    L = _lattice(args, cfg)
    z = complex(parse_number(args.point))
    if args.name == "g":
        if not args.input:
            raise UsageError("special g needs --input with a genus spec")
        value = genus.g_eval(z, _load_spec(args.input))
    else:
        value = SPECIAL[args.name](z, L)
    rep = {"function": args.name, "point": jsonio.enc_complex(z), "tau": jsonio.enc_complex(L.tau),
           "value": jsonio.enc_complex(value)}
    return rep, True


def cmd_qexp(args, cfg):
    x = complex(parse_number(args.x))
    y = parse_number(args.y)
    q = complex(parse_number(args.q_tilde))
    try:
        params = genus.LoopGenusParams(complex(y), q, args.K)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    value = genus.loop_chiy_factor(x, params)
    return {"x": jsonio.enc_complex(x), "y": jsonio.enc_value(y), "q_tilde": jsonio.enc_complex(q),
            "K": args.K, "value": jsonio.enc_complex(value)}, True


# ---------------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", type=int, help="series truncation order (default 16)")
    common.add_argument("--poly-degree", dest="poly_degree", type=int, help="total-degree bound for the push-forward (default 10)")
    common.add_argument("--tol", type=float, help="numeric tolerance (command-specific default)")
    common.add_argument("--seed", type=int, help="seed for sampled residuals (default 0)")
    common.add_argument("--samples", type=int, help="number of sampled points")
    common.add_argument("--config", help="key=value config file; flags win")
    common.add_argument("--json-out", dest="json_out", help="also write the JSON report here")
    common.add_argument("--mode", choices=("exact", "float"), help="arithmetic mode")
    common.add_argument("--input", help="input JSON (series or genus spec)")

    p = argparse.ArgumentParser(prog="ellgenus", description="Elliptic genus series, functional equations and checks.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", parents=[common], help="extend a1..a4 by the recursion")
    s.add_argument("seed_values", nargs=4, metavar="a")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("params", parents=[common], help="lattice parameters of a series")
    s.set_defaults(func=cmd_params)

    s = sub.add_parser("verify", parents=[common], help="run one verifier")
    s.add_argument("which", choices=sorted(VERIFIERS))
    s.add_argument("--tau", help="lattice for triple-product (default 1i)")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("genus", parents=[common], help="genus of CP^n")
    s.add_argument("--n", default="0..4", help="range a..b")
    s.set_defaults(func=cmd_genus)

    s = sub.add_parser("special", parents=[common], help="evaluate a special function")
    s.add_argument("name", choices=sorted(SPECIAL) + ["g"])
    s.add_argument("point")
    s.add_argument("--tau", help="lattice ratio (default 1i)")
    s.set_defaults(func=cmd_special)

    s = sub.add_parser("qexp", parents=[common], help="loop-space chi_y factor")
    s.add_argument("x")
    s.add_argument("y")
    s.add_argument("q_tilde")
    s.add_argument("-K", type=int, default=40, help="number of product factors")
    s.set_defaults(func=cmd_qexp)
    return p


def make_config(args):
    cfg = RunConfig()
    if args.config:
        cfg = replace(cfg, **read_config(args.config))
    overrides = {f.name: getattr(args, f.name) for f in fields(RunConfig)
                 if getattr(args, f.name, None) is not None}
    return replace(cfg, **overrides).validate()


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    old_guard = ell.POLE_GUARD
    cfg = None
    try:
        cfg = make_config(args)
        ell.POLE_GUARD = cfg.pole_guard
        rep, ok = args.func(args, cfg)
    except UsageError as exc:
        parser.error(str(exc))
    except (ell.PoleError, ell.LatticeError, ell.ConvergenceError, SeriesError,
            ArithmeticError, ValueError) as exc:
        rep, ok = {"error": f"{type(exc).__name__}: {exc}"}, False
    finally:
        ell.POLE_GUARD = old_guard
    text = jsonio.dumps(rep)
    sys.stdout.write(text)
    if cfg is not None and cfg.json_out:
        with open(cfg.json_out, "w") as fh:
            fh.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
