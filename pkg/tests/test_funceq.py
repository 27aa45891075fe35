import math
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from conftest import TAUS, random_spec, rel_err
from hypothesis import given, settings
from hypothesis import strategies as st

from ellgenus import elliptic as ell
from ellgenus import funceq as fq
from ellgenus import genus as gm
from ellgenus.genus import GenusSpec, SeriesGenus
from ellgenus.series import SeriesError

SEED = (Fraction(1, 2), Fraction(-2, 3), Fraction(3, 7), Fraction(5, 4))
small_fracs = st.fractions(min_value=-3, max_value=3, max_denominator=5)


@pytest.fixture(scope="module")
def solved():
    return fq.recursion_solve(SEED, 12)


@pytest.fixture(scope="module")
def specs():
    rng = np.random.default_rng(11)
    return [random_spec(rng, tau) for tau in TAUS]


def poly_g(alphas):
    """g(u) = f(u)/u for a polynomial f, evaluated exactly."""
    def g(u):
        return sum(a * u ** k for k, a in enumerate((1,) + tuple(alphas))) / u
    return g


def rational_point(rng, n):
    return tuple(Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 10))) for _ in range(n))


# -- exact expansions against direct rational evaluation -----------------------------


@settings(max_examples=20, deadline=None)
@given(st.lists(small_fracs, min_size=2, max_size=2), st.integers(0, 10**6))
def test_funla_expansion_matches_rational_function(a, seed):
    # f of degree 2: the expression is a polynomial of degree <= 3
    sg = SeriesGenus(tuple(a) + (0,) * 6)
    q = fq.funla_expansion(sg)
    assert q.order >= 3 and all(q.max_abs(d) == 0 for d in range(4, q.order + 1))
    rng = np.random.default_rng(seed)
    pt = rational_point(rng, 3)
    if 0 in pt or 0 in (pt[0] + pt[1], pt[1] + pt[2], sum(pt)):
        return
    assert q.substitute(pt) == fq.funla_residual(poly_g(a), *pt)


@settings(max_examples=20, deadline=None)
@given(st.lists(small_fracs, min_size=2, max_size=2), st.integers(0, 10**6))
def test_funpole_matches_rational_function(a, seed):
    sg = SeriesGenus(tuple(a) + (0,) * 6)
    fp = fq.funpole_residual(sg)
    rng = np.random.default_rng(seed)
    x, y = rational_point(rng, 2)
    if 0 in (x, y, x + y):
        return
    g = poly_g(a)

    def dg(u):
        return -1 / u ** 2 + a[1]

    def P(u):
        return g(u) * g(-u)

    direct = g(x + y) * (P(x) - P(y)) + g(x) * dg(y) - dg(x) * g(y)
    assert fp.substitute((x, y)) == direct


def test_inverse_x_model_is_exact():
    g = lambda u: 1 / u
    pts = (Fraction(1, 3), Fraction(-2, 7), Fraction(5, 4), Fraction(1, 9))
    assert fq.funl_residual(g, *pts) == 0
    assert fq.funla_residual(g, *pts[:3]) == 0
    zero = SeriesGenus((0,) * 12)
    assert fq.funpole_residual(zero).is_zero()
    assert fq.lambda_of(zero) == 0
    assert fq.recursion_solve((0, 0, 0, 0), 12).alphas == (0,) * 12


def test_funl_symmetries():
    g = poly_g((Fraction(1, 2), Fraction(3, 5), Fraction(-1, 3)))
    x1, x2, y1, y2 = Fraction(1, 3), Fraction(-2, 7), Fraction(5, 4), Fraction(1, 9)
    r = fq.funl_residual(g, x1, x2, y1, y2)
    assert fq.funl_residual(g, x2, x1, y1, y2) == r
    assert fq.funl_residual(g, x1, x2, y2, y1) == r


def test_funla_is_funl_after_substitution(specs, rng):
    for spec in specs:
        for _ in range(10):
            x1, x2, y1, y2 = (complex(*rng.uniform(-0.4, 0.4, 2)) for _ in range(4))
            terms = fq.funl_terms(spec, x1, x2, y1, y2)
            scale = max(abs(t) for t in terms)
            diff = fq.funl_residual(spec, x1, x2, y1, y2) - fq.funla_residual(spec, x1 - x2, x2 - y1, y1 - y2)
            assert abs(diff) <= 1e-12 * scale


def test_funl_residual_small_for_closed_form(specs, rng):
    for spec in specs:
        for _ in range(20):
            pts = [complex(*rng.uniform(-0.4, 0.4, 2)) for _ in range(4)]
            assert fq.relative_residual(fq.funl_terms(spec, *pts)) < 1e-9


def test_funla_residual_large_off_family(specs):
    spec = specs[0]
    bad = SeriesGenus(tuple(a + (1 if k == 4 else 0) for k, a in enumerate(gm.g_series(spec, 12).alphas)))
    g = bad.g_series()
    a, b, c = 0.3, 0.25 + 0.1j, -0.2 + 0.15j
    assert abs(fq.funla_residual(g, a, b, c)) > 1e-3


# -- recursion ---------------------------------------------------------------------


def test_recursion_values(solved):
    assert solved.alphas[4:9] == (
        Fraction(1723, 2520),
        Fraction(-106397, 370440),
        Fraction(-9767, 185220),
        Fraction(664637, 1905120),
        Fraction(3635545, 37340352),
    )


def test_alpha5_against_symbolic_solve():
    a, c, t = sp.symbols("a c t")
    a5 = sp.Symbol("a5")
    alphas = [sp.Rational(v.numerator, v.denominator) for v in SEED] + [a5]
    f = lambda u: 1 + sum(al * u ** (k + 1) for k, al in enumerate(alphas))
    df = lambda u: sp.diff(f(t), t).subs(t, u)
    N = f(a + c) * (a ** 2 * f(c) * f(-c) - c ** 2 * f(a) * f(-a)) + (a + c) * (
        a * f(a) * (c * df(c) - f(c)) - c * f(c) * (a * df(a) - f(a)))
    poly = sp.Poly(sp.expand(N), a, c)
    slice7 = [coef for (i, j), coef in poly.terms() if i + j == 7]
    sol = sp.solve(slice7[0], a5)[0]
    assert all(sp.simplify(s.subs(a5, sol)) == 0 for s in slice7)
    assert Fraction(int(sol.p), int(sol.q)) == Fraction(1723, 2520)


def test_recursion_is_deterministic():
    assert fq.recursion_solve(SEED, 10) == fq.recursion_solve(SEED, 10)


@settings(max_examples=10, deadline=None)
@given(small_fracs, small_fracs)
def test_odd_seeds_stay_odd(a2, a4):
    sg = fq.recursion_solve((0, a2, 0, a4), 12)
    assert all(sg.alpha(k) == 0 for k in range(1, 13, 2))


def test_recursion_from_closed_form(specs):
    for spec in specs:
        cf = gm.g_series(spec, 12)
        rs = fq.recursion_solve(cf.alphas[:4], 12)
        assert max(abs(x - y) for x, y in zip(rs.alphas, cf.alphas)) < 1e-10


def test_four_parameter_family():
    rng = np.random.default_rng(3)
    done = 0
    while done < 4:
        seed = tuple(Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 6))) for _ in range(4))
        sg = fq.recursion_solve(seed, 12)
        try:
            ep = gm.extract_params(sg)
        except ell.LatticeError:
            continue  # degenerate (trigonometric) member
        cf = gm.g_series(ep.spec(), 12)
        assert max(rel_err(complex(x), y) for x, y in zip(sg.alphas, cf.alphas)) < 1e-9
        done += 1


def test_recursion_needs_order_five():
    with pytest.raises(ValueError):
        fq.recursion_solve(SEED, 4)
    with pytest.raises(ValueError):
        fq.recursion_solve(SEED[:3], 8)


# -- lambda and reports ---------------------------------------------------------------


def test_lambda_vanishes_for_solutions(solved):
    assert fq.lambda_of(solved) == 0
    rep = fq.funl_report(solved)
    assert rep.passed and rep.lam == 0 and rep.max_residual == 0


@settings(max_examples=20, deadline=None)
@given(st.lists(small_fracs, min_size=6, max_size=6))
def test_lambda_vanishes_for_every_series(alphas):
    # the poles of the four-point expression cancel for any g, and so does its constant term
    assert fq.lambda_of(SeriesGenus(tuple(alphas))) == 0


def test_lambda_needs_six_coefficients():
    with pytest.raises(SeriesError):
        fq.lambda_of(SeriesGenus((1, 2, 3, 4, 5)))


@pytest.mark.parametrize("n", [5, 6, 7, 8])
def test_perturbation_breaks_at_predicted_degree(solved, n):
    bad = solved.perturbed(n)
    rep = fq.funl_report(bad)
    assert not rep.passed and rep.first_failure_degree == n - 3
    assert fq.first_nonzero_degree(fq.funpole_residual(bad)) == n - 3


def test_b0_slice_of_funla_is_funpole(solved):
    for sg in (solved, solved.perturbed(6), SeriesGenus(SEED + (1, 2, 3, 4))):
        assert fq.funla_expansion(sg).slice_var(1, 0) == fq.funpole_residual(sg)


def test_funpole_vanishes_for_recursion(solved):
    fp = fq.funpole_residual(solved)
    assert fp.is_zero() and fp.order == 9


def test_complex_reports(specs):
    cf = gm.g_series(specs[1], 12)
    assert fq.funl_report(cf).passed
    bad = fq.funl_report(cf.perturbed(6, 0.01))
    assert bad.first_failure_degree == 3


# -- Hirzebruch equation ----------------------------------------------------------------


def test_hirzebruch_ode(solved):
    assert fq.hirzebruch_ode_residual(solved).is_zero()
    assert fq.hirzebruch_ode_residual(SeriesGenus((0,) * 8)).is_zero()
    for n in (5, 6, 7):
        r = fq.hirzebruch_ode_residual(solved.perturbed(n))
        assert min(r.terms()) == n - 3


def test_hirzebruch_ode_is_funpole_at_c_zero(solved):
    bad = solved.perturbed(6)
    fp = fq.funpole_residual(bad).slice_var(1, 0)
    ode = fq.hirzebruch_ode_residual(bad)
    for d in range(0, fp.order + 1):
        assert fp.coeff((d,)) == ode.coeff(d)


# -- master form, Phi --------------------------------------------------------------------


def test_master_residual(specs, rng):
    for spec in specs:
        for _ in range(10):
            a, c = (complex(*rng.uniform(-0.4, 0.4, 2)) for _ in range(2))
            lhs, num = fq.master_terms(spec, a, c)
            assert abs(lhs - num) <= 1e-9 * max(abs(lhs), abs(num))


def test_master_degenerate_point(spec):
    with pytest.raises(fq.DegeneratePoint):
        fq.master_residual(spec, 0.2 + 0.1j, 0.2 + 0.1j)


def test_master_components(solved):
    phi = fq.master_components(solved)
    g = solved.g_series()
    assert phi[0] == g and phi[2] == g.deriv() and phi[4] == gm.p_series(solved)


def test_phi_eval(spec):
    L, nu = spec.lattice, spec.nu
    assert abs(1e-6 * fq.phi_eval(1e-6, nu, L) - 1) < 1e-9
    assert abs(fq.phi_eval(nu, nu, L)) < 1e-12
    tuned = GenusSpec(ell.zeta_w(nu, L), nu, L)
    for x in (0.1 + 0.3j, -0.25):
        assert abs(gm.g_eval(x, tuned) - fq.phi_eval(x, nu, L)) < 1e-12 * abs(gm.g_eval(x, tuned))


def test_master_quotient_shape():
    # the determinant quotient built from the truncated series reproduces g(a+c)
    # at small points, up to the truncation error
    sg = fq.recursion_solve(SEED, 10)
    g, _, dg, _, P = fq.master_components(sg)
    a, c = Fraction(1, 5), Fraction(1, 7)
    num = g(a) * dg(c) - dg(a) * g(c)
    den = P(c) - P(a)
    assert abs(float(num / den - g(a + c))) < 1e-6


# -- Laurent data at a generic point ---------------------------------------------------------


def test_laurent_data_pair2(specs):
    for spec in specs:
        L = spec.lattice
        base = fq.default_x0(L)
        for x0 in (base, base * Fraction(3, 2), base + Fraction(1, 20)):
            ld = fq.bb_laurent_data(spec, x0)
            x = float(x0)
            assert abs(ld.lam - (2 * ell.zeta_w(x, L) - ell.zeta_w(2 * x, L))) < 1e-10
            assert abs(ld.F[0] + ell.wp(2 * x, L)) < 1e-9
            assert abs(ld.g2 - L.g2) < 1e-9 * max(1, abs(L.g2))
            assert abs(ld.g3 - L.g3) < 1e-9 * max(1, abs(L.g3))


def test_laurent_data_pair1(specs):
    for spec in specs:
        L = spec.lattice
        ld = fq.bb_laurent_data(spec, pair=1)
        x = float(ld.x0)
        nu1 = spec.nu - 2 * x
        k = spec.mu - ell.zeta_w(spec.nu, L)
        assert abs(ld.lam - (ell.zeta_w(nu1, L) - ell.zeta_w(spec.nu, L) + 2 * ell.zeta_w(x, L) - k)) < 1e-9
        assert abs(ld.F[0] + ell.wp(nu1, L)) < 1e-8 * max(1, abs(ell.wp(nu1, L)))


def test_laurent_and_series_paths_agree(specs):
    for spec in specs:
        g2, g3, _ = gm.series_invariants(gm.g_series(spec, 12))
        ld = fq.bb_laurent_data(spec)
        assert abs(ld.g2 - g2) < 1e-9 * max(1, abs(g2))
        assert abs(ld.g3 - g3) < 1e-9 * max(1, abs(g3))


def test_laurent_data_rejects_non_generic_point():
    L = ell.LatticeParams.from_tau(1j)
    spec = GenusSpec(0.1, 0.3 + 0.2j, L)
    with pytest.raises(ValueError):
        fq.bb_laurent_data(spec, Fraction(1))  # 2 x0 = 2 omega
    with pytest.raises(ValueError):
        fq.bb_laurent_data(spec, pair=3)


def test_default_x0():
    L = ell.LatticeParams.from_tau(0.3 + 1.1j)
    x0 = fq.default_x0(L)
    assert isinstance(x0, Fraction)
    assert math.isclose(float(x0), min(abs(L.omega), abs(L.omega_prime)) / 5, rel_tol=1e-3)
