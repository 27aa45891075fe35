"""Elliptic genera: truncated series, Weierstrass functions, functional equations, push-forwards."""

from .elliptic import LatticeParams, sigma, theta1, wp, wp_prime, zeta_w
from .funceq import (
    FunlReport,
    LaurentData,
    bb_laurent_data,
    funl_report,
    funl_residual,
    funla_residual,
    funpole_residual,
    hirzebruch_ode_residual,
    lambda_of,
    recursion_solve,
)
from .genus import GenusSpec, SeriesGenus, extract_params, g_eval, g_series, genus_cpn
from .gysin import PushforwardInput, PushforwardReport, equivalence_check, gysin_pushforward
from .series import BiSeries, LaurentSeries, MultiPoly, MultiSeries

__all__ = [
    "BiSeries", "FunlReport", "GenusSpec", "LatticeParams", "LaurentData", "LaurentSeries",
    "MultiPoly", "MultiSeries", "PushforwardInput", "PushforwardReport", "SeriesGenus",
    "bb_laurent_data", "equivalence_check", "extract_params", "funl_report", "funl_residual",
    "funla_residual", "funpole_residual", "g_eval", "g_series", "genus_cpn", "gysin_pushforward",
    "hirzebruch_ode_residual", "lambda_of", "recursion_solve", "sigma", "theta1", "wp",
    "wp_prime", "zeta_w",
]
