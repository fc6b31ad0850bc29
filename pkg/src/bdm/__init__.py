"""Fiberwise symbol calculus for boundary problems and resolvent trace expansions."""

from .exact import ExactComplex, exact
from .fitting import AsymptoticExpansionRegressor, ExpansionFit, fit_expansion
from .laguerre import LaguerreSeries, expand, to_fraction
from .normal_rational import NormalRational, PoleFraction, line_integral, minus, mul, plus
from .resolvent import BoundaryModel, Ray, kappa, q_power, resolvent_power
from .sgo import SGOSymbol, compose_gg, compose_gq, compose_qg, from_laguerre, tr_n
from .traces import HomogeneousComponent, alpha, logcoef_direct, mu_trace, residue

__version__ = "0.1.0"

__all__ = [
    "AsymptoticExpansionRegressor",
    "BoundaryModel",
    "ExactComplex",
    "ExpansionFit",
    "HomogeneousComponent",
    "LaguerreSeries",
    "NormalRational",
    "PoleFraction",
    "Ray",
    "SGOSymbol",
    "alpha",
    "compose_gg",
    "compose_gq",
    "compose_qg",
    "exact",
    "expand",
    "fit_expansion",
    "from_laguerre",
    "kappa",
    "line_integral",
    "logcoef_direct",
    "minus",
    "mu_trace",
    "mul",
    "plus",
    "q_power",
    "residue",
    "resolvent_power",
    "to_fraction",
    "tr_n",
]
