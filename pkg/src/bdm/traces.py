"""Tangential integration, log coefficients and the noncommutative residue.

The frozen-coefficient model has no ``x'`` dependence, so an ``x'`` integral
collapses to a constant volume factor called ``weight`` throughout.
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy import integrate

from .exceptions import DomainError, QuadratureFailure
from .normal_rational import (
    NormalRational,
    evaluate,
    h_minus,
    h_plus,
    inverse_power_partial_fractions,
    minus,
    plus,
)
from .resolvent import BoundaryModel, q_power, resolvent_power
from .sgo import SGOSymbol, compose_gg, compose_gq, from_laguerre, leftover_minus, leftover_plus, tr_n
from .smoothing import smoothed_norm

#: Relative accuracy requested from tangential quadratures.
TRACE_RTOL = 1e-9
_ANGLE_START = 16
_ANGLE_MAX = 1024


@dataclass(frozen=True)
class HomogeneousComponent:
    """A symbol component of a fixed degree given by its values on unit covectors.

    The ambient dimension of the covectors is ``-degree`` for an interior
    component of degree ``-n`` and ``-degree`` again for a boundary component
    of degree ``1-n`` (covectors in ``R^(n-1)``).
    """

    degree: int
    values: Callable[[np.ndarray], complex]
    weight: float = 1.0

    @property
    def dim(self) -> int:
        if self.degree >= 0:
            raise DomainError(f"degree must be negative, got {self.degree}")
        return -self.degree

    @classmethod
    def zero(cls, degree: int) -> "HomogeneousComponent":
        return cls(degree, lambda omega: 0.0)


def threads() -> int:
    """Worker count for sweeps, capped by ``BDM_THREADS``."""
    env = os.environ.get("BDM_THREADS")
    cap = os.cpu_count() or 1
    if env:
        try:
            cap = max(1, int(env))
        except ValueError as exc:
            raise DomainError(f"BDM_THREADS must be an integer, got {env!r}") from exc
    return cap


# -- sphere quadrature ---------------------------------------------------------


def _sphere_nodes(dim: int, count: int):
    if dim == 1:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    if dim == 2:
        t = 2 * math.pi * np.arange(count) / count
        return np.stack([np.cos(t), np.sin(t)], axis=1), np.full(count, 2 * math.pi / count)
    if dim == 3:
        x, w = np.polynomial.legendre.leggauss(count // 2)
        t = 2 * math.pi * np.arange(count) / count
        ct, pp = np.meshgrid(x, t, indexing="ij")
        st = np.sqrt(1 - ct**2)
        nodes = np.stack([st * np.cos(pp), st * np.sin(pp), ct], axis=-1).reshape(-1, 3)
        weights = (w[:, None] * np.full(count, 2 * math.pi / count)[None, :]).ravel()
        return nodes, weights
    raise DomainError(f"sphere quadrature supports covectors in R^1..R^3, got R^{dim}")


def sphere_integral(f: Callable[[np.ndarray], complex], dim: int, rtol: float = 1e-12) -> complex:
    """Integral of ``f`` over the unit sphere of ``R^dim`` (counting measure on ``S^0``)."""

    cache: dict = {}

    def rule(count):
        if dim == 2:
            # nested trapezoid: refinements reuse the previous nodes
            total = 0j
            for i in range(count):
                key = Fraction(i, count)
                if key not in cache:
                    t = 2 * math.pi * float(key)
                    cache[key] = complex(f(np.array([math.cos(t), math.sin(t)])))
                total += cache[key]
            return total * (2 * math.pi / count)
        nodes, weights = _sphere_nodes(dim, count)
        return complex(sum(w * complex(f(v)) for v, w in zip(nodes, weights)))

    if dim == 1:
        return rule(2)
    count = _ANGLE_START
    prev = rule(count)
    while count < _ANGLE_MAX:
        count *= 2
        cur = rule(count)
        if abs(cur - prev) <= rtol * max(abs(cur), 1e-300) or abs(cur) < 1e-300:
            return cur
        prev = cur
    raise QuadratureFailure(f"sphere quadrature did not converge (last change {abs(cur - prev):.3g})")


def logcoef_direct(component: HomogeneousComponent) -> complex:
    """Coefficient of ``mu^(-2k) log mu`` predicted by ``(tr_n g)_(1-n)``."""
    dim = component.dim
    return component.weight * sphere_integral(component.values, dim) / (2 * math.pi) ** dim


def residue(interior: HomogeneousComponent | None = None,
            boundary_g: HomogeneousComponent | None = None,
            boundary_s: HomogeneousComponent | None = None,
            n: int | None = None) -> complex:
    """Noncommutative residue from the degree ``-n`` and ``1-n`` components.

    ``(2pi)^-n int_{S^(n-1)} p_(-n) + (2pi)^(1-n) int_{S^(n-2)} [(tr_n g)_(1-n) + s_(1-n)]``.
    """
    if n is None:
        raise DomainError("dimension n is required")
    total = 0j
    if interior is not None:
        if interior.degree != -n:
            raise DomainError(f"interior component must have degree {-n}")
        total += interior.weight * sphere_integral(interior.values, n) / (2 * math.pi) ** n
    for comp in (boundary_g, boundary_s):
        if comp is None:
            continue
        if comp.degree != 1 - n:
            raise DomainError(f"boundary components must have degree {1 - n}")
        total += logcoef_direct(comp)
    return total


# -- the alpha function --------------------------------------------------------


def alpha(model: BoundaryModel, k: int, xi_prime, mu) -> complex:
    """``h^+(q^k)`` at ``-i sigma`` plus ``h^-(q^k)`` at ``i sigma`` with ``sigma = [xi']``."""
    sigma = float(smoothed_norm(xi_prime))
    qk = q_power(model, k, xi_prime, mu)
    return evaluate(h_plus(qk), -1j * sigma) + evaluate(h_minus(qk), 1j * sigma)


# -- tangential integration ----------------------------------------------------


def _quad_complex(f, a, b, points, rtol):
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, _ = integrate.quad(f, a, b, points=points or None, limit=500,
                                    epsabs=0.0, epsrel=rtol, complex_func=True)
        except integrate.IntegrationWarning as exc:
            raise QuadratureFailure(str(exc).strip().splitlines()[0]) from exc
    return complex(val)


def _radial_integral(f: Callable[[float], complex], r_min: float, r_max: float,
                     breaks: Sequence[float], rtol: float) -> complex:
    """``int_{r_min}^{r_max} f(r) dr``, possibly with ``r_max = inf``, split at ``breaks``."""
    cuts = sorted({b for b in breaks if r_min < b < r_max})
    edges = [r_min] + cuts
    total = 0j
    for a, b in zip(edges[:-1], edges[1:]):
        total += _quad_complex(f, a, b, None, rtol)
    total += _quad_complex(f, edges[-1], r_max, None, rtol)
    return total


def _breaks(mu) -> list:
    return [0.25, 0.5, 1.0, abs(complex(mu))]


def _integrate_region(fiber_map, dim: int, mu, r_min: float, r_max: float,
                      rtol: float, radial: bool) -> complex:
    breaks = _breaks(mu)
    if dim == 1:
        pos = _radial_integral(lambda r: fiber_map(np.array([r]), mu), r_min, r_max, breaks, rtol)
        if radial:
            return 2 * pos
        neg = _radial_integral(lambda r: fiber_map(np.array([-r]), mu), r_min, r_max, breaks, rtol)
        return pos + neg
    if dim not in (2, 3):
        raise DomainError(f"tangential quadrature supports R^1..R^3, got R^{dim}")

    def shell(omega):
        return _radial_integral(lambda r: fiber_map(r * omega, mu) * r ** (dim - 1),
                                r_min, r_max, breaks, rtol)

    if radial:
        omega = np.zeros(dim)
        omega[0] = 1.0
        area = 2 * math.pi if dim == 2 else 4 * math.pi
        return area * shell(omega)
    return sphere_integral(shell, dim, rtol=max(rtol, 1e-12))


def mu_trace(fiber_map: Callable[[np.ndarray, complex], complex], dim_tangent: int, mu,
             weight: float = 1.0, *, radial: bool = False, rtol: float = TRACE_RTOL) -> complex:
    """``weight (2pi)^(1-n) int_{R^(n-1)} fiber_map(xi', mu) dxi'`` with ``n - 1 = dim_tangent``.

    The integral is split at ``|xi'| = 1/4, 1/2, 1, |mu|``, where the smoothed
    norm and the symbol change character.  ``radial=True`` asserts that
    ``fiber_map`` depends on ``|xi'|`` only (evenness when ``n - 1 = 1``).
    """
    val = _integrate_region(fiber_map, dim_tangent, mu, 0.0, math.inf, rtol, radial)
    return weight * val / (2 * math.pi) ** dim_tangent


def region_split(fiber_map, dim_tangent: int, mu, weight: float = 1.0, *,
                 radial: bool = False, rtol: float = TRACE_RTOL) -> dict:
    """``mu_trace`` decomposed over ``|xi'| <= 1``, ``1 <= |xi'| <= |mu|`` and ``|xi'| >= |mu|``.

    Only the annulus can carry a ``log mu`` term.
    """
    r_mu = abs(complex(mu))
    if r_mu <= 1:
        raise DomainError("region split needs |mu| > 1")
    scale = weight / (2 * math.pi) ** dim_tangent
    parts = {
        "inner": (0.0, 1.0),
        "annulus": (1.0, r_mu),
        "outer": (r_mu, math.inf),
    }
    return {name: scale * _integrate_region(fiber_map, dim_tangent, mu, a, b, rtol, radial)
            for name, (a, b) in parts.items()}


def sweep(func: Callable[[complex], complex], mus: Sequence[complex],
          workers: int | None = None) -> np.ndarray:
    """Evaluate ``func`` at every ``mu``, in parallel when more than one worker is allowed."""
    workers = threads() if workers is None else max(1, int(workers))
    mus = list(mus)
    if workers == 1 or len(mus) < 2:
        return np.array([func(m) for m in mus], dtype=complex)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return np.array(list(pool.map(func, mus)), dtype=complex)


# -- interior term -------------------------------------------------------------


def interior_diag(p: Callable[[np.ndarray], complex], model: BoundaryModel, k: int, mu,
                  n: int, *, radial: bool = False, rtol: float = TRACE_RTOL) -> complex:
    """``(2pi)^-n int_{R^n} p(xi) (p_(1,2)(xi) + mu^2)^-k dxi`` with the principal symbol of ``model``."""
    if n != model.dim_tangent + 1:
        raise DomainError(f"model has n = {model.dim_tangent + 1}, got n = {n}")
    if k < 1:
        raise DomainError("k must be >= 1")
    mu = complex(mu)
    a = model.a

    def symbol(xi):
        xi_p, xi_n = xi[:-1], xi[-1]
        principal = a * xi_n**2 + model.b_of(xi_p) * xi_n + model.c_principal(xi_p)
        return complex(p(xi)) * (principal + mu**2) ** (-k)

    def fiber(xi, _mu):
        return symbol(xi)

    if n == 1:
        val = _integrate_region(fiber, 1, mu, 0.0, math.inf, rtol, False)
    else:
        val = _integrate_region(fiber, n, mu, 0.0, math.inf, rtol, radial)
    return val / (2 * math.pi) ** n


# -- fiber maps for boundary perturbations ------------------------------------


def laguerre_sgo(table: Mapping, xi_prime) -> SGOSymbol:
    """s.g.o. symbol from a Laguerre table whose entries are functions of ``xi'``."""
    sigma = float(smoothed_norm(xi_prime))
    coeffs = {key: complex(c(xi_prime)) if callable(c) else c for key, c in table.items()}
    return from_laguerre(coeffs, sigma)


PART_FULL = "full"
PART_Q = "q"
PART_G = "g"


def boundary_fiber(model: BoundaryModel, k: int, g_of: Callable[[np.ndarray], SGOSymbol],
                   part: str = PART_FULL) -> Callable[[np.ndarray, complex], complex]:
    """``(xi', mu) -> tr_n(g o R)`` for ``R`` the full ``k``-th resolvent power or one of its parts.

    ``part`` selects ``(q^k)_+ + G^(k)`` (``"full"``), ``(q^k)_+`` (``"q"``) or
    the singular Green part ``G^(k)`` alone (``"g"``).
    """
    if part not in (PART_FULL, PART_Q, PART_G):
        raise ValueError(f"unknown part {part!r}")

    def fiber(xi_prime, mu):
        g = g_of(xi_prime)
        if g.is_zero:
            return 0j
        qk, gk = resolvent_power(model, k, xi_prime, mu)
        total = 0j
        if part in (PART_FULL, PART_Q):
            total += complex(tr_n(compose_gq(g, qk)))
        if part in (PART_FULL, PART_G):
            total += complex(tr_n(compose_gg(g, gk)))
        return total

    return fiber


def leftover_fiber(model: BoundaryModel, k: int,
                   p_of: Callable[[np.ndarray], NormalRational]) -> Callable[[np.ndarray, complex], complex]:
    """``(xi', mu) -> tr_n(leftover_plus(p) o leftover_minus(q^k))``."""

    def fiber(xi_prime, mu):
        qk = q_power(model, k, xi_prime, mu)
        return complex(tr_n(compose_gg(leftover_plus(p_of(xi_prime)), leftover_minus(qk))))

    return fiber


# -- the worked example with a single Laguerre term ----------------------------


def example_g(c, sigma) -> SGOSymbol:
    """``c / ((sigma + i xi)(sigma - i eta))``."""
    return from_laguerre({(0, 0): c / (2 * sigma)}, sigma)


def example_traces(c, sigma, kappa_) -> dict:
    """Engine values of ``tr_n(g o g1)`` and ``tr_n(g o q_+)`` for ``q = 1/(kappa^2 + xi^2)``."""
    g = example_g(c, sigma)
    q = inverse_power_partial_fractions(kappa_, kappa_, 1, 1)
    g1 = SGOSymbol.outer(plus(kappa_, 1), minus(kappa_, 1), -1 / (2 * kappa_))
    return {
        "gg1": tr_n(compose_gg(g, g1)),
        "gq": tr_n(compose_gq(g, q)),
    }


def example_closed_forms(c, sigma, kappa_) -> dict:
    return {
        "gg1": -c / (2 * kappa_ * (sigma + kappa_) ** 2),
        "gq": c / (2 * kappa_ * (sigma + kappa_) * sigma),
    }


__all__ = [
    "HomogeneousComponent",
    "alpha",
    "boundary_fiber",
    "example_closed_forms",
    "example_g",
    "example_traces",
    "interior_diag",
    "laguerre_sgo",
    "leftover_fiber",
    "logcoef_direct",
    "mu_trace",
    "region_split",
    "residue",
    "sphere_integral",
    "sweep",
    "threads",
]
