"""Brute-force quadrature oracles for the closed forms of the engine.

Nothing here is used by the engine itself; these routines exist to check it.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import mpmath
import numpy as np
from scipy import integrate

from .exceptions import DomainError, NoConvergence, RankDeficient

TANGENT = "tangent_substitution"
TRUNCATED = "truncated_interval"
DOUBLE = "double"
MULTI = "multi"
AUTO = "auto"


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-10
    abs_floor: float = 1e-14
    max_subdivisions: int = 400
    transform: str = TANGENT
    truncation: float = 1e6
    precision: str = DOUBLE
    digits: int = 30

    def __post_init__(self):
        if self.rel_tol < 1e-13:
            raise DomainError("rel_tol below 1e-13 is not attainable in double precision")
        if self.transform not in (TANGENT, TRUNCATED):
            raise DomainError(f"unknown transform {self.transform!r}")
        if self.precision not in (DOUBLE, MULTI, AUTO):
            raise DomainError(f"unknown precision {self.precision!r}")


DEFAULT_SPEC = QuadratureSpec()


def _quad_real(g, a, b, points, spec: QuadratureSpec) -> tuple[float, float]:
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(
                g, a, b, points=points or None, limit=spec.max_subdivisions,
                epsabs=spec.abs_floor, epsrel=spec.rel_tol,
            )
        except integrate.IntegrationWarning as exc:
            raise NoConvergence(str(exc).strip().splitlines()[0]) from exc
    return val, err


def quad_line(
    f: Callable[[float], complex],
    spec: QuadratureSpec = DEFAULT_SPEC,
    *,
    scale: float = 1.0,
    breakpoints: Sequence[float] = (),
) -> complex:
    """``(1/2pi) int_R f(xi) dxi`` for a continuous ``O(xi^-2)`` integrand.

    ``breakpoints`` are real abscissae where ``f`` varies quickly, typically the
    real parts of nearby poles; ``scale`` sets the tangent map ``xi = scale tan t``.

    With ``precision="multi"`` the integral is evaluated in multiprecision
    (``f`` must then use plain arithmetic only); ``"auto"`` tries double
    precision first and falls back to multiprecision when it fails to converge,
    which happens when the value is tiny relative to the integrand.
    """
    if spec.precision == MULTI:
        return _quad_line_multi(f, spec, scale, breakpoints)
    if spec.precision == AUTO:
        try:
            return _quad_line_double(f, spec, scale, breakpoints)
        except NoConvergence:
            return _quad_line_multi(f, spec, scale, breakpoints)
    return _quad_line_double(f, spec, scale, breakpoints)


def _quad_line_multi(f, spec: QuadratureSpec, scale, breakpoints) -> complex:
    with mpmath.workdps(spec.digits):
        lim = mpmath.pi / 2
        pts = sorted({mpmath.atan(mpmath.mpf(p) / scale) for p in breakpoints} | {-lim, lim})

        def g(t):
            c = mpmath.cos(t)
            return f(scale * mpmath.tan(t)) * scale / (c * c)

        val, err = mpmath.quad(g, pts, error=True, maxdegree=10)
        if err > max(spec.abs_floor, spec.rel_tol * abs(val)) * 1e-2 and err > 10 ** (2 - spec.digits):
            raise NoConvergence(f"multiprecision quadrature error estimate {float(err):.3g}")
        return complex(val / (2 * mpmath.pi))


def _quad_line_double(f, spec: QuadratureSpec, scale, breakpoints) -> complex:
    if spec.transform == TRUNCATED:
        L = spec.truncation
        pts = sorted(p for p in breakpoints if -L < p < L)
        re, _ = _quad_real(lambda x: complex(f(x)).real, -L, L, pts, spec)
        im, _ = _quad_real(lambda x: complex(f(x)).imag, -L, L, pts, spec)
        # tails of an O(xi^-2) integrand
        tail = complex(f(L)) * L + complex(f(-L)) * L
        return (re + 1j * im + tail) / (2 * math.pi)

    def g(t):
        c = math.cos(t)
        return complex(f(scale * math.tan(t))) * scale / (c * c)

    pts = sorted({math.atan(p / scale) for p in breakpoints})
    lim = math.pi / 2
    re, _ = _quad_real(lambda t: g(t).real, -lim, lim, pts, spec)
    im, _ = _quad_real(lambda t: g(t).imag, -lim, lim, pts, spec)
    return (re + 1j * im) / (2 * math.pi)


def pole_breakpoints(poles: Sequence[complex]) -> list[float]:
    """Real abscissae of the poles ``xi = +- i p`` of fractions with poles ``p``."""
    out = set()
    for p in poles:
        p = complex(p)
        out.add(-p.imag)
        out.add(p.imag)
    return sorted(out)


# -- double integrals ---------------------------------------------------------


def _gauss_panels(edges: np.ndarray, order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    a, b = edges[:-1, None], edges[1:, None]
    nodes = (0.5 * (b - a) * x + 0.5 * (a + b)).ravel()
    weights = (0.5 * (b - a) * w).ravel()
    return nodes, weights


def quad_double(
    f: Callable[[np.ndarray, np.ndarray], np.ndarray],
    spec: QuadratureSpec = DEFAULT_SPEC,
    *,
    scale: float = 1.0,
    breakpoints: Sequence[float] = (),
    max_order: int = 256,
) -> complex:
    """``(1/2pi)^2 int int f(xi, zeta) dxi dzeta`` over ``R^2``.

    ``f`` must broadcast over arrays.  Tensor Gauss-Legendre panels on the
    tangent-mapped square are refined by doubling until two successive
    results agree to ``rel_tol``.
    """
    lim = math.pi / 2
    cuts = sorted({math.atan(p / scale) for p in breakpoints} | {-lim, lim})
    edges = np.array(cuts, dtype=float)
    # subdivide wide panels so every panel is short relative to the interval
    fine = [edges[0]]
    for a, b in zip(edges[:-1], edges[1:]):
        n = max(1, int(math.ceil((b - a) / 0.2)))
        fine.extend(np.linspace(a, b, n + 1)[1:])
    edges = np.asarray(fine)

    def rule(order):
        t, w = _gauss_panels(edges, order)
        x = scale * np.tan(t)
        jac = w * scale / np.cos(t) ** 2
        X, Z = np.meshgrid(x, x, indexing="ij")
        vals = np.asarray(f(X, Z), dtype=complex)
        return jac @ vals @ jac / (2 * math.pi) ** 2

    order = 16
    prev = rule(order)
    while order < max_order:
        order *= 2
        cur = rule(order)
        if abs(cur - prev) <= max(spec.abs_floor, spec.rel_tol * abs(cur)):
            return complex(cur)
        prev = cur
    raise NoConvergence(f"tensor rule did not converge (last change {abs(cur - prev):.3g})")


# -- universal constants by brute force ---------------------------------------


def _well_conditioned_samples(rng, count: int, radius: float = 0.7):
    # (kappa, sigma) with the Laguerre ratio r = (sigma-kappa)/(sigma+kappa) on a circle
    out = []
    for _ in range(count):
        sigma = float(rng.uniform(0.5, 2.0))
        r = radius * np.exp(1j * rng.uniform(0, 2 * np.pi))
        kappa = sigma * (1 - r) / (1 + r)
        if kappa.real <= 0:
            continue
        out.append((complex(kappa), sigma))
    return out


def solve_constants(family: str, *, j: int, m: int, jp: int = 1, l: int = 0,
                    seed: int = 0, spec: QuadratureSpec = DEFAULT_SPEC) -> dict:
    """Recover the universal constants of a family from quadratures of its defining integral.

    The ansatz basis is the one of the corresponding closed form; the returned
    table is keyed like the tables generated in :mod:`bdm.lemmas`.
    """
    rng = np.random.default_rng(seed)

    def phi(k, s, x):
        return (s - 1j * x) ** k / (s + 1j * x) ** (k + 1)

    def cphi(k, s, x):
        return (s + 1j * x) ** k / (s - 1j * x) ** (k + 1)

    if family == "lemma32":
        keys = [mp for mp in range(max(0, m - j + 1), m + j)]

        def basis(kappa, sigma, key):
            return kappa ** (1 - j) * (sigma - kappa) ** key / (sigma + kappa) ** (key + 1)

        def integrand(kappa, sigma):
            return lambda x: cphi(m, sigma, x) / (kappa + 1j * x) ** j

        def sample():
            return _well_conditioned_samples(rng, 1)[0]
    elif family == "lemma52":
        if m <= l:
            keys = [0] if m == l else []
        else:
            k = m - l - 1
            keys = [mp for mp in range(max(0, k - j + 1), k + j)]

        def basis(kappa, sigma, key):
            if m == l:
                return 1 / (sigma * (kappa + sigma) ** j)
            return kappa ** (1 - j) * (sigma - kappa) ** key / (sigma + kappa) ** (key + 2)

        def integrand(kappa, sigma):
            return lambda x: phi(l, sigma, x) * cphi(m, sigma, x) / (kappa + 1j * x) ** j

        def sample():
            return _well_conditioned_samples(rng, 1)[0]
    elif family == "lemma42":
        if m < 0:
            raise DomainError("solve_constants for lemma42 takes m >= 0")
        keys = [(jpp, mp) for jpp in range(jp) for mp in range(max(0, m - jpp), m + jpp + 1)]

        def basis(kk, sigma, key):
            kp, km = kk
            jpp, mp = key
            return (km ** (-jpp) * (sigma - km) ** mp / (sigma + km) ** (mp + 1)
                    * (kp + km) ** (-j - jp + 1 + jpp))

        def integrand(kk, sigma):
            kp, km = kk
            return lambda x: phi(m, sigma, x) / (kp + 1j * x) ** j / (km - 1j * x) ** jp

        def sample():
            km, sigma = _well_conditioned_samples(rng, 1)[0]
            kp = complex(rng.uniform(0.5, 2.0), rng.uniform(-1.0, 1.0))
            return (kp, km), sigma
    else:
        raise DomainError(f"unknown kernel family {family!r}")

    if not keys:
        return {}
    rows, rhs = [], []
    attempts = 0
    while len(rows) < 2 * len(keys) + 2:
        attempts += 1
        if attempts > 20 * len(keys) + 40:
            raise RankDeficient("could not draw enough usable samples")
        point = sample()
        kappa, sigma = point
        poles = [kappa] if not isinstance(kappa, tuple) else list(kappa)
        val = quad_line(integrand(kappa, sigma), spec,
                        breakpoints=pole_breakpoints(poles + [sigma]))
        rows.append([basis(kappa, sigma, key) for key in keys])
        rhs.append(val)
    A = np.asarray(rows, dtype=complex)
    b = np.asarray(rhs, dtype=complex)
    sv = np.linalg.svd(A, compute_uv=False)
    if sv[-1] <= 1e-10 * sv[0]:
        raise RankDeficient("ansatz basis is collinear at the chosen samples")
    coef, *_ = np.linalg.lstsq(A, b, rcond=None)
    resid = np.linalg.norm(A @ coef - b) / np.linalg.norm(b)
    if resid > 1e-8:
        raise RankDeficient(f"ansatz does not fit the quadratures (residual {resid:.2e})")
    return {key: complex(c) for key, c in zip(keys, coef)}
