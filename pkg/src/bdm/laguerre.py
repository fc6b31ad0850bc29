"""Laguerre function systems on the normal fiber.

The engine works with the un-normed functions

    phi'_k(xi, sigma) = (sigma - i xi)^k / (sigma + i xi)^(k+1),   k in Z,

which for k >= 0 are Fourier transforms of functions supported on x >= 0 and
for k < 0 of functions supported on x <= 0.  They are orthogonal with
``(1/2pi) int phi'_l conj(phi'_m) = delta_lm / (2 sigma)``.
"""

from __future__ import annotations

import math
from numbers import Rational
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

import numpy as np
from scipy.special import eval_laguerre

from .exact import ExactComplex, num
from .exceptions import DomainError, TailTooLarge
from .normal_rational import MINUS, PLUS, NormalRational, PoleFraction

DEFAULT_KMAX = 64
DEFAULT_TAIL_RTOL = 1e-12
_DROP_BELOW = 1e-300


def _check_sigma(sigma):
    # rational scales stay exact, anything else is a float
    if isinstance(sigma, ExactComplex):
        if sigma.imag != 0:
            raise DomainError(f"sigma must be real, got {sigma}")
        sigma = sigma.real
    sigma = sigma if isinstance(sigma, Rational) and not isinstance(sigma, int) else float(sigma)
    if not sigma > 0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    return sigma


@dataclass(frozen=True)
class LaguerreIndex:
    k: int
    sigma: float

    def __post_init__(self):
        object.__setattr__(self, "sigma", _check_sigma(self.sigma))
        object.__setattr__(self, "k", int(self.k))


@dataclass(frozen=True)
class LaguerreSeries:
    """``constant + sum_k coeffs[k] * phi'_k(xi, sigma)`` with finite support.

    ``constant`` only appears as output of the ``mul_ixi`` recurrence, whose
    image is not proper.  ``tail`` is the truncation diagnostic filled in by
    :func:`expand`.
    """

    sigma: float
    coeffs: Mapping[int, complex] = field(default_factory=dict)
    constant: complex = 0j
    tail: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "sigma", _check_sigma(self.sigma))
        clean = {
            int(k): num(c) for k, c in sorted(self.coeffs.items()) if abs(c) >= _DROP_BELOW
        }
        object.__setattr__(self, "coeffs", MappingProxyType(clean))
        object.__setattr__(self, "constant", num(self.constant))

    @classmethod
    def delta(cls, k: int, sigma, coeff=1.0) -> "LaguerreSeries":
        return cls(sigma, {k: coeff})

    def __getitem__(self, k: int) -> complex:
        return self.coeffs.get(k, 0j)

    def __call__(self, xi):
        xi = np.asarray(xi, dtype=complex)
        out = np.full_like(xi, complex(self.constant))
        for k, c in self.coeffs.items():
            out = out + complex(c) * eval_xi(k, self.sigma, xi)
        return out if out.ndim else complex(out)

    def to_rational(self) -> NormalRational:
        out = NormalRational.constant(self.constant)
        for k, c in self.coeffs.items():
            out = out + to_fraction(k, self.sigma).scale(c)
        return out

    def allclose(self, other: "LaguerreSeries", atol: float = 1e-13) -> bool:
        keys = set(self.coeffs) | set(other.coeffs)
        return abs(self.constant - other.constant) <= atol and all(
            abs(self[k] - other[k]) <= atol for k in keys
        )


def _fraction_terms(k: int, sigma: float):
    # (k', r-coefficient) pairs of the binomial expansion for k' = k >= 0
    return [
        ((-1) ** r * math.comb(k, r) * (2 * sigma) ** (k - r), k + 1 - r) for r in range(k + 1)
    ]


def to_fraction(k: int, sigma) -> NormalRational:
    """Pole-fraction form of ``phi'_k(., sigma)``."""
    sigma = _check_sigma(sigma)
    side, kk = (PLUS, k) if k >= 0 else (MINUS, -k - 1)
    return NormalRational(
        fractions=[PoleFraction(side, sigma, order, c) for c, order in _fraction_terms(kk, sigma)]
    )


def eval_xi(k: int, sigma, xi):
    """Direct evaluation of ``phi'_k(xi, sigma)``."""
    sigma = float(_check_sigma(sigma))
    xi = np.asarray(xi, dtype=complex)
    out = (sigma - 1j * xi) ** k / (sigma + 1j * xi) ** (k + 1)
    return out if out.ndim else complex(out)


def eval_x(k: int, sigma, x):
    """Inverse Fourier transform of ``phi'_k``: ``(-1)^k e^(-sigma x) L_k(2 sigma x)`` on x > 0.

    Negative indices live on x < 0 through ``phi'_(-k-1)(x) = phi'_k(-x)``.
    """
    sigma = float(_check_sigma(sigma))
    x = np.asarray(x, dtype=float)
    if k < 0:
        return eval_x(-k - 1, sigma, -x)
    xp = np.where(x > 0, x, 0.0)
    out = np.where(x > 0, (-1) ** k * np.exp(-sigma * xp) * eval_laguerre(k, 2 * sigma * xp), 0.0)
    return out if out.ndim else float(out)


def _unit_rule(which: str, k: int, sigma: float) -> dict:
    if which == "d_xi":
        f = -1j / (2 * sigma)
        return {k - 1: f * k, k: f * (2 * k + 1), k + 1: f * (k + 1)}
    if which == "d_xi_xi":
        return {k - 1: -k / 2, k: 0.5, k + 1: (k + 1) / 2}
    if which == "d_sigma":
        f = 1 / (2 * sigma)
        return {k - 1: f * k, k: -f, k + 1: -f * (k + 1)}
    if which == "mul_ixi":
        out = {j: 2 * sigma * (-1) ** (k - 1 - j) for j in range(k)}
        out[k] = -sigma
        return out
    raise ValueError(f"unknown recurrence {which!r}")


def apply_recurrence(which: str, series: LaguerreSeries) -> LaguerreSeries:
    """Rewrite ``series`` under one of four elementary operations.

    ``d_xi`` is the xi-derivative, ``mul_ixi`` multiplication by ``i xi``,
    ``d_xi_xi`` is ``f -> d/dxi (xi f)`` and ``d_sigma`` the sigma-derivative
    with coefficients held fixed.
    """
    sigma = series.sigma
    out: dict = {}
    constant = 0j
    if which == "mul_ixi":
        if any(k < 0 for k in series.coeffs):
            raise DomainError("mul_ixi is only defined on non-negative indices")
        if series.constant != 0:
            raise DomainError("mul_ixi of a constant is not a proper symbol")
    elif which == "d_xi_xi":
        constant = series.constant
    elif which not in ("d_xi", "d_sigma"):
        raise ValueError(f"unknown recurrence {which!r}")
    for k, c in series.coeffs.items():
        for kk, w in _unit_rule(which, k, sigma).items():
            if w != 0:
                out[kk] = out.get(kk, 0j) + c * w
        if which == "mul_ixi":
            constant += c * (-1) ** k
    return LaguerreSeries(sigma, out, constant)


def _moments_nonneg(f: NormalRational, sigma: float, kmax: int) -> np.ndarray:
    # b_k, k = 0..kmax, of the proper part: residues at the plus poles of
    # 2 sigma f(xi) (sigma + i xi)^k (sigma - i xi)^(-k-1), expanded in t = z + p
    out = np.zeros(kmax + 1, dtype=complex)
    for frac in f.side(PLUS):
        p, n = complex(frac.pole), frac.order - 1
        u, v = sigma - p, sigma + p
        for k in range(kmax + 1):
            taylor = sum(
                math.comb(k, a) * u ** (k - a) * math.comb(k + n - a, n - a) * v ** (-k - 1 - n + a)
                for a in range(min(k, n) + 1)
            )
            out[k] += complex(frac.coeff) * taylor
    return 2 * sigma * out


def expand(
    f: NormalRational,
    sigma,
    kmax: int = DEFAULT_KMAX,
    tail_rtol: float = DEFAULT_TAIL_RTOL,
) -> tuple[NormalRational, LaguerreSeries]:
    """Split ``f`` into its polynomial part and a Laguerre series of its proper part.

    Raises :class:`TailTooLarge` when the outermost coefficients are not
    negligible relative to the largest one.
    """
    sigma = float(_check_sigma(sigma))
    if kmax < 0:
        raise DomainError("kmax must be non-negative")
    poly_part = NormalRational(poly=f.poly)
    proper = NormalRational(fractions=f.fractions)
    pos = _moments_nonneg(proper, sigma, kmax)
    neg = _moments_nonneg(proper.reflect(), sigma, kmax)
    coeffs = {k: pos[k] for k in range(kmax + 1)}
    coeffs.update({-k - 1: neg[k] for k in range(kmax + 1)})
    scale = max(np.abs(pos).max(), np.abs(neg).max())
    tail = float(abs(pos[kmax]) + abs(neg[kmax]))
    if scale > 0 and tail > tail_rtol * scale:
        raise TailTooLarge(
            f"Laguerre tail {tail:.3g} exceeds {tail_rtol:g} x largest coefficient {scale:.3g}"
        )
    return poly_part, LaguerreSeries(sigma, coeffs, tail=tail)
