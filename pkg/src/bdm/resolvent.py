"""Fiber symbols of a frozen-coefficient second-order operator and its Dirichlet resolvent.

The boundary symbol is ``a xi_n^2 + b(xi') xi_n + c(xi')`` with ``b`` linear
and ``c`` quadratic plus a constant.  With the spectral parameter ``mu`` it
factors as ``a (kappa_plus + i xi_n)(kappa_minus - i xi_n)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DomainError, SectorViolation
from .normal_rational import NormalRational, inverse_power_partial_fractions, minus, plus
from .sgo import (
    SGOSymbol,
    compose_gg,
    compose_gq,
    compose_qg,
    truncation_defect,
)

#: Half-opening slack of the admissible sector for mu.
SECTOR_EPS = 0.1


def _as_vector(xi_prime, dim: int) -> np.ndarray:
    v = np.atleast_1d(np.asarray(xi_prime, dtype=float))
    if v.shape != (dim,):
        raise DomainError(f"xi' must have {dim} components, got shape {v.shape}")
    return v


@dataclass(frozen=True)
class BoundaryModel:
    """Strongly elliptic boundary symbol ``a t^2 + (b . xi') t + xi'^T C xi' + c0``."""

    a: complex
    b: tuple
    C: tuple
    c0: complex = 0.0
    dim_tangent: int = field(init=False)

    def __post_init__(self):
        a = complex(self.a)
        if not a.real > 0:
            raise DomainError(f"Re a must be positive, got a={a}")
        b = np.atleast_1d(np.asarray(self.b, dtype=complex))
        n1 = b.shape[0]
        C = np.asarray(self.C, dtype=complex).reshape(n1, n1)
        if n1 < 1:
            raise DomainError("dim_tangent must be at least 1")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", tuple(b))
        object.__setattr__(self, "C", tuple(map(tuple, C)))
        object.__setattr__(self, "c0", complex(self.c0))
        object.__setattr__(self, "dim_tangent", n1)
        self._check_ellipticity()

    @classmethod
    def laplacian(cls, dim_tangent: int, c0=0.0) -> "BoundaryModel":
        return cls(1.0, np.zeros(dim_tangent), np.eye(dim_tangent), c0)

    def _check_ellipticity(self):
        n1 = self.dim_tangent
        if n1 == 1:
            dirs = np.array([[1.0], [-1.0]])
        else:
            rng = np.random.default_rng(0)
            dirs = rng.standard_normal((256, n1))
            dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        ra = self.a.real
        for w in dirs:
            # min over real t of Re(a t^2 + b t + c)
            rb, rc = self.b_of(w).real, self.c_principal(w).real
            if not rc - rb**2 / (4 * ra) > 0:
                raise DomainError("boundary symbol is not strongly elliptic")

    def b_of(self, xi_prime) -> complex:
        return complex(np.dot(self.b, _as_vector(xi_prime, self.dim_tangent)))

    def c_principal(self, xi_prime) -> complex:
        v = _as_vector(xi_prime, self.dim_tangent)
        return complex(v @ np.asarray(self.C) @ v)

    def c_of(self, xi_prime) -> complex:
        return self.c_principal(xi_prime) + self.c0

    def symbol(self, xi_prime, xi_n, mu):
        """``a xi_n^2 + b xi_n + c + mu^2``."""
        xi_n = np.asarray(xi_n, dtype=complex)
        return self.a * xi_n**2 + self.b_of(xi_prime) * xi_n + self.c_of(xi_prime) + complex(mu) ** 2


@dataclass(frozen=True)
class Ray:
    """Values ``magnitudes * exp(i angle)`` inside the admissible sector."""

    angle: float
    magnitudes: tuple

    def __post_init__(self):
        if abs(self.angle) > math.pi / 4 + SECTOR_EPS / 2:
            raise SectorViolation(f"ray angle {self.angle} is outside the sector")
        mags = np.asarray(self.magnitudes, dtype=float)
        if mags.ndim != 1 or np.any(mags < 0) or np.any(np.diff(mags) <= 0):
            raise DomainError("ray magnitudes must be non-negative and increasing")
        object.__setattr__(self, "magnitudes", tuple(mags))

    @classmethod
    def logspaced(cls, angle: float, mu_min: float, mu_max: float, count: int) -> "Ray":
        return cls(angle, tuple(np.geomspace(mu_min, mu_max, count)))

    @property
    def points(self) -> np.ndarray:
        return np.asarray(self.magnitudes) * np.exp(1j * self.angle)


def kappa(model: BoundaryModel, xi_prime, mu) -> tuple[complex, complex]:
    """Roots ``(kappa_plus, kappa_minus)`` with positive real parts."""
    a, b, c = model.a, model.b_of(xi_prime), model.c_of(xi_prime)
    mu = complex(mu)
    root = cmath.sqrt(mu**2 / a + c / a - (b / (2 * a)) ** 2)
    shift = 1j * b / (2 * a)
    kp, km = root + shift, root - shift
    if not (kp.real > 0 and km.real > 0):
        raise SectorViolation(f"kappa roots {kp}, {km} leave the right half-plane")
    return kp, km


def q_power(model: BoundaryModel, k: int, xi_prime, mu) -> NormalRational:
    """Pole-fraction form of ``(a xi_n^2 + b xi_n + c + mu^2)^(-k)``."""
    if k < 1:
        raise DomainError("k must be >= 1")
    kp, km = kappa(model, xi_prime, mu)
    return inverse_power_partial_fractions(kp, km, model.a, k)


def dirichlet_g1(model: BoundaryModel, xi_prime, mu) -> SGOSymbol:
    """Leading s.g.o. symbol making the resolvent kernel vanish at ``x_n = 0``."""
    kp, km = kappa(model, xi_prime, mu)
    return SGOSymbol.outer(plus(kp, 1), minus(km, 1), -1 / (model.a * (kp + km)))


@dataclass(frozen=True)
class FiberOperator:
    """``q_+ + G`` on the half-line fiber."""

    q: NormalRational
    g: SGOSymbol = field(default_factory=SGOSymbol)

    def __matmul__(self, other: "FiberOperator") -> "FiberOperator":
        q1, g1, q2, g2 = self.q, self.g, other.q, other.g
        g = (
            compose_qg(q1, g2)
            + compose_gq(g1, q2)
            + compose_gg(g1, g2)
            - truncation_defect(q1, q2)
        )
        return FiberOperator(q1 * q2, g)


def resolvent_fiber(model: BoundaryModel, xi_prime, mu) -> FiberOperator:
    return FiberOperator(q_power(model, 1, xi_prime, mu), dirichlet_g1(model, xi_prime, mu))


def resolvent_power(model: BoundaryModel, k: int, xi_prime, mu) -> tuple[NormalRational, SGOSymbol]:
    """``(q^k, G^(k))`` where ``(q_+ + g1)^k = (q^k)_+ + G^(k)``."""
    if k < 1:
        raise DomainError("k must be >= 1")
    base = resolvent_fiber(model, xi_prime, mu)
    acc = base
    for _ in range(k - 1):
        acc = acc @ base
    return q_power(model, k, xi_prime, mu), acc.g
