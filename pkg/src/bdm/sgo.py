"""Singular Green symbols of class 0 on the normal fiber.

A symbol is a finite sum of separable terms

    coeff * (p + i xi)^(-j) * (q - i eta)^(-j')

whose symbol-kernel is ``coeff * x^(j-1) e^(-p x)/(j-1)! * y^(j'-1) e^(-q y)/(j'-1)!``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .exact import num
from .exceptions import ClassViolation, DomainError
from .laguerre import to_fraction
from .normal_rational import (
    MINUS,
    PLUS,
    NormalRational,
    PoleFraction,
    minus,
    mul,
    plus,
    product_integral,
    _total,
)


@dataclass(frozen=True)
class SGOTerm:
    """``coeff * xi_factor(xi) * eta_factor(eta)`` with unit-coefficient factors."""

    coeff: complex
    xi_factor: PoleFraction
    eta_factor: PoleFraction

    def __post_init__(self):
        if self.xi_factor.side != PLUS or self.eta_factor.side != MINUS:
            raise DomainError("an s.g.o. term needs a plus xi-factor and a minus eta-factor")
        if self.xi_factor.coeff != 1 or self.eta_factor.coeff != 1:
            raise DomainError("factor coefficients must be 1; scale through coeff")
        object.__setattr__(self, "coeff", num(self.coeff))

    @classmethod
    def make(cls, coeff, xi_pole, xi_order: int, eta_pole, eta_order: int) -> "SGOTerm":
        return cls(
            coeff,
            PoleFraction(PLUS, xi_pole, xi_order),
            PoleFraction(MINUS, eta_pole, eta_order),
        )

    @property
    def key(self):
        x, e = self.xi_factor, self.eta_factor
        return (x.pole, x.order, e.pole, e.order)

    def trace(self) -> complex:
        x, e = self.xi_factor, self.eta_factor
        return self.coeff * product_integral(x.order, e.order, x.pole, e.pole)


def _key_order(key):
    p, j, q, jp = key
    return (p.real, p.imag, j, q.real, q.imag, jp)


class SGOSymbol:
    """Normalized finite sum of :class:`SGOTerm`."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[SGOTerm] = ()):
        merged: dict = {}
        for t in terms:
            merged[t.key] = merged.get(t.key, 0) + t.coeff
        self.terms = tuple(
            SGOTerm.make(merged[k], k[0], k[1], k[2], k[3])
            for k in sorted(merged, key=_key_order)
            if merged[k] != 0
        )

    @classmethod
    def outer(cls, xi_part: NormalRational, eta_part: NormalRational, coeff=1) -> "SGOSymbol":
        """``coeff * xi_part(xi) * eta_part(eta)`` from a plus-type and a minus-type symbol."""
        if xi_part.poly or eta_part.poly or xi_part.side(MINUS) or eta_part.side(PLUS):
            raise ClassViolation("outer product needs a plus-type xi part and minus-type eta part")
        return cls(
            SGOTerm.make(coeff * a.coeff * b.coeff, a.pole, a.order, b.pole, b.order)
            for a in xi_part.fractions
            for b in eta_part.fractions
        )

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "SGOSymbol") -> "SGOSymbol":
        return SGOSymbol(self.terms + other.terms)

    def scale(self, factor) -> "SGOSymbol":
        return SGOSymbol(
            SGOTerm(t.coeff * factor, t.xi_factor, t.eta_factor) for t in self.terms
        )

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other: "SGOSymbol") -> "SGOSymbol":
        return self + (-other)

    def __mul__(self, factor):
        return self.scale(factor)

    __rmul__ = __mul__

    def __call__(self, xi, eta):
        xi = np.asarray(xi, dtype=complex)
        eta = np.asarray(eta, dtype=complex)
        out = np.zeros(np.broadcast(xi, eta).shape, dtype=complex)
        for t in self.terms:
            x, e = t.xi_factor, t.eta_factor
            p, q = complex(x.pole), complex(e.pole)
            out = out + complex(t.coeff) * (p + 1j * xi) ** (-x.order) * (q - 1j * eta) ** (-e.order)
        return out if out.ndim else complex(out)

    def max_order_sum(self) -> int:
        return max((t.xi_factor.order + t.eta_factor.order for t in self.terms), default=0)

    def allclose(self, other: "SGOSymbol", rtol: float = 1e-12, atol: float = 0.0) -> bool:
        a = {t.key: t.coeff for t in self.terms}
        b = {t.key: t.coeff for t in other.terms}
        scale = max([abs(c) for c in a.values()] + [abs(c) for c in b.values()] + [0.0])
        return all(abs(a.get(k, 0) - b.get(k, 0)) <= atol + rtol * scale for k in set(a) | set(b))

    def __eq__(self, other):
        if not isinstance(other, SGOSymbol):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __repr__(self):
        body = ", ".join(
            f"{complex(t.coeff):.6g}*[{complex(t.xi_factor.pole):.4g},{t.xi_factor.order}|"
            f"{complex(t.eta_factor.pole):.4g},{t.eta_factor.order}]"
            for t in self.terms
        )
        return f"SGOSymbol({body})"


def from_laguerre(c: Mapping, sigma) -> SGOSymbol:
    """``sum 2 sigma c[l, m] phi'_l(xi) conj(phi'_m(eta))`` for ``l, m >= 0``."""
    out = []
    for (l, m), clm in c.items():
        if l < 0 or m < 0:
            raise DomainError("Laguerre double series indices must be non-negative")
        xi_part = to_fraction(l, sigma)
        # conj(phi'_m) = phi'_(-m-1)
        eta_part = to_fraction(-m - 1, sigma)
        out.extend(SGOSymbol.outer(xi_part, eta_part, 2 * sigma * clm).terms)
    return SGOSymbol(out)


def compose_gg(g1: SGOSymbol, g2: SGOSymbol) -> SGOSymbol:
    """Composition in the normal variable, ``(1/2pi) int g1(xi, zeta) g2(zeta, eta) dzeta``."""
    out = []
    for t1 in g1.terms:
        e1 = t1.eta_factor
        for t2 in g2.terms:
            x2 = t2.xi_factor
            coupling = product_integral(x2.order, e1.order, x2.pole, e1.pole)
            out.append(SGOTerm(t1.coeff * t2.coeff * coupling, t1.xi_factor, t2.eta_factor))
    return SGOSymbol(out)


def compose_gq(g: SGOSymbol, q: NormalRational) -> SGOSymbol:
    """``g o q_+``: the minus part in eta of ``g(xi, eta) q(eta)``."""
    out = []
    cache: dict = {}
    for t in g.terms:
        e = t.eta_factor
        if e.key not in cache:
            prod = mul(minus(e.pole, e.order), q)
            if prod.poly:
                raise ClassViolation("g o q_+ has polynomial growth in eta")
            cache[e.key] = prod.side(MINUS)
        for f in cache[e.key]:
            out.append(SGOTerm.make(t.coeff * f.coeff, t.xi_factor.pole, t.xi_factor.order,
                                    f.pole, f.order))
    return SGOSymbol(out)


def compose_qg(q: NormalRational, g: SGOSymbol) -> SGOSymbol:
    """``q_+ o g``: the plus part in xi of ``q(xi) g(xi, eta)``."""
    out = []
    cache: dict = {}
    for t in g.terms:
        x = t.xi_factor
        if x.key not in cache:
            prod = mul(q, plus(x.pole, x.order))
            if prod.poly:
                raise ClassViolation("q_+ o g has polynomial growth in xi")
            cache[x.key] = prod.side(PLUS)
        for f in cache[x.key]:
            out.append(SGOTerm.make(t.coeff * f.coeff, f.pole, f.order,
                                    t.eta_factor.pole, t.eta_factor.order))
    return SGOSymbol(out)


def _leftover(fractions) -> SGOSymbol:
    out = []
    for f in fractions:
        for jp in range(f.order):
            out.append(SGOTerm.make(f.coeff, f.pole, jp + 1, f.pole, f.order - jp))
    return SGOSymbol(out)


def leftover_minus(q: NormalRational) -> SGOSymbol:
    """Symbol of the s.g.o. built from the minus fractions of ``q``."""
    return _leftover(q.side(MINUS))


def leftover_plus(q: NormalRational) -> SGOSymbol:
    """Symbol of the s.g.o. built from the plus fractions of ``q``."""
    return _leftover(q.side(PLUS))


def truncation_defect(p: NormalRational, q: NormalRational) -> SGOSymbol:
    """``(p q)_+ - p_+ q_+`` as an s.g.o. symbol."""
    return compose_gg(leftover_plus(p), leftover_minus(q))


def tr_n(g: SGOSymbol) -> complex:
    """Normal trace ``(1/2pi) int g(xi, xi) dxi``."""
    return _total(t.trace() for t in g.terms)


def symbol_kernel(g: SGOSymbol, x_n, y_n):
    """Symbol-kernel of ``g`` at ``x_n, y_n >= 0``."""
    x = np.asarray(x_n, dtype=float)
    y = np.asarray(y_n, dtype=float)
    if np.any(x < 0) or np.any(y < 0):
        raise DomainError("symbol-kernel is defined for x_n, y_n >= 0")
    out = np.zeros(np.broadcast(x, y).shape, dtype=complex)
    for t in g.terms:
        a, b = t.xi_factor, t.eta_factor
        kx = x ** (a.order - 1) * np.exp(-complex(a.pole) * x) / math.factorial(a.order - 1)
        ky = y ** (b.order - 1) * np.exp(-complex(b.pole) * y) / math.factorial(b.order - 1)
        out = out + complex(t.coeff) * kx * ky
    return out if out.ndim else complex(out)
