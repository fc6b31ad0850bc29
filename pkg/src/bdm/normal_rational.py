"""Rational symbols in the normal covariable with poles off the real axis.

A symbol is stored as a polynomial part plus a finite sum of pole fractions

    plus(p, j, c)  = c * (p + i xi)^(-j)     pole at xi = i p   (upper half-plane)
    minus(p, j, c) = c * (p - i xi)^(-j)     pole at xi = -i p  (lower half-plane)

with ``Re p > 0``.  Arithmetic is carried out in the variable ``z = i xi``, in
which a plus fraction is ``c (z - w)^(-j)`` with ``w = -p`` and a minus fraction
is ``c (-1)^j (z - w)^(-j)`` with ``w = p``.  Partial fractions are then plain
Laurent re-expansions around each pole.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .exact import ExactComplex, exact, num, times_i_power
from .exceptions import DomainError, NonIntegrable, PoleCollision, PoleEvaluation

PLUS = "plus"
MINUS = "minus"

#: Relative distance below which two distinct same-side poles are rejected.
POLE_MERGE_RTOL = 1e-9
#: Relative size of the O(1/xi) coefficient tolerated by :func:`line_integral`.
DECAY_RTOL = 1e-10
#: Relative distance to a pole below which evaluation is refused.
EVAL_POLE_RTOL = 1e-14


def _neg_binom(k: int, t: int) -> int:
    # binomial(-k, t) for k >= 1, t >= 0
    return (-1) ** t * math.comb(k + t - 1, t)


@dataclass(frozen=True)
class PoleFraction:
    """A single term ``coeff * (pole +- i xi)^(-order)``."""

    side: str
    pole: complex
    order: int
    coeff: complex = None

    def __post_init__(self):
        if self.side not in (PLUS, MINUS):
            raise ValueError(f"side must be 'plus' or 'minus', got {self.side!r}")
        pole = num(self.pole)
        if not pole.real > 0:
            raise DomainError(f"pole must have positive real part, got {pole}")
        if int(self.order) != self.order or self.order < 1:
            raise DomainError(f"order must be an integer >= 1, got {self.order}")
        object.__setattr__(self, "pole", pole)
        object.__setattr__(self, "order", int(self.order))
        coeff = self.coeff
        if coeff is None:
            coeff = ExactComplex(1) if isinstance(pole, ExactComplex) else 1.0
        object.__setattr__(self, "coeff", num(coeff))

    @property
    def key(self):
        return (self.side, self.pole, self.order)

    def __call__(self, xi):
        xi = np.asarray(xi, dtype=complex)
        pole = complex(self.pole)
        base = pole + 1j * xi if self.side == PLUS else pole - 1j * xi
        return complex(self.coeff) * base ** (-self.order)


def plus(pole, order: int = 1, coeff=None) -> "NormalRational":
    """The symbol ``coeff * (pole + i xi)^(-order)``."""
    return NormalRational(fractions=[PoleFraction(PLUS, pole, order, coeff)])


def minus(pole, order: int = 1, coeff=None) -> "NormalRational":
    """The symbol ``coeff * (pole - i xi)^(-order)``."""
    return NormalRational(fractions=[PoleFraction(MINUS, pole, order, coeff)])


def _sort_key(key):
    side, pole, order = key
    return (side != PLUS, pole.real, pole.imag, order)


def _check_collision(poles: Iterable[complex], rtol: float) -> None:
    ordered = sorted(set(poles), key=lambda p: (p.real, p.imag))
    for i, a in enumerate(ordered):
        for b in ordered[i + 1:]:
            if abs(a - b) < rtol * max(abs(a), abs(b)):
                raise PoleCollision(
                    f"poles {a} and {b} are distinct but closer than rtol={rtol:g}"
                )


class NormalRational:
    """Canonical pole-fraction form of a symbol in the normal covariable.

    Parameters
    ----------
    poly : sequence of complex
        Coefficients of the polynomial part in ascending powers of ``xi``.
    fractions : iterable of PoleFraction
        Fractions; entries with equal ``(side, pole, order)`` are merged.
    """

    __slots__ = ("poly", "fractions")

    def __init__(self, poly: Iterable = (), fractions: Iterable[PoleFraction] = ()):
        coeffs = [num(c) for c in poly]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        merged: dict = {}
        for frac in fractions:
            merged[frac.key] = merged.get(frac.key, 0) + frac.coeff
        for side in (PLUS, MINUS):
            _check_collision((k[1] for k in merged if k[0] == side), POLE_MERGE_RTOL)
        self.poly = tuple(coeffs)
        self.fractions = tuple(
            PoleFraction(side, pole, order, merged[(side, pole, order)])
            for side, pole, order in sorted(merged, key=_sort_key)
            if merged[(side, pole, order)] != 0
        )

    # -- construction helpers -------------------------------------------------

    @classmethod
    def zero(cls) -> "NormalRational":
        return cls()

    @classmethod
    def constant(cls, value) -> "NormalRational":
        return cls(poly=[value])

    @classmethod
    def _from_z(cls, poly_z: Mapping[int, complex], terms: Mapping) -> "NormalRational":
        deg = max(poly_z, default=-1)
        poly = [times_i_power(poly_z.get(m, 0), m) for m in range(deg + 1)]
        fracs = []
        for (w, j), c in terms.items():
            if c == 0:
                continue
            if w.real < 0:
                fracs.append(PoleFraction(PLUS, -w, j, c))
            else:
                fracs.append(PoleFraction(MINUS, w, j, c * (-1) ** j))
        return cls(poly, fracs)

    def _z_terms(self) -> dict:
        out = {}
        for f in self.fractions:
            if f.side == PLUS:
                out[(-f.pole, f.order)] = f.coeff
            else:
                out[(f.pole, f.order)] = f.coeff * (-1) ** f.order
        return out

    def _z_poly(self) -> dict:
        return {m: times_i_power(c, -m) for m, c in enumerate(self.poly) if c != 0}

    # -- structure ------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.poly and not self.fractions

    @property
    def has_poly(self) -> bool:
        return bool(self.poly)

    def side(self, which: str) -> tuple:
        return tuple(f for f in self.fractions if f.side == which)

    def decay_degree(self):
        """Guaranteed decay exponent: ``f = O(<xi>^-d)`` with the returned ``d``."""
        if self.poly:
            return -(len(self.poly) - 1)
        if not self.fractions:
            return math.inf
        return min(f.order for f in self.fractions)

    def poles(self, side: str | None = None) -> set:
        return {f.pole for f in self.fractions if side is None or f.side == side}

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        n = max(len(self.poly), len(other.poly))
        poly = [
            (self.poly[i] if i < len(self.poly) else 0)
            + (other.poly[i] if i < len(other.poly) else 0)
            for i in range(n)
        ]
        return NormalRational(poly, self.fractions + other.fractions)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def scale(self, factor) -> "NormalRational":
        factor = num(factor)
        return NormalRational(
            [c * factor for c in self.poly],
            [PoleFraction(f.side, f.pole, f.order, f.coeff * factor) for f in self.fractions],
        )

    def __mul__(self, other):
        if isinstance(other, NormalRational):
            return mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __call__(self, xi):
        return evaluate(self, xi)

    def conj(self) -> "NormalRational":
        """The symbol whose values on the real axis are complex conjugates."""
        return NormalRational(
            [c.conjugate() for c in self.poly],
            [
                PoleFraction(MINUS if f.side == PLUS else PLUS, f.pole.conjugate(), f.order,
                             f.coeff.conjugate())
                for f in self.fractions
            ],
        )

    def reflect(self) -> "NormalRational":
        """The symbol ``xi -> f(-xi)``."""
        return NormalRational(
            [c * (-1) ** m for m, c in enumerate(self.poly)],
            [
                PoleFraction(MINUS if f.side == PLUS else PLUS, f.pole, f.order, f.coeff)
                for f in self.fractions
            ],
        )

    # -- comparison -----------------------------------------------------------

    def allclose(self, other: "NormalRational", rtol: float = 1e-12, atol: float = 0.0) -> bool:
        """Coefficientwise comparison of two canonical forms."""
        a = {f.key: f.coeff for f in self.fractions}
        b = {f.key: f.coeff for f in other.fractions}
        scale = max([abs(c) for c in a.values()] + [abs(c) for c in b.values()] + [0.0])
        tol = atol + rtol * scale
        for key in set(a) | set(b):
            if abs(a.get(key, 0) - b.get(key, 0)) > tol:
                return False
        n = max(len(self.poly), len(other.poly))
        pa = list(self.poly) + [0] * (n - len(self.poly))
        pb = list(other.poly) + [0] * (n - len(other.poly))
        pscale = max([abs(c) for c in pa + pb] + [0.0])
        return all(abs(x - y) <= atol + rtol * pscale for x, y in zip(pa, pb))

    def __eq__(self, other):
        if not isinstance(other, NormalRational):
            return NotImplemented
        return self.poly == other.poly and self.fractions == other.fractions

    def __hash__(self):
        return hash((self.poly, self.fractions))

    def __repr__(self):
        parts = []
        if self.poly:
            parts.append(f"poly={list(self.poly)}")
        for f in self.fractions:
            parts.append(f"{f.side}({complex(f.pole):.6g},{f.order},{complex(f.coeff):.6g})")
        return "NormalRational(" + ", ".join(parts) + ")"


def _coerce(value) -> NormalRational:
    if isinstance(value, NormalRational):
        return value
    return NormalRational.constant(value)


def add(f: NormalRational, g: NormalRational) -> NormalRational:
    return f + g


def _poly_times_fraction(m: int, w: complex, j: int, c: complex, poly_out: dict, terms_out: dict):
    # z^m (z - w)^(-j) with z = (z - w) + w
    for t in range(m + 1):
        coef = c * math.comb(m, t) * w ** (m - t)
        if t < j:
            key = (w, j - t)
            terms_out[key] = terms_out.get(key, 0) + coef
        else:
            e = t - j
            for s in range(e + 1):
                poly_out[s] = poly_out.get(s, 0) + coef * math.comb(e, s) * (-w) ** (e - s)


def _fraction_times_fraction(a, j, b, k, c, terms_out: dict):
    if a == b:
        key = (a, j + k)
        terms_out[key] = terms_out.get(key, 0) + c
        return
    for r in range(1, j + 1):
        key = (a, r)
        terms_out[key] = terms_out.get(key, 0) + c * _neg_binom(k, j - r) * (a - b) ** (-k - (j - r))
    for s in range(1, k + 1):
        key = (b, s)
        terms_out[key] = terms_out.get(key, 0) + c * _neg_binom(j, k - s) * (b - a) ** (-j - (k - s))


def mul(f: NormalRational, g: NormalRational) -> NormalRational:
    """Exact product of two symbols, re-expanded into canonical form."""
    fp, gp = f._z_poly(), g._z_poly()
    ft, gt = f._z_terms(), g._z_terms()
    for side_poles in ((f.poles(PLUS) | g.poles(PLUS)), (f.poles(MINUS) | g.poles(MINUS))):
        _check_collision(side_poles, POLE_MERGE_RTOL)
    poly: dict = {}
    terms: dict = {}
    for m1, c1 in fp.items():
        for m2, c2 in gp.items():
            poly[m1 + m2] = poly.get(m1 + m2, 0) + c1 * c2
    for m, cp in fp.items():
        for (w, j), c in gt.items():
            _poly_times_fraction(m, w, j, cp * c, poly, terms)
    for m, cp in gp.items():
        for (w, j), c in ft.items():
            _poly_times_fraction(m, w, j, cp * c, poly, terms)
    for (a, j), c1 in ft.items():
        for (b, k), c2 in gt.items():
            _fraction_times_fraction(a, j, b, k, c1 * c2, terms)
    return NormalRational._from_z(poly, terms)


def h_plus(f: NormalRational) -> NormalRational:
    """Projection onto the fractions with poles in the upper half-plane."""
    return NormalRational(fractions=f.side(PLUS))


def h_minus(f: NormalRational) -> NormalRational:
    """Lower half-plane fractions together with the polynomial part."""
    return NormalRational(f.poly, f.side(MINUS))


def h_minus_minus1(f: NormalRational) -> NormalRational:
    """Lower half-plane fractions only."""
    return NormalRational(fractions=f.side(MINUS))


def evaluate(f: NormalRational, xi):
    """Evaluate ``f`` at ``xi`` (scalar or array, real or complex)."""
    xi_arr = np.asarray(xi, dtype=complex)
    out = np.zeros_like(xi_arr)
    for c in reversed(f.poly):
        out = out * xi_arr + complex(c)
    for frac in f.fractions:
        pole = complex(frac.pole)
        base = pole + 1j * xi_arr if frac.side == PLUS else pole - 1j * xi_arr
        if np.any(np.abs(base) <= EVAL_POLE_RTOL * abs(pole)):
            raise PoleEvaluation(f"evaluation at the pole of {frac}")
        out = out + complex(frac.coeff) * base ** (-frac.order)
    if np.ndim(xi) == 0:
        return complex(out)
    return out


def line_integral(f: NormalRational) -> complex:
    """``(1/2pi) * integral over R of f(xi) d xi`` computed by residues.

    The symbol must be ``O(xi^-2)``: no polynomial part, and the order-one
    fractions must cancel at infinity.
    """
    if f.poly:
        raise NonIntegrable("symbol has a polynomial part")
    first = [(f_.coeff if f_.side == PLUS else -f_.coeff) for f_ in f.fractions if f_.order == 1]
    scale = sum(abs(c) for c in first)
    if scale and abs(sum(first)) > DECAY_RTOL * scale:
        raise NonIntegrable(f"symbol decays only like 1/xi (tail coefficient {sum(first):.3g})")
    # closing the contour in the upper half-plane picks the plus-side simple-pole residues
    return _total(f_.coeff for f_ in f.fractions if f_.side == PLUS and f_.order == 1)


def _total(values):
    # exact inputs give an exact sum, anything else a complex one
    out = sum(values, 0)
    return out if isinstance(out, ExactComplex) else complex(out)


def product_integral(j: int, jp: int, p, q) -> complex:
    """``(1/2pi) * integral of (p + i xi)^-j (q - i xi)^-jp d xi``."""
    p, q = num(p), num(q)
    if not (p.real > 0 and q.real > 0):
        raise DomainError(f"poles need positive real part, got p={p}, q={q}")
    if j < 1 or jp < 1:
        raise DomainError("orders must be >= 1")
    return math.comb(j + jp - 2, j - 1) * (p + q) ** (1 - j - jp)


def inverse_power_partial_fractions(kplus, kminus, a, m: int) -> NormalRational:
    """Canonical form of ``1 / (a (kplus + i xi)(kminus - i xi))^m``."""
    kplus, kminus, a = num(kplus), num(kminus), num(a)
    if isinstance(kplus, ExactComplex) or isinstance(kminus, ExactComplex):
        a = exact(a)
    if not (kplus.real > 0 and kminus.real > 0):
        raise DomainError("kplus and kminus need positive real part")
    if not a.real > 0:
        raise DomainError("a needs positive real part")
    if m < 1:
        raise DomainError("m must be >= 1")
    return mul(plus(kplus, m), minus(kminus, m)).scale(a ** (-m))


#: Alias matching the operation name used throughout the package.
eval = evaluate  # noqa: A001
