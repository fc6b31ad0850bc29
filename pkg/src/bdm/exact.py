"""Exact Gaussian-rational scalars for cancellation-free symbol algebra.

Every finite float is a dyadic rational, so converting inputs with
:func:`exact` loses nothing; running the pole-fraction algebra on these values
and rounding once at the end removes the cancellation that expansions of
high-index Laguerre functions suffer in floating point.
"""

from __future__ import annotations

from numbers import Complex, Rational, Real

from gmpy2 import mpq


class ExactComplex:
    """``re + i im`` with exact rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, float) or isinstance(im, float):
            raise TypeError("use exact() to convert floats")
        self.re = mpq(re)
        self.im = mpq(im)

    # -- coercion -------------------------------------------------------------

    @staticmethod
    def _lift(other):
        if isinstance(other, ExactComplex):
            return other
        if isinstance(other, (int, Rational)):
            return ExactComplex(other)
        return None

    @property
    def real(self):
        return self.re

    @property
    def imag(self):
        return self.im

    def conjugate(self) -> "ExactComplex":
        return ExactComplex(self.re, -self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self) -> float:
        return abs(complex(self))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def times_i_power(self, m: int) -> "ExactComplex":
        m %= 4
        if m == 0:
            return self
        if m == 1:
            return ExactComplex(-self.im, self.re)
        if m == 2:
            return ExactComplex(-self.re, -self.im)
        return ExactComplex(self.im, -self.re)

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return complex(self) + other
        return ExactComplex(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return ExactComplex(-self.re, -self.im)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return complex(self) - other
        return ExactComplex(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return other - complex(self)
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return complex(self) * other
        return ExactComplex(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def _inverse(self) -> "ExactComplex":
        d = self.re * self.re + self.im * self.im
        if d == 0:
            raise ZeroDivisionError("exact complex division by zero")
        return ExactComplex(self.re / d, -self.im / d)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return complex(self) / other
        return self * o._inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return other / complex(self)
        return o * self._inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return complex(self) ** n
        base = self if n >= 0 else self._inverse()
        n = abs(n)
        out = ExactComplex(1)
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- comparison -----------------------------------------------------------

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            if isinstance(other, Complex):
                return complex(self) == other and self == exact(other)
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"ExactComplex({self.re}, {self.im})"


def exact(value) -> ExactComplex:
    """Exact conversion of an int, rational, float or complex value."""
    if isinstance(value, ExactComplex):
        return value
    if isinstance(value, (int, Rational)):
        return ExactComplex(value)
    if isinstance(value, Real):
        return ExactComplex(mpq(float(value)))
    value = complex(value)
    return ExactComplex(mpq(value.real), mpq(value.imag))


def is_exact(value) -> bool:
    return isinstance(value, (ExactComplex, int, Rational))


def num(value):
    """Canonical scalar: exact values and fractions stay exact, the rest becomes ``complex``."""
    if isinstance(value, ExactComplex):
        return value
    if isinstance(value, Rational) and not isinstance(value, int):
        return ExactComplex(value)
    return complex(value)


def times_i_power(value, m: int):
    """``value * i^m`` without rounding."""
    if isinstance(value, ExactComplex):
        return value.times_i_power(m)
    return value * (1j ** (m % 4))
