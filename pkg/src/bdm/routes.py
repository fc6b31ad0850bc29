"""The closed-form Laguerre integrals recomputed through the generic symbol calculus.

Each route builds s.g.o. symbols, composes them in the normal variable and
takes the normal trace, so it shares no code with the closed forms.  In
floating point, rewriting a high-index Laguerre function as pole fractions
cancels badly, so by default the routes run on exact rationals and round once.
"""

from __future__ import annotations

from fractions import Fraction

from .exact import exact
from .laguerre import to_fraction
from .normal_rational import MINUS, PLUS, minus, plus
from .sgo import SGOSymbol, compose_gg, compose_gq, compose_qg, from_laguerre, tr_n


def _inputs(exact_mode: bool, sigma, *poles):
    if exact_mode:
        return (Fraction(float(sigma)),) + tuple(exact(complex(p)) for p in poles)
    return (float(sigma),) + tuple(complex(p) for p in poles)


def generic_lemma32(m: int, j: int, kappa, sigma, side: str = PLUS, exact_mode: bool = True) -> complex:
    """``(1/2pi) int conj(phi'_m) (kappa + i xi)^-j`` (or its minus-side mirror) via ``compose_gg``."""
    s, k = _inputs(exact_mode, sigma, kappa)
    unit = {(0, m): 1 / (2 * s)} if side == PLUS else {(m, 0): 1 / (2 * s)}
    lag = from_laguerre(unit, s)
    if side == PLUS:
        # phi'_0(xi) [int conj(phi'_m) (kappa + i zeta)^-j] (sigma - i eta)^-1
        g = compose_gg(lag, SGOSymbol.outer(plus(k, j), minus(s, 1)))
    elif side == MINUS:
        g = compose_gg(SGOSymbol.outer(plus(s, 1), minus(k, j)), lag)
    else:
        raise ValueError(f"unknown side {side!r}")
    return complex(tr_n(g) * (2 * s))


def generic_lemma42(m: int, j: int, jp: int, kappa_plus, kappa_minus, sigma,
                    exact_mode: bool = True) -> complex:
    """``(1/2pi) int phi'_m (kappa_plus + i xi)^-j (kappa_minus - i xi)^-j'`` via ``compose_qg``."""
    s, kp, km = _inputs(exact_mode, sigma, kappa_plus, kappa_minus)
    return complex(tr_n(compose_qg(to_fraction(m, s), SGOSymbol.outer(plus(kp, j), minus(km, jp)))))


def generic_lemma52(l: int, m: int, j: int, side: str, kappa, sigma, exact_mode: bool = True) -> complex:
    """``(1/2pi) int phi'_l conj(phi'_m) (kappa +- i xi)^-j`` via ``compose_gq``."""
    s, k = _inputs(exact_mode, sigma, kappa)
    if side == PLUS:
        q = plus(k, j)
    elif side == MINUS:
        q = minus(k, j)
    else:
        raise ValueError(f"unknown side {side!r}")
    return complex(tr_n(compose_gq(from_laguerre({(l, m): 1 / (2 * s)}, s), q)))
