"""Closed forms of the basic normal-fiber integrals against Laguerre functions.

All three families reduce to evaluating ``xi^n d^n/dxi^n`` of a product of
Laguerre-type functions at a pole.  With ``theta = d/dxi xi`` one has
``xi^n d^n = prod_{i=1..n} (theta - i)``, and ``theta`` acts by three-term
rules, so the universal constants are exact rationals generated here by
recurrence:

    theta phi'_k = -(k/2) phi'_(k-1) + (1/2) phi'_k + ((k+1)/2) phi'_(k+1)
    theta chi_k  = -(k/2) chi_(k-1)  + ((k+2)/2) chi_(k+1)

where ``chi_k = (sigma + i xi)^k / (sigma - i xi)^(k+2)``.  The same rules hold
for the complex conjugates.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .exceptions import DomainError
from .normal_rational import MINUS, PLUS

_fault = {"enabled": False}


def set_fault_injection(enabled: bool) -> None:
    """Perturb every generated constant table (negative control for self-checks)."""
    _fault["enabled"] = bool(enabled)


def _perturb(table: dict) -> dict:
    if not _fault["enabled"]:
        return table
    return {key: value * Fraction(1001, 1000) for key, value in table.items()}


def _theta_phi(k: int) -> dict:
    return {k - 1: Fraction(-k, 2), k: Fraction(1, 2), k + 1: Fraction(k + 1, 2)}


def _theta_chi(k: int) -> dict:
    return {k - 1: Fraction(-k, 2), k + 1: Fraction(k + 2, 2)}


def _falling(rule, n: int, start: int) -> dict:
    vec = {start: Fraction(1)}
    for i in range(1, n + 1):
        out: dict = {}
        for k, c in vec.items():
            for kk, w in rule(k).items():
                out[kk] = out.get(kk, 0) + c * w
            out[k] = out.get(k, 0) - i * c
        vec = {k: c for k, c in out.items() if c != 0}
    return vec


@lru_cache(maxsize=None)
def _t_phi(n: int, m: int) -> tuple:
    """``xi^n d^n phi'_m = sum T[m'] phi'_m'`` as sorted ``(m', T)`` pairs."""
    return tuple(sorted(_falling(_theta_phi, n, m).items()))


@lru_cache(maxsize=None)
def _t_chi(n: int, k: int) -> tuple:
    return tuple(sorted(_falling(_theta_chi, n, k).items()))


def _check(kappa, sigma):
    kappa = complex(kappa)
    sigma = float(sigma)
    if not kappa.real > 0:
        raise DomainError(f"kappa needs positive real part, got {kappa}")
    if not sigma > 0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    return kappa, sigma


def _laguerre_at(mp: int, kappa: complex, sigma: float, shift: int = 1) -> complex:
    return (sigma - kappa) ** mp / (sigma + kappa) ** (mp + shift)


# -- single pole against one Laguerre function --------------------------------


def lemma32_constants(j: int, m: int) -> dict:
    """Constants ``a_{j m'}`` keyed by ``m'``."""
    if j < 1 or m < 0:
        raise DomainError("need j >= 1 and m >= 0")
    f = Fraction((-1) ** (j - 1), math.factorial(j - 1))
    return _perturb({mp: f * t for mp, t in _t_phi(j - 1, m)})


def lemma32(m: int, j: int, kappa, sigma, side: str = PLUS) -> complex:
    """``(1/2pi) int conj(phi'_m) (kappa + i xi)^-j dxi``.

    The minus-side integral ``(1/2pi) int phi'_m (kappa - i xi)^-j dxi`` is the
    same function of ``kappa``.
    """
    if side not in (PLUS, MINUS):
        raise ValueError(f"unknown side {side!r}")
    kappa, sigma = _check(kappa, sigma)
    consts = lemma32_constants(j, m)
    return kappa ** (1 - j) * sum(
        float(a) * _laguerre_at(mp, kappa, sigma) for mp, a in consts.items()
    )


# -- two poles against one Laguerre function ----------------------------------


def lemma42_constants(j: int, jp: int, m: int) -> dict:
    """Constants ``b_{j j' j'' m'}`` keyed by ``(j'', m')`` for ``m >= 0``."""
    if j < 1 or jp < 1 or m < 0:
        raise DomainError("need j, j' >= 1 and m >= 0")
    out: dict = {}
    lead = Fraction((-1) ** (jp + 1), math.factorial(jp - 1))
    for jpp in range(jp):
        r = jp - 1 - jpp
        rising = math.prod(range(j, j + r))
        f = lead * math.comb(jp - 1, jpp) * (-1) ** r * rising
        for mp, t in _t_phi(jpp, m):
            out[(jpp, mp)] = out.get((jpp, mp), 0) + f * t
    return _perturb({key: c for key, c in out.items() if c != 0})


def lemma42(m: int, j: int, jp: int, kappa_plus, kappa_minus, sigma) -> complex:
    """``(1/2pi) int phi'_m (kappa_plus + i xi)^-j (kappa_minus - i xi)^-j' dxi``."""
    if m < 0:
        return lemma42(-m - 1, jp, j, kappa_minus, kappa_plus, sigma)
    kp, sigma = _check(kappa_plus, sigma)
    km, _ = _check(kappa_minus, sigma)
    total = kp + km
    return sum(
        float(b) * km ** (-jpp) * _laguerre_at(mp, km, sigma) * total ** (-j - jp + 1 + jpp)
        for (jpp, mp), b in lemma42_constants(j, jp, m).items()
    )


# -- single pole against a product of two Laguerre functions ------------------


def lemma52_constants(j: int, l: int, m: int) -> dict:
    """Constants of the plus-side family keyed by ``m'``.

    For ``m > l`` the value is ``sum b[m'] kappa^(1-j) (sigma-kappa)^m' / (sigma+kappa)^(m'+2)``;
    for ``m == l`` the single entry ``{0: 1/2}`` multiplies ``1/(sigma (kappa+sigma)^j)``;
    for ``m < l`` the table is empty.
    """
    if j < 1 or l < 0 or m < 0:
        raise DomainError("need j >= 1 and l, m >= 0")
    if m < l:
        return {}
    if m == l:
        return _perturb({0: Fraction(1, 2)})
    f = Fraction((-1) ** (j - 1), math.factorial(j - 1))
    return _perturb({mp: f * t for mp, t in _t_chi(j - 1, m - l - 1)})


def lemma52(l: int, m: int, j: int, side: str, kappa, sigma) -> complex:
    """``(1/2pi) int phi'_l conj(phi'_m) (kappa +- i xi)^-j dxi``, sign by ``side``."""
    if side == MINUS:
        return lemma52(m, l, j, PLUS, kappa, sigma)
    if side != PLUS:
        raise ValueError(f"unknown side {side!r}")
    kappa, sigma = _check(kappa, sigma)
    consts = lemma52_constants(j, l, m)
    if m < l:
        return 0j
    if m == l:
        return float(consts[0]) / (sigma * (kappa + sigma) ** j)
    return kappa ** (1 - j) * sum(
        float(b) * _laguerre_at(mp, kappa, sigma, shift=2) for mp, b in consts.items()
    )
