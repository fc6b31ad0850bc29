"""Self-check suites behind ``bdm verify``.

The fast suite compares closed forms with the generic symbol calculus and
checks structural identities.  The oracle suite compares closed forms with
brute-force quadrature.  Both read the constant tables, so switching on
fault injection in :mod:`bdm.lemmas` must make them fail.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import lemmas
from .laguerre import expand
from .normal_rational import MINUS, PLUS, line_integral, minus, mul, plus
from .oracle import AUTO, QuadratureSpec, pole_breakpoints, quad_line, solve_constants
from .resolvent import BoundaryModel, dirichlet_g1, q_power
from .routes import generic_lemma32, generic_lemma42, generic_lemma52
from .sgo import SGOSymbol, compose_gg, symbol_kernel, tr_n
from .traces import example_closed_forms, example_traces

FAST = "fast"
ORACLE = "oracle"
SUITES = (FAST, ORACLE)


@dataclass
class CheckResult:
    suite: str
    name: str
    passed: bool
    max_error: float
    tolerance: float
    seconds: float


def _rel(a, b) -> float:
    a, b = complex(a), complex(b)
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale > 0 else 0.0


def _run(suite: str, name: str, tol: float, body: Callable[[], float]) -> CheckResult:
    t0 = time.perf_counter()
    err = float(body())
    return CheckResult(suite, name, bool(err <= tol), err, tol, time.perf_counter() - t0)


# -- fast tier -----------------------------------------------------------------

_POINT = (complex(1.7, 0.9), complex(0.8, -0.4), 0.6)


def _lemma_generic() -> float:
    kp, km, s = _POINT
    err = 0.0
    for m in range(4):
        for j in range(1, 3):
            err = max(err, _rel(lemmas.lemma32(m, j, kp, s), generic_lemma32(m, j, kp, s)))
            for jp in range(1, 3):
                for mm in (m, -m - 1):
                    err = max(err, _rel(lemmas.lemma42(mm, j, jp, kp, km, s),
                                        generic_lemma42(mm, j, jp, kp, km, s)))
            for l in range(3):
                for side in (PLUS, MINUS):
                    a = lemmas.lemma52(l, m, j, side, kp, s)
                    b = generic_lemma52(l, m, j, side, kp, s)
                    err = max(err, abs(a - b) if a == 0 or b == 0 else _rel(a, b))
    return err


def _example31() -> float:
    err = 0.0
    for c, s, k in ((1.0, 0.7, 1.9), (2.5, 1.3, 0.4 + 0.0j), (0.3, 2.0, 5.0)):
        got, want = example_traces(c, s, k), example_closed_forms(c, s, k)
        err = max(err, _rel(got["gg1"], want["gg1"]), _rel(got["gq"], want["gq"]))
    return err


def _structural() -> float:
    rng = np.random.default_rng(7)

    def rand_pole():
        return complex(rng.uniform(0.3, 3), rng.uniform(-2, 2))

    def rand_g():
        return SGOSymbol.outer(plus(rand_pole(), int(rng.integers(1, 3))) + plus(rand_pole(), 1),
                               minus(rand_pole(), int(rng.integers(1, 3))), complex(rng.normal(), rng.normal()))

    err = 0.0
    for _ in range(5):
        g1, g2, g3 = rand_g(), rand_g(), rand_g()
        # trace cyclicity and associativity of the normal composition
        err = max(err, _rel(tr_n(compose_gg(g1, g2)), tr_n(compose_gg(g2, g1))))
        left = compose_gg(compose_gg(g1, g2), g3)
        right = compose_gg(g1, compose_gg(g2, g3))
        err = max(err, 0.0 if left.allclose(right, rtol=1e-12) else 1.0)
    # Dirichlet condition: the resolvent kernel vanishes at the boundary
    model = BoundaryModel(1.3, [0.4], [[1.1]], 0.5)
    xp, mu = np.array([0.9]), 4.0
    q = q_power(model, 1, xp, mu)
    g1 = dirichlet_g1(model, xp, mu)
    ys = np.linspace(0.1, 3.0, 7)
    # kernel of (q)_+ at x_n = 0 is the minus part written in y
    qk = sum(complex(f.coeff) * ys ** (f.order - 1) * np.exp(-complex(f.pole) * ys)
             for f in q.side(MINUS) if f.order == 1)
    resid = qk + symbol_kernel(g1, 0.0, ys)
    return max(err, float(np.max(np.abs(resid))))


def _laguerre_roundtrip() -> float:
    s = 0.8
    f = mul(plus(complex(1.5, 0.5), 2), minus(2.0, 1)).scale(3.0)
    _, series = expand(f, s)
    err = 0.0
    for x in (-1.0, 0.0, 0.7, 3.0):
        err = max(err, _rel(series(x), f(x)))
    err = max(err, abs(line_integral(mul(plus(s, 1), minus(s, 1))) - 1 / (2 * s)))
    return err


# -- oracle tier ---------------------------------------------------------------

_ORACLE_SPEC = QuadratureSpec(precision=AUTO, abs_floor=1e-300)


def _phi(k, s, x):
    return (s - 1j * x) ** k / (s + 1j * x) ** (k + 1)


def _cphi(k, s, x):
    return (s + 1j * x) ** k / (s - 1j * x) ** (k + 1)


def _oracle_lemmas() -> float:
    err = 0.0
    for kp, km, s in (_POINT, (complex(3.0, -2.0), complex(0.5, 1.5), 1.4)):
        bp = pole_breakpoints([kp, km, s])
        for m in range(3):
            for j in (1, 2):
                v = quad_line(lambda x: _cphi(m, s, x) / (kp + 1j * x) ** j, _ORACLE_SPEC, breakpoints=bp)
                err = max(err, _rel(v, lemmas.lemma32(m, j, kp, s)))
                v = quad_line(lambda x: _phi(m, s, x) / (kp + 1j * x) ** j / (km - 1j * x) ** 2,
                              _ORACLE_SPEC, breakpoints=bp)
                err = max(err, _rel(v, lemmas.lemma42(m, j, 2, kp, km, s)))
                v = quad_line(lambda x: _phi(0, s, x) * _cphi(m + 1, s, x) / (kp + 1j * x) ** j,
                              _ORACLE_SPEC, breakpoints=bp)
                err = max(err, _rel(v, lemmas.lemma52(0, m + 1, j, PLUS, kp, s)))
    return err


def _oracle_constants() -> float:
    got = solve_constants("lemma32", j=2, m=1, seed=3)
    want = lemmas.lemma32_constants(2, 1)
    return max(abs(got.get(k, 0) - float(want.get(k, Fraction(0)))) for k in set(got) | set(want))


def run(suite: str = FAST) -> list[CheckResult]:
    """Run one suite and return one result per check."""
    if suite == FAST:
        return [
            _run(FAST, "lemma_closed_forms_vs_generic_route", 1e-12, _lemma_generic),
            _run(FAST, "worked_example_traces", 1e-12, _example31),
            _run(FAST, "structural_identities", 1e-10, _structural),
            _run(FAST, "laguerre_round_trip", 1e-12, _laguerre_roundtrip),
        ]
    if suite == ORACLE:
        return [
            _run(ORACLE, "lemma_closed_forms_vs_quadrature", 1e-8, _oracle_lemmas),
            _run(ORACLE, "constants_vs_least_squares", 1e-8, _oracle_constants),
        ]
    raise ValueError(f"unknown suite {suite!r}")


def as_dict(result: CheckResult) -> dict:
    return asdict(result)


__all__ = ["CheckResult", "FAST", "ORACLE", "SUITES", "as_dict", "run"]
