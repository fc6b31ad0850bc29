import math
from fractions import Fraction

import numpy as np
import pytest

from bdm import lemmas
from bdm.exceptions import DomainError, NoConvergence
from bdm.oracle import (
    AUTO,
    MULTI,
    TRUNCATED,
    QuadratureSpec,
    pole_breakpoints,
    quad_double,
    quad_line,
    solve_constants,
)


def lorentz(x):
    return 1 / (1 + x * x)


def test_quad_line_frozen():
    # (1/2pi) int dx / (1 + x^2) = 1/2
    assert quad_line(lorentz) == pytest.approx(0.5, rel=1e-12)


def test_truncated_transform_with_tail_correction():
    spec = QuadratureSpec(transform=TRUNCATED, truncation=1e4)
    assert quad_line(lorentz, spec) == pytest.approx(0.5, rel=1e-9)


def test_multiprecision():
    spec = QuadratureSpec(precision=MULTI)
    assert quad_line(lorentz, spec) == pytest.approx(0.5, rel=1e-12)


def test_auto_escalates_on_tiny_values():
    # integral vanishes: (1/2pi) int (1 + i x)^-2 dx = 0
    val = quad_line(lambda x: (1 + 1j * x) ** -2, QuadratureSpec(precision=AUTO, abs_floor=1e-14))
    assert abs(val) <= 1e-12


def test_spec_validation():
    with pytest.raises(DomainError):
        QuadratureSpec(rel_tol=1e-15)
    with pytest.raises(DomainError):
        QuadratureSpec(transform="sinh")
    with pytest.raises(DomainError):
        QuadratureSpec(precision="quad")


def test_no_convergence_is_reported():
    with pytest.raises(NoConvergence):
        quad_line(lambda x: np.sin(50 * x) / (1 + abs(x)), QuadratureSpec(max_subdivisions=5))


def test_pole_breakpoints():
    assert pole_breakpoints([1 + 2j, 3.0]) == [-2.0, 0.0, 2.0]


def test_quad_double_separable():
    def f(x, z):
        return 1 / ((1 + 1j * x) * (2 - 1j * x)) / ((1 + z * z))
    want = (1 / 3) * 0.5
    assert quad_double(f, breakpoints=(-2, -1, 1, 2)) == pytest.approx(want, rel=1e-10)


@pytest.mark.parametrize("family,kw,table", [
    ("lemma32", {"j": 2, "m": 1}, lambda: lemmas.lemma32_constants(2, 1)),
    ("lemma42", {"j": 2, "jp": 2, "m": 1}, lambda: lemmas.lemma42_constants(2, 2, 1)),
    ("lemma52", {"j": 2, "l": 0, "m": 2}, lambda: lemmas.lemma52_constants(2, 0, 2)),
])
def test_solve_constants_recovers_tables(family, kw, table):
    got = solve_constants(family, seed=1, **kw)
    want = table()
    for key in set(got) | set(want):
        assert got.get(key, 0) == pytest.approx(float(want.get(key, Fraction(0))), abs=1e-8)


def test_solve_constants_errors():
    with pytest.raises(DomainError):
        solve_constants("lemma99", j=1, m=0)
    with pytest.raises(DomainError):
        solve_constants("lemma42", j=1, m=-1)
    assert solve_constants("lemma52", j=1, l=2, m=1) == {}
