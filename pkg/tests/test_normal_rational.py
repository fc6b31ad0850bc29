import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st
from scipy import integrate

from bdm.exact import exact
from bdm.exceptions import DomainError, NonIntegrable, PoleCollision, PoleEvaluation
from bdm.normal_rational import (
    MINUS,
    PLUS,
    NormalRational,
    PoleFraction,
    evaluate,
    h_minus,
    h_minus_minus1,
    h_plus,
    inverse_power_partial_fractions,
    line_integral,
    minus,
    mul,
    plus,
    product_integral,
)
from strategies import coeffs, exact_poles, orders, poles

XS = np.array([-7.0, -1.3, 0.0, 0.4, 2.2, 11.0])


def _separated(*ps, gap=0.5):
    # float partial fractions lose about |p - q|^-(j + j') relative accuracy
    return all(abs(a - b) > gap for i, a in enumerate(ps) for b in ps[i + 1:])


def _quad(f):
    re = integrate.quad(lambda x: f(x).real, -np.inf, np.inf, epsabs=1e-13, epsrel=1e-11, limit=400)[0]
    im = integrate.quad(lambda x: f(x).imag, -np.inf, np.inf, epsabs=1e-13, epsrel=1e-11, limit=400)[0]
    return (re + 1j * im) / (2 * math.pi)


# -- frozen values -------------------------------------------------------------


def test_two_pole_partial_fractions():
    f = mul(plus(2, 1), minus(3, 1))
    assert f.allclose(plus(2, 1, 0.2) + minus(3, 1, 0.2))
    assert line_integral(f) == pytest.approx(0.2)


def test_product_integral_frozen():
    assert product_integral(2, 3, 1, 1) == pytest.approx(3 / 16)
    assert product_integral(1, 1, exact(2), exact(3)) == Fraction(1, 5)


def test_inverse_power_of_laplacian_symbol():
    f = inverse_power_partial_fractions(1.5, 1.5, 2.0, 2)
    for x in XS:
        assert evaluate(f, x) == pytest.approx(1 / (2.0 * (1.5**2 + x**2)) ** 2, rel=1e-13)
    # (1/2pi) int (kappa^2+xi^2)^-2 = 1/(4 kappa^3)
    assert line_integral(inverse_power_partial_fractions(1.5, 1.5, 1, 2)) == pytest.approx(1 / (4 * 1.5**3))


def test_exact_arithmetic_stays_exact():
    f = mul(plus(exact(Fraction(1, 2)), 2), minus(exact(Fraction(3, 4)), 1))
    assert line_integral(f) == product_integral(2, 1, exact(Fraction(1, 2)), exact(Fraction(3, 4)))


def test_polynomial_part_from_fraction_product():
    # xi^2 / (1 + xi^2) = 1 - 1/(1 + xi^2)
    xi2 = NormalRational([0, 0, 1])
    f = mul(xi2, inverse_power_partial_fractions(1, 1, 1, 1))
    assert f.poly == (1,)
    for x in XS:
        assert evaluate(f, x) == pytest.approx(x**2 / (1 + x**2), rel=1e-13)


# -- projections ---------------------------------------------------------------


def test_projections_split_the_symbol():
    f = NormalRational([1, 2j], [PoleFraction(PLUS, 1 + 1j, 2, 3), PoleFraction(MINUS, 2, 1, -1)])
    assert h_plus(f) + h_minus(f) == f
    assert h_plus(h_plus(f)) == h_plus(f)
    assert h_plus(h_minus(f)).is_zero
    assert h_minus_minus1(f) == NormalRational(fractions=f.side(MINUS))


# -- errors --------------------------------------------------------------------


def test_errors():
    with pytest.raises(DomainError):
        plus(-1.0)
    with pytest.raises(DomainError):
        plus(1.0, 0)
    with pytest.raises(PoleCollision):
        plus(1.0) + plus(1.0 + 1e-12)
    with pytest.raises(PoleEvaluation):
        evaluate(plus(2.0), 2j)
    with pytest.raises(NonIntegrable):
        line_integral(plus(1.0))
    with pytest.raises(NonIntegrable):
        line_integral(NormalRational([1.0]))
    with pytest.raises(DomainError):
        product_integral(0, 1, 1, 1)
    with pytest.raises(ValueError):
        PoleFraction("up", 1.0, 1)


def test_decay_degree():
    assert plus(1.0, 3).decay_degree() == 3
    assert NormalRational([1, 0, 2]).decay_degree() == -2
    assert NormalRational().decay_degree() == math.inf


# -- properties ----------------------------------------------------------------


@given(poles, orders, poles, orders, coeffs)
def test_mul_is_pointwise(p, j, q, jp, c):
    assume(abs(c) > 1e-3)
    f = plus(p, j, c)
    g = minus(q, jp) + plus(q, 1)
    assume(_separated(p, q))
    h = mul(f, g)
    for x in XS:
        assert evaluate(h, x) == pytest.approx(evaluate(f, x) * evaluate(g, x), rel=1e-9, abs=1e-12)


@given(poles, orders, poles, orders)
def test_line_integral_matches_product_formula_and_quadrature(p, j, q, jp):
    f = mul(plus(p, j), minus(q, jp))
    val = line_integral(f)
    assert val == pytest.approx(product_integral(j, jp, p, q), rel=1e-10)
    assert val == pytest.approx(_quad(lambda x: evaluate(f, x)), rel=1e-7, abs=1e-10)


@given(exact_poles, orders, exact_poles, orders, exact_poles)
def test_exact_associativity_and_commutativity(p, j, q, jp, r):
    assume(p != r)
    f, g, h = plus(p, j), minus(q, jp), plus(r, 1) + minus(q, 1)
    assert mul(f, g) == mul(g, f)
    assert mul(mul(f, g), h) == mul(f, mul(g, h))


@given(exact_poles, orders, exact_poles)
def test_exact_product_is_pointwise_for_close_poles(p, j, q):
    assume(p != q)
    f, g = plus(p, j), plus(q, 3)
    h = mul(f, g)
    x = exact(Fraction(3, 7))
    ix = x * exact(1j)
    assert sum((fr.coeff * (fr.pole + ix) ** (-fr.order) for fr in h.fractions), exact(0)) == \
        (p + ix) ** (-j) * (q + ix) ** (-3)


@given(poles, orders, coeffs)
def test_conj_and_reflect(p, j, c):
    f = plus(p, j, c) + minus(p + 0.5, 1, 1.0)
    for x in XS:
        assert evaluate(f.conj(), x) == pytest.approx(np.conj(evaluate(f, x)), rel=1e-12, abs=1e-14)
        assert evaluate(f.reflect(), x) == pytest.approx(evaluate(f, -x), rel=1e-12, abs=1e-14)


@given(st.floats(0.1, 10), st.floats(0.1, 10))
def test_scaling_homogeneity(p, t):
    # (1/2pi) int (tp + i xi)^-1 (tp - i xi)^-1 = 1/(2 t p)
    assert line_integral(mul(plus(t * p), minus(t * p))) == pytest.approx(1 / (2 * t * p), rel=1e-12)
