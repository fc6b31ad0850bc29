import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st
from scipy import integrate

from bdm.exceptions import DomainError, TailTooLarge
from bdm.laguerre import (
    LaguerreSeries,
    apply_recurrence,
    eval_x,
    eval_xi,
    expand,
    to_fraction,
)
from bdm.normal_rational import NormalRational, evaluate, line_integral, minus, mul, plus
from strategies import poles, sigmas

XS = np.array([-5.0, -0.7, 0.0, 0.3, 1.9, 8.0])


def test_orthogonality_is_exact():
    s = Fraction(7, 5)
    for k in range(-4, 5):
        for m in range(-4, 5):
            ip = line_integral(mul(to_fraction(k, s), to_fraction(-m - 1, s)))
            assert ip == (1 / (2 * s) if k == m else 0)


@given(st.integers(-8, 8), sigmas)
def test_fraction_form_matches_direct_values(k, s):
    f = to_fraction(k, s)
    for x in XS:
        assert evaluate(f, x) == pytest.approx(eval_xi(k, s, x), rel=1e-12, abs=1e-14)


@pytest.mark.parametrize("k", [0, 1, 3, -2])
def test_inverse_transform(k):
    s = 0.9
    for xi in (0.0, 1.3):
        def f(x):
            return eval_x(k, s, x) * np.exp(-1j * x * xi)
        lo, hi = (0, 80) if k >= 0 else (-80, 0)
        re = integrate.quad(lambda x: f(x).real, lo, hi, limit=200)[0]
        im = integrate.quad(lambda x: f(x).imag, lo, hi, limit=200)[0]
        assert re + 1j * im == pytest.approx(eval_xi(k, s, xi), rel=1e-9)


def test_round_trip_to_1e13():
    s = 1.2
    f = mul(plus(1.5 + 0.5j, 2), minus(2.0, 1)).scale(3.0) + NormalRational([0.5])
    poly, series = expand(f, s)
    assert poly == NormalRational([0.5])
    for x in XS:
        assert series(x) + 0.5 == pytest.approx(evaluate(f, x), rel=1e-13)
    back = series.to_rational()
    for x in XS:
        assert evaluate(back, x) == pytest.approx(evaluate(f, x) - 0.5, rel=1e-12)


def test_expansion_of_a_single_laguerre_function_is_a_delta():
    _, series = expand(to_fraction(3, 0.8), 0.8)
    assert series.allclose(LaguerreSeries.delta(3, 0.8), atol=1e-13)


@given(poles, sigmas)
def test_expansion_coefficients_are_inner_products(p, s):
    q = p.conjugate() + 0.3
    # keep the poles away from sigma, where the fraction algebra is ill-conditioned
    assume(abs(p - s) > 0.1 and abs(q - s) > 0.1)
    f = mul(plus(p, 1), minus(q, 1))
    try:
        _, series = expand(f, s)
    except TailTooLarge:
        return
    for k in (0, 2, -1):
        ip = 2 * s * line_integral(mul(f, to_fraction(-k - 1, s)))
        assert series[k] == pytest.approx(ip, rel=1e-9, abs=1e-12)


def test_tail_too_large():
    with pytest.raises(TailTooLarge):
        expand(plus(40.0), 0.5, kmax=4)


def test_sigma_must_be_positive():
    with pytest.raises(DomainError):
        to_fraction(0, 0.0)


def _num_deriv(f, x, h=1e-5):
    return (f(x + h) - f(x - h)) / (2 * h)


@pytest.mark.parametrize("k", [0, 2, -3])
def test_recurrences(k):
    s = 1.1
    base = LaguerreSeries(s, {k: 1.0})
    d = apply_recurrence("d_xi", base)
    dd = apply_recurrence("d_xi_xi", base)
    ds = apply_recurrence("d_sigma", base)
    for x in XS:
        assert d(x) == pytest.approx(_num_deriv(lambda t: eval_xi(k, s, t), x), rel=1e-7, abs=1e-9)
        assert dd(x) == pytest.approx(_num_deriv(lambda t: t * eval_xi(k, s, t), x), rel=1e-7, abs=1e-9)
        assert ds(x) == pytest.approx((eval_xi(k, s + 1e-6, x) - eval_xi(k, s - 1e-6, x)) / 2e-6,
                                      rel=1e-6, abs=1e-9)
    if k >= 0:
        m = apply_recurrence("mul_ixi", base)
        for x in XS:
            assert m(x) == pytest.approx(1j * x * eval_xi(k, s, x), rel=1e-12, abs=1e-13)


def test_mul_ixi_rejects_negative_indices():
    with pytest.raises(DomainError):
        apply_recurrence("mul_ixi", LaguerreSeries(1.0, {-1: 1.0}))
    with pytest.raises(ValueError):
        apply_recurrence("shift", LaguerreSeries(1.0, {0: 1.0}))
