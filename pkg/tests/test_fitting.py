from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sklearn.base import clone

from bdm.exceptions import IllConditioned, InsufficientSamples
from bdm.fitting import AsymptoticExpansionRegressor, default_template, fit_expansion

MUS = np.geomspace(10 ** 1.5, 10 ** 3.5, 60)
TEMPLATE = default_template(-2, 1)


def synthetic(mu, a=0.7, b=-0.3, c=0.25, d=1.5):
    return a * mu**-2 + b * mu**-2 * np.log(mu) + c * mu**-3 + d * mu**-4 * np.log(mu)


def test_default_template():
    t = default_template(0, 1)
    assert t[:6] == [(Fraction(e), False) for e in (0, -1, -2, -3, -4, -5)]
    assert t[6:] == [(Fraction(-2), True), (Fraction(-3), True), (Fraction(-4), True)]
    # powers never start below the first log slot
    assert default_template(-3, 1)[0] == (Fraction(-2), False)


def test_recovers_power_and_log_coefficients():
    fit = fit_expansion((MUS, synthetic(MUS)), TEMPLATE)
    assert fit.log_coefficient(-2) == pytest.approx(-0.3, rel=1e-9)
    assert fit.power_coefficient(-2) == pytest.approx(0.7, rel=1e-9)
    assert fit.power_coefficient(-3) == pytest.approx(0.25, rel=1e-7)
    assert fit.log_coefficient(-4) == pytest.approx(1.5, rel=1e-5)
    assert fit.residual < 1e-12
    assert fit.condition < 1e12
    assert fit.leading_power_coefficient() == (Fraction(-2), pytest.approx(0.7, rel=1e-9))


@settings(max_examples=20)
@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(-1, 1), st.floats(-np.pi / 4, np.pi / 4))
def test_recovery_on_complex_rays(a, b, c, angle):
    if abs(a) + abs(b) < 1e-3:
        return
    mu = MUS * np.exp(1j * angle)
    fit = fit_expansion((mu, synthetic(mu, a, b, c, 0.0)), TEMPLATE)
    scale = abs(a) + abs(b) + abs(c)
    assert abs(fit.log_coefficient(-2) - b) <= 1e-7 * scale
    assert abs(fit.power_coefficient(-2) - a) <= 1e-7 * scale


def test_leading_coefficient_skips_numerical_zeros():
    F = 1e-14 * MUS**-2 + 0.2 * MUS**-3 + 0.1 * MUS**-4
    fit = fit_expansion((MUS, F), TEMPLATE)
    e, c = fit.leading_power_coefficient()
    assert e == -3 and c == pytest.approx(0.2, rel=1e-6)


def test_lambda_table():
    fit = fit_expansion((MUS, synthetic(MUS)), TEMPLATE).in_lambda()
    # mu^-2 log mu = (-lambda)^-1 (1/2) log(-lambda)
    assert fit.log_coefficient(-1) == pytest.approx(-0.15, rel=1e-9)
    assert fit.power_coefficient(Fraction(-3, 2)) == pytest.approx(0.25, rel=1e-7)


def test_sample_pairs_and_errors():
    pairs = list(zip(MUS, synthetic(MUS)))
    assert fit_expansion(pairs, TEMPLATE).log_coefficient(-2) == pytest.approx(-0.3, rel=1e-9)
    with pytest.raises(InsufficientSamples):
        fit_expansion((MUS[:10], synthetic(MUS[:10])), TEMPLATE)
    with pytest.raises(IllConditioned):
        fit_expansion((MUS, synthetic(MUS)), TEMPLATE, max_condition=10.0)
    with pytest.raises(KeyError):
        fit_expansion((MUS, synthetic(MUS)), TEMPLATE).log_coefficient(-9)
    with pytest.raises(ValueError):
        fit_expansion((MUS, synthetic(MUS)), TEMPLATE, weighting="bogus")


def test_estimator_interface():
    est = AsymptoticExpansionRegressor(template=TEMPLATE, weighting="uniform")
    assert clone(est).get_params() == est.get_params()
    est.fit(MUS, synthetic(MUS))
    assert np.allclose(est.predict(MUS), synthetic(MUS), rtol=1e-10)
    assert est.score(MUS, synthetic(MUS)) == pytest.approx(1.0)
    assert len(est.coef_) == len(TEMPLATE)
    with pytest.raises(ValueError):
        est.fit(MUS, synthetic(MUS)[:-1])
