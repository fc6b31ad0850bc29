import numpy as np
import pytest

from bdm.smoothing import cutoff, smoothed_abs, smoothed_norm


def _derivatives(f, x, h=1e-6):
    return (f(x + h) - f(x - h)) / (2 * h), (f(x + h) - 2 * f(x) + f(x - h)) / h**2


def test_frozen_values():
    assert cutoff(0.1) == 0 and cutoff(0.75) == 1 and cutoff(0.375) == pytest.approx(0.5)
    assert smoothed_abs(0.0) == 0.25 and smoothed_abs(3.0) == 3.0
    assert smoothed_norm([3.0, 4.0]) == 5.0
    assert np.allclose(smoothed_norm(np.array([[0.0, 0.0], [6.0, 8.0]])), [0.25, 10.0])


@pytest.mark.parametrize("x", [0.25, 0.5])
def test_c2_joins(x):
    # first and second derivatives agree across each join
    for f in (cutoff, smoothed_abs):
        left = _derivatives(f, x - 1e-5)
        right = _derivatives(f, x + 1e-5)
        assert left[0] == pytest.approx(right[0], abs=1e-3)
        assert left[1] == pytest.approx(right[1], abs=0.2)


def test_monotone_and_positive():
    r = np.linspace(0, 2, 401)
    assert np.all(np.diff(cutoff(r)) >= 0)
    assert np.all(np.diff(smoothed_abs(r)) >= 0)
    assert np.all(smoothed_abs(r) >= 0.25)
