"""Smoothed norm and cutoff functions on the tangential covariable."""

from __future__ import annotations

import numpy as np

_R0, _R1 = 0.25, 0.5


def _blend(s):
    # C^2 join from the constant 0 at s <= 0 to the line s at s >= 1
    s = np.clip(s, 0.0, 1.0)
    return s**3 * (6 - 8 * s + 3 * s**2)


def _step(s):
    # C^2 monotone step from 0 at s <= 0 to 1 at s >= 1
    s = np.clip(s, 0.0, 1.0)
    return s**3 * (10 - 15 * s + 6 * s**2)


def cutoff(r):
    """C^2 cutoff: 0 for ``r <= 1/4``, 1 for ``r >= 1/2``."""
    r = np.asarray(r, dtype=float)
    out = _step((r - _R0) / (_R1 - _R0))
    return out if out.ndim else float(out)


def smoothed_abs(r):
    """Positive function of ``r >= 0`` equal to ``r`` for ``r >= 1/2`` and to 1/4 near 0."""
    r = np.asarray(r, dtype=float)
    out = np.where(r >= _R1, r, _R0 + (_R1 - _R0) * _blend((r - _R0) / (_R1 - _R0)))
    return out if out.ndim else float(out)


def smoothed_norm(xi_prime):
    """``[xi']`` for a vector (last axis) or a scalar tangential covariable."""
    xi_prime = np.asarray(xi_prime, dtype=float)
    r = np.abs(xi_prime) if xi_prime.ndim == 0 else np.linalg.norm(xi_prime, axis=-1)
    return smoothed_abs(r)
