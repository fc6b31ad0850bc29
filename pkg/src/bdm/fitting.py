"""Least-squares fitting of power / log-power asymptotic series.

A template is a list of ``(exponent, is_log)`` slots; the basis functions are
``mu^e`` and ``mu^e log mu``.  Samples may be complex (rays off the real axis).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin

from .exceptions import IllConditioned, InsufficientSamples

MAX_CONDITION = 1e12


@dataclass(frozen=True)
class ExpansionFit:
    """Fitted coefficients of ``sum a_e mu^e + sum (a'_e log mu + a''_e) mu^e``.

    ``power_terms`` holds every plain power column, including those sharing an
    exponent with a log slot; ``log_terms`` repeats that constant as its third
    entry.  ``residual`` is relative to the largest sampled ``|F|``.
    """

    power_terms: tuple
    log_terms: tuple
    residual: float
    condition: float
    stderr: dict = field(default_factory=dict)

    def log_coefficient(self, exponent) -> complex:
        exponent = Fraction(exponent)
        for e, c_log, _ in self.log_terms:
            if e == exponent:
                return c_log
        raise KeyError(f"no log slot at exponent {exponent}")

    def power_coefficient(self, exponent) -> complex:
        exponent = Fraction(exponent)
        for e, c in self.power_terms:
            if e == exponent:
                return c
        raise KeyError(f"no power slot at exponent {exponent}")

    def leading_power_coefficient(self, snr: float = 10.0, rel_zero: float = 1e-6) -> tuple:
        """``(exponent, coefficient)`` of the highest power that is not numerically zero.

        A coefficient counts as zero when it is within ``snr`` standard errors
        of zero or below ``rel_zero`` times the largest power coefficient.
        """
        scale = max((abs(c) for _, c in self.power_terms), default=0.0)
        for e, c in self.power_terms:
            floor = max(snr * self.stderr.get((e, False), 0.0), rel_zero * scale)
            if abs(c) > floor:
                return e, c
        raise ValueError("every fitted power coefficient is numerically zero")

    def in_lambda(self) -> "ExpansionFit":
        """The same expansion in ``lambda = -mu^2``: exponents halve, log coefficients halve."""
        half = Fraction(1, 2)
        return ExpansionFit(
            tuple((e * half, c) for e, c in self.power_terms),
            tuple((e * half, cl * half, cc) for e, cl, cc in self.log_terms),
            self.residual,
            self.condition,
            {(k[0] * half, k[1]): (v * 0.5 if k[1] else v) for k, v in self.stderr.items()},
        )


def default_template(leading, k: int, n_powers: int = 6, log_slots: int = 3) -> list:
    """Power exponents from ``max(leading, -2k)`` downward plus log slots at ``-2k, -2k-1, ...``."""
    start = max(int(leading), -2 * k)
    slots = [(Fraction(start - i), False) for i in range(n_powers)]
    slots += [(Fraction(-2 * k - i), True) for i in range(log_slots)]
    return slots


def _as_complex_vector(x, name: str) -> np.ndarray:
    arr = np.asarray(x)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    arr = arr.astype(complex)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


class AsymptoticExpansionRegressor(BaseEstimator, RegressorMixin):
    """Weighted linear least squares in the basis ``{mu^e, mu^e log mu}``.

    Parameters
    ----------
    template : sequence of (exponent, is_log)
        Basis slots.  Exponents may be rationals.
    weighting : {"relative", "uniform"}
        ``relative`` weights each sample by ``1/|F|``.
    max_condition : float
        Fits whose column-scaled design matrix exceeds this condition number
        are refused.
    """

    def __init__(self, template: Sequence = (), weighting: str = "relative",
                 max_condition: float = MAX_CONDITION):
        self.template = template
        self.weighting = weighting
        self.max_condition = max_condition

    def _design(self, mu: np.ndarray) -> np.ndarray:
        cols = []
        log_mu = np.log(mu)
        for e, is_log in self.slots_:
            col = mu ** float(e)
            cols.append(col * log_mu if is_log else col)
        return np.stack(cols, axis=1)

    def fit(self, X, y):
        mu = _as_complex_vector(X, "X")
        F = _as_complex_vector(y, "y")
        if mu.shape != F.shape:
            raise ValueError("X and y must have the same length")
        slots = sorted({(Fraction(e), bool(lg)) for e, lg in self.template},
                       key=lambda s: (-s[0], s[1]))
        if not slots:
            raise ValueError("empty template")
        if len(mu) < 2 * len(slots):
            raise InsufficientSamples(f"{len(mu)} samples for {len(slots)} coefficients")
        self.slots_ = slots
        A = self._design(mu)
        if self.weighting == "relative":
            floor = 1e-300 + 1e-14 * np.abs(F).max()
            w = 1.0 / np.maximum(np.abs(F), floor)
        elif self.weighting == "uniform":
            w = np.ones(len(F))
        else:
            raise ValueError(f"unknown weighting {self.weighting!r}")
        Aw = A * w[:, None]
        col_scale = np.linalg.norm(Aw, axis=0)
        col_scale[col_scale == 0] = 1.0
        As = Aw / col_scale
        cond = float(np.linalg.cond(As))
        if not cond <= self.max_condition:
            raise IllConditioned(f"design condition number {cond:.3g} exceeds {self.max_condition:g}")
        bw = F * w
        sol, *_ = np.linalg.lstsq(As, bw, rcond=None)
        coef = sol / col_scale
        resid_w = bw - As @ sol
        dof = max(len(F) - len(slots), 1)
        s2 = float(np.vdot(resid_w, resid_w).real) / dof
        cov = s2 * np.linalg.pinv(As.conj().T @ As)
        self.coef_ = coef
        self.stderr_ = np.sqrt(np.abs(np.diag(cov))) / col_scale
        self.condition_ = cond
        self.residual_ = float(np.abs(A @ coef - F).max() / np.abs(F).max()) if np.abs(F).max() > 0 else 0.0
        return self

    def predict(self, X):
        mu = _as_complex_vector(X, "X")
        return self._design(mu) @ self.coef_

    def score(self, X, y, sample_weight=None):
        """Coefficient of determination on moduli of the residuals."""
        F = _as_complex_vector(y, "y")
        r = F - self.predict(X)
        total = np.abs(F - F.mean()) ** 2
        return 1.0 - float((np.abs(r) ** 2).sum() / total.sum()) if total.sum() > 0 else 1.0

    def to_expansion(self) -> ExpansionFit:
        powers = {}
        logs = {}
        stderr = {}
        for (e, is_log), c, s in zip(self.slots_, self.coef_, self.stderr_):
            (logs if is_log else powers)[e] = complex(c)
            stderr[(e, is_log)] = float(s)
        power_terms = tuple(sorted(powers.items(), key=lambda t: -t[0]))
        log_terms = tuple((e, logs[e], powers.get(e, 0j)) for e in sorted(logs, reverse=True))
        return ExpansionFit(power_terms, log_terms, self.residual_, self.condition_, stderr)


def fit_expansion(samples, template, weighting: str = "relative",
                  max_condition: float = MAX_CONDITION) -> ExpansionFit:
    """Fit ``F(mu)`` samples, given as ``(mu, F)`` pairs or as two arrays, to a template."""
    if isinstance(samples, tuple) and len(samples) == 2 and np.ndim(samples[0]) == 1:
        mu, F = samples
    else:
        arr = list(samples)
        mu = [s[0] for s in arr]
        F = [s[1] for s in arr]
    est = AsymptoticExpansionRegressor(template, weighting, max_condition)
    return est.fit(mu, F).to_expansion()
