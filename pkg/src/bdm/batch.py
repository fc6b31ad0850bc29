"""Expansion tables and residue reports for a :class:`~bdm.problem.ProblemSpec`."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .fitting import ExpansionFit, default_template, fit_expansion
from .normal_rational import evaluate, line_integral, mul
from .problem import ProblemSpec, component_values
from .resolvent import q_power, resolvent_power
from .sgo import compose_gg, compose_gq, compose_qg, leftover_minus, leftover_plus, tr_n
from .traces import HomogeneousComponent, laguerre_sgo, mu_trace, residue, sweep

#: Coefficients below this modulus count as zero in emitted tables.
ZERO_COEFF = 1e-12
#: Residues below this modulus are compared absolutely.
ABS_FLOOR = 1e-8
COLUMNS = ("variable", "exponent", "is_log", "coefficient_re", "coefficient_im", "stderr")


def boundary_fiber(spec: ProblemSpec):
    """``(xi', mu) ->`` normal trace of the singular Green part of the perturbed resolvent power."""
    model, k = spec.model, spec.k

    def fiber(xi_prime, mu):
        qk, gk = resolvent_power(model, k, xi_prime, mu)
        total = 0j
        if spec.sgo:
            g = laguerre_sgo(spec.sgo, xi_prime)
            total += complex(tr_n(compose_gq(g, qk) + compose_gg(g, gk)))
        if spec.psdo:
            p = spec.psdo_symbol(xi_prime)
            total += complex(tr_n(compose_qg(p, gk)
                                  - compose_gg(leftover_plus(p), leftover_minus(qk))))
        return total

    return fiber


def interior_fiber(spec: ProblemSpec):
    """``(xi', mu) -> (1/2pi) int p(xi', xi_n) q^k(xi', xi_n, mu) dxi_n`` by residues."""
    model, k = spec.model, spec.k

    def fiber(xi_prime, mu):
        return complex(line_integral(mul(spec.psdo_symbol(xi_prime), q_power(model, k, xi_prime, mu))))

    return fiber


def interior_symbol(spec: ProblemSpec):
    """``xi -> p(xi', xi_n)`` for the psdo perturbation."""

    def p(xi):
        xi = np.asarray(xi, dtype=float)
        return evaluate(spec.psdo_symbol(xi[:-1]), xi[-1])

    return p


def trace_function(spec: ProblemSpec):
    """``mu -> F(mu)``, the frozen-model trace of the perturbation times the resolvent power.

    The psdo part contributes its singular Green terms at the boundary and
    its interior density, whose normal integral is taken in closed form.
    """
    parts = [boundary_fiber(spec)]
    if spec.psdo:
        parts.append(interior_fiber(spec))

    def fiber(xi_prime, mu):
        return sum((f(xi_prime, mu) for f in parts), 0j)

    def F(mu):
        return mu_trace(fiber, spec.n - 1, mu, spec.weight, radial=spec.is_radial)

    return F


def compute_expansion(spec: ProblemSpec, workers: int | None = None) -> ExpansionFit | None:
    """Fitted ``mu``-expansion of ``F``; ``None`` when the perturbation vanishes identically."""
    if spec.is_zero:
        return None
    mus = spec.ray.points
    values = sweep(trace_function(spec), mus, workers)
    if not np.any(values):
        return None
    template = default_template(spec.leading_exponent, spec.k)
    return fit_expansion((mus, values), template)


# -- tables -------------------------------------------------------------------


@dataclass(frozen=True)
class Row:
    variable: str
    exponent: Fraction
    is_log: bool
    coefficient: complex
    stderr: float


def table_rows(fit: ExpansionFit | None) -> list[Row]:
    """Rows of the ``mu`` table followed by the ``lambda`` table (in powers of ``-lambda``)."""
    if fit is None:
        return []
    rows = []
    for name, f in (("mu", fit), ("lambda", fit.in_lambda())):
        for e, c in f.power_terms:
            if abs(c) > ZERO_COEFF:
                rows.append(Row(name, e, False, c, f.stderr.get((e, False), math.nan)))
        for e, c_log, _ in f.log_terms:
            if abs(c_log) > ZERO_COEFF:
                rows.append(Row(name, e, True, c_log, f.stderr.get((e, True), math.nan)))
    return rows


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def emit_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in rows:
        w.writerow([r.variable, str(r.exponent), int(r.is_log), _fmt(r.coefficient.real),
                    _fmt(r.coefficient.imag), _fmt(r.stderr)])
    return buf.getvalue()


def parse_csv(text: str) -> list[Row]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != COLUMNS:
        raise ValueError(f"unexpected columns {reader.fieldnames}")
    return [Row(d["variable"], Fraction(d["exponent"]), bool(int(d["is_log"])),
                complex(float(d["coefficient_re"]), float(d["coefficient_im"])), float(d["stderr"]))
            for d in reader]


def emit_json(rows, fit: ExpansionFit | None = None) -> str:
    doc = {
        "rows": [{"variable": r.variable, "exponent": str(r.exponent), "is_log": r.is_log,
                  "coefficient_re": _fmt(r.coefficient.real),
                  "coefficient_im": _fmt(r.coefficient.imag), "stderr": _fmt(r.stderr)}
                 for r in rows],
    }
    if fit is not None:
        doc["residual"] = _fmt(fit.residual)
        doc["condition"] = _fmt(fit.condition)
    return json.dumps(doc, indent=2) + "\n"


def parse_json(text: str) -> list[Row]:
    doc = json.loads(text)
    return [Row(d["variable"], Fraction(d["exponent"]), bool(d["is_log"]),
                complex(float(d["coefficient_re"]), float(d["coefficient_im"])), float(d["stderr"]))
            for d in doc["rows"]]


# -- residue ------------------------------------------------------------------


def residue_components(spec: ProblemSpec) -> dict:
    """Homogeneous components entering the residue density."""
    n = spec.n
    out = {}
    if spec.sgo:
        def trn_g(xi_prime):
            return complex(tr_n(laguerre_sgo(spec.sgo, xi_prime)))

        top = max(math.floor(spec.order) + 1, 1 - n)
        out["boundary_g"] = HomogeneousComponent(1 - n, component_values(trn_g, 1 - n, top), spec.weight)
    if spec.psdo:
        top = max(math.floor(spec.order), -n)
        out["interior"] = HomogeneousComponent(-n, component_values(interior_symbol(spec), -n, top),
                                               spec.weight)
    return out


def compute_residue(spec: ProblemSpec, cross_check: bool = False, workers: int | None = None) -> dict:
    """Residue from the density formula and optionally from the fitted log coefficient."""
    report = {"density": complex(residue(n=spec.n, **residue_components(spec)))}
    if cross_check:
        fit = compute_expansion(spec, workers)
        if fit is None:
            report["log_route"] = 0j
        else:
            c_log = fit.in_lambda().log_coefficient(-spec.k)
            report["log_route"] = 2 * c_log
        diff = abs(report["density"] - report["log_route"])
        scale = max(abs(report["density"]), abs(report["log_route"]), ABS_FLOOR)
        report["absolute_difference"] = diff
        report["relative_difference"] = diff / scale
    return report


__all__ = [
    "COLUMNS",
    "Row",
    "boundary_fiber",
    "compute_expansion",
    "compute_residue",
    "emit_csv",
    "emit_json",
    "interior_fiber",
    "interior_symbol",
    "parse_csv",
    "parse_json",
    "residue_components",
    "table_rows",
    "trace_function",
]
