"""Problem-specification files for batch runs.

A specification is a JSON document::

    {
      "schema": "bdm/1",
      "model": {"n": 2, "a": 1, "b": [0], "c": [[1]], "c0": 1},
      "perturbation": {
        "order": -2,
        "sgo": [{"l": 0, "m": 0, "coeff": "1/br_xi"}],
        "psdo": [{"side": "plus", "pole": "br_xi", "order": 1, "coeff": "1"}]
      },
      "k": 1,
      "ray": {"angle": 0, "mu_min": 31.6, "mu_max": 3162, "count": 60},
      "weight": 1
    }

``sgo`` is a Laguerre table ``c[l, m](xi')`` of the singular Green part.
``psdo`` lists pole fractions in the normal covariable ``xi_n`` whose poles and
coefficients depend on ``xi'``.  Complex constants are written as strings such
as ``"1+2j"``.

Coefficient expressions use ``+ - * / ^`` (or ``**``), parentheses, numbers,
the variables ``abs_xi`` (``|xi'|``), ``br_xi`` (the smoothed norm ``[xi']``)
and ``xi1 .. xi{n-1}`` (components of ``xi'``), and the functions ``chi``
(smooth cutoff, 0 below 1/4 and 1 above 1/2) and ``sqrt``.
"""

from __future__ import annotations

import ast
import cmath
import json
import math
import operator
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .exceptions import DomainError, SectorViolation, SpecError
from .normal_rational import MINUS, PLUS, NormalRational, PoleFraction
from .resolvent import BoundaryModel, Ray
from .smoothing import cutoff, smoothed_norm

SCHEMA = "bdm/1"
_MAX_EXPR_LEN = 500

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_UNARY = {ast.UAdd: operator.pos, ast.USub: operator.neg}


def _sqrt(x):
    return cmath.sqrt(x) if isinstance(x, complex) or x < 0 else math.sqrt(x)


_FUNCS = {"chi": lambda r: float(cutoff(float(abs(r)))), "sqrt": _sqrt}


class Expression:
    """A compiled coefficient expression in the tangential covariable."""

    def __init__(self, text, dim_tangent: int, where: str):
        self.where = where
        self.text = str(text)
        if len(self.text) > _MAX_EXPR_LEN:
            raise SpecError(f"{where}: expression longer than {_MAX_EXPR_LEN} characters")
        self.names = {"abs_xi", "br_xi"} | {f"xi{i + 1}" for i in range(dim_tangent)}
        try:
            tree = ast.parse(self.text.replace("^", "**"), mode="eval")
        except SyntaxError as exc:
            raise SpecError(f"{where}: cannot parse expression {self.text!r} ({exc.msg})") from exc
        self._check(tree.body)
        self._tree = tree.body
        self.uses_components = any(
            isinstance(node, ast.Name) and node.id.startswith("xi")
            for node in ast.walk(tree))

    def _check(self, node):
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, (int, float, complex)):
                raise SpecError(f"{self.where}: unsupported literal {node.value!r}")
        elif isinstance(node, ast.Name):
            if node.id not in self.names:
                raise SpecError(f"{self.where}: unknown variable {node.id!r}; "
                                f"allowed: {', '.join(sorted(self.names))}")
        elif isinstance(node, ast.BinOp):
            if type(node.op) not in _BINOPS:
                raise SpecError(f"{self.where}: unsupported operator {type(node.op).__name__}")
            self._check(node.left)
            self._check(node.right)
        elif isinstance(node, ast.UnaryOp):
            if type(node.op) not in _UNARY:
                raise SpecError(f"{self.where}: unsupported operator {type(node.op).__name__}")
            self._check(node.operand)
        elif isinstance(node, ast.Call):
            if not isinstance(node.func, ast.Name) or node.func.id not in _FUNCS:
                raise SpecError(f"{self.where}: only {', '.join(sorted(_FUNCS))} may be called")
            if len(node.args) != 1 or node.keywords:
                raise SpecError(f"{self.where}: {node.func.id} takes exactly one argument")
            self._check(node.args[0])
        else:
            raise SpecError(f"{self.where}: unsupported syntax {type(node).__name__}")

    def _eval(self, node, env):
        if isinstance(node, ast.Constant):
            return node.value
        if isinstance(node, ast.Name):
            return env[node.id]
        if isinstance(node, ast.BinOp):
            return _BINOPS[type(node.op)](self._eval(node.left, env), self._eval(node.right, env))
        if isinstance(node, ast.UnaryOp):
            return _UNARY[type(node.op)](self._eval(node.operand, env))
        return _FUNCS[node.func.id](self._eval(node.args[0], env))

    def __call__(self, xi_prime) -> complex:
        v = np.atleast_1d(np.asarray(xi_prime, dtype=float))
        env = {"abs_xi": float(np.linalg.norm(v)), "br_xi": float(smoothed_norm(v))}
        env.update({f"xi{i + 1}": float(x) for i, x in enumerate(v)})
        try:
            return complex(self._eval(self._tree, env))
        except ZeroDivisionError as exc:
            raise DomainError(f"{self.where}: division by zero at xi'={v.tolist()}") from exc

    def __repr__(self):
        return f"Expression({self.text!r})"


@dataclass(frozen=True)
class PsdoTerm:
    side: str
    pole: Expression
    order: int
    coeff: Expression


@dataclass
class ProblemSpec:
    """Validated problem specification."""

    model: BoundaryModel
    n: int
    k: int
    order: float
    ray: Ray
    sgo: dict = field(default_factory=dict)
    psdo: tuple = ()
    weight: float = 1.0

    @property
    def is_zero(self) -> bool:
        return not self.sgo and not self.psdo

    def psdo_symbol(self, xi_prime) -> NormalRational:
        """The psdo perturbation at ``xi'`` as a symbol in ``xi_n``."""
        return NormalRational(fractions=[
            PoleFraction(t.side, t.pole(xi_prime), t.order, t.coeff(xi_prime)) for t in self.psdo
        ])

    @property
    def is_radial(self) -> bool:
        """Whether every tangential dependence is through ``|xi'|`` alone."""
        m = self.model
        d = m.dim_tangent
        if any(b != 0 for b in m.b):
            return False
        C = np.asarray(m.C)
        if not np.array_equal(C, C[0, 0] * np.eye(d)):
            return False
        exprs = list(self.sgo.values()) + [e for t in self.psdo for e in (t.pole, t.coeff)]
        return not any(e.uses_components for e in exprs)

    @property
    def leading_exponent(self) -> int:
        return math.floor(self.n + self.order - 2 * self.k)


def _complex(value, where: str) -> complex:
    if isinstance(value, bool):
        raise SpecError(f"{where}: expected a number, got {value!r}")
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, str):
        try:
            return complex(value.replace(" ", ""))
        except ValueError as exc:
            raise SpecError(f"{where}: cannot read {value!r} as a number") from exc
    raise SpecError(f"{where}: expected a number, got {type(value).__name__}")


def _real(value, where: str) -> float:
    z = _complex(value, where)
    if z.imag != 0:
        raise SpecError(f"{where}: expected a real number")
    return z.real


def _int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SpecError(f"{where}: expected an integer, got {value!r}")
    return value


def _get(obj: dict, key: str, where: str):
    if not isinstance(obj, dict):
        raise SpecError(f"{where}: expected an object")
    if key not in obj:
        raise SpecError(f"{where}.{key}: missing field")
    return obj[key]


def parse_spec(doc) -> ProblemSpec:
    """Validate a decoded JSON document."""
    if not isinstance(doc, dict):
        raise SpecError("top level: expected a JSON object")
    schema = doc.get("schema")
    if schema != SCHEMA:
        raise SpecError(f"schema: expected {SCHEMA!r}, got {schema!r}")
    unknown = set(doc) - {"schema", "model", "perturbation", "k", "ray", "weight", "outputs"}
    if unknown:
        raise SpecError(f"top level: unknown fields {sorted(unknown)}")

    m = _get(doc, "model", "spec")
    n = _int(_get(m, "n", "model"), "model.n")
    if not 2 <= n <= 4:
        raise SpecError("model.n: supported dimensions are 2, 3 and 4")
    d = n - 1
    a = _complex(_get(m, "a", "model"), "model.a")
    if not a.real > 0:
        raise SpecError(f"model.a: real part must be positive, got {a}")
    b_raw = m.get("b", [0] * d)
    if not isinstance(b_raw, list) or len(b_raw) != d:
        raise SpecError(f"model.b: expected a list of {d} numbers")
    b = [_complex(x, f"model.b[{i}]") for i, x in enumerate(b_raw)]
    c_raw = m.get("c", np.eye(d).tolist())
    if not isinstance(c_raw, list) or len(c_raw) != d or any(
            not isinstance(row, list) or len(row) != d for row in c_raw):
        raise SpecError(f"model.c: expected a {d}x{d} matrix")
    C = [[_complex(x, f"model.c[{i}][{j}]") for j, x in enumerate(row)] for i, row in enumerate(c_raw)]
    c0 = _complex(m.get("c0", 0), "model.c0")
    try:
        model = BoundaryModel(a, b, C, c0)
    except DomainError as exc:
        raise SpecError(f"model: {exc}; adjust a, b, c so that Re(a t^2 + b t + c) > 0") from exc

    k = _int(_get(doc, "k", "spec"), "k")
    pert = doc.get("perturbation", {})
    if not isinstance(pert, dict):
        raise SpecError("perturbation: expected an object")
    order = _real(pert.get("order", -n), "perturbation.order")
    if not k > (n + order) / 2:
        raise SpecError(f"k: need k > (n + order)/2 = {(n + order) / 2:g}, got k={k}")

    sgo = {}
    for i, entry in enumerate(pert.get("sgo", [])):
        where = f"perturbation.sgo[{i}]"
        l_idx = _int(_get(entry, "l", where), f"{where}.l")
        m_idx = _int(_get(entry, "m", where), f"{where}.m")
        if l_idx < 0 or m_idx < 0:
            raise SpecError(f"{where}: Laguerre indices must be non-negative")
        if (l_idx, m_idx) in sgo:
            raise SpecError(f"{where}: duplicate entry ({l_idx}, {m_idx})")
        sgo[(l_idx, m_idx)] = Expression(_get(entry, "coeff", where), d, f"{where}.coeff")

    psdo = []
    for i, entry in enumerate(pert.get("psdo", [])):
        where = f"perturbation.psdo[{i}]"
        side = _get(entry, "side", where)
        if side not in (PLUS, MINUS):
            raise SpecError(f"{where}.side: expected 'plus' or 'minus', got {side!r}")
        order_i = _int(entry.get("order", 1), f"{where}.order")
        if order_i < 1:
            raise SpecError(f"{where}.order: must be at least 1")
        psdo.append(PsdoTerm(side, Expression(_get(entry, "pole", where), d, f"{where}.pole"),
                             order_i, Expression(entry.get("coeff", 1), d, f"{where}.coeff")))

    r = doc.get("ray", {})
    try:
        ray = Ray.logspaced(
            _real(r.get("angle", 0.0), "ray.angle"),
            _real(r.get("mu_min", 10 ** 1.5), "ray.mu_min"),
            _real(r.get("mu_max", 10 ** 3.5), "ray.mu_max"),
            _int(r.get("count", 60), "ray.count"),
        )
    except (DomainError, SectorViolation) as exc:
        raise SpecError(f"ray: {exc}") from exc
    if min(ray.magnitudes) <= 1:
        raise SpecError("ray.mu_min: must exceed 1")
    weight = _real(doc.get("weight", 1.0), "weight")
    return ProblemSpec(model, n, k, order, ray, sgo, tuple(psdo), weight)


def load_spec(path) -> ProblemSpec:
    """Read and validate a specification file."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SpecError(f"{path}: {exc.strerror}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return parse_spec(doc)


def component_values(f: Callable[[np.ndarray], complex], degree: int, top_degree: int | None = None,
                     scales=(2e2, 4e2, 8e2, 1.6e3, 3.2e3, 6.4e3, 1.28e4)) -> Callable[[np.ndarray], complex]:
    """Homogeneous part of degree ``degree`` of ``f`` on unit covectors.

    ``f`` is assumed to expand as ``sum_j f_(top-j)`` in integer degree steps
    at infinity.  With ``u = 1/t`` the function ``u^(top) f(omega/u)`` is
    smooth in ``u``, and the wanted part is its Taylor coefficient of order
    ``top - degree``, recovered by a polynomial fit.
    """
    top = degree if top_degree is None else int(top_degree)
    if top < degree:
        return lambda omega: 0j
    s = top - degree
    u = 1.0 / np.asarray(scales, dtype=float)
    fit_degree = min(s + 3, len(u) - 1)

    def values(omega):
        omega = np.asarray(omega, dtype=float)
        h = np.array([ui ** top * complex(f(omega / ui)) for ui in u])
        # rescale u to [0, 1] for conditioning
        x = u / u[0]
        coef = np.polynomial.polynomial.polyfit(x, h, fit_degree)
        return complex(coef[s] / u[0] ** s)

    return values
