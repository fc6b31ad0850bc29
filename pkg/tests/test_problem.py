import copy
import json
import re

import numpy as np
import pytest

from bdm.exceptions import DomainError, SpecError
from bdm.problem import Expression, component_values, load_spec, parse_spec

BASE = {
    "schema": "bdm/1",
    "model": {"n": 2, "a": 1, "b": [0], "c": [[1]], "c0": 1},
    "perturbation": {"order": -2, "sgo": [{"l": 0, "m": 0, "coeff": "1/br_xi"}]},
    "k": 1,
}


def _with(path, value):
    doc = copy.deepcopy(BASE)
    node = doc
    for key in path[:-1]:
        node = node[key]
    node[path[-1]] = value
    return doc


def test_valid_spec():
    spec = parse_spec(BASE)
    assert spec.n == 2 and spec.k == 1 and spec.leading_exponent == -2
    assert spec.is_radial and not spec.is_zero
    assert len(spec.ray.points) == 60
    assert spec.sgo[(0, 0)](np.array([3.0])) == pytest.approx(1 / 3)


def test_psdo_terms():
    doc = _with(["perturbation", "psdo"], [{"side": "minus", "pole": "br_xi + 1", "order": 2, "coeff": "2j"}])
    spec = parse_spec(doc)
    f = spec.psdo_symbol(np.array([2.0]))
    assert f.fractions[0].side == "minus" and f.fractions[0].pole == 3 and f.fractions[0].coeff == 2j


@pytest.mark.parametrize("path,value,message", [
    (["schema"], "bdm/0", "schema"),
    (["k"], 0, "k: need k > (n + order)/2"),
    (["k"], 1.5, "k: expected an integer"),
    (["model", "n"], 7, "model.n"),
    (["model", "a"], -1, "model.a"),
    (["model", "b"], [5], "model: "),
    (["model", "c"], [[1, 2]], "model.c"),
    (["model", "b"], [0, 1], "model.b"),
    (["perturbation", "sgo"], [{"l": 0, "m": -1, "coeff": 1}], "perturbation.sgo[0]"),
    (["perturbation", "sgo"], [{"l": 0, "m": 0, "coeff": "__import__('os')"}], "perturbation.sgo[0].coeff"),
    (["perturbation", "sgo"], [{"l": 0, "m": 0, "coeff": "eta"}], "unknown variable 'eta'"),
    (["perturbation", "psdo"], [{"side": "up", "pole": 1}], "perturbation.psdo[0].side"),
    (["ray"], {"angle": 2.0}, "ray"),
    (["ray"], {"mu_min": 0.5}, "ray.mu_min"),
    (["extra"], 1, "unknown fields"),
])
def test_validation_messages_name_the_field(path, value, message):
    with pytest.raises(SpecError, match=re.escape(message)):
        parse_spec(_with(path, value))


def test_expressions():
    e = Expression("chi(abs_xi) * xi1^2 + sqrt(4) - -1", 2, "x")
    assert e(np.array([3.0, 4.0])) == pytest.approx(9 + 2 + 1)
    assert e.uses_components
    assert not Expression("1/br_xi", 2, "x").uses_components
    with pytest.raises(DomainError):
        Expression("1/abs_xi", 1, "x")(np.array([0.0]))
    with pytest.raises(SpecError):
        Expression("x" * 600, 1, "x")
    with pytest.raises(SpecError):
        Expression("1 +", 1, "x")
    with pytest.raises(SpecError):
        Expression("[1]", 1, "x")


def test_non_radial_detection():
    assert not parse_spec(_with(["model", "b"], [0.5])).is_radial
    doc = _with(["perturbation", "sgo"], [{"l": 0, "m": 0, "coeff": "xi1/br_xi^2"}])
    assert not parse_spec(doc).is_radial


def test_load_spec_reports_position(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"schema": "bdm/1",\n "k": }')
    with pytest.raises(SpecError, match=r"bad\.json:2:"):
        load_spec(p)
    with pytest.raises(SpecError):
        load_spec(tmp_path / "missing.json")
    good = tmp_path / "good.json"
    good.write_text(json.dumps(BASE))
    assert load_spec(good).k == 1


def test_component_extraction():
    def f(xp):
        r = float(np.linalg.norm(xp))
        return (r * r + 1) ** -0.5
    w = np.array([1.0])
    assert component_values(f, -1)(w) == pytest.approx(1.0, rel=1e-10)
    assert abs(component_values(f, -2, top_degree=-1)(w)) <= 1e-9
    assert component_values(f, -3, top_degree=-1)(w) == pytest.approx(-0.5, rel=1e-6)
    assert component_values(f, -1, top_degree=-2)(w) == 0
