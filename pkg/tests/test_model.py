import json
import math

import pytest

from qtm import (BOSON, FERMION, DomainError, ModelParams, SchemaError, Statistics,
                 occupation, rates)
from qtm.model import coth_half, csch, tanh_half


def test_bose_occupation_at_ln2_is_one():
    assert occupation(1, math.log(2), 1.0) == pytest.approx(1.0, rel=1e-15)


def test_fermi_occupation_infinite_temperature_limit():
    assert occupation(-1, 1.0, 1e300) == pytest.approx(0.5, rel=1e-15)


@pytest.mark.parametrize("eps", [1, -1])
def test_zero_temperature_is_exactly_zero(eps):
    assert occupation(eps, 1.0, 0.0) == 0.0


def test_huge_ratio_does_not_overflow():
    assert occupation(BOSON, 1.0, 1e-5) == 0.0
    assert occupation(FERMION, 800.0, 1.0) == pytest.approx(math.exp(-800.0), rel=1e-12)


@pytest.mark.parametrize("omega, t", [(0.0, 1.0), (-1.0, 1.0), (1.0, -0.1)])
def test_occupation_domain(omega, t):
    with pytest.raises(DomainError):
        occupation(1, omega, t)


@pytest.mark.parametrize("bad", [0, 2, True, 1.0, "1"])
def test_statistics_only_accepts_plus_minus_one(bad):
    with pytest.raises((DomainError, ValueError)):
        Statistics.coerce(bad)


def test_rates_examples():
    r = rates(ModelParams(gamma_left=0.01, t_left=0.0))
    assert (r.gamma_plus_left, r.gamma_minus_left) == (0.0, 0.01)
    r = rates(ModelParams(gamma_left=1.0, t_left=1e300, eps_left=-1))
    assert r.gamma_plus_left == pytest.approx(0.5) and r.gamma_minus_left == pytest.approx(0.5)
    r = rates(ModelParams(gamma_left=0.01, t_left=1.0 / math.log(2)))
    assert r.gamma_plus_left == pytest.approx(0.01, rel=1e-14)
    assert r.gamma_minus_left == pytest.approx(0.02, rel=1e-14)


def test_rate_sums():
    r = rates(ModelParams())
    assert r.big_gamma_left == r.gamma_plus_left + r.gamma_minus_left
    assert r.big_gamma == pytest.approx(r.big_gamma_left + r.big_gamma_right, rel=1e-15)


def test_half_angle_helpers_match_hyperbolic_functions():
    for t in (0.05, 0.3, 1.0, 7.0):
        assert coth_half(1.0, t) == pytest.approx(1 / math.tanh(0.5 / t), rel=1e-13)
        assert tanh_half(1.0, t) == pytest.approx(math.tanh(0.5 / t), rel=1e-13)
        assert csch(1.0 / t) == pytest.approx(1 / math.sinh(1.0 / t), rel=1e-13)
    assert coth_half(1.0, 0.0) == 1.0 and tanh_half(1.0, 0.0) == 1.0


@pytest.mark.parametrize("field, value", [("omega", 0.0), ("g", -1e-3), ("gamma_left", 0.0),
                                          ("gamma_right", -1.0), ("t_left", -1.0),
                                          ("t_right", float("nan"))])
def test_params_invariants(field, value):
    with pytest.raises(DomainError):
        ModelParams(**{field: value})


def test_swapped_only_exchanges_temperatures():
    p = ModelParams(t_left=2.0, t_right=0.5, eps_left=-1)
    s = p.swapped()
    assert (s.t_left, s.t_right) == (0.5, 2.0)
    assert (s.gamma_left, s.eps_left) == (p.gamma_left, p.eps_left)


def test_json_round_trip():
    p = ModelParams(g=0.3, eps_right=-1, t_right=0.0)
    text = p.to_json()
    assert set(json.loads(text)) == {"omega", "g", "gamma_left", "gamma_right", "t_left",
                                     "t_right", "eps_left", "eps_right", "eps_sub"}
    assert json.loads(text)["eps_right"] == -1
    assert ModelParams.from_json(text) == p


def test_json_schema_errors_name_the_fields():
    data = ModelParams().to_dict()
    del data["g"]
    data["extra"] = 1
    data["eps_sub"] = 0
    with pytest.raises(SchemaError) as info:
        ModelParams.from_dict(data)
    msg = str(info.value)
    assert "g" in msg and "extra" in msg and "eps_sub" in msg
    with pytest.raises(SchemaError):
        ModelParams.from_json("{not json")
    with pytest.raises(SchemaError):
        ModelParams.from_dict(dict(ModelParams().to_dict(), omega=-1))
