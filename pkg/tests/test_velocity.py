import math

import numpy as np
import pytest

from lanesim.errors import LaneIndexOutOfRange, SchemaError
from lanesim.velocity import LinearGreenshields, QuadraticConcave, VelocityModel, parse_law


@pytest.mark.parametrize("law, theta", [
    (LinearGreenshields(1.5), 0.5),
    (LinearGreenshields(2.5), 0.5),
    (QuadraticConcave(), 1 / math.sqrt(3)),
])
def test_theta_is_flux_argmax(law, theta):
    assert law.theta == pytest.approx(theta, abs=1e-15)
    u = np.linspace(0, 1, 200001)
    assert u[np.argmax(u * law.v(u))] == pytest.approx(theta, abs=1e-5)


@pytest.mark.parametrize("lanes, vmax, vpmax, calK", [
    ([LinearGreenshields(1.5), LinearGreenshields(2.5)], 2.5, 2.5, 5.0),
    ([QuadraticConcave(), QuadraticConcave()], 1.0, 2.0, 4.0),
    ([LinearGreenshields(1.0)], 1.0, 1.0, 2.0),
])
def test_constants(lanes, vmax, vpmax, calK):
    vel = VelocityModel(lanes)
    assert vel.V_max == vmax and vel.Vp_max == vpmax and vel.calK == calK
    assert vel.calV == vmax + vpmax


def test_constants_against_sampling():
    vel = VelocityModel([QuadraticConcave(), LinearGreenshields(0.7)])
    u = np.linspace(0, 1, 10001)
    assert max(np.abs(vel.v(j, u)).max() for j in range(2)) == pytest.approx(vel.V_max)
    slopes = [np.abs(np.diff(vel.v(j, u)) / np.diff(u)).max() for j in range(2)]
    assert max(slopes) == pytest.approx(vel.Vp_max, rel=1e-3)


def test_lane_index():
    vel = VelocityModel([QuadraticConcave()])
    with pytest.raises(LaneIndexOutOfRange):
        vel.law(1)


@pytest.mark.parametrize("text, expected", [
    ("linear:a=1.5", LinearGreenshields(1.5)),
    ("linear", LinearGreenshields(1.0)),
    ("quadratic", QuadraticConcave()),
])
def test_parse_law(text, expected):
    assert parse_law(text) == expected
    assert parse_law(expected.describe()) == expected


@pytest.mark.parametrize("text", ["cubic", "linear:b=2", "linear:a=x", "linear:a=-1"])
def test_parse_law_rejects(text):
    with pytest.raises(SchemaError):
        parse_law(text)
