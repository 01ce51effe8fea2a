import math
import sys
import os

import pytest
from hypothesis import given, settings, strategies as st

sys.path.insert(0, os.path.dirname(__file__))
import oracles  # noqa: E402
from unicrit.dynamics import MapParams  # noqa: E402
from unicrit.errors import BranchAmbiguity, NotEscaping  # noqa: E402
from unicrit.potential import (AngleRational, bottcher, bottcher_jet, external_angle,  # noqa: E402
                               green, green_of_critical_value, param_bottcher, param_log_jet)

GOLDEN_SQ = (3 + math.sqrt(5)) / 2


def test_angle_rational():
    a = AngleRational.parse("3/7")
    assert a.times(2) == AngleRational(6, 7)
    assert a.times(4) == AngleRational(5, 7)
    assert AngleRational.parse("2/4") == AngleRational(1, 2)
    with pytest.raises(ValueError):
        AngleRational(1, 1)
    with pytest.raises(ValueError):
        AngleRational(-1, 3)


def test_green_examples():
    assert green(MapParams(2, 0), math.e) == pytest.approx(1.0, abs=1e-12)
    assert green(MapParams(2, 0), 4) == pytest.approx(math.log(4), abs=1e-12)
    g = green(MapParams(2, -2), 3)
    assert math.log(2) < g < math.log(3)
    assert abs(g - float(oracles.raw_green(2, -2, 3))) < 1e-12


def test_green_not_escaping():
    with pytest.raises(NotEscaping):
        green(MapParams(2, -0.1), 0.1)


def test_green_of_critical_value():
    for c in (3, -3):
        p = MapParams(2, c)
        assert green_of_critical_value(p) == green(p, c) > 0
    try:
        g = green_of_critical_value(MapParams(2, 0.2501), maxit=10**6)
    except NotEscaping:
        pass
    else:
        assert 0 < g < 0.01


def test_bottcher_examples():
    assert bottcher(MapParams(2, 0), 1 + 1j) == pytest.approx(1 + 1j, abs=1e-12)
    z = 1e6
    assert abs(bottcher(MapParams(2, 3), z) / z - 1) <= 2 * 3 / (2 * z**2)
    phi = bottcher(MapParams(2, -2), 3)
    assert phi == pytest.approx(GOLDEN_SQ, abs=1e-12)


def test_external_angle_examples():
    t, th = external_angle(MapParams(2, 0), 2j)
    assert t == pytest.approx(math.log(2), abs=1e-12) and th == pytest.approx(0.25, abs=1e-12)
    assert external_angle(MapParams(2, -2), -3).theta == pytest.approx(0.5, abs=1e-12)
    t, th = external_angle(MapParams(2, 0), -4)
    assert t == pytest.approx(math.log(4)) and th == pytest.approx(0.5, abs=1e-12)


def test_inside_critical_equipotential_is_rejected():
    with pytest.raises(BranchAmbiguity):
        external_angle(MapParams(2, 0.5), 0.01j)


def test_bottcher_jet_examples():
    jet = bottcher_jet(MapParams(2, 0), 5, "z")
    assert jet.val == pytest.approx(5) and jet.der == pytest.approx(1, abs=1e-12)
    jet = bottcher_jet(MapParams(2, -2), 3, "z")
    assert jet.der == pytest.approx((1 + 3 / math.sqrt(5)) / 2, abs=1e-10)


def test_bottcher_jet_c_far_out():
    # phi(z) = z + c/(2z) + O(z**-3)
    z = 1e6
    jet = bottcher_jet(MapParams(2, 3.0), z, "c")
    assert abs(jet.der - 1 / (2 * z)) <= 1e-5 * abs(jet.der)


def test_bottcher_jet_c_against_finite_differences():
    z, c, h = 3.0 + 1j, 0.3 - 0.2j, 1e-6
    jet = bottcher_jet(MapParams(2, c), z, "c")
    fd = (bottcher(MapParams(2, c + h), z) - bottcher(MapParams(2, c - h), z)) / (2 * h)
    assert abs(jet.der - fd) <= 1e-5 * abs(jet.der)


def test_param_bottcher_examples():
    val = param_bottcher(2, 3).val
    assert abs(abs(val) - math.exp(green_of_critical_value(MapParams(2, 3)))) < 1e-11
    val = param_bottcher(2, -3).val
    assert (math.atan2(val.imag, val.real) / (2 * math.pi)) % 1 == pytest.approx(0.5, abs=1e-12)
    assert abs(param_bottcher(2, 1e6).val / 1e6 - 1) < 1e-5


def test_param_log_jet_matches_param_bottcher():
    c = -0.8 + 0.6j
    t, dlog = param_log_jet(2, c)
    jet = param_bottcher(2, c)
    assert abs(jet.der / jet.val - dlog) < 1e-10 * abs(dlog)
    assert t == pytest.approx(math.log(abs(jet.val)), abs=1e-12)


escaping = st.tuples(st.floats(-1.2, 1.2), st.floats(-1.2, 1.2), st.floats(2.5, 6), st.floats(0, 1))


@settings(max_examples=100, deadline=None)
@given(escaping)
def test_jet_z_vs_finite_differences(args):
    cr, ci, r, a = args
    p = MapParams(2, complex(cr, ci))
    z = r * complex(math.cos(2 * math.pi * a), math.sin(2 * math.pi * a))
    jet = bottcher_jet(p, z, "z")
    h = 1e-6 * abs(z)
    fd = (bottcher(p, z + h) - bottcher(p, z - h)) / (2 * h)
    assert abs(fd - jet.der) <= 1e-5 * abs(jet.der)


@settings(max_examples=100, deadline=None)
@given(escaping)
def test_functional_equation_and_doubling(args):
    cr, ci, r, a = args
    p = MapParams(2, complex(cr, ci))
    z = r * complex(math.cos(2 * math.pi * a), math.sin(2 * math.pi * a))
    assert abs(green(p, p.f(z)) - 2 * green(p, z)) <= 1e-11
    x = (external_angle(p, p.f(z)).theta - 2 * external_angle(p, z).theta) % 1
    assert min(x, 1 - x) <= 1e-9
