import math
from fractions import Fraction

import pytest

import oracles
from unicrit import rays
from unicrit.dynamics import MapParams
from unicrit.errors import NewtonStall, PrecisionFloor
from unicrit.potential import param_bottcher
from unicrit.rays import (arc_length, geodesic_ratio_experiment, landing_estimate,
                          trace_dynamical_ray, trace_parameter_ray)


def test_radial_ray_for_c_zero():
    ray = trace_dynamical_ray(MapParams(2, 0), Fraction(1, 4), 1.0, 2.0**-12)
    for t, z in ray.samples:
        z = complex(z)
        assert abs(z - 1j * math.exp(t)) < 1e-12


@pytest.mark.parametrize("angle,sign", [(Fraction(1, 2), -1), (Fraction(0), 1)])
def test_real_rays_for_c_minus_two(angle, sign):
    ray = trace_dynamical_ray(MapParams(2, -2), angle, 1.0, 2.0**-12)
    for t, z in ray.samples:
        assert abs(complex(z) - sign * 2 * math.cosh(t)) < 1e-11


def test_parameter_ray_half_is_real_and_matches_bisection():
    ray = trace_parameter_ray(2, Fraction(1, 2), 1.0, 2.0**-8)
    for t, c in ray.samples[::6]:
        ref = oracles.tip_ray_point(t)
        assert abs(complex(c).imag) < 1e-12
        assert float(abs(oracles.mp.mpf(complex(c).real) - ref)) < 1e-12 * max(1, float(abs(ref)))


@pytest.mark.parametrize("d,angle", [(2, Fraction(1, 3)), (2, Fraction(1, 7)), (3, Fraction(1, 4))])
def test_parameter_samples_satisfy_defining_relation(d, angle):
    ray = trace_parameter_ray(d, angle, 1.0, 2.0**-6)
    for t, c in ray.samples:
        val = complex(param_bottcher(d, c).val)
        target = math.exp(t) * complex(math.cos(2 * math.pi * angle), math.sin(2 * math.pi * angle))
        assert abs(val - target) < 1e-9 * abs(target)


def test_large_potential_asymptotics_d3():
    ray = trace_parameter_ray(3, Fraction(1, 8), 8.0, 4.0)
    for t, c in ray.samples:
        w = math.exp(t) * complex(math.cos(math.pi / 4), math.sin(math.pi / 4))
        assert abs(complex(c) / w - 1) < 1e-3


def test_conjugate_symmetry():
    a = trace_parameter_ray(2, Fraction(1, 5), 1.0, 2.0**-6)
    b = trace_parameter_ray(2, Fraction(4, 5), 1.0, 2.0**-6)
    for (t1, z1), (t2, z2) in zip(a.samples, b.samples):
        assert t1 == t2
        assert abs(complex(z1) - complex(z2).conjugate()) < 1e-12


def test_landing_points_and_bounds():
    tip = landing_estimate(trace_parameter_ray(2, Fraction(1, 2), 1.0, 2.0**-20))
    assert abs(complex(tip.point) + 2) <= tip.error_bound
    assert tip.error_bound < 1e-6
    circle = landing_estimate(trace_dynamical_ray(MapParams(2, 0), Fraction(1, 4), 1.0, 2.0**-30))
    assert abs(complex(circle.point) - 1j) <= max(circle.error_bound, 1e-12)
    assert circle.model == "power"


def test_landing_needs_samples():
    ray = trace_parameter_ray(2, Fraction(1, 2), 1.0, 0.7)
    with pytest.raises(ValueError):
        landing_estimate(ray)


def test_arc_length_against_closed_form():
    t = 2.0**-6
    ray = trace_dynamical_ray(MapParams(2, -2), Fraction(1, 2), 1.0, 2.0**-26)
    arc = arc_length(ray, t)
    assert arc.tail is not None
    ref = float(oracles.dynamical_tail(t))
    assert abs(arc.total - ref) < 1e-9 * ref


def test_arc_length_refinement_is_stable():
    t = 2.0**-4
    coarse = trace_parameter_ray(2, Fraction(1, 3), 1.0, 2.0**-14, 8)
    fine = trace_parameter_ray(2, Fraction(1, 3), 1.0, 2.0**-14, 16)
    a, b = arc_length(coarse, t).total, arc_length(fine, t).total
    assert abs(a / b - 1) < 1e-3


def test_arc_length_range_checked():
    ray = trace_parameter_ray(2, Fraction(1, 2), 1.0, 2.0**-4)
    with pytest.raises(ValueError):
        arc_length(ray, 2.0**-10)


def test_binary64_precision_floor():
    with pytest.raises(PrecisionFloor):
        trace_parameter_ray(2, Fraction(1, 2), 1.0, 2.0**-50, precision="binary64")


def test_newton_stall_keeps_partial(monkeypatch):
    real = rays._newton
    calls = {"n": 0}

    def flaky(problem, x, t, spacing):
        calls["n"] += 1
        return real(problem, x, t, spacing) if t > 0.1 else None

    monkeypatch.setattr(rays, "_newton", flaky)
    with pytest.raises(NewtonStall) as info:
        trace_parameter_ray(2, Fraction(1, 3), 1.0, 2.0**-8)
    partial = info.value.partial
    assert len(partial) > 0
    assert info.value.last_good_t == partial.potentials[-1] > 0.1


def test_invalid_arguments():
    with pytest.raises(ValueError):
        trace_parameter_ray(2, Fraction(1, 2), 0.1, 0.2)
    with pytest.raises(ValueError):
        rays.trace_ray("dynamical", 2, Fraction(1, 2))


def test_geodesic_single_row():
    t = 2.0**-8
    rows, pray, dray = geodesic_ratio_experiment(2, Fraction(1, 2), -2, [t], depth=10)
    assert len(rows) == 1
    ref = oracles.dynamical_tail(t) / oracles.parameter_tail(t)
    assert abs(rows[0].ratio - float(ref)) < 1e-6
    assert abs(rows[0].ratio - 2 / 3) < 0.01
