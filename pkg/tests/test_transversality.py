import math
from fractions import Fraction

import pytest

from unicrit.dynamics import MapParams
from unicrit.errors import DerivativeVanished, NonConvergent
from unicrit.transversality import (ray_limit_transversality, summability, transversality_sum,
                                    verify_derivative_identity)


def test_tip_value():
    s = transversality_sum(MapParams(2, -2))
    assert abs(s.value - 2 / 3) < 1e-12
    assert s.decay_ratio == pytest.approx(0.25, rel=1e-6)
    assert s.tail_bound <= 1e-12


def test_far_parameter():
    # T(c) = 1 + 1/(2c) + O(c**-2)
    s = transversality_sum(MapParams(2, 1000))
    assert abs(s.value - 1.0005) < 1e-6


def test_critical_orbit_through_zero():
    with pytest.raises(DerivativeVanished):
        transversality_sum(MapParams(2, 0))
    with pytest.raises(NonConvergent):
        transversality_sum(MapParams(2, 0))


def test_attracting_parameter_does_not_converge():
    with pytest.raises(NonConvergent) as info:
        transversality_sum(MapParams(2, 0.2))
    assert info.value.partial is not None


@pytest.mark.parametrize("beta,expected", [(1.0, 4 / 3), (0.5, 2.0)])
def test_summability_at_tip(beta, expected):
    assert summability(MapParams(2, -2), beta) == pytest.approx(expected, abs=1e-11)


def test_summability_dominates_modulus():
    for c in (-2, -3, 2j, 1 + 1j):
        p = MapParams(2, c)
        assert summability(p, 1.0) >= abs(transversality_sum(p).value) - 1e-12


def test_summability_beta_range():
    with pytest.raises(ValueError):
        summability(MapParams(2, -2), 0)
    with pytest.raises(ValueError):
        summability(MapParams(2, -2), 1.5)


def test_beta_sums_attached():
    s = transversality_sum(MapParams(2, -2), betas=(0.5,))
    assert s.beta_sums[0.5] == pytest.approx(2.0)


@pytest.mark.parametrize("c", [-3, 3j, 1e6, -0.75 + 0.4j])
def test_derivative_identity(c):
    rep = verify_derivative_identity(MapParams(2, c))
    assert rep.rel_err < 1e-9


def test_derivative_identity_cubic():
    assert verify_derivative_identity(MapParams(3, 0.5 + 1j)).rel_err < 1e-9


def test_ray_limit_single_potential():
    rows = ray_limit_transversality(2, Fraction(1, 2), [2.0**-6])
    assert len(rows) == 1
    row = rows[0]
    assert row.failure is None and row.increment is None
    assert abs(complex(row.T) - 2 / 3) < 0.05


def test_ray_limit_increments_and_tail_bounds():
    pots = [2.0**-k for k in range(4, 13)]
    rows = ray_limit_transversality(2, Fraction(1, 2), pots)
    assert all(r.failure is None for r in rows)
    for r in rows:
        exact = transversality_sum(MapParams(2, complex(r.c)), 1e-15).value
        assert abs(complex(r.T) - exact) <= 10 * r.tail_bound + 1e-14
    incs = [r.increment for r in rows[1:]]
    assert all(b < a for a, b in zip(incs, incs[1:]))


def test_ray_limit_cusp_reports_nonconvergence():
    # the ray of angle 0 lands at the parabolic parameter 1/4
    rows = ray_limit_transversality(2, Fraction(0), [2.0**-k for k in (2, 40, 60)])
    assert rows[0].failure is None
    assert any(r.failure and "NonConvergent" in r.failure for r in rows)
