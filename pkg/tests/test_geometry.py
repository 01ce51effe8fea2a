import math
from fractions import Fraction

import numpy as np
import pytest

import oracles
from unicrit.dynamics import MapParams
from unicrit.errors import LogDomain, ResolutionInsufficient, ZeroDerivative
from unicrit.geometry.access import distance_bracket, iterated_log, iterated_log_access
from unicrit.geometry.area import area_scaling_scan, disk_area
from unicrit.geometry.harmonic import (lyapunov, sample_harmonic_measure, sample_ray, splitmix64,
                                       uniform_angles)
from unicrit.geometry.hedgehog import empty_annulus_raster, hedgehog_detect, spike_raster
from unicrit.geometry.porosity import (half_plane_raster, porosity_scan, segment_raster)
from unicrit.geometry.raster import (INSIDE, OUTSIDE, UNDECIDED, membership_grid, raster_from_mask,
                                     read_pgm, write_pgm)

M_REQ = math.log(2) / (2 * math.pi)


# membership rasters

def test_far_parameters_are_outside():
    r = membership_grid("parameter", 2, 5, 0.5, 32, 32, 100)
    assert (r.cells == OUTSIDE).all()


def test_main_cardioid_is_inside():
    r = membership_grid("parameter", 2, -0.1, 0.05, 16, 16, 200)
    assert (r.cells == INSIDE).all()


def test_outside_grows_with_maxit():
    lo = membership_grid("parameter", 2, -0.75 + 0.1j, 0.2, 64, 64, 20)
    hi = membership_grid("parameter", 2, -0.75 + 0.1j, 0.2, 64, 64, 200)
    assert np.all((lo.cells == OUTSIDE) <= (hi.cells == OUTSIDE))
    assert (hi.cells == OUTSIDE).sum() > (lo.cells == OUTSIDE).sum()


def test_dynamical_plane_disk():
    r = membership_grid("dynamical", 2, 0, 1.5, 64, 64, 200, c=0)
    pts = r.points()
    assert (r.cells[np.abs(pts) > 1.05] == OUTSIDE).all()
    assert (r.cells[np.abs(pts) < 0.95] == INSIDE).all()


def test_pgm_round_trip(tmp_path):
    r = membership_grid("parameter", 2, -0.5, 1.5, 40, 30, 100)
    path = tmp_path / "m.pgm"
    write_pgm(r, path)
    img = read_pgm(path)
    assert img.shape == (30, 40)
    lut = {INSIDE: 0, UNDECIDED: 128, OUTSIDE: 255}
    assert all(img[i, j] == lut[r.cells[i, j]] for i in range(30) for j in range(40))
    assert set(np.unique(img)) <= {0, 128, 255}


def test_membership_rejects_bad_sizes():
    with pytest.raises(ValueError):
        membership_grid("parameter", 2, 0, 1, 1, 10, 10)
    with pytest.raises(ValueError):
        membership_grid("dynamical", 2, 0, 1, 10, 10, 10)


# area

def test_area_away_from_the_set():
    lo, hi, _ = disk_area(2, 5, 0.5, 32, 200)
    assert lo == hi == 0


def test_area_inside_the_cardioid():
    lo, hi, _ = disk_area(2, -0.5, 0.1, 64, 500)
    disk = math.pi * 0.01
    assert lo <= hi
    assert abs(hi / disk - 1) < 0.01
    assert abs(lo / disk - 1) < 0.01


def test_quadtree_matches_uniform_grid():
    c0, r, n = -1.75 + 0.02j, 2.0**-5, 64
    _, hi, _ = disk_area(2, c0, r, n, 300)
    grid = membership_grid("parameter", 2, c0, r, 2 * n, 2 * n, 300, bailout=1e10)
    inside = (grid.cells != OUTSIDE) & (np.abs(grid.points() - c0) <= r)
    assert hi == pytest.approx(inside.sum() * (r / n) ** 2, rel=1e-12)


def test_area_resolution_floor():
    with pytest.raises(ResolutionInsufficient):
        disk_area(2, -2, 0.1, 16, 100)


def test_area_scan_validates_radii():
    with pytest.raises(ValueError):
        area_scaling_scan(2, -2, [0.1, 0.05])
    with pytest.raises(ValueError):
        area_scaling_scan(2, -2, [0.1, 0.1, 0.05])


def test_area_scan_rows():
    scan = area_scaling_scan(2, -0.5, [0.2, 0.1, 0.05], 32, 300)
    assert [row.r for row in scan.rows] == [0.2, 0.1, 0.05]
    assert all(row.area_lo <= row.area_hi for row in scan.rows)


# porosity

def test_half_plane_porosity():
    rows = porosity_scan(half_plane_raster(512), 0, [0.5, 0.25, 0.125])
    for row in rows:
        assert abs(row.beta - 0.5) < 2 / 256 / row.r


def test_empty_raster_porosity():
    empty = raster_from_mask(np.zeros((256, 256), dtype=bool))
    assert all(row.beta == 1 for row in porosity_scan(empty, 0, [0.5, 0.25]))


def test_segment_porosity():
    rows = porosity_scan(segment_raster(512), 0, [0.5, 0.25])
    for row in rows:
        assert abs(row.beta - 0.5) < 2 / 256 / row.r


def test_porosity_checks():
    raster = half_plane_raster(128)
    with pytest.raises(ResolutionInsufficient):
        porosity_scan(raster, 0, [0.1])
    with pytest.raises(ValueError):
        porosity_scan(raster, 0.8, [0.5])


# hedgehog

def test_spikes_pass_and_empty_fails():
    rep = hedgehog_detect(spike_raster(64, 512), 0, 0.4, 0.8, M_REQ, 0.05)
    assert rep.verdict and rep.crossing_components == 64 and rep.center_in_set
    empty = hedgehog_detect(empty_annulus_raster(512), 0, 0.4, 0.8, M_REQ, 0.05)
    assert not empty.verdict and empty.crossing_components == 0
    assert empty.eps_star == math.inf


def test_sparse_spikes_fail_on_eps():
    rep = hedgehog_detect(spike_raster(4, 512), 0, 0.4, 0.8, M_REQ, 0.05)
    assert rep.crossing_components == 4 and rep.eps_star > 0.05 and not rep.verdict


def test_hedgehog_rotation_invariance():
    base = spike_raster(32, 512)
    a = hedgehog_detect(base, 0, 0.4, 0.8, M_REQ, 0.05)
    b = hedgehog_detect(raster_from_mask(np.rot90(base.in_set())), 0, 0.4, 0.8, M_REQ, 0.05)
    assert (a.components, a.crossing_components) == (b.components, b.crossing_components)
    assert abs(a.eps_star - b.eps_star) <= math.hypot(base.hx, base.hy) / 1.6


def test_hedgehog_checks():
    r = spike_raster(8, 128)
    with pytest.raises(ResolutionInsufficient):
        hedgehog_detect(r, 0, 0.7, 0.8, M_REQ, 0.05)
    with pytest.raises(ValueError):
        hedgehog_detect(spike_raster(8, 512), 0.5, 0.2, 0.8, M_REQ, 0.05)


# sampling and Lyapunov exponents

def _reference_splitmix(seed, count):
    state, out = seed, []
    for _ in range(count):
        state = (state + 0x9E3779B97F4A7C15) & (2**64 - 1)
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & (2**64 - 1)
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & (2**64 - 1)
        out.append(z ^ (z >> 31))
    return out


def test_splitmix_matches_reference():
    assert splitmix64(0, 0) == 0xE220A8397B1DCDAF
    for seed in (0, 7, 2**64 - 1):
        assert [splitmix64(seed, i) for i in range(20)] == _reference_splitmix(seed, 20)


def test_uniform_angles():
    a = uniform_angles(50, 7)
    assert a == uniform_angles(50, 7)
    assert a != uniform_angles(50, 8)
    assert all(0 <= x < 1 and x.denominator <= 2**53 for x in a)
    assert uniform_angles(0, 7) == []


def test_sample_ray_lands_at_tip():
    s = sample_ray(2, Fraction(1, 2), 2.0**-20)
    assert s.failure is None and abs(complex(s.landing.point) + 2) < 1e-6


def test_harmonic_samples_are_reproducible_and_bounded():
    a = sample_harmonic_measure(2, 6, 7, 2.0**-10)
    b = sample_harmonic_measure(2, 6, 7, 2.0**-10, jobs=2)
    assert [(s.angle, s.landing and complex(s.landing.point)) for s in a] == \
           [(s.angle, s.landing and complex(s.landing.point)) for s in b]
    for s in a:
        if s.landing is not None:
            assert abs(complex(s.landing.point)) <= 2 + s.landing.error_bound
    assert sample_harmonic_measure(2, 0, 7, 2.0**-10) == []


def test_lyapunov_examples():
    assert abs(lyapunov(MapParams(2, -2), 10**4) - math.log(4)) < 1e-3
    assert abs(lyapunov(MapParams(2, 1j), 10**4) - 0.5 * math.log(abs(4 + 4j))) < 2e-3
    assert lyapunov(MapParams(2, 0.2), 1000) < 0
    with pytest.raises(ZeroDerivative):
        lyapunov(MapParams(2, 0), 10)


# access

def test_distance_bracket_on_the_tip_ray():
    for t in (0.5, 2.0**-4, 2.0**-8):
        c = oracles.tip_ray_point(t)
        true = float(abs(c + 2))
        b = distance_bracket(2, complex(c), t)
        assert b.lower <= true <= b.upper
        assert b.upper / b.lower == pytest.approx(4 * math.exp(t), rel=1e-9)


def test_iterated_log():
    assert iterated_log(math.e**math.e, 2) == pytest.approx(1)
    with pytest.raises(LogDomain):
        iterated_log(0.5, 2)


def test_access_functional_on_tip_ray():
    rows = iterated_log_access(2, Fraction(1, 2), [2.0**-k for k in (4, 6, 8)], 1, depth=10)
    for row in rows:
        assert row.dist_lower <= abs(complex(row.c) + 2) <= row.dist_upper
        assert row.diam_tail <= row.arclen_tail * (1 + 1e-12)
    vals = [row.functional for row in rows]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_access_rejects_large_tails():
    with pytest.raises(LogDomain):
        iterated_log_access(2, Fraction(1, 2), [1.0], 1, depth=6, t_start=2.0)
