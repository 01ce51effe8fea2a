"""Two-sided area of M_d inside small disks, and its decay with the radius.

Counting cell centers on a uniform grid fine enough to see the small
copies near a Misiurewicz point is far too expensive, and almost every
cell is far from the set.  The scan therefore refines a quadtree: a cell
whose center escapes with a Koebe lower bound on dist(c, M_d) larger than
its half-diagonal contains no point of M_d and is dropped; every other
cell is split until the requested resolution is reached.  The surviving
leaves are exactly the cells of the uniform grid that could hold set
points, so the counts equal those of the uniform grid at a fraction of
the cost.
"""

import math
from typing import List, NamedTuple, Sequence, Union

import numpy as np

from ..errors import ResolutionInsufficient
from .raster import CYCLE_TOL, MAX_PERIOD

DE_BAILOUT = 1e10
DE_MARGIN = 1.25
MIN_CELLS_PER_RADIUS = 32
ROOT_CELLS = 64


class AreaRow(NamedTuple):
    r: float
    area_lo: float
    area_hi: float
    cells_per_radius: int
    leaves: int


class AreaScan(NamedTuple):
    rows: List[AreaRow]
    slope: float

    def ratios(self):
        return [row.area_hi / row.r**2 for row in self.rows]


def _escape_with_derivative(c, d, maxit):
    """Escape index, Koebe lower distance bound, and final iterate per parameter."""
    n_pts = c.size
    lower = np.zeros(n_pts)
    escaped = np.zeros(n_pts, dtype=bool)
    final = np.zeros(n_pts, dtype=complex)
    idx = np.arange(n_pts)
    z = np.zeros(n_pts, dtype=complex)
    dz = np.zeros(n_pts, dtype=complex)
    cc = c.copy()
    b2 = DE_BAILOUT**2
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for n in range(maxit + 1):
            mag2 = z.real**2 + z.imag**2
            out = mag2 > b2
            if out.any():
                zo, dzo = z[out], dz[out]
                # G ~ log|z_n| / d**n, |grad G| ~ |z_n'| / (|z_n| d**n)
                scale = math.exp(-n * math.log(d))
                g = np.log(np.abs(zo)) * scale
                grad = np.abs(dzo) / np.abs(zo) * scale
                # an underflowed scale leaves the bound at 0, which never certifies
                lower[idx[out]] = np.where(grad > 0, np.sinh(g) / (2 * np.exp(g) * grad), 0.0)
                escaped[idx[out]] = True
                keep = ~out
                idx, z, dz, cc = idx[keep], z[keep], dz[keep], cc[keep]
                if idx.size == 0:
                    break
            if n < maxit:
                dz = d * z ** (d - 1) * dz + 1
                z = z**d + cc
    final[idx] = z
    return escaped, lower, final


def _attracting(z, c, d):
    if z.size == 0:
        return np.zeros(0, dtype=bool)
    start = z.copy()
    w = z.copy()
    mult = np.ones_like(z)
    done = np.zeros(z.size, dtype=bool)
    inside = np.zeros(z.size, dtype=bool)
    with np.errstate(all="ignore"):
        for _ in range(MAX_PERIOD):
            mult = mult * (d * w ** (d - 1))
            w = w**d + c
            closed = (~done) & (np.abs(w - start) < CYCLE_TOL * np.maximum(1, np.abs(start)))
            inside |= closed & (np.abs(mult) < 1)
            done |= closed
    return inside


def disk_area(d, c0, r, cells_per_radius, maxit):
    """(area_lo, area_hi, leaves) of M_d in the closed disk D(c0, r).

    Leaves are the cells of a ``2*cells_per_radius`` square grid on the
    bounding box; their centers are classified as on a uniform raster.
    """
    if cells_per_radius < MIN_CELLS_PER_RADIUS:
        raise ResolutionInsufficient(
            f"{cells_per_radius} cells per radius < {MIN_CELLS_PER_RADIUS}")
    n_fine = 2 * cells_per_radius
    root = min(ROOT_CELLS, n_fine)
    while n_fine % root:
        root //= 2
    levels = int(round(math.log2(n_fine // root)))
    if root * 2**levels != n_fine:
        raise ValueError("cells_per_radius must be a power of two times the root grid")
    c0 = complex(c0)
    h = 2 * r / root
    ij = np.indices((root, root)).reshape(2, -1).T
    corner = c0 - r - 1j * r
    centers = corner + (ij[:, 0] + 0.5) * h + 1j * (ij[:, 1] + 0.5) * h
    for level in range(levels + 1):
        half_diag = h / math.sqrt(2)
        # drop cells that miss the disk entirely
        centers = centers[np.abs(centers - c0) <= r + half_diag]
        escaped, lower, final = _escape_with_derivative(centers, d, maxit)
        if level == levels:
            break
        keep = ~(escaped & (lower > DE_MARGIN * half_diag))
        centers = centers[keep]
        q = h / 4
        centers = np.concatenate([centers + (-q - 1j * q), centers + (q - 1j * q),
                                  centers + (-q + 1j * q), centers + (q + 1j * q)])
        h /= 2
    in_disk = np.abs(centers - c0) <= r
    bounded = ~escaped
    inside = np.zeros(centers.size, dtype=bool)
    inside[bounded] = _attracting(final[bounded], centers[bounded], d)
    cell = h * h
    area_lo = float(np.count_nonzero(inside & in_disk)) * cell
    area_hi = float(np.count_nonzero(bounded & in_disk)) * cell
    return area_lo, area_hi, int(centers.size)


def area_scaling_scan(d, c0, radii: Sequence[float],
                      resolution_per_radius: Union[int, Sequence[int]] = 512,
                      maxit=1000) -> AreaScan:
    """area_lo / area_hi of M_d in D(c0, r) for decreasing radii, with a slope fit.

    ``area_lo`` counts Undecided cells as outside, ``area_hi`` as inside.
    The slope is the least-squares fit of log(area_hi / r**2) against log r
    over the radii where area_hi > 0.
    """
    radii = list(radii)
    if len(radii) < 3:
        raise ValueError("need at least three radii")
    if any(b >= a for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be strictly decreasing")
    if isinstance(resolution_per_radius, int):
        res = [resolution_per_radius] * len(radii)
    else:
        res = list(resolution_per_radius)
    rows = []
    for r, n in zip(radii, res):
        lo, hi, leaves = disk_area(d, c0, r, n, maxit)
        rows.append(AreaRow(r, lo, hi, n, leaves))
    xs = [math.log(row.r) for row in rows if row.area_hi > 0]
    ys = [math.log(row.area_hi / row.r**2) for row in rows if row.area_hi > 0]
    slope = float(np.polyfit(xs, ys, 1)[0]) if len(xs) >= 2 else float("nan")
    return AreaScan(rows, slope)
