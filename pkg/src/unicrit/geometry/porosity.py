"""Largest empty disks inside D(x, r) from an exact Euclidean distance transform."""

import math
from typing import List, NamedTuple

import numpy as np
from scipy import ndimage

from ..errors import ResolutionInsufficient
from .raster import Raster

MIN_CELLS_PER_SCALE = 32


class PorosityRow(NamedTuple):
    r: float
    beta: float
    witness: complex


def distance_to_set(raster: Raster):
    """Distance from every cell center to the nearest in-set cell center."""
    in_set = raster.in_set()
    if not in_set.any():
        return np.full(in_set.shape, np.inf)
    return ndimage.distance_transform_edt(~in_set, sampling=(raster.hy, raster.hx))


def porosity_scan(raster: Raster, center, scales, edt=None) -> List[PorosityRow]:
    """beta(r) = (largest empty disk inside D(center, r), centered at a cell) / r.

    The disk centered at cell y may grow until it meets an in-set cell or the
    boundary circle of D(center, r).  Ties go to the smallest cell index.
    """
    center = complex(center)
    if edt is None:
        edt = distance_to_set(raster)
    pts = raster.points()
    offset = np.abs(pts - center)
    h = max(raster.hx, raster.hy)
    x0 = raster.center.real - raster.half_width
    x1 = raster.center.real + raster.half_width
    y0 = raster.center.imag - raster.half_height
    y1 = raster.center.imag + raster.half_height
    in_pts = pts[raster.in_set()]
    # the probe center itself is a candidate too, so an empty disk scores exactly 1
    at_center = float(np.abs(in_pts - center).min()) if in_pts.size else math.inf
    rows = []
    for r in scales:
        r = float(r)
        if r / h < MIN_CELLS_PER_SCALE:
            raise ResolutionInsufficient(
                f"scale {r:g} spans {r / h:.1f} cells, fewer than {MIN_CELLS_PER_SCALE}")
        if center.real - r < x0 or center.real + r > x1 or center.imag - r < y0 or center.imag + r > y1:
            raise ValueError(f"D(center, {r:g}) leaves the raster")
        radius = np.where(offset <= r, np.minimum(edt, r - offset), -np.inf)
        k = int(np.argmax(radius))
        best, witness = float(radius.flat[k]), complex(pts.flat[k])
        if min(at_center, r) > best:
            best, witness = min(at_center, r), center
        rows.append(PorosityRow(r, best / r, witness))
    return rows


def half_plane_raster(n, half_width=1.0):
    """In-set = closed lower half-plane; the origin sits on its boundary."""
    from .raster import raster_from_mask

    ys = half_width - (np.arange(n) + 0.5) * (2 * half_width / n)
    mask = np.repeat((ys <= 0)[:, None], n, axis=1)
    return raster_from_mask(mask, 0j, half_width)


def segment_raster(n, half_width=1.0, length=None):
    """In-set = the cells crossed by the real segment [-length/2, length/2]."""
    from .raster import raster_from_mask

    length = 2 * half_width if length is None else length
    h = 2 * half_width / n
    mask = np.zeros((n, n), dtype=bool)
    xs = -half_width + (np.arange(n) + 0.5) * h
    row = n // 2 if n % 2 else n // 2 - 1
    mask[row, np.abs(xs) <= length / 2] = True
    return raster_from_mask(mask, 0j, half_width)
