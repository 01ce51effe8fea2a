"""Round-annulus hedgehog detection on membership rasters."""

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from ..errors import ResolutionInsufficient
from .raster import Raster, raster_from_mask

MIN_THICKNESS_CELLS = 16
EIGHT = np.ones((3, 3), dtype=bool)


@dataclass
class HedgehogReport:
    center: complex
    r_in: float
    r_out: float
    modulus: float
    components: int
    crossing_components: int
    eps_star: float
    center_in_set: bool
    verdict: bool

    def as_dict(self):
        return {
            "center": [self.center.real, self.center.imag],
            "r_in": self.r_in,
            "r_out": self.r_out,
            "modulus": self.modulus,
            "components": self.components,
            "crossing_components": self.crossing_components,
            "eps_star": self.eps_star,
            "center_in_set": self.center_in_set,
            "verdict": "pass" if self.verdict else "fail",
        }


def hedgehog_detect(raster: Raster, center, r_in, r_out, m_req, eps_req) -> HedgehogReport:
    """Components of the in-set inside the closed annulus r_in <= |z - center| <= r_out.

    A component crosses when it comes within one cell of both boundary
    circles.  eps_star is the largest distance from an annulus cell to a
    crossing cell, over 2 r_out.  The verdict also asks that the center
    cell belong to the in-set.
    """
    center = complex(center)
    if not 0 < r_in < r_out:
        raise ValueError("need 0 < r_in < r_out")
    h = max(raster.hx, raster.hy)
    if (r_out - r_in) / h < MIN_THICKNESS_CELLS:
        raise ResolutionInsufficient(
            f"annulus is {(r_out - r_in) / h:.1f} cells thick, fewer than {MIN_THICKNESS_CELLS}")
    if (abs(center.real - raster.center.real) + r_out > raster.half_width * (1 + 1e-12)
            or abs(center.imag - raster.center.imag) + r_out > raster.half_height * (1 + 1e-12)):
        raise ValueError("D(center, r_out) leaves the raster")
    pts = raster.points()
    rad = np.abs(pts - center)
    annulus = (rad >= r_in) & (rad <= r_out)
    labels, count = ndimage.label(raster.in_set() & annulus, structure=EIGHT)
    crossing = np.zeros(count + 1, dtype=bool)
    if count:
        idx = np.arange(1, count + 1)
        near_in = ndimage.minimum(rad, labels, idx) <= r_in + h
        near_out = ndimage.maximum(rad, labels, idx) >= r_out - h
        crossing[1:] = near_in & near_out
    n_cross = int(crossing.sum())
    if n_cross:
        dist = ndimage.distance_transform_edt(~crossing[labels], sampling=(raster.hy, raster.hx))
        eps_star = float(dist[annulus].max()) / (2 * r_out)
    else:
        eps_star = math.inf
    row, col = raster.index_of(center)
    center_in = bool(raster.in_set()[row, col])
    modulus = math.log(r_out / r_in) / (2 * math.pi)
    verdict = modulus >= m_req and eps_star <= eps_req and n_cross > 0 and center_in
    return HedgehogReport(center, float(r_in), float(r_out), modulus, int(count), n_cross,
                          eps_star, center_in, bool(verdict))


def spike_raster(n_spikes=64, n=1024, half_width=1.0, core=0.2, width=1.0):
    """Synthetic hedgehog: a core disk with ``n_spikes`` radial spikes to the edge.

    Spikes are the cells within ``width/2`` cells of a ray from the center.
    """
    h = 2 * half_width / n
    xs = -half_width + (np.arange(n) + 0.5) * h
    X, Y = np.meshgrid(xs, xs[::-1])
    mask = X**2 + Y**2 <= core**2
    for k in range(n_spikes):
        a = 2 * math.pi * k / n_spikes
        ux, uy = math.cos(a), math.sin(a)
        along = X * ux + Y * uy
        across = np.abs(-X * uy + Y * ux)
        mask |= (along >= 0) & (across <= width * h / 2 + 1e-12 * h)
    return raster_from_mask(mask, 0j, half_width)


def empty_annulus_raster(n=1024, half_width=1.0, core=0.2):
    """A core disk and nothing else."""
    h = 2 * half_width / n
    xs = -half_width + (np.arange(n) + 0.5) * h
    X, Y = np.meshgrid(xs, xs[::-1])
    return raster_from_mask(X**2 + Y**2 <= core**2, 0j, half_width)
