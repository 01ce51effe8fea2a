"""Escape-time rasters of the connectedness locus and of filled Julia sets."""

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..dynamics import MapParams, default_bailout

INSIDE = 0
UNDECIDED = 1
OUTSIDE = 2

PGM_LEVEL = {INSIDE: 0, UNDECIDED: 128, OUTSIDE: 255}

CYCLE_TOL = 1e-10
MAX_PERIOD = 64


@dataclass
class Raster:
    """Classification of cell centers of a rectangle.

    Row 0 is the top edge (largest imaginary part), column 0 the left edge.
    ``escape`` holds the escape index for Outside cells and -1 elsewhere.
    """

    center: complex
    half_width: float
    half_height: float
    cells: np.ndarray
    escape: np.ndarray
    d: int
    maxit: int
    bailout: float
    plane: str
    c: Optional[complex] = None
    meta: dict = field(default_factory=dict)

    @property
    def ny(self):
        return self.cells.shape[0]

    @property
    def nx(self):
        return self.cells.shape[1]

    @property
    def hx(self):
        return 2 * self.half_width / self.nx

    @property
    def hy(self):
        return 2 * self.half_height / self.ny

    def axes(self):
        xs = self.center.real - self.half_width + (np.arange(self.nx) + 0.5) * self.hx
        ys = self.center.imag + self.half_height - (np.arange(self.ny) + 0.5) * self.hy
        return xs, ys

    def points(self):
        xs, ys = self.axes()
        return xs[None, :] + 1j * ys[:, None]

    def index_of(self, z):
        """(row, col) of the cell containing z."""
        col = int(math.floor((z.real - (self.center.real - self.half_width)) / self.hx))
        row = int(math.floor(((self.center.imag + self.half_height) - z.imag) / self.hy))
        return row, col

    def in_set(self):
        """Inside or Undecided: the honest upper bracket of the set."""
        return self.cells != OUTSIDE

    def params(self):
        return {
            "plane": self.plane,
            "d": self.d,
            "c": None if self.c is None else [self.c.real, self.c.imag],
            "center": [self.center.real, self.center.imag],
            "half_width": self.half_width,
            "half_height": self.half_height,
            "nx": self.nx,
            "ny": self.ny,
            "maxit": self.maxit,
            "bailout": self.bailout,
        }


def _escape_iterate(z, c, d, maxit, bailout):
    """Vectorised escape loop on a compacting active set."""
    n_cells = z.size
    escape = np.full(n_cells, -1, dtype=np.int64)
    zf = z.ravel().copy()
    cf = np.broadcast_to(c, z.shape).ravel().copy() if np.ndim(c) else np.full(n_cells, c)
    active = np.arange(n_cells)
    b2 = bailout * bailout
    za = zf.copy()
    ca = cf
    for n in range(maxit + 1):
        mag2 = za.real * za.real + za.imag * za.imag
        out = mag2 > b2
        if out.any():
            escape[active[out]] = n
            keep = ~out
            active, za, ca = active[keep], za[keep], ca[keep]
            if active.size == 0:
                break
        if n < maxit:
            za = za**d + ca
    final = np.zeros(n_cells, dtype=complex)
    final[active] = za
    return escape.reshape(z.shape), active, final, cf


def _certify_attracting(z, c, d):
    """Mask of orbits that have settled on an attracting cycle."""
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


def membership_grid(plane, d, center, half_width, nx, ny, maxit, bailout=None,
                    c=None, half_height=None) -> Raster:
    """Classify every cell center by the escape of its orbit.

    Parameter plane: orbit of 0 under z**d + (cell).  Dynamical plane: orbit
    of the cell point under z**d + c.  Cells whose bounded orbit closes up
    on an attracting cycle are certified Inside; the rest stay Undecided.
    """
    if nx < 2 or ny < 2:
        raise ValueError("nx and ny must be at least 2")
    if plane not in ("parameter", "dynamical"):
        raise ValueError("plane must be 'parameter' or 'dynamical'")
    if half_height is None:
        half_height = half_width * ny / nx
    center = complex(center)
    raster = Raster(center, float(half_width), float(half_height),
                    np.zeros((ny, nx), dtype=np.uint8), np.zeros((ny, nx), dtype=np.int64),
                    int(d), int(maxit), 0.0, plane, None if c is None else complex(c))
    pts = raster.points()
    if plane == "parameter":
        if bailout is None:
            # largest |c| on the grid fixes one bailout valid for every cell
            cmax = float(np.abs(pts).max())
            bailout = default_bailout(MapParams(int(d), complex(cmax)))
        z0 = np.zeros_like(pts)
        cgrid = pts
    else:
        if c is None:
            raise ValueError("dynamical rasters need c")
        if bailout is None:
            bailout = default_bailout(MapParams(int(d), complex(c)))
        z0 = pts
        cgrid = complex(c)
    raster.bailout = float(bailout)
    escape, active, final, cflat = _escape_iterate(z0, cgrid, int(d), int(maxit), float(bailout))
    cells = np.full(pts.size, OUTSIDE, dtype=np.uint8)
    cells[active] = UNDECIDED
    inside = _certify_attracting(final[active], cflat[active], int(d))
    cells[active[inside]] = INSIDE
    raster.cells = cells.reshape(pts.shape)
    raster.escape = escape
    return raster


def write_pgm(raster: Raster, path):
    """Binary PGM (P5, maxval 255): Inside 0, Undecided 128, Outside 255."""
    lut = np.array([PGM_LEVEL[INSIDE], PGM_LEVEL[UNDECIDED], PGM_LEVEL[OUTSIDE]], dtype=np.uint8)
    img = lut[raster.cells]
    header = f"P5\n{raster.nx} {raster.ny}\n255\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(img.tobytes())


def read_pgm(path):
    """Pixel array of a P5 file written by :func:`write_pgm`."""
    with open(path, "rb") as fh:
        data = fh.read()
    parts = data.split(b"\n", 3)
    if parts[0] != b"P5":
        raise ValueError("not a binary PGM")
    w, h = map(int, parts[1].split())
    return np.frombuffer(parts[3], dtype=np.uint8).reshape(h, w)


def write_sidecar(raster: Raster, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(raster.params(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def raster_from_mask(mask, center=0j, half_width=1.0, half_height=None, plane="dynamical"):
    """Synthetic raster: True cells Undecided (in-set), False cells Outside."""
    mask = np.asarray(mask, dtype=bool)
    ny, nx = mask.shape
    if half_height is None:
        half_height = half_width * ny / nx
    cells = np.where(mask, UNDECIDED, OUTSIDE).astype(np.uint8)
    return Raster(complex(center), float(half_width), float(half_height), cells,
                  np.where(mask, -1, 0), 2, 0, 0.0, plane, None, {"synthetic": True})
