"""Iteration of f_c(z) = z**d + c with forward-mode derivatives.

All functions are pure.  Inputs may be Python complex numbers (binary64)
or mpmath ``mpc`` values; the arithmetic follows the inputs.
"""

from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

from ._arith import ctx_of, lift
from .errors import OrbitOverflow, ZeroDerivative

OVERFLOW_THRESHOLD = 1e150
UNDERFLOW_THRESHOLD = 1e-300


@dataclass(frozen=True)
class MapParams:
    """Degree ``d`` and parameter ``c`` of the unicritical map."""

    d: int
    c: complex

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise ValueError(f"degree must be an integer >= 2, got {self.d!r}")
        if abs(self.c) != abs(self.c) or abs(self.c) == float("inf"):
            raise ValueError("parameter c must be finite")

    def f(self, z):
        return z**self.d + self.c


class Jet(NamedTuple):
    """Value with its first derivative in one designated complex variable."""

    val: complex
    der: complex


class Escaped(NamedTuple):
    n: int
    z: complex


class Undecided(NamedTuple):
    z: complex


@dataclass(frozen=True)
class EscapeResult:
    status: Union[Escaped, Undecided]
    maxit: int
    bailout: float

    @property
    def escaped(self):
        return isinstance(self.status, Escaped)


def escape_radius(p: MapParams) -> float:
    """Smallest radius R with |z| > R implying the orbit of z tends to infinity."""
    return max(2.0, float(abs(p.c))) ** (1.0 / (p.d - 1))


def default_bailout(p: MapParams) -> float:
    """Escape radius plus a unit margin, so |z| > bailout gives |f_c(z)| > |z|."""
    return escape_radius(p) + 1.0


def _check(z, k):
    if abs(z) > OVERFLOW_THRESHOLD:
        raise OrbitOverflow(f"|z_{k}| exceeded {OVERFLOW_THRESHOLD:g}", index=k)


def iterate(p: MapParams, z0, n: int):
    """Return f_c^n(z0)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    d, c = p.d, p.c
    z = z0
    for k in range(n):
        z = z**d + c
        _check(z, k + 1)
    return z


def orbit_derivative(p: MapParams, n: int):
    """D_z f_c^n at z = c, i.e. the product of d*z_k**(d-1) along the critical value orbit.

    An orbit through 0 gives an exact 0.  A nonzero product that drops
    below 1e-300 raises ZeroDerivative rather than silently underflowing.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    d, c = p.d, p.c
    z = c
    dz = 1
    for k in range(n):
        dz = d * z ** (d - 1) * dz
        if dz == 0:
            return dz
        if abs(dz) < UNDERFLOW_THRESHOLD:
            raise ZeroDerivative(f"derivative underflowed at step {k}")
        z = z**d + c
        _check(z, k + 1)
        _check(dz, k + 1)
    return dz


def iterate_jet(p: MapParams, z0: Jet, n: int, variable: str = "z") -> Jet:
    """Push a jet through n iterations; ``variable`` is ``"z"`` or ``"c"``."""
    if variable not in ("z", "c"):
        raise ValueError("variable must be 'z' or 'c'")
    if n < 0:
        raise ValueError("n must be >= 0")
    d, c = p.d, p.c
    dc = 1 if variable == "c" else 0
    z, dz = z0
    for k in range(n):
        dz = d * z ** (d - 1) * dz + dc
        z = z**d + c
        _check(z, k + 1)
        _check(dz, k + 1)
    return Jet(z, dz)


def escape_classify(p: MapParams, z0, maxit: int,
                    bailout: Optional[float] = None) -> EscapeResult:
    """First index n with |z_n| > bailout, or Undecided after ``maxit`` steps."""
    if bailout is None:
        bailout = default_bailout(p)
    elif bailout < escape_radius(p):
        raise ValueError(f"bailout {bailout} below the escape radius {escape_radius(p)}")
    d, c = p.d, p.c
    z = z0
    for n in range(maxit + 1):
        if abs(z) > bailout:
            return EscapeResult(Escaped(n, z), maxit, bailout)
        if n < maxit:
            z = z**d + c
    return EscapeResult(Undecided(z), maxit, bailout)


def critical_orbit(p: MapParams, n: int):
    """List [z_0, ..., z_{n-1}] of the critical value orbit z_0 = c."""
    out = []
    z = p.c
    for k in range(n):
        out.append(z)
        z = z**p.d + p.c
        _check(z, k + 1)
    return out


def as_params(d: int, c, ctx=None) -> MapParams:
    """MapParams with ``c`` lifted into ``ctx`` (or the context ``c`` already has)."""
    if ctx is None:
        ctx = ctx_of(c)
    return MapParams(int(d), lift(c, ctx))
