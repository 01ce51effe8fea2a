"""External rays in the dynamical and parameter planes.

A ray sample at potential ``t`` solves, by damped Newton seeded from the
previous sample,

    log phi_c(f_c^n(x)) = d**n * t + 2 pi i * (d**n * theta mod 1)

with ``x = z`` (dynamical plane, ``c`` fixed) or ``x = c`` (parameter plane,
orbit of ``c``).  The depth ``n`` is the smallest one that lifts the target
into the region where the Böttcher series is evaluated directly, so the
equation is exact and branch-free; ``d**n * theta mod 1`` is computed in
exact rational arithmetic.

Rays approaching a Misiurewicz point like ``t**2`` leave binary64 behind
quickly.  In ``precision="auto"`` mode the tracer watches the spacing of
consecutive samples and moves to an mpmath context with enough digits as
soon as binary64 can no longer resolve it.
"""

import math
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Tuple

from ._arith import BINARY64, FLOAT_DIGITS, ctx_of, is_extended, lift, make_context
from .dynamics import MapParams
from .errors import (BranchAmbiguity, NewtonStall, NoConvergence, OrbitOverflow,
                     PrecisionFloor)
from .potential import AngleRational, log_bottcher_level, safe_radius

DEFAULT_STEPS = 8
DEFAULT_RAY_TOL = 1e-10
BINARY64_T_FLOOR = 2.0**-40
LEVEL_LOG_RADIUS = math.log(1e10)
MAX_HALVINGS = 20
MAX_SUBSTEPS = 8
GUARD_DIGITS = 9


@dataclass(frozen=True)
class RayPolyline:
    """Samples (t, z) of one external ray, potentials strictly decreasing."""

    plane: str
    d: int
    angle: AngleRational
    c: Optional[complex]
    samples: Tuple[Tuple[float, complex], ...]
    steps_per_halving: int = DEFAULT_STEPS
    arc_prefix: Tuple[float, ...] = field(default=())

    def __post_init__(self):
        if not self.arc_prefix:
            object.__setattr__(self, "arc_prefix", tuple(_arc_prefix(self.samples)))

    @property
    def potentials(self):
        return [t for t, _ in self.samples]

    @property
    def points(self):
        return [z for _, z in self.samples]

    def __len__(self):
        return len(self.samples)


def _arc_prefix(samples):
    out = []
    total = 0.0
    prev = None
    for _, z in samples:
        if prev is not None:
            total = total + abs(z - prev)
        out.append(total)
        prev = z
    return out


class LandingEstimate(NamedTuple):
    point: complex
    error_bound: float
    potentials_used: List[float]
    exponent: float
    model: str


class ArcLength(NamedTuple):
    length: float
    tail: Optional[float]
    tail_error: Optional[float]

    @property
    def total(self):
        return self.length + (self.tail or 0.0)


def level_for(d, t):
    """Smallest n >= 0 with d**n * t >= log(1e10)."""
    if t >= LEVEL_LOG_RADIUS:
        return 0
    return max(0, math.ceil(math.log(LEVEL_LOG_RADIUS / t, d) - 1e-12))


class _Problem:
    """Residual and derivative of the ray equation in one plane."""

    def __init__(self, plane, d, angle, c, ray_tol):
        self.plane = plane
        self.d = d
        self.angle = angle
        self.c = c
        self.ray_tol = ray_tol

    def target(self, ctx, t):
        n = level_for(self.d, t)
        frac = self.angle.times(self.d**n)
        two_pi = 2 * ctx.pi
        if ctx is BINARY64:
            return n, complex(self.d**n * t, two_pi * float(frac))
        return n, ctx.mpc(ctx.mpf(self.d**n) * t,
                          two_pi * ctx.mpf(frac.numerator) / frac.denominator)

    def evaluate(self, x, n, target):
        """(wrapped residual, derivative) or None if the orbit misbehaves."""
        ctx = ctx_of(x)
        try:
            if self.plane == "parameter":
                L, dL = log_bottcher_level(self.d, x, x, 1, 1, n, tol=1e-300)
            else:
                L, dL = log_bottcher_level(self.d, lift(self.c, ctx), x, 1, 0, n, tol=1e-300)
        except (OrbitOverflow, BranchAmbiguity, ZeroDivisionError, OverflowError, ValueError):
            return None
        r = L - target
        two_pi = 2 * ctx.pi
        k = round(float(r.imag / two_pi))
        if k:
            r = r - 1j * two_pi * k
        return r, dL


def _eps(ctx):
    return 2.0**-52 if ctx is BINARY64 else ctx.eps


def _newton(problem, x, t, spacing):
    """Damped Newton for the sample at potential t; None on failure."""
    ctx = ctx_of(x)
    eps = _eps(ctx)
    n, target = problem.target(ctx, t)
    val = problem.evaluate(x, n, target)
    if val is None:
        return None
    res, der = val
    scale = max(abs(x), 1e-300)
    # |phi - exp(t + 2 pi i theta)| / exp(t) is |res| / d**n to first order
    accept = problem.ray_tol * problem.d**n
    for _ in range(60):
        if der == 0:
            return None
        step = -res / der
        lam = 1.0
        for _ in range(MAX_HALVINGS + 1):
            trial = x + lam * step
            tv = problem.evaluate(trial, n, target)
            if tv is not None and abs(tv[0]) < abs(res):
                break
            lam /= 2
        else:
            # no decrease: accept only at roundoff
            if abs(step) <= 1e-6 * spacing + 64 * eps * scale and abs(res) <= accept:
                return x
            return None
        x, (res, der) = trial, tv
        move = abs(lam * step)
        if (move <= 1e-15 * spacing or move <= 16 * eps * scale) and abs(res) <= accept:
            return x
    return x if abs(res) <= accept else None


def _schedule(t_hi, t_lo, steps):
    out = []
    k = 0
    while True:
        t = t_hi * 2.0 ** (-k / steps)
        if t <= t_lo * (1 + 1e-12):
            break
        out.append(t)
        k += 1
    out.append(t_lo)
    return out


def _digits_needed(x, spacing):
    if spacing <= 0:
        return FLOAT_DIGITS
    return math.log10(max(float(abs(x)), 1e-300) / spacing) + GUARD_DIGITS


def trace_ray(plane, d, angle, c=None, t_start=1.0, t_min=2.0**-10,
              steps_per_halving=DEFAULT_STEPS, ray_tol=DEFAULT_RAY_TOL,
              precision="auto"):
    """Trace a ray from potential ``t_start`` down to ``t_min``.

    ``precision`` is ``"auto"`` (binary64, promoted to mpmath as needed),
    ``"binary64"`` (fixed; refuses ``t_min`` below 2**-40), or an integer
    number of decimal digits.
    """
    if plane not in ("dynamical", "parameter"):
        raise ValueError("plane must be 'dynamical' or 'parameter'")
    angle = AngleRational(angle)
    if not t_start > t_min > 0:
        raise ValueError("need t_start > t_min > 0")
    if precision == "binary64" and t_min < BINARY64_T_FLOOR:
        raise PrecisionFloor(f"t_min={t_min:g} below the binary64 floor 2**-40")
    if plane == "dynamical" and c is None:
        raise ValueError("dynamical rays need a parameter c")

    ctx = make_context(precision) if isinstance(precision, int) else BINARY64
    adaptive = precision == "auto"
    problem = _Problem(plane, d, angle, c, ray_tol)

    if plane == "parameter":
        t_warm = max(t_start, 6.0)
    else:
        t_warm = max(t_start, math.log(safe_radius(d, c)) + 3.0)
    theta = float(angle)
    x = lift(_seed(ctx, t_warm, theta), ctx)

    samples = []
    prev_t = None
    spacing = abs(x)
    warm = _schedule(t_warm, t_start, steps_per_halving)[:-1] if t_warm > t_start else []
    record = _schedule(t_start, t_min, steps_per_halving)
    last_step = None
    for i, t in enumerate(warm + record):
        recording = i >= len(warm)
        x_new = _solve(problem, x, prev_t, t, spacing, 0)
        if x_new is None:
            partial = _finish(plane, d, angle, c, samples, steps_per_halving)
            raise NewtonStall(f"Newton stalled at t={t:.6g}",
                              last_good_t=samples[-1][0] if samples else None,
                              partial=partial)
        step = abs(x_new - x) if prev_t is not None else None
        x, prev_t = x_new, t
        if recording:
            samples.append((t, x))
        if step is not None and step > 0:
            predicted = step * (step / last_step) if last_step else step
            predicted = min(predicted, step)
            spacing = float(predicted)
            last_step = step
            if adaptive and _digits_needed(x, spacing) > (ctx.dps if is_extended(ctx) else FLOAT_DIGITS):
                ctx = make_context(int(math.ceil(_digits_needed(x, spacing))) + 10)
                x = lift(x, ctx)
    return _finish(plane, d, angle, c, samples, steps_per_halving)


def _finish(plane, d, angle, c, samples, steps):
    return RayPolyline(plane, d, angle, None if c is None else complex(c),
                       tuple(samples), steps)


def _seed(ctx, t, theta):
    return complex(math.exp(t) * math.cos(2 * math.pi * theta),
                   math.exp(t) * math.sin(2 * math.pi * theta))


def _solve(problem, x, t_prev, t, spacing, depth):
    x_new = _newton(problem, x, t, spacing)
    if x_new is not None or t_prev is None:
        return x_new
    if depth >= MAX_SUBSTEPS:
        return None
    t_mid = math.sqrt(t_prev * t)
    x_mid = _solve(problem, x, t_prev, t_mid, spacing, depth + 1)
    if x_mid is None:
        return None
    return _solve(problem, x_mid, t_mid, t, spacing, depth + 1)


def trace_dynamical_ray(p: MapParams, angle, t_start=1.0, t_min=2.0**-10,
                        steps_per_halving=DEFAULT_STEPS, ray_tol=DEFAULT_RAY_TOL,
                        precision="auto") -> RayPolyline:
    """Ray of angle ``angle`` in the dynamical plane of f_c."""
    return trace_ray("dynamical", p.d, angle, p.c, t_start, t_min,
                     steps_per_halving, ray_tol, precision)


def trace_parameter_ray(d, angle, t_start=1.0, t_min=2.0**-10,
                        steps_per_halving=DEFAULT_STEPS, ray_tol=DEFAULT_RAY_TOL,
                        precision="auto") -> RayPolyline:
    """Ray of angle ``angle`` in the parameter plane of z**d + c."""
    return trace_ray("parameter", d, angle, None, t_start, t_min,
                     steps_per_halving, ray_tol, precision)


def _halving_points(ray):
    """Samples walked back from the innermost one, potentials roughly doubling."""
    out = [ray.samples[-1]]
    for t, z in reversed(ray.samples[:-1]):
        if t >= 2 * out[-1][0] * (1 - 1e-9):
            out.append((t, z))
    out.reverse()
    return out


def _power_law(points):
    """Extrapolate z(t) = z* + A t**beta from potentials spaced by halving."""
    zs = [z for _, z in points]
    diffs = [b - a for a, b in zip(zs, zs[1:])]
    if abs(diffs[-1]) == 0:
        return zs[-1], 0.0, float("inf")
    if any(abs(x) == 0 for x in diffs):
        raise NoConvergence("stagnant samples before the innermost one")
    ratios = [b / a for a, b in zip(diffs, diffs[1:])]
    recent = ratios[-3:]
    rho = sum(recent) / len(recent)
    mags = [abs(r) for r in recent]
    if not all(0.05 <= m <= 0.95 for m in mags):
        raise NoConvergence(f"difference ratios {[round(float(m), 4) for m in mags]} "
                            "outside [0.05, 0.95]")
    if max(abs(r - rho) for r in recent) > 0.1:
        raise NoConvergence("difference ratios have not stabilised")
    extrap = [zs[j + 1] + diffs[j] * rho / (1 - rho) for j in range(len(diffs) - 3, len(diffs))]
    point = extrap[-1]
    spread = max(abs(e - point) for e in extrap)
    rho_prev = ratios[-2]
    second = zs[-2] + diffs[-2] * rho_prev / (1 - rho_prev)
    err = max(float(spread), float(abs(second - point)))
    beta = -math.log2(float(abs(rho)))
    return point, err, beta


def _log_model(samples, window):
    """Extrapolate z = z* + A s**beta in s = 1/log(1/t); for parabolic landings."""
    import numpy as np

    pts = [(t, z) for t, z in samples if t < 0.5]
    if len(pts) < 16:
        raise NoConvergence("too few samples below t=1/2 for the logarithmic model")
    L_last = math.log(1 / pts[-1][0])
    sel = [(t, z) for t, z in pts if math.log(1 / t) >= window * L_last]
    ts = np.array([float(t) for t, _ in sel])
    zs = np.array([complex(z) for _, z in sel])
    s = 1 / np.log(1 / ts)

    def solve(mask):
        best = None
        for beta in np.arange(0.25, 6.0, 0.01):
            A = np.stack([np.ones(mask.sum()), s[mask] ** beta], axis=1)
            coef, *_ = np.linalg.lstsq(A, zs[mask], rcond=None)
            r = float(np.max(np.abs(A @ coef - zs[mask])))
            if best is None or r < best[0]:
                best = (r, float(beta), complex(coef[0]))
        return best

    full = np.ones(len(s), dtype=bool)
    inner = s <= np.median(s)
    r_full, beta, point = solve(full)
    r_inner, _, point_inner = solve(inner)
    if not 0.3 <= beta <= 5.9:
        raise NoConvergence(f"logarithmic model exponent {beta:.3g} at the search edge")
    err = max(abs(point - point_inner), r_full, r_inner)
    return point, err, beta, [float(t) for t in ts]


def landing_estimate(ray: RayPolyline, n_points=8) -> LandingEstimate:
    """Landing point of a traced ray with an error bound.

    Samples at halving potentials are fitted by ``z* + A t**beta`` through
    the geometric decay of successive differences.  When that decay is too
    slow to be geometric (logarithmic approach at a parabolic point) the
    fit falls back to ``z* + A s**beta`` with ``s = 1/log(1/t)``.
    """
    if len(ray) < 8:
        raise ValueError("landing estimate needs at least 8 samples")
    pts = _halving_points(ray)[-n_points:]
    if len(pts) < 5:
        raise NoConvergence("fewer than 5 halving-spaced samples")
    ctx = ctx_of(pts[-1][1])
    floor = 8 * _eps(ctx) * max(float(abs(pts[-1][1])), 1e-300)
    try:
        point, err, beta = _power_law(pts)
        return LandingEstimate(point, max(err, floor), [float(t) for t, _ in pts], beta, "power")
    except NoConvergence as first:
        try:
            point, err, beta, used = _log_model(ray.samples, 0.7)
        except NoConvergence:
            raise first
        return LandingEstimate(point, max(err, floor), used, beta, "log")


def _nearest_index(ray, t_from):
    ts = ray.potentials
    if not ts[-1] * (1 - 1e-9) <= t_from <= ts[0] * (1 + 1e-9):
        raise ValueError(f"t_from={t_from:g} outside the traced range [{ts[-1]:g}, {ts[0]:g}]")
    return min(range(len(ts)), key=lambda i: abs(math.log(ts[i] / t_from)))


def arc_length(ray: RayPolyline, t_from, landing: Optional[LandingEstimate] = None) -> ArcLength:
    """Polyline length from the sample nearest ``t_from`` to the innermost sample.

    ``tail`` is the chord from the innermost sample to the landing estimate
    (when one is given or can be computed), with its error bound.
    """
    k = _nearest_index(ray, t_from)
    pts = ray.points
    length = 0
    for a, b in zip(pts[k:], pts[k + 1:]):
        length = length + abs(b - a)
    if landing is None:
        try:
            landing = landing_estimate(ray)
        except (NoConvergence, ValueError):
            landing = None
    if landing is None:
        return ArcLength(length, None, None)
    return ArcLength(length, abs(pts[-1] - landing.point), landing.error_bound)


class GeodesicRow(NamedTuple):
    t: float
    gamma: float
    Gamma: float
    ratio: float


def geodesic_ratio_experiment(d, angle, c0=None, potentials=(2.0**-10,), depth=10,
                              steps_per_halving=DEFAULT_STEPS, t_start=1.0):
    """Arc-length ratio |gamma|/|Gamma| of a dynamical/parameter ray pair.

    The parameter ray of ``angle`` and the dynamical ray of the same angle
    for ``f_{c0}`` are traced to ``min(potentials) * 2**-depth``; both arc
    lengths run from potential t to the respective landing estimate.  When
    ``c0`` is None the parameter ray's landing point is used.
    """
    potentials = sorted(potentials, reverse=True)
    t_min = potentials[-1] * 2.0**-depth
    pray = trace_parameter_ray(d, angle, t_start, t_min, steps_per_halving)
    pland = landing_estimate(pray)
    if c0 is None:
        c0 = complex(pland.point)
    dray = trace_dynamical_ray(MapParams(d, c0), angle, t_start, t_min, steps_per_halving)
    dland = landing_estimate(dray)
    rows = []
    for t in potentials:
        g = arc_length(dray, t, dland).total
        G = arc_length(pray, t, pland).total
        rows.append(GeodesicRow(t, g, G, g / G))
    return rows, pray, dray
