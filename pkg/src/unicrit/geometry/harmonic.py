"""Seeded harmonic-measure sampling and critical-orbit Lyapunov exponents."""

import math
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import List, NamedTuple, Optional

from ..dynamics import MapParams
from ..errors import UnicritError, ZeroDerivative
from ..rays import LandingEstimate, landing_estimate, trace_parameter_ray

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def splitmix64(seed: int, index: int) -> int:
    """Output ``index`` of the SplitMix64 stream started at ``seed``.

    Counter based: output i is the finalizer applied to seed + (i+1)*gamma,
    so any stretch of the stream can be produced without the ones before it.
    """
    z = (seed + (index + 1) * GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def uniform_angles(n: int, seed: int) -> List[Fraction]:
    """n angles k / 2**53, exact as fractions, from the top 53 bits of each output."""
    return [Fraction(splitmix64(seed, i) >> 11, 1 << 53) for i in range(n)]


class HarmonicSample(NamedTuple):
    angle: Fraction
    landing: Optional[LandingEstimate]
    t_min_reached: Optional[float]
    failure: Optional[str]


def sample_ray(d, angle, t_min, steps_per_halving=8) -> HarmonicSample:
    """Trace one parameter ray to ``t_min`` and estimate where it lands."""
    ray = None
    failure = None
    try:
        ray = trace_parameter_ray(d, angle, 1.0, t_min, steps_per_halving)
    except UnicritError as exc:
        ray = getattr(exc, "partial", None)
        failure = f"{type(exc).__name__}: {exc}"
    reached = float(ray.samples[-1][0]) if ray is not None and len(ray) else None
    landing = None
    if ray is not None and len(ray) >= 8:
        try:
            landing = landing_estimate(ray)
        except (UnicritError, ValueError) as exc:
            failure = failure or f"{type(exc).__name__}: {exc}"
    elif failure is None:
        failure = "too few samples for a landing estimate"
    return HarmonicSample(Fraction(angle), landing, reached, failure)


def _sample_args(args):
    return sample_ray(*args)


def sample_harmonic_measure(d, n, seed, t_min, steps_per_halving=8, jobs=1) -> List[HarmonicSample]:
    """n parameter rays at seeded uniform angles, each with its landing estimate.

    Per-sample failures are recorded in ``failure`` and never raised.
    Results come back in draw order whatever the number of workers.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    tasks = [(d, a, t_min, steps_per_halving) for a in uniform_angles(n, seed)]
    if jobs <= 1 or n <= 1:
        return [_sample_args(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_sample_args, tasks, chunksize=max(1, n // (4 * jobs))))


def lyapunov(p: MapParams, n: int) -> float:
    """(1/n) sum_{k<n} log|d z_k^(d-1)| along the critical value orbit z_0 = c."""
    if n < 1:
        raise ValueError("n must be positive")
    d = p.d
    c = complex(p.c)
    z = c
    total = 0.0
    for k in range(n):
        if abs(z) < 1e-300:
            raise ZeroDerivative(f"critical orbit within 1e-300 of 0 at step {k}")
        total += math.log(d) + (d - 1) * math.log(abs(z))
        z = z**d + c
        if not math.isfinite(abs(z)):
            raise OverflowError(f"critical orbit overflowed at step {k + 1}")
    return total / n
