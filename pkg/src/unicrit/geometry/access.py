"""Distance to M_d along a parameter ray against the size of the ray's tail."""

import math
from typing import List, NamedTuple, Optional

from .._arith import ctx_of, lift
from ..errors import LogDomain
from ..potential import param_log_jet
from ..rays import RayPolyline, landing_estimate, trace_parameter_ray


class DistanceBracket(NamedTuple):
    lower: float
    upper: float

    @property
    def estimate(self):
        return math.sqrt(self.lower * self.upper)


def distance_bracket(d, c, t_hint=None) -> DistanceBracket:
    """Koebe bracket for dist(c, M_d) from R = |Phi(c)| and |Phi'(c)|.

    Upper: (R**2 - 1) / |Phi'| (Schwarz lemma on the largest disk missing M_d).
    Lower: (R**2 - 1) / (4 R |Phi'|) (quarter theorem for the inverse map).
    The ratio is 4R, which tends to 4 as c approaches M_d.
    """
    # near M_d the potential is tiny, so ask for it to a relative accuracy
    tol = 1e-12 if t_hint is None else min(1e-12, 1e-10 * t_hint)
    t, dlog = param_log_jet(d, c, tol)
    t = float(t)
    R = math.exp(t)
    dphi = R * float(abs(dlog))
    num = math.expm1(2 * t)
    return DistanceBracket(num / (4 * R * dphi), num / dphi)


def iterated_log(x, m):
    """log applied m times; LogDomain when an intermediate value is not positive."""
    y = x
    for k in range(m):
        if not y > 0:
            raise LogDomain(f"log_[{k + 1}] undefined: argument {y:.6g} is not positive")
        y = math.log(y)
    return y


class AccessRow(NamedTuple):
    t: float
    c: complex
    dist_lower: float
    dist_upper: float
    dist_est: float
    diam_tail: float
    arclen_tail: float
    functional: float


def _tail(ray: RayPolyline, k, landing_point):
    """Diameter and arc length of samples k.. plus the landing point.

    Offsets from the landing point are taken in the samples' own precision
    before rounding, so deep tails keep their relative accuracy.
    """
    ctx = ctx_of(ray.samples[-1][1])
    land = lift(landing_point, ctx)
    offs = [complex(lift(z, ctx) - land) for _, z in ray.samples[k:]] + [0j]
    diam = 0.0
    for i in range(len(offs)):
        for j in range(i + 1, len(offs)):
            diam = max(diam, abs(offs[i] - offs[j]))
    arclen = sum(abs(b - a) for a, b in zip(offs, offs[1:]))
    return diam, arclen


def iterated_log_access(d, angle, potentials, m, depth=10, steps_per_halving=8,
                        t_start=1.0, ray: Optional[RayPolyline] = None) -> List[AccessRow]:
    """dist(c, M_d) / diam(tail) * log_[m](1 / diam(tail)) at c on the parameter ray.

    The ray is traced to min(potentials) * 2**-depth; the tail at potential t
    runs from the sample at t through the deeper samples to the landing estimate.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    potentials = sorted(potentials, reverse=True)
    if ray is None:
        ray = trace_parameter_ray(d, angle, t_start, potentials[-1] * 2.0**-depth,
                                  steps_per_halving)
    landing = landing_estimate(ray)
    ts = ray.potentials
    rows = []
    for t in potentials:
        k = min(range(len(ts)), key=lambda i: abs(math.log(ts[i] / t)))
        if abs(math.log(ts[k] / t)) > 1e-9:
            raise ValueError(f"potential {t:g} is not a ray sample")
        c = ray.samples[k][1]
        bracket = distance_bracket(d, c, float(ts[k]))
        diam, arclen = _tail(ray, k, landing.point)
        if diam >= 1:
            raise LogDomain(f"tail diameter {diam:.6g} >= 1 at t={t:g}; start deeper")
        value = bracket.estimate / diam * iterated_log(1 / diam, m)
        rows.append(AccessRow(float(ts[k]), c, bracket.lower, bracket.upper, bracket.estimate,
                              diam, arclen, value))
    return rows
