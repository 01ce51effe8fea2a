"""The transversality sum T(c) = sum_n 1 / D_z f_c^n(c) and its companions."""

import math
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional

from ._arith import BINARY64, ctx_of, lift, logabs
from .dynamics import MapParams
from .errors import DerivativeVanished, NonConvergent, NoConvergence, UnicritError
from .potential import AngleRational, log_derivatives
from .rays import NewtonStall, trace_parameter_ray

FIT_WINDOW = 50
STALL_RATIO = 0.999
DEFAULT_MAX_TERMS = 10_000


@dataclass
class TransversalitySum:
    value: complex
    n_terms: int
    last_term_mag: float
    tail_bound: float
    decay_ratio: float
    beta_sums: Dict[float, float] = field(default_factory=dict)
    short_fit: bool = False


def _fit_ratio(logmags):
    """exp of the least-squares slope of log|term| against n."""
    y = logmags[-FIT_WINDOW:]
    m = len(y)
    if m < 2:
        return float("nan")
    xbar = (m - 1) / 2
    ybar = sum(y) / m
    sxy = sum((i - xbar) * (v - ybar) for i, v in enumerate(y))
    sxx = m * (m * m - 1) / 12
    return math.exp(min(sxy / sxx, 700.0))


def _series(p: MapParams, tol, max_terms, power=None):
    """Shared driver: terms 1/Df^n (power None) or |Df^n|**-power."""
    ctx = ctx_of(p.c)
    d = p.d
    c = lift(p.c, ctx)
    z = c
    der = lift(1, ctx)
    total = lift(0, ctx) if power is None else 0.0
    logmags = []
    radius = max(2.0, float(abs(c))) ** (1.0 / (d - 1)) + 1.0
    ratio = float("nan")
    last = float("inf")
    n = 0
    while n < max_terms:
        if der == 0:
            raise DerivativeVanished(f"D f^{n}(c) = 0: the critical orbit hits 0",
                                     partial=total)
        lm = float(logabs(ctx, der))
        if power is None:
            total += 1 / der
            last = math.exp(-lm)
        else:
            last = math.exp(-power * lm)
            total += last
        logmags.append(-lm if power is None else -power * lm)
        n += 1
        zabs = float(abs(z))
        if zabs > radius:
            # past the escape radius the term ratio is at most 1/(d |z|^(d-1)), shrinking
            local = 1.0 / (d * zabs ** (d - 1))
            if power is not None:
                local = local**power
            ratio = min(_fit_ratio(logmags), local) if len(logmags) > 1 else local
        elif n >= 2 and (n % 10 == 0 or n < FIT_WINDOW):
            ratio = _fit_ratio(logmags)
        if n >= FIT_WINDOW and ratio >= STALL_RATIO and zabs <= radius:
            raise NonConvergent(
                f"term magnitudes do not decay (fitted ratio {ratio:.4g} over the last "
                f"{FIT_WINDOW} terms)", partial=total)
        if ratio < 1:
            tail = last * ratio / (1 - ratio)
            if tail < tol and n >= 2:
                return total, n, last, tail, ratio, len(logmags) < FIT_WINDOW
        der = d * z ** (d - 1) * der
        z = z**d + c
        if ctx is BINARY64 and (abs(der) > 1e150 or abs(z) > 1e150):
            # the next term is below 1e-150; bound the rest by the local ratio
            tail = last * min(ratio, 1e-100) / (1 - min(ratio, 1e-100))
            return total, n, last, tail, ratio, len(logmags) < FIT_WINDOW
    if not ratio < STALL_RATIO:
        raise NonConvergent(f"no decay after {max_terms} terms", partial=total)
    tail = last * ratio / (1 - ratio)
    return total, n, last, tail, ratio, len(logmags) < FIT_WINDOW


def transversality_sum(p: MapParams, tol=1e-12, max_terms=DEFAULT_MAX_TERMS,
                       betas=()) -> TransversalitySum:
    """Partial sum of T(c) until the geometric tail bound drops below ``tol``."""
    value, n, last, tail, ratio, short = _series(p, tol, max_terms)
    out = TransversalitySum(value, n, last, tail, ratio, short_fit=short)
    for beta in betas:
        out.beta_sums[beta] = summability(p, beta, tol, max_terms)
    return out


def summability(p: MapParams, beta, tol=1e-12, max_terms=DEFAULT_MAX_TERMS):
    """|T|^beta(c) = sum_n |D f^n(c)|**-beta for 0 < beta <= 1."""
    if not 0 < beta <= 1:
        raise ValueError("beta must lie in (0, 1]")
    value, *_ = _series(p, tol, max_terms, power=beta)
    return value


class IdentityReport(NamedTuple):
    lhs: complex
    rhs: complex
    rel_err: float


def verify_derivative_identity(p: MapParams, tol=1e-12) -> IdentityReport:
    """Compare D_c Phi(c) / D_z phi_c(c) with the transversality sum.

    The left side is a ratio of logarithmic derivatives (Phi(c) and
    phi_c(c) share the same value), so no angle branch is involved.
    """
    total, partial = log_derivatives(p.d, p.c, tol)
    lhs = total / partial
    rhs = transversality_sum(p, tol).value
    return IdentityReport(lhs, rhs, float(abs(lhs - rhs) / abs(rhs)))


class RayLimitRow(NamedTuple):
    t: float
    c: complex
    T: Optional[complex]
    n_terms: Optional[int]
    tail_bound: Optional[float]
    decay_ratio: Optional[float]
    increment: Optional[float]
    failure: Optional[str]


def ray_limit_transversality(d, angle, potentials, tol=None, steps_per_halving=8,
                             t_start=1.0) -> List[RayLimitRow]:
    """T evaluated along the parameter ray of ``angle`` at the given potentials.

    ``tol=None`` asks for the working precision of each sample, so the
    Cauchy increments stay meaningful where the samples carry extra digits.
    """
    potentials = sorted(potentials, reverse=True)
    angle = AngleRational(angle)
    t_min = potentials[-1]
    start = max(t_start, potentials[0] * 2)
    failure = None
    try:
        ray = trace_parameter_ray(d, angle, start, t_min, steps_per_halving)
    except NewtonStall as exc:
        ray = exc.partial
        failure = f"NewtonStall: {exc}"
    samples = ray.samples
    rows = []
    prev_T = None
    for t in potentials:
        k = min(range(len(samples)), key=lambda i: abs(math.log(samples[i][0] / t))) \
            if samples else None
        if k is None or abs(math.log(samples[k][0] / t)) > 1e-9:
            rows.append(RayLimitRow(t, None, None, None, None, None, None,
                                    failure or "ray did not reach this potential"))
            continue
        c = samples[k][1]
        ctx = ctx_of(c)
        eps = 2.0**-52 if ctx is BINARY64 else float(ctx.eps)
        want = tol if tol is not None else max(64 * eps, 1e-300)
        try:
            s = transversality_sum(MapParams(d, c), want)
        except UnicritError as exc:
            rows.append(RayLimitRow(t, c, None, None, None, None, None,
                                    f"{type(exc).__name__}: {exc}"))
            prev_T = None
            continue
        inc = None if prev_T is None else float(abs(s.value - prev_T))
        rows.append(RayLimitRow(t, c, s.value, s.n_terms, s.tail_bound,
                                s.decay_ratio, inc, None))
        prev_T = s.value
    return rows
