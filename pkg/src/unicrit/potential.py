"""Green's function, Böttcher coordinate and external angles.

Everything is evaluated through the logarithm of the Böttcher map,
``L(z) = log phi_c(z)``, whose real part is the Green function.  Near
infinity ``L`` is given by the absolutely convergent series

    L(w) = log w + sum_j d**-(j+1) * Log(1 + c / w_j**d),   w_0 = w,

which uses principal logarithms only on a disk complement where every
``|c / w_j**d| < 1/2``; there the principal branch is the analytic one.
A point closer to the Julia set is first pushed forward ``m`` steps into
that region, and the value is divided back down by ``d**m``.  The modulus
and every logarithmic derivative survive this division unambiguously; the
angle is fixed modulo ``1/d**m`` only, and the remaining integer is found
by following the external ray through the point outward until the point
itself is in the safe region (see :func:`external_angle`).
"""

from fractions import Fraction
from typing import NamedTuple

from ._arith import BINARY64, ctx_of, lift, logabs
from .dynamics import Jet, MapParams, default_bailout
from .errors import BranchAmbiguity, NotEscaping, OrbitOverflow

DEFAULT_TOL = 1e-12
DEFAULT_MAXIT = 100_000


class BottcherCoord(NamedTuple):
    t: float
    theta: float


class AngleRational(Fraction):
    """External angle p/q in [0, 1), reduced."""

    def __new__(cls, numerator=0, denominator=None):
        self = super().__new__(cls, numerator, denominator)
        if not 0 <= self < 1:
            raise ValueError(f"angle {self} outside [0, 1)")
        return self

    @classmethod
    def parse(cls, text):
        """Accept ``"p/q"`` or a decimal/binary-exact float string."""
        return cls(Fraction(text.strip()))

    def times(self, k):
        """k * angle mod 1, exact."""
        x = Fraction(self) * k
        return AngleRational(x - (x.numerator // x.denominator))


def safe_radius(d, c):
    """Radius outside which the principal-log series is the analytic branch."""
    p = MapParams(d, complex(c))
    return max(default_bailout(p), (2.0 * float(abs(c))) ** (1.0 / d))


def _stop_threshold(ctx, tol):
    return max(tol, 4 * ctx.eps) if ctx is not BINARY64 else max(tol, 1e-17)


def log_bottcher_tail(d, c, z, dz=0, dc=0, tol=DEFAULT_TOL):
    """``L(z)`` and its derivative for ``z`` in the safe region.

    ``dz`` is the derivative of ``z`` in the tracked variable and ``dc``
    is 1 when that variable is ``c`` itself.  The iteration runs in log
    space so nothing overflows however far out ``z`` is.
    """
    ctx = ctx_of(z, c)
    ell = ctx.log(z)
    dell = dz / z
    L, dL = ell, dell
    scale = 1
    stop = _stop_threshold(ctx, tol)
    for _ in range(200):
        e = ctx.exp(-d * ell)
        u = c * e
        du = e * (dc - c * d * dell)
        scale = scale / d
        lg = ctx.log(1 + u)
        dlg = du / (1 + u)
        L += scale * lg
        dL += scale * dlg
        if abs(scale * lg) <= stop and abs(scale * dlg) <= stop * (abs(dL) + stop):
            break
        ell = d * ell + lg
        dell = d * dell + dlg
    return L, dL


class _Pushed(NamedTuple):
    m: int
    z: complex
    dz: complex


def push_to_safe(d, c, z, dz=0, dc=0, maxit=DEFAULT_MAXIT, radius=None):
    """Iterate a jet until the value leaves the safe radius."""
    R = safe_radius(d, c) if radius is None else radius
    for m in range(maxit + 1):
        if abs(z) >= R:
            return _Pushed(m, z, dz)
        if m < maxit:
            dz = d * z ** (d - 1) * dz + dc
            z = z**d + c
    raise NotEscaping(f"orbit did not reach |z| >= {R:.6g} within {maxit} iterations")


def log_bottcher_level(d, c, z, dz, dc, n, tol=DEFAULT_TOL):
    """``log phi_c(f_c^n(z))`` and its derivative, iterating exactly n steps.

    Raises ``OrbitOverflow`` if an iterate blows past 1e150 and
    ``BranchAmbiguity`` if ``f_c^n(z)`` is not in the safe region.
    """
    for k in range(n):
        dz = d * z ** (d - 1) * dz + dc
        z = z**d + c
        if abs(z) > 1e150:
            raise OrbitOverflow("iterate overflow", index=k + 1)
    if abs(z) < safe_radius(d, c):
        raise BranchAmbiguity("iterate not in the safe region")
    return log_bottcher_tail(d, c, z, dz, dc, tol)


def _prepare(p, z):
    ctx = ctx_of(z, p.c)
    return ctx, lift(z, ctx), lift(p.c, ctx)


def green(p: MapParams, z, tol=DEFAULT_TOL, maxit=DEFAULT_MAXIT):
    """G_c(z) to absolute accuracy ``tol``."""
    ctx, z, c = _prepare(p, z)
    d = p.d
    pushed = push_to_safe(d, c, z, maxit=maxit)
    scale = d**pushed.m
    L, _ = log_bottcher_tail(d, c, pushed.z, tol=tol * scale)
    return L.real / scale


def green_of_critical_value(p: MapParams, tol=DEFAULT_TOL, maxit=DEFAULT_MAXIT):
    """Green function of the connectedness locus, G_M(c) = G_c(c)."""
    return green(p, p.c, tol, maxit)


def critical_potential(p: MapParams, tol=DEFAULT_TOL, maxit=4000):
    """G_c(0); zero when the critical orbit stays bounded within ``maxit``.

    A critical orbit that survives 4000 steps has G_c(0) below d**-4000,
    which no tolerance can see.
    """
    try:
        return green(p, p.c, tol, maxit) / p.d
    except NotEscaping:
        return 0.0


def _check_outside_critical(p, z, t, tol, maxit):
    g0 = critical_potential(p, tol, min(maxit, 4000))
    if g0 > 0 and not t > g0 + 10 * tol:
        raise BranchAmbiguity(
            f"G_c(z)={float(t):.6g} is not above the critical level G_c(0)={float(g0):.6g}")


def _angle_of(ctx, L):
    """Angle in [0, 1) of exp(L), taken from a principal-branch value."""
    x = L.imag / (2 * ctx.pi)
    return x - int(x // 1) if ctx is BINARY64 else x - ctx.floor(x)


def _level_log(d, c, w, tol):
    """(s, L_s, L_s') for the point w: s = first safe index of its orbit."""
    pushed = push_to_safe(d, c, w, 1, 0)
    L, dL = log_bottcher_tail(d, c, pushed.z, pushed.dz, 0, tol)
    return pushed.m, L, dL


def _level_eval(d, c, w, s, tol):
    """L_s(w) at a fixed level s; None when the orbit is not safe there."""
    try:
        return log_bottcher_level(d, c, w, 1, 0, s, tol)
    except (BranchAmbiguity, OrbitOverflow):
        return None


def _wrap(ctx, r):
    """Reduce the imaginary part of a log residual into (-pi, pi]."""
    two_pi = 2 * ctx.pi
    im = r.imag - two_pi * round(float(r.imag / two_pi))
    return ctx.mpc(r.real, im) if ctx is not BINARY64 else complex(r.real, im)


def _outward_angle(d, c, z, t, tol, max_steps=4000):
    """Follow the ray through z outward until the point is safe; return its angle.

    Each step raises the potential and re-solves ``L_s(w) = d**s t' + 2 pi i
    theta_s`` by damped Newton at the current level ``s``; the angle target at
    that level is read off the previous converged point, so the branch is
    carried by continuity of ``w`` alone.
    """
    ctx = ctx_of(z, c)
    w = z
    s, L, _ = _level_log(d, c, w, tol)
    theta_s = _angle_of(ctx, L)
    factor = 2**0.5
    for _ in range(max_steps):
        if s == 0:
            return theta_s
        t_next = t * factor
        target = lambda tt, ss=s, th=theta_s: (d**ss) * tt + 2j * ctx.pi * th
        w_new = _newton_level(d, c, w, s, target(t_next), tol, ctx)
        if w_new is None:
            if factor < 1 + 1e-6:
                raise BranchAmbiguity("outward ray continuation stalled")
            factor = factor**0.5
            continue
        w, t = w_new, t_next
        factor = min(factor * factor, 2.0)
        s_new, L, _ = _level_log(d, c, w, tol)
        if s_new < s:
            s = s_new
            theta_s = _angle_of(ctx, L)
    raise BranchAmbiguity("outward ray continuation did not reach the safe region")


def _newton_level(d, c, w, s, target, tol, ctx, maxiter=60):
    eps = 64 * (ctx.eps if ctx is not BINARY64 else 2.0**-52)
    val = _level_eval(d, c, w, s, tol)
    if val is None:
        return None
    res = _wrap(ctx, val[0] - target)
    for _ in range(maxiter):
        L, dL = val
        step = -res / dL
        lam = 1.0
        for _ in range(20):
            trial = w + lam * step
            tv = _level_eval(d, c, trial, s, tol)
            if tv is not None:
                tres = _wrap(ctx, tv[0] - target)
                if abs(tres) < abs(res) or abs(tres) <= eps * (1 + abs(target)):
                    break
            lam /= 2
        else:
            return None
        w, val, res = trial, tv, tres
        if abs(lam * step) <= eps * abs(w):
            return w
    return w if abs(res) <= 1e3 * eps * (1 + abs(target)) else None


class _BottcherData(NamedTuple):
    t: object
    theta: object
    dlog: object
    m: int


def _bottcher_data(p, z, variable, tol, maxit, check_level=True, want_angle=True):
    ctx, z, c = _prepare(p, z)
    d = p.d
    if variable == "z":
        dz, dc = 1, 0
    elif variable == "c":
        dz, dc = 0, 1
    elif variable == "cz":
        dz, dc = 1, 1
    else:
        raise ValueError("variable must be 'z' or 'c'")
    pushed = push_to_safe(d, c, z, dz, dc, maxit=maxit)
    scale = d**pushed.m
    L, dL = log_bottcher_tail(d, c, pushed.z, pushed.dz, dc, tol * scale)
    t = L.real / scale
    if check_level and variable != "cz":
        _check_outside_critical(p, z, t, tol, maxit)
    theta = None
    if want_angle:
        theta_m = _angle_of(ctx, L)
        if pushed.m == 0:
            theta = theta_m
        else:
            theta_w = _outward_angle(d, c, z, t, tol)
            theta = _snap(ctx, theta_w, theta_m, scale)
    return _BottcherData(t, theta, dL / scale, pushed.m)


def _snap(ctx, theta_w, theta_m, scale):
    """Refine a continuation angle with the exactly known angle at level m."""
    eps = ctx.eps if ctx is not BINARY64 else 2.0**-52
    if scale * eps * 1e4 > 0.1:
        return theta_w
    j = round(float(theta_w * scale - theta_m))
    x = (theta_m + j) / scale
    return x - int(x // 1) if ctx is BINARY64 else x - ctx.floor(x)


def _phi_from(ctx, t, theta):
    return ctx.exp(t + 2j * ctx.pi * theta) if ctx is BINARY64 else \
        ctx.exp(ctx.mpc(t, 2 * ctx.pi * theta))


def external_angle(p: MapParams, z, tol=DEFAULT_TOL, maxit=DEFAULT_MAXIT) -> BottcherCoord:
    """Potential and external angle (t, theta) of an escaping point."""
    data = _bottcher_data(p, z, "z", tol, maxit, want_angle=True)
    return BottcherCoord(data.t, data.theta)


def bottcher(p: MapParams, z, tol=DEFAULT_TOL, maxit=DEFAULT_MAXIT):
    """phi_c(z) = exp(G_c(z) + 2 pi i theta)."""
    data = _bottcher_data(p, z, "z", tol, maxit)
    return _phi_from(ctx_of(z, p.c), data.t, data.theta)


def bottcher_jet(p: MapParams, z, variable="z", tol=DEFAULT_TOL, maxit=DEFAULT_MAXIT) -> Jet:
    """phi_c(z) with its derivative in z or in c (the other held fixed)."""
    data = _bottcher_data(p, z, variable, tol, maxit)
    phi = _phi_from(ctx_of(z, p.c), data.t, data.theta)
    return Jet(phi, phi * data.dlog)


def param_bottcher(d, c, tol=DEFAULT_TOL, maxit=DEFAULT_MAXIT) -> Jet:
    """Phi(c) = phi_c(c) with its total derivative in c."""
    p = MapParams(int(d), c)
    data = _bottcher_data(p, c, "cz", tol, maxit)
    phi = _phi_from(ctx_of(c), data.t, data.theta)
    return Jet(phi, phi * data.dlog)


def log_derivatives(d, c, tol=DEFAULT_TOL, maxit=DEFAULT_MAXIT):
    """(D_c log Phi(c), D_z log phi_c(z)|_{z=c}) without resolving any angle."""
    p = MapParams(int(d), c)
    total = _bottcher_data(p, c, "cz", tol, maxit, check_level=False, want_angle=False)
    partial = _bottcher_data(p, c, "z", tol, maxit, check_level=False, want_angle=False)
    return total.dlog, partial.dlog


def param_log_jet(d, c, tol=DEFAULT_TOL, maxit=DEFAULT_MAXIT):
    """(G_M(c), D_c log Phi(c)): enough for |Phi| and |Phi'| without an angle."""
    p = MapParams(int(d), c)
    data = _bottcher_data(p, c, "cz", tol, maxit, check_level=False, want_angle=False)
    return data.t, data.dlog
