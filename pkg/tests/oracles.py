"""Independent reference values computed without the package's machinery.

Raw limits log|f^n(z)| / d**n in high precision and bisection on the real
slice; nothing here uses the log-Böttcher series or Newton continuation.
"""

import mpmath

mp = mpmath.MPContext()
mp.dps = 60


def raw_green(d, c, z, escape=mp.mpf(10) ** 40, maxit=100000):
    """log|f^n(z)| / d**n once |f^n(z)| passes ``escape``."""
    c = mp.mpc(c)
    z = mp.mpc(z)
    for n in range(maxit):
        if abs(z) > escape:
            return mp.log(abs(z)) / mp.mpf(d) ** n
        z = z**d + c
    raise RuntimeError("orbit did not escape")


def tip_ray_point(t):
    """Real c < -2 with G_M(c) = t for d = 2, by bisection on the raw limit.

    G_M is decreasing in c on (-inf, -2); the bracket is [-2 - 4 t^2, -2 - t^2 / 4].
    """
    t = mp.mpf(t)
    lo = -2 - 4 * t * t
    hi = -2 - t * t / 4
    assert raw_green(2, lo, lo) > t > raw_green(2, hi, hi)
    for _ in range(400):
        mid = (lo + hi) / 2
        if raw_green(2, mid, mid) > t:
            lo = mid
        else:
            hi = mid
        if hi - lo < mp.mpf(10) ** -45 * abs(t * t):
            break
    return (lo + hi) / 2


def tip_dynamical_point(t):
    """Point of the ray of angle 1/2 for c = -2 at potential t: -2 cosh t."""
    return -2 * mp.cosh(mp.mpf(t))


def parameter_tail(t):
    """Arc length of the parameter ray of angle 1/2 from potential t to -2.

    The ray is the real segment (-inf, -2), so the length integral of |dc/dt|
    collapses to the distance between its endpoints.
    """
    return abs(tip_ray_point(t) + 2)


def dynamical_tail(t):
    """Same for the dynamical ray of f_{-2}: 2 cosh t - 2."""
    return 2 * mp.cosh(mp.mpf(t)) - 2
