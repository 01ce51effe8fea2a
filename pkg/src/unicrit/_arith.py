"""Precision shim: the same numeric code runs on Python complex or mpmath.

Values carry their arithmetic with them.  A Python ``complex``/``float``
uses binary64 and ``cmath``; an ``mpc``/``mpf`` uses the mpmath context it
was created in, so each extended-precision computation can own a private
context and stay thread-safe.
"""

import cmath
import math

import mpmath

FLOAT_DIGITS = 15


class _Binary64:
    """cmath/math with the attribute names an mpmath context exposes."""

    pi = math.pi
    eps = 2.0**-52
    dps = FLOAT_DIGITS
    exp = staticmethod(cmath.exp)
    log = staticmethod(cmath.log)

    @staticmethod
    def ln(x):
        return math.log(x)

    @staticmethod
    def mpc(x):
        return complex(x)

    @staticmethod
    def mpf(x):
        return float(x)


BINARY64 = _Binary64()


def ctx_of(*values):
    """Arithmetic context of the first extended-precision value, else binary64."""
    for v in values:
        ctx = getattr(v, "context", None)
        if ctx is not None:
            return ctx
    return BINARY64


def is_extended(ctx):
    return ctx is not BINARY64


def make_context(dps):
    """Private mpmath context with ``dps`` decimal digits, or binary64."""
    if dps is None or dps <= FLOAT_DIGITS:
        return BINARY64
    ctx = mpmath.MPContext()
    ctx.dps = int(dps)
    return ctx


def lift(x, ctx):
    """Convert a scalar (complex, float, mpc, str) into ``ctx``."""
    if ctx is BINARY64:
        return complex(x)
    if isinstance(x, str):
        return ctx.mpc(complex(x)) if "j" in x else ctx.mpc(x)
    return ctx.mpc(x)


def logabs(ctx, z):
    """log|z| that cannot overflow through ``abs``."""
    if ctx is BINARY64:
        return math.log(abs(z))
    return ctx.ln(abs(z))


def real_str(x):
    """Decimal text for a real value at the precision it carries."""
    ctx = getattr(x, "context", None)
    if ctx is None:
        return "%.17g" % x
    return ctx.nstr(x, ctx.dps + 3)
