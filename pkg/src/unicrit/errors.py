"""Exception hierarchy shared by every module.

Each class carries an ``exit_code`` used by the command-line front end.
"""


class UnicritError(Exception):
    exit_code = 1


class OrbitOverflow(UnicritError, OverflowError):
    """An iterate left the safe floating-point range (|z| > 1e150)."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class ZeroDerivative(UnicritError, ArithmeticError):
    """The derivative along an orbit vanished (orbit passed through 0)."""


class NotEscaping(UnicritError):
    """The orbit did not leave the bailout disk within the iteration budget."""

    exit_code = 2


class BranchAmbiguity(UnicritError):
    """The Böttcher branch could not be fixed by continuation."""

    exit_code = 3


class NewtonStall(UnicritError):
    """Ray continuation failed; ``partial`` holds the samples computed so far."""

    exit_code = 4

    def __init__(self, message, last_good_t=None, partial=None):
        super().__init__(message)
        self.last_good_t = last_good_t
        self.partial = partial


class PrecisionFloor(UnicritError):
    exit_code = 4


class NoConvergence(UnicritError):
    """Landing extrapolation did not stabilise."""

    exit_code = 4


class NonConvergent(UnicritError):
    """A derivative series shows no decay; ``partial`` is the running sum."""

    exit_code = 4

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class DerivativeVanished(NonConvergent, ZeroDerivative):
    """Orbit through the critical point: the series is undefined."""


class ResolutionInsufficient(UnicritError):
    exit_code = 5


class LogDomain(UnicritError, ValueError):
    """Iterated logarithm requested outside its domain."""
