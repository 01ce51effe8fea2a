"""Critical-orbit and external-ray numerics for unicritical maps z**d + c."""

__version__ = "0.1.0"
