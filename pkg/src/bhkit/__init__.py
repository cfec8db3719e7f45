"""Bohnenblust-Hille constants and desk-scale inequality verification."""

__version__ = "0.1.0"

from . import combinatorics, constants, kernels, norms, polynomials, spaces, verification

__all__ = [
    "__version__",
    "combinatorics",
    "constants",
    "kernels",
    "norms",
    "polynomials",
    "spaces",
    "verification",
]
