"""Numerical laboratory for inverse generators of the shift group.

Fourier multipliers on grids, oscillatory integrals, the Bessel-kernel
representation of the regularized inverse-generator semigroup, and the
norm blow-up experiment for the symbol ``exp(i t / xi)``.
"""
from .fourier import Multiplier, apply_multiplier, forward_ft, inverse_ft
from .quad import ConvergenceError, QuadResult
from .semigroup import ConfigurationError
from .signals import Grid, LebesgueExponent, Signal, lp_norm
from .testfam import Interval

__all__ = [
    "Multiplier",
    "apply_multiplier",
    "forward_ft",
    "inverse_ft",
    "ConvergenceError",
    "QuadResult",
    "ConfigurationError",
    "Grid",
    "LebesgueExponent",
    "Signal",
    "lp_norm",
    "Interval",
]

__version__ = "0.1.0"
