"""Sinc witness family ``f_I = F^-1 1_I`` and its L^p norms."""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np
from scipy.special import zeta

from .quad import integrate_finite
from .signals import Exponent, _p
from .specfun import sinc

__all__ = ["Interval", "eval_f_I", "compute_Np", "norm_f_I", "sinc_tail_bound", "coupled_interval"]


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b) and self.a < self.b):
            raise ValueError(f"need finite a < b, got [{self.a}, {self.b}]")

    @property
    def length(self) -> float:
        return self.b - self.a

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.a + self.b)

    def scaled(self, lam: float) -> "Interval":
        return Interval(lam * self.a, lam * self.b)


def coupled_interval(rho: float) -> Interval:
    """``[rho^(-1/3) / 2, rho^(-1/3)]``, the widest interval on which the
    curvature of ``1/x + 2 pi x y`` stays of order ``rho``."""
    b = rho ** (-1.0 / 3.0)
    return Interval(0.5 * b, b)


def eval_f_I(I: Interval, x):
    """``exp(i pi (a+b) x) |I| sinc(|I| x)``."""
    x = np.asarray(x, dtype=float)
    val = np.exp(1j * math.pi * (I.a + I.b) * x) * I.length * sinc(I.length * x)
    return complex(val) if val.ndim == 0 else val


# Finite part is integrated on [0, _SPLIT]; beyond it the periodic-summation
# identity sum_n (n+u)^-p = zeta(p, u) makes the tail a smooth 1-D integral.
_SPLIT = 4
_cache: dict[float, float] = {}
_lock = threading.Lock()


def sinc_tail_bound(p: float, X: float) -> float:
    """``int_{|x|>X} (pi x)^-p dx``, an upper bound for the two-sided |sinc|^p tail."""
    return 2.0 / (math.pi**p * (p - 1.0) * X ** (p - 1.0))


def _np_pth_power(p: float, tol: float) -> tuple[float, float, float]:
    main = integrate_finite(
        lambda x: np.abs(sinc(x)) ** p, 0.0, float(_SPLIT), tol,
        breakpoints=range(1, _SPLIT),
    )
    tail = integrate_finite(
        lambda u: np.abs(np.sin(math.pi * u)) ** p * zeta(p, _SPLIT + u), 0.0, 1.0, tol
    )
    tail_val = 2.0 * tail.value.real / math.pi**p
    return 2.0 * main.value.real + tail_val, tail_val, main.error_estimate + tail.error_estimate


def compute_Np(p: Exponent) -> float:
    """``(int |sinc|^p)^(1/p)`` over the real line, cached per p."""
    q = _p(p)
    with _lock:
        hit = _cache.get(q)
        if hit is None:
            total, tail, _ = _np_pth_power(q, 1e-13)
            if tail > sinc_tail_bound(q, _SPLIT):
                raise ArithmeticError(f"tail {tail} exceeds its analytic bound at p={q}")
            hit = _cache[q] = total ** (1.0 / q)
    return hit


def norm_f_I(I: Interval, p: Exponent) -> float:
    """``|f_I|_p = |I|^((p-1)/p) N_p``."""
    q = _p(p)
    return I.length ** ((q - 1.0) / q) * compute_Np(q)
