"""Bessel J1 and normalized sinc, self-contained.

J1 uses its power series below ``SWITCH`` and the Hankel asymptotic
expansion (amplitude/phase form) above it.  Both accept scalars or
ndarrays; scalars come back as Python floats.
"""
from __future__ import annotations

import math

import numpy as np

__all__ = ["bessel_j1", "sinc", "SWITCH"]

# Series cancellation grows like I1(x)*eps(longdouble), asymptotic truncation
# like exp(-2x); both are below 1e-14 here.
SWITCH = 15.0

_SERIES_TERMS = 48
_ASYMP_TERMS = 30


def _check_finite(x: np.ndarray) -> None:
    if not np.all(np.isfinite(x)):
        raise ValueError("argument must be finite")


def _j1_series(x: np.ndarray) -> np.ndarray:
    # extended precision: the largest term is ~1e5 near SWITCH
    xl = x.astype(np.longdouble)
    q = -0.25 * xl * xl
    term = 0.5 * xl
    total = term.copy()
    for k in range(1, _SERIES_TERMS):
        term = term * q / (k * (k + 1))
        total += term
    return total.astype(float)


def _hankel_coefficients(n_terms: int) -> tuple[np.ndarray, np.ndarray]:
    # a_k(1) = prod_{j=1..k} (4 - (2j-1)^2) / (k! 8^k)
    a = [1.0]
    for k in range(1, 2 * n_terms + 2):
        a.append(a[-1] * (4.0 - (2 * k - 1) ** 2) / (k * 8.0))
    p = np.array([(-1) ** k * a[2 * k] for k in range(n_terms)])
    q = np.array([(-1) ** k * a[2 * k + 1] for k in range(n_terms)])
    return p, q


_P, _Q = _hankel_coefficients(_ASYMP_TERMS)


def _j1_asymptotic(x: np.ndarray) -> np.ndarray:
    """Hankel expansion J1 = sqrt(2/(pi x)) (P cos w - Q sin w), w = x - 3pi/4.

    Terms are summed until they start to grow (optimal truncation).
    """
    inv2 = 1.0 / (x * x)
    p_sum = np.zeros_like(x)
    q_sum = np.zeros_like(x)
    p_term_prev = np.full_like(x, np.inf)
    active = np.ones(x.shape, dtype=bool)
    power = np.ones_like(x)
    for k in range(_ASYMP_TERMS):
        p_term = _P[k] * power
        q_term = _Q[k] * power / x
        active &= np.abs(p_term) < np.abs(p_term_prev)
        p_sum += np.where(active, p_term, 0.0)
        q_sum += np.where(active, q_term, 0.0)
        p_term_prev = p_term
        power = power * inv2
    w = x - 0.75 * math.pi
    return np.sqrt(2.0 / (math.pi * x)) * (p_sum * np.cos(w) - q_sum * np.sin(w))


def bessel_j1(x):
    """Bessel function of the first kind, order one.

    Absolute error stays below 1e-12 for |x| <= 1e4.  Oddness is exact:
    the magnitude is computed on |x| and the sign reattached.
    """
    arr = np.asarray(x, dtype=float)
    _check_finite(arr)
    ax = np.abs(arr)
    out = np.empty_like(ax)
    small = ax <= SWITCH
    if np.any(small):
        out[small] = _j1_series(ax[small])
    if np.any(~small):
        out[~small] = _j1_asymptotic(ax[~small])
    out = np.where(arr < 0.0, -out, out)
    return float(out) if np.ndim(x) == 0 else out


def sinc(x):
    """sin(pi x) / (pi x), equal to 1 at the origin.

    Integer arguments give exact zeros; ``sin(pi x)`` is evaluated on the
    reduced argument so large integers are not polluted by pi rounding.
    """
    arr = np.asarray(x, dtype=float)
    _check_finite(arr)
    ax = np.abs(arr)
    # reduce to r in [-1, 1]: sin(pi x) = (-1)^n sin(pi r), x = 2n' + r
    r = np.fmod(ax, 2.0)
    s = np.sin(math.pi * np.where(r > 1.0, r - 2.0, r))
    s = np.where(r == np.round(r), 0.0, s)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = s / (math.pi * ax)
    near0 = ax < 1e-4
    z = math.pi * ax[near0] if np.ndim(ax) else math.pi * ax
    series = 1.0 - z * z / 6.0 + z**4 / 120.0
    if np.ndim(ax):
        out[near0] = series
    elif near0:
        out = series
    return float(out) if np.ndim(x) == 0 else out
