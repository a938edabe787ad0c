"""Oscillatory integrals ``G(y) = int_I exp(i (t/x + 2 pi x y)) dx``.

``G = T_m f_I`` for the multiplier ``m(xi) = exp(i t / xi)``.  The phase
``Phi_y(x) = t/x + 2 pi x y`` has ``Phi_y'' = 2t/x^3`` for every y, which is
what makes the curvature bound on ``I = [a, b] (0 < a)`` equal ``2t/b^3``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .quad import ConvergenceError, QuadResult, integrate_finite
from .signals import Exponent, _p
from .testfam import Interval

__all__ = [
    "Phase",
    "CurvatureBound",
    "eval_G",
    "eval_G_batch",
    "vdc_bound",
    "stationary_band",
    "sup_G",
    "empirical_vdc_constant",
    "norm_TmfI",
]

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(12)
# complex entries per batch block in eval_G_batch
_BLOCK = 2_000_000


@dataclass(frozen=True)
class Phase:
    """``Phi_y(x) = t/x + 2 pi x y``.

    Negative t conjugates the integral (mirrored in y); t = 0 reduces G to
    the modulated sinc and is only meaningful as a test of the plumbing.
    """

    t: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.t) and math.isfinite(self.y)):
            raise ValueError("phase parameters must be finite")

    def __call__(self, x):
        return self.t / x + 2.0 * math.pi * x * self.y

    def derivative(self, x):
        return -self.t / x**2 + 2.0 * math.pi * self.y


@dataclass(frozen=True)
class CurvatureBound:
    """Lower bound ``rho = min_I |Phi''| = 2|t|/b^3``, always recomputed."""

    interval: Interval
    t: float

    def __post_init__(self):
        if self.interval.a <= 0:
            raise ValueError("interval must lie in (0, inf)")
        if self.t == 0:
            raise ValueError("t = 0 has no curvature")

    @property
    def rho(self) -> float:
        return 2.0 * abs(self.t) / self.interval.b**3


def _require_positive(I: Interval) -> None:
    if I.a <= 0:
        raise ValueError(f"interval {I} must lie in (0, inf); the phase is singular at 0")


def _max_abs_derivative(I: Interval, t: float, y) -> np.ndarray:
    # Phi' is monotone in x, so the extremes sit at the endpoints
    y = np.asarray(y, dtype=float)
    return np.maximum(
        np.abs(-t / I.a**2 + 2 * math.pi * y), np.abs(-t / I.b**2 + 2 * math.pi * y)
    )


def eval_G(I: Interval, ph: Phase, tol: float = 1e-12) -> complex:
    """Adaptive evaluation with initial panels of at most half a local period."""
    return eval_G_result(I, ph, tol).value


def eval_G_result(I: Interval, ph: Phase, tol: float = 1e-12) -> QuadResult:
    _require_positive(I)
    dmax = float(_max_abs_derivative(I, ph.t, ph.y))
    width = I.length / 4 if dmax == 0 else min(math.pi / dmax, I.length / 4)
    return integrate_finite(
        lambda x: np.exp(1j * ph(x)), I.a, I.b, tol * I.length, max_panel_width=width
    )


def eval_G_batch(I: Interval, t: float, y) -> np.ndarray:
    """Vectorized G over many y by composite 12-point Gauss-Legendre.

    Every panel spans at most pi radians of phase, which puts the rule's
    error near rounding level.  y values are bucketed by power-of-two panel
    count so small |y| does not pay for the largest one.
    """
    _require_positive(I)
    y = np.asarray(y, dtype=float)
    flat = y.ravel()
    out = np.empty(flat.shape, dtype=complex)
    need = np.maximum(2, np.ceil(_max_abs_derivative(I, t, flat) * I.length / math.pi))
    bucket = np.ceil(np.log2(need)).astype(int)
    for key in np.unique(bucket):
        n_panels = 2 ** int(key)
        idx = np.flatnonzero(bucket == key)
        edges = np.linspace(I.a, I.b, n_panels + 1)
        half = 0.5 * np.diff(edges)
        nodes = ((0.5 * (edges[:-1] + edges[1:]))[:, None] + half[:, None] * _GL_NODES).ravel()
        weights = (half[:, None] * _GL_WEIGHTS).ravel()
        inv = t / nodes
        chunk = max(1, _BLOCK // len(nodes))
        for c in range(0, len(idx), chunk):
            sel = idx[c:c + chunk]
            phase = inv[None, :] + (2.0 * math.pi * flat[sel])[:, None] * nodes[None, :]
            out[sel] = np.exp(1j * phase) @ weights
    return out.reshape(y.shape)


def _far_field(I: Interval, t: float, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Two-term endpoint expansion of G and a bound on its remainder.

    Valid where ``Phi_y'`` has no zero on I.  Integrating by parts twice,

        G = [exp(i Phi) (1/(i Phi') - Phi''/Phi'^3)]_a^b + int exp(i Phi) (Phi''/Phi'^3)' dx,

    and the last term is at most ``|I| (max|Phi^(3)|/lam^3 + 3 max (Phi'')^2/lam^4)``
    with ``lam = min_I |Phi'|``.
    """
    a, b = I.a, I.b
    w = 2.0 * math.pi * y

    def edge(x):
        d1 = w - t / x**2
        d2 = 2.0 * t / x**3
        return np.exp(1j * (t / x + w * x)) * (1.0 / (1j * d1) - d2 / d1**3), np.abs(d1)

    eb, lb = edge(b)
    ea, la = edge(a)
    lam = np.minimum(la, lb)
    rem = I.length * (6.0 * t / a**4 / lam**3 + 3.0 * (2.0 * t / a**3) ** 2 / lam**4)
    return eb - ea, rem


def vdc_bound(I: Interval, ph: Phase, k: int = 2) -> float:
    """``rho^(-1/k)`` with ``rho = min_I |Phi^(k)|``; only k = 2 is supported."""
    if k != 2:
        raise ValueError("only the second-derivative bound (k = 2) is supported")
    return CurvatureBound(I, ph.t).rho ** -0.5


def stationary_band(I: Interval, t: float) -> tuple[float, float]:
    """y-range where ``Phi_y'`` vanishes inside I (for t > 0)."""
    return abs(t) / (2 * math.pi * I.b**2), abs(t) / (2 * math.pi * I.a**2)


def sup_G(I: Interval, t: float, samples_per_period: int = 40) -> tuple[float, float]:
    """``(max |G|, argmax y)`` over the real line.

    |G| is largest in the stationary band; the band and a guard region
    are sampled at ``samples_per_period`` points per beat period ``1/|I|``
    and the best sample is polished with a bounded scalar search.
    """
    _require_positive(I)
    s = 1.0 if t >= 0 else -1.0
    lo, hi = stationary_band(I, t)
    ys = np.arange(-0.5 * lo, 2.0 * hi, 1.0 / (samples_per_period * I.length))
    vals = np.abs(eval_G_batch(I, abs(t), ys))
    j = int(np.argmax(vals))
    step = ys[1] - ys[0]
    res = minimize_scalar(
        lambda y: -abs(eval_G(I, Phase(abs(t), y))),
        bounds=(ys[j] - step, ys[j] + step),
        method="bounded",
        options={"xatol": 1e-10 * max(1.0, abs(ys[j]))},
    )
    best, where = vals[j], ys[j]
    if -res.fun > best:
        best, where = -res.fun, res.x
    return float(best), s * float(where)


def empirical_vdc_constant(I: Interval, t: float) -> float:
    """``sup_y |G(y)| * rho^(1/2)`` with ``rho = 2|t|/b^3``."""
    return sup_G(I, t)[0] * math.sqrt(CurvatureBound(I, t).rho)


def _tail_bound(p: float, Y: float) -> float:
    # |G(y)| <= 3 / min|Phi'| <= 3 / (pi |y|) for |y| >= 2 * band top; both sides
    return 2.0 * (3.0 / math.pi) ** p * Y ** (1.0 - p) / (p - 1.0)


def norm_TmfI(
    I: Interval,
    ph_t: float,
    p: Exponent,
    tol: float = 1e-6,
    *,
    force_quadrature: bool = False,
    max_cutoff_factor: float = 1e5,
) -> float:
    """``(int |G(y)|^p dy)^(1/p)``.

    p = 2 is answered by Plancherel (``|I|^(1/2)``) unless
    ``force_quadrature``.  Otherwise the y-axis is cut at ``+-Y`` with Y
    doubled until the first-derivative tail bound is at most
    ``tol * result^p``; inside, panels are no wider than half the beat
    period ``1/|I|`` and the band has breakpoints uniform in ``sqrt(y)``.
    Far from the band G comes from its endpoint expansion, whose remainder
    is bounded and charged to the error budget.
    """
    _require_positive(I)
    q = _p(p)
    if q < 2:
        raise ValueError("norm_TmfI needs p >= 2 (use duality for p < 2)")
    if q == 2 and not force_quadrature:
        return math.sqrt(I.length)
    t = abs(ph_t)
    if t == 0:
        raise ValueError("t = 0 has no oscillation; use the sinc norm law")
    lo, hi = stationary_band(I, t)
    width = 0.5 / I.length
    band = np.linspace(math.sqrt(lo), math.sqrt(hi), 9) ** 2
    # beyond y_far the endpoint expansion is within delta (relative) of G
    delta = 0.1 * tol / q
    y_far = max(4.0 * hi, math.sqrt(6.0 * t * I.length / (I.a**4 * math.pi**2 * delta)))

    def exact(y):
        return np.abs(eval_G_batch(I, t, y)) ** q

    def far(y):
        g, rem = _far_field(I, t, y)
        mod = np.abs(g)
        return np.stack([mod**q, q * (mod + rem) ** (q - 1.0) * rem], axis=1)

    far_err = 0.0

    def piece(a, b, atol, breaks=None):
        nonlocal far_err
        out = 0.0
        for u, v, fn in ((a, min(b, -y_far), far), (max(a, -y_far), min(b, y_far), exact), (max(a, y_far), b, far)):
            if v <= u:
                continue
            res = integrate_finite(
                fn, u, v, atol, rtol=0.1 * tol, breakpoints=breaks, max_panel_width=width,
            ).value
            if fn is far:
                out += res[0].real
                far_err += res[1].real
            else:
                out += res.real
        return out

    Y = 2.0 * hi
    total = piece(-Y, Y, 1e-300, breaks=np.concatenate([[-lo, 0.0], band]))
    while _tail_bound(q, Y) + far_err > tol * total:
        if Y > max_cutoff_factor * y_far:
            raise ConvergenceError(
                f"tail cutoff exceeded {max_cutoff_factor:g} x far-field start",
                QuadResult(total ** (1 / q), (_tail_bound(q, Y) + far_err) / total, 1),
            )
        atol = 0.05 * tol * total
        total += piece(-2 * Y, -Y, atol) + piece(Y, 2 * Y, atol)
        Y *= 2.0
    return total ** (1.0 / q)
