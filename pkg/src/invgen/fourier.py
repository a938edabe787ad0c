"""Continuous Fourier transform on a grid and Fourier multiplier operators.

Convention: ``Ff(xi) = int exp(-2 pi i xi y) f(y) dy`` and
``F^-1 g(x) = int exp(2 pi i x y) g(y) dy``.  Under it the generator
``-d/dx`` of the shift group has symbol ``-2 pi i xi``.

On a grid the transform is a phase-corrected, ``dx``-scaled FFT.  Frequency
samples are stored in ascending order ``k = -N/2 .. N/2-1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .signals import Exponent, Grid, Signal, _p

__all__ = [
    "Multiplier",
    "forward_ft",
    "inverse_ft",
    "apply_multiplier",
    "make_osc_multiplier",
    "make_shift_multiplier",
    "make_regularized_semigroup_multiplier",
    "adjoint_multiplier",
    "reflect_multiplier",
    "operator_matrix",
    "exact_matrix_norm",
    "riesz_thorin_bound",
    "estimate_matrix_norm",
    "estimate_discrete_norm",
]


@dataclass(frozen=True, eq=False)
class Multiplier:
    """A symbol ``xi -> m(xi)`` with the metadata the operators need.

    ``singular_points`` maps frequencies where the formula is undefined to
    the value used there by convention.  ``sampler``, when set, overrides
    pointwise evaluation on grids (used for operations defined on the cyclic
    frequency index, such as reflection).
    """

    symbol: Callable[[np.ndarray], np.ndarray]
    unimodular: bool = False
    singular_points: Mapping[float, complex] = field(default_factory=dict)
    bound: float = 1.0
    name: str = ""
    sampler: Callable[[Grid], np.ndarray] | None = None

    def __call__(self, xi):
        arr = np.asarray(xi, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            val = np.asarray(self.symbol(arr), dtype=complex)
        val = np.broadcast_to(val, arr.shape).copy()
        for point, conv in self.singular_points.items():
            val[arr == point] = conv
        if not np.all(np.isfinite(val)):
            bad = arr[~np.isfinite(val)]
            raise ValueError(f"symbol {self.name!r} is not finite at xi = {bad[:3]}")
        if np.any(np.abs(val) > self.bound * (1.0 + 1e-12)):
            raise ValueError(f"symbol {self.name!r} exceeds its declared bound {self.bound}")
        return complex(val) if val.ndim == 0 else val

    def on_grid(self, grid: Grid) -> np.ndarray:
        """Symbol samples at ``grid.frequencies`` (ascending order)."""
        if self.sampler is not None:
            return np.asarray(self.sampler(grid), dtype=complex)
        return self(grid.frequencies)


def _signs(n: int) -> np.ndarray:
    k = np.arange(-n // 2, n // 2)
    return np.where(k % 2 == 0, 1.0, -1.0)


def forward_ft(f: Signal) -> Signal:
    """Samples of ``Ff`` on the dual grid (rectangle-rule quadrature)."""
    g = f.grid
    spec = np.fft.fftshift(np.fft.fft(f.samples)) * _signs(g.num_points) * g.spacing
    return Signal(g.dual(), spec)


def inverse_ft(g: Signal) -> Signal:
    """Exact inverse of :func:`forward_ft`."""
    space = g.grid.dual()
    vals = np.fft.ifft(np.fft.ifftshift(g.samples * _signs(space.num_points))) / space.spacing
    return Signal(space, vals)


def apply_multiplier(m: Multiplier, f: Signal) -> Signal:
    """``F^-1(m . Ff)`` on the grid."""
    sym = m.on_grid(f.grid)
    out = np.fft.ifft(np.fft.fft(f.samples) * np.fft.ifftshift(sym))
    return Signal(f.grid, out)


def make_osc_multiplier(t: float) -> Multiplier:
    """``xi -> exp(i t / xi)``, set to 1 at ``xi = 0``."""
    t = float(t)
    return Multiplier(
        lambda xi: np.exp(1j * (t / xi)),
        unimodular=True,
        singular_points={0.0: 1.0},
        name=f"exp(i*{t:g}/xi)",
    )


def make_shift_multiplier(s: float) -> Multiplier:
    """Symbol ``exp(-2 pi i s xi)`` of the shift ``f -> f(. - s)``."""
    s = float(s)
    return Multiplier(lambda xi: np.exp(-2j * math.pi * s * xi), unimodular=True, name=f"shift({s:g})")


def make_regularized_semigroup_multiplier(t: float, eps: float) -> Multiplier:
    """Symbol of ``exp(t (A - eps)^-1)`` for ``A = -d/dx``.

    ``exp(t / (-eps - 2 pi i xi))`` has modulus
    ``exp(-t eps / (eps^2 + 4 pi^2 xi^2)) <= 1``.  With ``eps = 0`` it is
    ``exp(i t / (2 pi xi))`` and takes the value 1 at the origin.
    """
    t, eps = float(t), float(eps)
    if t < 0:
        raise ValueError("t must be non-negative")
    if eps < 0:
        raise ValueError("eps must be non-negative")
    singular = {0.0: 1.0} if eps == 0 else {}
    return Multiplier(
        lambda xi: np.exp(t / (-eps - 2j * math.pi * xi)),
        unimodular=(eps == 0 or t == 0),
        singular_points=singular,
        name=f"regsg(t={t:g},eps={eps:g})",
    )


def adjoint_multiplier(m: Multiplier) -> Multiplier:
    sampler = m.sampler
    return Multiplier(
        lambda xi: np.conj(m.symbol(xi)),
        unimodular=m.unimodular,
        singular_points={k: np.conj(v) for k, v in m.singular_points.items()},
        bound=m.bound,
        name=f"conj({m.name})",
        sampler=None if sampler is None else (lambda g: np.conj(sampler(g))),
    )


def reflect_multiplier(m: Multiplier) -> Multiplier:
    """``xi -> m(-xi)``.

    On a grid the reflection acts on the cyclic frequency index
    ``k -> -k (mod N)``; the Nyquist bin ``-N/2`` is its own mirror image,
    so it keeps the original sample rather than ``m(+N/(4L))``.
    """
    return Multiplier(
        lambda xi: m.symbol(-xi),
        unimodular=m.unimodular,
        singular_points={-k: v for k, v in m.singular_points.items()},
        bound=m.bound,
        name=f"reflect({m.name})",
        sampler=lambda g: m.on_grid(g)[g.reflection_index()],
    )


def operator_matrix(m: Multiplier, grid: Grid) -> np.ndarray:
    """Dense N x N matrix of ``T_m`` on the grid (circulant)."""
    n = grid.num_points
    sym = np.fft.ifftshift(m.on_grid(grid))
    return np.fft.ifft(sym[:, None] * np.fft.fft(np.eye(n), axis=0), axis=0)


def exact_matrix_norm(a: np.ndarray, p: float) -> float:
    """``p -> p`` operator norm for p in {1, 2, inf}."""
    if p == 1:
        return float(np.abs(a).sum(axis=0).max())
    if p == 2:
        return float(np.linalg.norm(a, 2))
    if p == math.inf:
        return float(np.abs(a).sum(axis=1).max())
    raise ValueError("exact norms only for p in {1, 2, inf}")


def riesz_thorin_bound(a: np.ndarray, p: float) -> float:
    """Interpolated upper bound for ``|a|_{p->p}`` from exact endpoint norms.

    Uses the endpoints (2, inf) for p >= 2 and (1, 2) for p < 2.
    """
    if not 1 <= p < math.inf:
        raise ValueError("need 1 <= p < inf")
    n2 = exact_matrix_norm(a, 2)
    if p >= 2:
        theta = 2.0 / p
        return n2**theta * exact_matrix_norm(a, math.inf) ** (1.0 - theta)
    theta = 2.0 - 2.0 / p
    return exact_matrix_norm(a, 1) ** (1.0 - theta) * n2**theta


def _vec_norm(x: np.ndarray, p: float) -> float:
    return float(np.sum(np.abs(x) ** p) ** (1.0 / p))


def _dual_map(x: np.ndarray, p: float) -> np.ndarray:
    a = np.abs(x)
    with np.errstate(invalid="ignore", divide="ignore"):
        phase = np.where(a > 0, x / a, 0.0)
    return a ** (p - 1.0) * phase


def estimate_matrix_norm(a: np.ndarray, p: float, budget: int, seed: int = 0, starts: int = 8) -> float:
    """Lower bound for ``|a|_{p->p}`` by multi-start dual-map power iteration.

    Each step ``x <- J_q(a^H J_p(a x))`` (``J`` the duality maps) cannot
    decrease ``|a x|_p / |x|_p``; the best ratio over all starts is
    returned.  ``budget`` iterations are shared evenly across the starts.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    if p == 2:
        return exact_matrix_norm(a, 2)
    q = p / (p - 1.0)
    n = a.shape[1]
    rng = np.random.default_rng(seed)
    per_start = max(1, budget // starts)
    ah = a.conj().T
    best = 0.0
    for _ in range(starts):
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        x /= _vec_norm(x, p)
        prev = 0.0
        for _ in range(per_start):
            y = a @ x
            ratio = _vec_norm(y, p)
            best = max(best, ratio)
            if ratio <= prev * (1.0 + 1e-13):
                break
            prev = ratio
            z = ah @ _dual_map(y, p)
            x = _dual_map(z, q)
            nx = _vec_norm(x, p)
            if nx == 0:
                break
            x /= nx
    return best


def estimate_discrete_norm(
    m: Multiplier, g: Grid, p: Exponent, budget: int, seed: int = 0, starts: int = 8
) -> float:
    """Lower bound on the ``p -> p`` norm of ``T_m`` acting on grid signals.

    The rectangle-rule measure scales numerator and denominator alike, so
    this is the plain matrix norm.  ``p = 2`` is computed exactly.
    """
    return estimate_matrix_norm(operator_matrix(m, g), _p(p), budget, seed=seed, starts=starts)
