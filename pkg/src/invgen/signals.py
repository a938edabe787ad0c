"""Uniform grids on a window of the real line and sampled complex signals."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, NamedTuple, Union

import numpy as np

__all__ = [
    "Grid",
    "Signal",
    "LebesgueExponent",
    "lp_norm",
    "linf_norm",
    "interpolation_inequality_check",
    "InterpolationCheck",
]


@dataclass(frozen=True)
class Grid:
    """Window ``[-L, L)`` sampled at ``N`` points ``x_j = -L + j*dx``.

    The DFT-dual frequency grid has spacing ``1/(2L)`` and points
    ``k/(2L)`` for ``k = -N/2 .. N/2-1``; :meth:`dual` returns it as a Grid.
    """

    half_width: float
    num_points: int

    def __post_init__(self):
        n = self.num_points
        if not (self.half_width > 0 and math.isfinite(self.half_width)):
            raise ValueError("half_width must be positive and finite")
        if n < 4 or n & (n - 1):
            raise ValueError(f"num_points must be a power of two >= 4, got {n}")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.num_points

    @property
    def points(self) -> np.ndarray:
        return -self.half_width + self.spacing * np.arange(self.num_points)

    @property
    def frequency_spacing(self) -> float:
        return 1.0 / (2.0 * self.half_width)

    @property
    def frequencies(self) -> np.ndarray:
        n = self.num_points
        return np.arange(-n // 2, n // 2) * self.frequency_spacing

    def dual(self) -> "Grid":
        return Grid(self.num_points / (4.0 * self.half_width), self.num_points)

    def reflection_index(self) -> np.ndarray:
        """Index map j -> -j (mod N) about the origin sample at j = N/2."""
        n = self.num_points
        return (n - np.arange(n)) % n


@dataclass(frozen=True, eq=False)
class Signal:
    grid: Grid
    samples: np.ndarray

    def __post_init__(self):
        s = np.array(self.samples, dtype=complex)
        if s.shape != (self.grid.num_points,):
            raise ValueError(
                f"expected {self.grid.num_points} samples, got shape {s.shape}"
            )
        if not np.all(np.isfinite(s)):
            raise ValueError("samples must be finite")
        s.flags.writeable = False
        object.__setattr__(self, "samples", s)

    @classmethod
    def from_function(cls, grid: Grid, func: Callable[[np.ndarray], np.ndarray]) -> "Signal":
        return cls(grid, func(grid.points))

    @classmethod
    def zeros(cls, grid: Grid) -> "Signal":
        return cls(grid, np.zeros(grid.num_points))

    def __mul__(self, c) -> "Signal":
        return Signal(self.grid, c * self.samples)

    __rmul__ = __mul__

    def __add__(self, other: "Signal") -> "Signal":
        _same_grid(self, other)
        return Signal(self.grid, self.samples + other.samples)

    def __sub__(self, other: "Signal") -> "Signal":
        _same_grid(self, other)
        return Signal(self.grid, self.samples - other.samples)

    def reflect(self) -> "Signal":
        """Sample-order reversal about the origin, x -> -x (periodic)."""
        return Signal(self.grid, self.samples[self.grid.reflection_index()])

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["x", "re", "im"])
            for x, v in zip(self.grid.points, self.samples):
                w.writerow([f"{x:.17g}", f"{v.real:.17g}", f"{v.imag:.17g}"])

    @classmethod
    def from_csv(cls, path) -> "Signal":
        data = np.loadtxt(Path(path), delimiter=",", skiprows=1, ndmin=2)
        x = data[:, 0]
        n = len(x)
        grid = Grid(-x[0], n)
        if not np.allclose(x, grid.points, rtol=0, atol=1e-9 * grid.half_width):
            raise ValueError("CSV abscissae do not form a symmetric power-of-two grid")
        return cls(grid, data[:, 1] + 1j * data[:, 2])


def _same_grid(f: Signal, g: Signal) -> None:
    if f.grid != g.grid:
        raise ValueError("signals live on different grids")


@dataclass(frozen=True)
class LebesgueExponent:
    p: float

    def __post_init__(self):
        if not (self.p > 1 and math.isfinite(self.p)):
            raise ValueError(f"Lebesgue exponent must lie in (1, inf), got {self.p}")

    @property
    def conjugate(self) -> float:
        return self.p / (self.p - 1.0)

    def dual(self) -> "LebesgueExponent":
        return LebesgueExponent(self.conjugate)


Exponent = Union[LebesgueExponent, float]


def _p(p: Exponent) -> float:
    return p.p if isinstance(p, LebesgueExponent) else LebesgueExponent(float(p)).p


def lp_norm(f: Signal, p: Exponent) -> float:
    """Rectangle-rule L^p norm ``(dx * sum |f_j|^p)^(1/p)`` on the window."""
    q = _p(p)
    a = np.abs(f.samples)
    scale = a.max()
    if scale == 0:
        return 0.0
    # scaled to avoid overflow for large p
    return float(scale * (f.grid.spacing * np.sum((a / scale) ** q)) ** (1.0 / q))


def linf_norm(f: Signal) -> float:
    return float(np.abs(f.samples).max())


class InterpolationCheck(NamedTuple):
    holds: bool
    lhs: float
    rhs: float


def interpolation_inequality_check(f: Signal, p: Exponent) -> InterpolationCheck:
    """Check ``|f|_p <= |f|_inf^(1-2/p) * |f|_2^(2/p)`` for p > 2."""
    q = _p(p)
    if q <= 2:
        raise ValueError("interpolation check needs p > 2")
    lhs = lp_norm(f, q)
    rhs = linf_norm(f) ** (1.0 - 2.0 / q) * lp_norm(f, 2.0) ** (2.0 / q)
    return InterpolationCheck(lhs <= rhs * (1.0 + 1e-12), lhs, rhs)
