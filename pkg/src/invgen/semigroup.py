"""Shift group, Bessel kernel, and the regularized inverse-generator semigroup.

For ``A = -d/dx`` generating the shift group ``S(s)f = f(. - s)`` and
``eps > 0``,

    exp(t (A - eps)^-1) f = f + int_0^inf b_t(s) exp(-eps s) S(s) f ds,
    b_t(s) = -sqrt(t) J1(2 sqrt(t s)) / sqrt(s).

The time-domain route evaluates that integral by quadrature over shifted
copies of f; the frequency-domain route applies the closed-form symbol
``exp(t / (-eps - 2 pi i xi))``.  Agreement of the two is the check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .fourier import (
    apply_multiplier,
    forward_ft,
    inverse_ft,
    make_regularized_semigroup_multiplier,
    make_shift_multiplier,
)
from .quad import damped_truncation_point, integrate_semiinfinite_damped
from .signals import Exponent, Signal, _p, lp_norm
from .specfun import bessel_j1

__all__ = [
    "KernelParams",
    "ConfigurationError",
    "shift",
    "kernel_b",
    "kernel_envelope",
    "kernel_laplace_check",
    "regularized_semigroup_time",
    "regularized_semigroup_freq",
    "Witness",
    "SweepRow",
    "dichotomy_sweep",
    "SweepGate",
    "sweep_gates",
    "AgreementRow",
    "time_frequency_agreement",
]

# sup_u sqrt(u) |J1(u)| / sqrt(2) ~ 0.57; 1.0 leaves a safety factor
KERNEL_ENVELOPE_C = 1.0


class ConfigurationError(ValueError):
    """Grid or parameters cannot support the requested computation."""


@dataclass(frozen=True)
class KernelParams:
    t: float
    eps: float

    def __post_init__(self):
        if not (self.t >= 0 and math.isfinite(self.t)):
            raise ValueError("t must be a finite non-negative number")
        if not (self.eps >= 0 and math.isfinite(self.eps)):
            raise ValueError("eps must be a finite non-negative number")


def shift(f: Signal, s: float) -> Signal:
    """Band-limited shift ``f(. - s)``, periodic on the window."""
    return apply_multiplier(make_shift_multiplier(s), f)


def kernel_b(t: float, s):
    """``-sqrt(t) J1(2 sqrt(t s)) / sqrt(s)``, equal to ``-t`` at ``s = 0``."""
    if t < 0:
        raise ValueError("t must be non-negative")
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr < 0):
        raise ValueError("kernel_b is defined for s >= 0 only")
    u = 2.0 * np.sqrt(t * s_arr)
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(u > 0, bessel_j1(u) / u, 0.5)
    out = -2.0 * t * ratio
    return float(out) if out.ndim == 0 else out


def kernel_envelope(t: float) -> float:
    """K with ``|b_t(s)| <= K (1 + s)^(-3/4)`` for all s >= 0.

    Combines ``|b_t| <= t`` near the origin with the Bessel decay
    ``|b_t(s)| <= C t^(1/4) s^(-3/4)``.
    """
    return 2.0**0.75 * max(t, KERNEL_ENVELOPE_C * t**0.25)


def kernel_laplace_check(t: float, eps: float, tol: float = 1e-10) -> float:
    """Quadrature value of ``int_0^inf b_t(s) exp(-eps s) ds``.

    The exact answer is ``exp(-t/eps) - 1``; callers compare.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    if t == 0:
        return 0.0
    # local period of J1(2 sqrt(ts)) in s is 2 pi sqrt(s/t)
    res = integrate_semiinfinite_damped(
        lambda s: kernel_b(t, s),
        eps,
        tol,
        envelope=kernel_envelope(t),
        envelope_power=-0.75,
        max_panel_width=min(1.0 / eps, math.pi / math.sqrt(t) + 1.0),
    )
    return float(res.value.real)


def _spectral_l1(f: Signal) -> float:
    # sup over shifts of |f(. - s)| for a trigonometric polynomial
    return float(np.abs(np.fft.fft(f.samples)).sum() / f.grid.num_points)


def regularized_semigroup_time(f: Signal, kp: KernelParams, tol: float = 1e-7) -> Signal:
    """``f + int_0^Smax b_t(s) exp(-eps s) shift(f, s) ds`` by adaptive quadrature.

    The integrand is signal-valued; ``tol`` is an absolute sup-norm target.
    Shifts wrap periodically, so f must live in the central half of the
    window and the truncation point must stay below ``L/2``.
    """
    if not kp.eps > 0:
        raise ValueError("the time-domain route needs eps > 0")
    if kp.t == 0:
        return f
    grid = f.grid
    L = grid.half_width
    peak = float(np.abs(f.samples).max())
    outer = np.abs(grid.points) >= 0.5 * L
    if peak > 0 and np.abs(f.samples[outer]).max() > 1e-8 * peak:
        raise ConfigurationError("input must be supported in the central half of the window")
    envelope = kernel_envelope(kp.t) * _spectral_l1(f)
    s_max = damped_truncation_point(kp.eps, tol, envelope, -0.75)
    if s_max >= 0.5 * L:
        raise ConfigurationError(
            f"truncation point {s_max:.4g} exceeds the wrap-safe margin L/2 = {0.5 * L:.4g}; "
            "use a larger window or a larger eps"
        )
    spec = np.fft.fft(f.samples)
    freqs = np.fft.fftfreq(grid.num_points, d=grid.spacing)
    chunk = max(1, 4_000_000 // grid.num_points)

    def integrand(s):
        out = np.empty((len(s), grid.num_points), dtype=complex)
        for c in range(0, len(s), chunk):
            sc = s[c:c + chunk]
            phase = np.exp(-2j * math.pi * sc[:, None] * freqs[None, :])
            out[c:c + chunk] = np.fft.ifft(phase * spec[None, :], axis=1)
            out[c:c + chunk] *= kernel_b(kp.t, sc)[:, None]
        return out

    # resolve both the kernel's oscillation and the highest occupied frequency
    xi_max = float(np.abs(freqs[np.abs(spec) > 1e-14 * np.abs(spec).max()]).max())
    width = min(1.0 / kp.eps, math.pi / math.sqrt(kp.t) + 1.0, 0.5 / max(xi_max, 1e-300))
    res = integrate_semiinfinite_damped(
        integrand, kp.eps, tol, envelope=envelope, envelope_power=-0.75,
        max_panel_width=width,
    )
    return Signal(grid, f.samples + res.value)


def regularized_semigroup_freq(f: Signal, kp: KernelParams) -> Signal:
    """Apply the symbol ``exp(t / (-eps - 2 pi i xi))``; eps = 0 gives the limit."""
    return apply_multiplier(make_regularized_semigroup_multiplier(kp.t, kp.eps), f)


@dataclass(frozen=True)
class Witness:
    """Frequency band ``[c eps^power, 2 c eps^power] * scale`` for the sweep.

    The witness is ``F^-1(conj(u) 1_band)`` with ``u = m/|m|`` the phase of
    the symbol: spread out in space, refocused by the operator.
    """

    c: float = 1.0
    power: float = 0.5
    scale: float = 1.0

    @classmethod
    def constant_damping(cls, t: float, level: float = 0.5) -> "Witness":
        """Band whose lower edge sees damping ``|m| ~ exp(-level)`` at every eps.

        ``t eps / (4 pi^2 xi^2) = level`` gives ``xi = sqrt(t eps / level) / (2 pi)``.
        """
        return cls(c=math.sqrt(t / level) / (2.0 * math.pi), power=0.5)

    def band(self, eps: float) -> tuple[float, float]:
        lo = self.c * eps**self.power * self.scale
        return lo, 2.0 * lo


class SweepRow(NamedTuple):
    t: float
    eps: float
    p: float
    ratio: float
    cauchy_increment: float


def _witness_ratio(grid, mult, band, q, t) -> float:
    xi = grid.frequencies
    if band[1] >= -xi[0]:
        raise ConfigurationError(f"witness band {band} reaches the Nyquist frequency {-xi[0]:.4g}")
    # group delay of exp(i t / (2 pi xi)) at the band bottom
    spread = t / (4.0 * math.pi**2 * band[0] ** 2)
    if spread >= 0.5 * grid.half_width:
        raise ConfigurationError(
            f"witness spreads over {spread:.4g}, beyond half the window {0.5 * grid.half_width:.4g}"
        )
    inside = (xi >= band[0]) & (xi <= band[1])
    if inside.sum() < 4:
        raise ConfigurationError(f"witness band {band} holds fewer than 4 frequency bins")
    sym = mult.on_grid(grid)
    mod = np.abs(sym)
    phase = np.zeros_like(sym)
    np.divide(np.conj(sym), mod, out=phase, where=inside)
    g = inverse_ft(Signal(grid.dual(), phase))
    out = inverse_ft(Signal(grid.dual(), np.where(inside, mod, 0.0)))
    return lp_norm(out, q) / lp_norm(g, q)


def dichotomy_sweep(
    f: Signal,
    t_values: Iterable[float],
    eps_values: Sequence[float],
    p: Exponent,
    *,
    witness: Witness | None = None,
    comparison_delta: float | None = None,
) -> list[SweepRow]:
    """Probe uniform boundedness and convergence as eps decreases.

    For each (t, eps): the witness ratio ``|T g|_p / |g|_p`` and the relative
    L^2 increment ``|T_eps f - T_prev f|_2 / |f|_2`` against the previous
    (larger) eps (NaN on the first row).  ``comparison_delta`` shifts every
    symbol to ``eps + delta``, the exponentially stable comparison case.
    The default witness is :meth:`Witness.constant_damping` for each t.
    """
    q = _p(p)
    eps_values = [float(e) for e in eps_values]
    if any(b >= a for a, b in zip(eps_values, eps_values[1:])):
        raise ValueError("eps_values must be strictly decreasing")
    grid = f.grid
    norm_f = lp_norm(f, 2)
    spec = forward_ft(f)
    rows = []
    for t in sorted(float(v) for v in t_values):
        prev = None
        wit = witness or Witness.constant_damping(t)
        for eps in eps_values:
            eff = eps + (comparison_delta or 0.0)
            mult = make_regularized_semigroup_multiplier(t, eff)
            ratio = _witness_ratio(grid, mult, wit.band(eps), q, t)
            cur = inverse_ft(Signal(spec.grid, spec.samples * mult.on_grid(grid)))
            inc = math.nan if prev is None else lp_norm(cur - prev, 2) / norm_f
            rows.append(SweepRow(t, eps, q, ratio, inc))
            prev = cur
    return rows


class SweepGate(NamedTuple):
    name: str
    passed: bool
    detail: str


def sweep_gates(rows: Sequence[SweepRow], *, contraction_tol: float = 1e-10,
                cauchy_target: float = 1e-3, min_growth: float = 2.0) -> list[SweepGate]:
    """Checks on a sweep report.

    p = 2: every ratio is at most 1, and at the smallest t the Cauchy
    increments decrease and end below ``cauchy_target``.  p > 2: at the
    largest t the ratio rises as eps decreases, by ``min_growth`` overall.
    Larger t needs smaller eps for the same regime ((t, eps) and
    (k t, k eps) are equivalent under dilation), hence the split.
    """
    gates = []
    by_p: dict[float, list[SweepRow]] = {}
    for r in rows:
        by_p.setdefault(r.p, []).append(r)
    for q, rs in sorted(by_p.items()):
        ts = sorted({r.t for r in rs})
        if q == 2:
            worst = max(r.ratio for r in rs)
            gates.append(SweepGate("p2-contraction", worst <= 1.0 + contraction_tol, f"max ratio = {worst:.12g}"))
            inc = np.array([r.cauchy_increment for r in rs if r.t == ts[0]][1:])
            ok = len(inc) > 0 and bool(np.all(np.diff(inc) < 0)) and inc[-1] < cauchy_target
            last = inc[-1] if len(inc) else math.nan
            gates.append(SweepGate("p2-cauchy", ok, f"t = {ts[0]:g}: last increment = {last:.3g}"))
        else:
            ratios = np.array([r.ratio for r in rs if r.t == ts[-1]])
            rising = bool(np.all(np.diff(ratios) > 0))
            growth = float(ratios[-1] / ratios[0])
            gates.append(SweepGate(f"p{q:g}-monotone", rising, f"t = {ts[-1]:g}"))
            gates.append(SweepGate(f"p{q:g}-growth", growth >= min_growth, f"t = {ts[-1]:g}: growth = {growth:.4g}"))
    return gates


class AgreementRow(NamedTuple):
    signal: int
    t: float
    eps: float
    relative_error: float


def time_frequency_agreement(
    signals: Sequence[Signal], t_values: Iterable[float], eps_values: Iterable[float], tol: float = 1e-7
) -> list[AgreementRow]:
    """Relative L^2 gap between the quadrature and symbol routes."""
    rows = []
    t_values, eps_values = list(t_values), list(eps_values)
    for k, f in enumerate(signals):
        nf = lp_norm(f, 2)
        for t in t_values:
            for eps in eps_values:
                kp = KernelParams(t, eps)
                gap = regularized_semigroup_time(f, kp, tol) - regularized_semigroup_freq(f, kp)
                rows.append(AgreementRow(k, float(t), float(eps), lp_norm(gap, 2) / nf))
    return rows
