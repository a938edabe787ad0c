"""Blow-up sweep for the multiplier ``exp(i t / xi)`` on sinc witnesses.

For ``I(rho) = [rho^(-1/3)/2, rho^(-1/3)]`` the ratio
``|f_I|_p / |T_m f_I|_p`` is a lower bound for the multiplier norm.  It
stays at 1 for p = 2 and grows like ``rho^(1/6 - 1/(3p))`` for p > 2.
"""
from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .fourier import (
    Multiplier,
    adjoint_multiplier,
    estimate_discrete_norm,
    make_osc_multiplier,
)
from .oscillatory import CurvatureBound, empirical_vdc_constant, norm_TmfI
from .quad import ConvergenceError
from .signals import Exponent, Grid, _p
from .testfam import Interval, norm_f_I, coupled_interval

__all__ = [
    "ExperimentRecord",
    "FitResult",
    "Gate",
    "DualityReport",
    "rho_grid",
    "blowup_record",
    "blowup_sweep",
    "fit_exponent",
    "leave_one_out_slopes",
    "interpolation_lower_bound",
    "blowup_gates",
    "duality_transfer_check",
    "write_blowup_csv",
    "read_blowup_csv",
    "write_fit_csv",
    "fit_summary",
    "BLOWUP_HEADER",
    "FIT_HEADER",
]

BLOWUP_HEADER = ("rho", "p", "a", "b", "norm_fI", "norm_TmfI", "ratio", "emp_M", "flag")
FIT_HEADER = ("p", "slope", "intercept", "r_squared", "predicted_slope")
FLAG_NONCONVERGENT = "nonconvergent"

# hard and soft thresholds used by blowup_gates
FLAT_TOL = 1e-6
FLAT_SLOPE_TOL = 0.01
MIN_SLOPE = 0.04
SLOPE_BAND = 0.03
MONOTONE_NOISE = 0.05
MIN_GROWTH = 2.0


@dataclass(frozen=True)
class ExperimentRecord:
    rho: float
    p: float
    a: float
    b: float
    norm_fI: float
    norm_TmfI: float
    ratio: float
    emp_M: float
    flag: str = ""

    @property
    def interval(self) -> Interval:
        return Interval(self.a, self.b)

    @property
    def flagged(self) -> bool:
        return bool(self.flag)


@dataclass(frozen=True)
class FitResult:
    p: float
    slope: float
    intercept: float
    r_squared: float
    records_used: int

    @property
    def predicted_slope(self) -> float:
        return 1.0 / 6.0 - 1.0 / (3.0 * self.p)


class Gate(NamedTuple):
    name: str
    passed: bool
    hard: bool
    detail: str


def rho_grid(rho_min: float, rho_max: float, points_per_decade: int) -> np.ndarray:
    """Geometric grid from rho_min to rho_max, at least ``points_per_decade`` per decade."""
    if not 0 < rho_min < rho_max:
        raise ValueError("need 0 < rho_min < rho_max")
    if points_per_decade < 1:
        raise ValueError("points_per_decade must be >= 1")
    n = int(math.ceil(round(math.log10(rho_max / rho_min) * points_per_decade, 9)))
    return np.geomspace(rho_min, rho_max, max(n, 1) + 1)


def blowup_record(rho: float, p: float, t: float = 1.0, tol: float = 1e-6) -> ExperimentRecord:
    """One sweep point; quadrature failure yields a flagged record."""
    I = coupled_interval(rho)
    nf = norm_f_I(I, p)
    flag = ""
    try:
        nt = norm_TmfI(I, t, p, tol)
    except ConvergenceError as exc:
        nt = float(exc.result.value.real)
        flag = FLAG_NONCONVERGENT
    try:
        emp = empirical_vdc_constant(I, t)
    except ConvergenceError:
        emp = math.nan
        flag = FLAG_NONCONVERGENT
    return ExperimentRecord(float(rho), float(p), I.a, I.b, nf, nt, nf / nt, emp, flag)


def _record_args(args):
    return blowup_record(*args)


def blowup_sweep(
    p: Exponent,
    rho_min: float = 1e2,
    rho_max: float = 1e6,
    points_per_decade: int = 4,
    t: float = 1.0,
    tol: float = 1e-6,
    workers: int = 1,
) -> list[ExperimentRecord]:
    """Records over a geometric rho grid, sorted by rho.

    With ``workers > 1`` points are farmed out to processes; each point is
    a pure function of its arguments, so the output does not depend on the
    worker count.
    """
    q = _p(p)
    if q < 2:
        raise ValueError("direct sweeps need p >= 2; use duality_transfer_check for p < 2")
    if rho_min < 10 or rho_max > 1e8:
        raise ValueError("rho range must lie within [10, 1e8]")
    if t <= 0:
        raise ValueError("t must be positive")
    jobs = [(float(r), q, float(t), float(tol)) for r in rho_grid(rho_min, rho_max, points_per_decade)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_record_args, jobs))
    else:
        records = [_record_args(j) for j in jobs]
    return sorted(records, key=lambda r: r.rho)


def fit_exponent(records: Sequence[ExperimentRecord]) -> FitResult:
    """Least-squares slope of log(ratio) against log(rho) over unflagged records."""
    good = [r for r in records if not r.flagged]
    if len(good) < 5:
        raise ValueError(f"need at least 5 unflagged records, got {len(good)}")
    ps = {r.p for r in good}
    if len(ps) != 1:
        raise ValueError(f"records mix exponents {sorted(ps)}")
    rho = np.array([r.rho for r in good])
    span = math.log10(rho.max() / rho.min())
    if span < 3 - 1e-9:
        raise ValueError(f"records span {span:.2f} decades; at least 3 are needed")
    x = np.log(rho)
    y = np.log([r.ratio for r in good])
    A = np.column_stack([x, np.ones_like(x)])
    (slope, intercept), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - float(np.sum(resid**2)) / ss_tot
    return FitResult(ps.pop(), float(slope), float(intercept), r2, len(good))


def leave_one_out_slopes(records: Sequence[ExperimentRecord]) -> np.ndarray:
    good = [r for r in records if not r.flagged]
    return np.array([fit_exponent(good[:k] + good[k + 1:]).slope for k in range(len(good))])


def interpolation_lower_bound(rec: ExperimentRecord, t: float = 1.0) -> float:
    """Lower bound on the ratio from ``|G|_p^p <= |G|_inf^(p-2) |G|_2^2``.

    ``|G|_inf = emp_M rho^(-1/2)`` and ``|G|_2 = |I|^(1/2)``, which turns
    into ``const * rho^(1/6 - 1/(3p)) / emp_M^(1 - 2/p)`` on the sweep.
    """
    I = rec.interval
    sup = rec.emp_M / math.sqrt(CurvatureBound(I, t).rho)
    return rec.norm_fI / (sup ** (1.0 - 2.0 / rec.p) * I.length ** (1.0 / rec.p))


def blowup_gates(records: Sequence[ExperimentRecord], fit: FitResult) -> list[Gate]:
    """Acceptance checks for one exponent.

    p = 2: flat ratio and flat fit (hard).  p > 2: positive slope with
    margin and monotone growth (hard); overall growth factor and the slope
    band around the prediction are reported as soft checks.
    """
    good = [r for r in records if not r.flagged]
    ratios = np.array([r.ratio for r in good])
    emp = np.array([r.emp_M for r in good])
    gates = []
    if fit.p == 2:
        dev = float(np.max(np.abs(ratios - 1.0)))
        gates.append(Gate("p2-flat-ratio", dev <= FLAT_TOL, True, f"max |ratio-1| = {dev:.3g}"))
        gates.append(Gate("p2-flat-slope", abs(fit.slope) <= FLAT_SLOPE_TOL, True, f"slope = {fit.slope:.4g}"))
        return gates
    steps = ratios[1:] / ratios[:-1]
    worst = float(steps.min()) if len(steps) else 1.0
    growth = float(ratios[-1] / ratios[0])
    gates.append(Gate("slope-positive", fit.slope >= MIN_SLOPE, True, f"slope = {fit.slope:.4g} (>= {MIN_SLOPE})"))
    gates.append(Gate(
        "monotone", worst >= 1.0 - MONOTONE_NOISE, True, f"smallest step ratio = {worst:.4g}"
    ))
    gates.append(Gate("growth-factor", growth >= MIN_GROWTH, False, f"ratio(max)/ratio(min) = {growth:.4g}"))
    band = abs(fit.slope - fit.predicted_slope) <= SLOPE_BAND
    gates.append(Gate(
        "slope-band", band, False, f"slope {fit.slope:.4g} vs predicted {fit.predicted_slope:.4g} +- {SLOPE_BAND}"
    ))
    spread = float(np.nanmax(emp) / np.nanmin(emp))
    gates.append(Gate("vdc-stable", spread < 2.0, False, f"emp_M max/min = {spread:.4g}"))
    return gates


@dataclass(frozen=True)
class DualityReport:
    p: float
    p_conjugate: float
    estimate_p: float
    estimate_conjugate: float

    @property
    def relative_gap(self) -> float:
        top = max(self.estimate_p, self.estimate_conjugate)
        return 0.0 if top == 0 else abs(self.estimate_p - self.estimate_conjugate) / top

    def agrees(self, slack: float = 0.05) -> bool:
        return self.relative_gap <= slack


def duality_transfer_check(
    p: Exponent,
    multiplier: Multiplier | None = None,
    grid: Grid | None = None,
    budget: int = 400,
    seed: int = 0,
) -> DualityReport:
    """Estimate ``T_m`` on L^p and its adjoint on L^p' on a tiny grid.

    The two norms coincide exactly in finite dimensions, so agreement is a
    check on the estimator and shows that growth for p > 2 carries over
    to p' < 2.
    """
    q = _p(p)
    if q < 2:
        raise ValueError("pass the exponent p >= 2; its conjugate is derived")
    m = multiplier if multiplier is not None else make_osc_multiplier(1.0)
    g = grid if grid is not None else Grid(4.0, 16)
    if g.num_points > 16:
        raise ValueError("duality checks run on grids with N <= 16")
    qc = q / (q - 1.0)
    est = estimate_discrete_norm(m, g, q, budget, seed=seed)
    est_c = estimate_discrete_norm(adjoint_multiplier(m), g, qc, budget, seed=seed)
    return DualityReport(q, qc, est, est_c)


def _fmt(x: float) -> str:
    return format(x, ".17g")


def write_blowup_csv(records: Iterable[ExperimentRecord], path) -> None:
    rows = sorted(records, key=lambda r: (r.p, r.rho))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(BLOWUP_HEADER)
        for r in rows:
            w.writerow([_fmt(r.rho), _fmt(r.p), _fmt(r.a), _fmt(r.b), _fmt(r.norm_fI),
                        _fmt(r.norm_TmfI), _fmt(r.ratio), _fmt(r.emp_M), r.flag])


def read_blowup_csv(path) -> list[ExperimentRecord]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != BLOWUP_HEADER:
            raise ValueError(f"unexpected header {header}")
        return [ExperimentRecord(*map(float, row[:8]), flag=row[8]) for row in reader]


def write_fit_csv(fits: Iterable[FitResult], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(FIT_HEADER)
        for f in fits:
            w.writerow([_fmt(f.p), _fmt(f.slope), _fmt(f.intercept), _fmt(f.r_squared),
                        _fmt(f.predicted_slope)])


def fit_summary(fit: FitResult, gates: Sequence[Gate] = ()) -> str:
    lines = [
        f"fit p = {fit.p:g} ({fit.records_used} records)",
        f"  slope           {fit.slope:.6f}",
        f"  predicted slope {fit.predicted_slope:.6f}",
        f"  intercept       {fit.intercept:.6f}",
        f"  r^2             {fit.r_squared:.6f}",
    ]
    for g in gates:
        kind = "hard" if g.hard else "soft"
        lines.append(f"  [{'PASS' if g.passed else 'FAIL'}] {g.name} ({kind}): {g.detail}")
    return "\n".join(lines)
