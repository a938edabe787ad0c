"""Command-line front end: ``invgen {blowup,semigroup,kernel,vdc,selftest}``.

Exit status: 0 when every hard gate passes, 1 on a gate failure, 2 on a
configuration error.  Every default reproduces the acceptance runs.
"""
from __future__ import annotations

import argparse
import csv
import math
import sys
import time
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import experiments as ex
from .fourier import (
    Multiplier,
    apply_multiplier,
    estimate_matrix_norm,
    forward_ft,
    inverse_ft,
    make_osc_multiplier,
    operator_matrix,
    reflect_multiplier,
    riesz_thorin_bound,
)
from .oscillatory import CurvatureBound, Phase, eval_G, eval_G_batch, sup_G, vdc_bound
from .quad import integrate_finite
from .semigroup import (
    ConfigurationError,
    KernelParams,
    kernel_b,
    kernel_laplace_check,
    regularized_semigroup_freq,
    regularized_semigroup_time,
    sweep_gates,
    dichotomy_sweep,
    time_frequency_agreement,
)
from .signals import Grid, Signal, lp_norm
from .specfun import bessel_j1, sinc
from .svgplot import Series, loglog_svg
from .testfam import compute_Np, coupled_interval

EXIT_OK, EXIT_GATE, EXIT_CONFIG = 0, 1, 2

DEFAULT_EPS = ",".join(f"2^-{k}" for k in range(13))
# p = 4 frozen regression value at rho = 100 (t = 1, tol = 1e-6)
RATIO_P4_RHO100 = 1.022457928562521


def _fmt(x: float) -> str:
    return format(x, ".17g")


def _parse_number(text: str) -> float:
    text = text.strip()
    if "^" in text:
        base, exp = text.split("^", 1)
        return float(base) ** float(exp)
    return float(text)


def _parse_list(text: str) -> list[float]:
    try:
        return [_parse_number(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}: {exc}") from None


def _parse_range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected MIN:MAX, got {text!r}") from None
    return lo, hi


def _write_rows(path: Path, header: Sequence[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) if isinstance(v, float) else v for v in row])


def _report(name: str, passed: bool, detail: str = "", hard: bool = True) -> None:
    tag = "PASS" if passed else ("FAIL" if hard else "WARN")
    print(f"[{tag}] {name}" + (f": {detail}" if detail else ""))


def mexican_hat(grid: Grid) -> Signal:
    """``(1 - x^2) exp(-x^2/2)``: smooth, zero mean, so it lies in the range of d/dx."""
    return Signal.from_function(grid, lambda x: (1 - x**2) * np.exp(-(x**2) / 2))


def agreement_signals(grid: Grid) -> list[Signal]:
    return [
        Signal.from_function(grid, lambda x: np.exp(-(x**2) / 4) * np.cos(1.5 * x)),
        Signal.from_function(grid, lambda x: np.exp(-(x**2) / 8)),
        Signal.from_function(
            grid, lambda x: np.exp(-((x - 3) ** 2) / 2 + 2j * x) + 0.5 * np.exp(-((x + 4) ** 2) / 6 - 1j * x)
        ),
    ]


# ---------------------------------------------------------------- blowup

def cmd_blowup(cfg: argparse.Namespace) -> int:
    lo, hi = cfg.rho
    decades = math.log10(hi / lo) if lo > 0 and hi > lo else 0.0
    if decades < 3 - 1e-9:
        print(f"error: rho range {lo:g}:{hi:g} spans {decades:.2f} decades; the fit needs at least 3",
              file=sys.stderr)
        return EXIT_CONFIG
    if any(p < 2 for p in cfg.p):
        print("error: blowup sweeps need p >= 2 (p < 2 follows by duality)", file=sys.stderr)
        return EXIT_CONFIG
    if len(cfg.t) != 1 or cfg.t[0] <= 0:
        print("error: blowup takes a single positive --t", file=sys.stderr)
        return EXIT_CONFIG
    out = cfg.out
    fits, failed, series = [], [], []
    for p in cfg.p:
        t0 = time.perf_counter()
        records = ex.blowup_sweep(p, lo, hi, cfg.points_per_decade, cfg.t[0], cfg.tol, cfg.workers)
        ex.write_blowup_csv(records, out / f"blowup_p{p:g}.csv")
        fit = ex.fit_exponent(records)
        gates = ex.blowup_gates(records, fit)
        fits.append(fit)
        print(ex.fit_summary(fit, gates))
        print(f"  ({time.perf_counter() - t0:.1f} s)")
        failed += [g.name for g in gates if g.hard and not g.passed]
        good = [r for r in records if not r.flagged]
        rho = [r.rho for r in good]
        series.append(Series(f"p = {p:g}", rho, [r.ratio for r in good]))
        guide = [good[0].ratio * (x / rho[0]) ** fit.predicted_slope for x in rho]
        series.append(Series(f"p = {p:g} predicted slope {fit.predicted_slope:.4f}", rho, guide, dashed=True))
    ex.write_fit_csv(fits, out / "blowup_fit.csv")
    if cfg.svg:
        svg = loglog_svg(series, "norm ratio |f_I|_p / |T f_I|_p", "rho", "ratio")
        (out / "blowup.svg").write_text(svg)
    if failed:
        print(f"hard gate failure: {', '.join(failed)}")
        return EXIT_GATE
    return EXIT_OK


# ------------------------------------------------------------- semigroup

def cmd_semigroup(cfg: argparse.Namespace) -> int:
    grid = Grid(cfg.grid_L, cfg.grid_N)
    f = mexican_hat(grid)
    eps = sorted(cfg.eps, reverse=True)
    rows = []
    for p in cfg.p:
        rows += dichotomy_sweep(f, cfg.t, eps, p)
    _write_rows(cfg.out / "semigroup_sweep.csv", ("t", "eps", "p", "ratio", "cauchy_increment"), rows)
    ok = True
    for g in sweep_gates(rows):
        _report(g.name, g.passed, g.detail)
        ok &= g.passed

    # exponentially stable comparison: same witnesses, symbol at eps + 1
    cmp_rows = dichotomy_sweep(f, [max(cfg.t)], eps, max(cfg.p), comparison_delta=1.0)
    _write_rows(cfg.out / "semigroup_comparison.csv", ("t", "eps", "p", "ratio", "cauchy_increment"), cmp_rows)
    worst = max(r.ratio for r in cmp_rows)
    _report("comparison-bounded", worst <= 1.0, f"max ratio = {worst:.4g}")
    ok &= worst <= 1.0

    agree_grid = Grid(128.0, 2048)
    agree = time_frequency_agreement(agreement_signals(agree_grid), (0.5, 1.0), (0.3, 1.0, 3.0))
    _write_rows(cfg.out / "semigroup_agreement.csv", ("signal", "t", "eps", "relative_error"), agree)
    gap = max(r.relative_error for r in agree)
    _report("time-frequency-agreement", gap <= 1e-3, f"max relative L2 gap = {gap:.3g}")
    ok &= gap <= 1e-3
    return EXIT_OK if ok else EXIT_GATE


# ---------------------------------------------------------------- kernel

def cmd_kernel(cfg: argparse.Namespace) -> int:
    rows, ok = [], True
    for t in cfg.t:
        for e in cfg.eps:
            val = kernel_laplace_check(t, e, 1e-10)
            exact = math.expm1(-t / e)
            err = abs(val - exact)
            rows.append((float(t), float(e), val, exact, err))
            ok &= err <= 1e-6
    _write_rows(cfg.out / "kernel.csv", ("t", "eps", "quadrature", "exact", "abs_error"), rows)
    s = np.linspace(0.0, 20.0, 81)
    table = [(float(t), float(si), float(kernel_b(t, si))) for t in cfg.t for si in s]
    _write_rows(cfg.out / "kernel_table.csv", ("t", "s", "b"), table)
    worst = max(r[4] for r in rows)
    _report("laplace-identity", ok, f"max error = {worst:.3g} over {len(rows)} points")
    return EXIT_OK if ok else EXIT_GATE


# ------------------------------------------------------------------- vdc

def cmd_vdc(cfg: argparse.Namespace) -> int:
    lo, hi = cfg.rho
    if not 0 < lo < hi:
        print("error: need 0 < MIN < MAX for --rho", file=sys.stderr)
        return EXIT_CONFIG
    t = cfg.t[0]
    rows, ok = [], True
    for rho in ex.rho_grid(lo, hi, cfg.points_per_decade):
        I = coupled_interval(rho)
        curv = CurvatureBound(I, t).rho
        sup, arg = sup_G(I, t)
        bound = vdc_bound(I, Phase(t, arg))
        ok &= sup <= I.length * (1 + 1e-12)
        ok &= math.isclose(bound, curv**-0.5, rel_tol=1e-14)
        rows.append((float(rho), I.a, I.b, curv, sup, arg, sup * math.sqrt(curv)))
    _write_rows(cfg.out / "vdc.csv", ("rho", "a", "b", "curvature", "sup_G", "argmax_y", "emp_M"), rows)
    emp = np.array([r[6] for r in rows])
    spread = float(emp.max() / emp.min())
    _report("sup|G| <= |I| and bound algebra", ok)
    _report("vdc-stable", spread < 2.0, f"emp_M in [{emp.min():.4g}, {emp.max():.4g}], ratio {spread:.4g}")
    return EXIT_OK if ok and spread < 2.0 else EXIT_GATE


# -------------------------------------------------------------- selftest

def _selftest_checks(seed: int) -> list[tuple[str, Callable[[], tuple[bool, str]]]]:
    def plancherel():
        g = Grid(8.0, 64)
        f = Signal.from_function(g, lambda x: np.exp(-x**2) * (1 + 1j * x))
        back = inverse_ft(forward_ft(f))
        err = lp_norm(back - f, 2) / lp_norm(f, 2)
        gap = abs(lp_norm(forward_ft(f), 2) - lp_norm(f, 2)) / lp_norm(f, 2)
        return err < 1e-13 and gap < 1e-13, f"round trip {err:.2g}, isometry {gap:.2g}"

    def n2():
        v = compute_Np(2)
        return abs(v - 1) < 1e-10, f"N_2 = {v:.15g}"

    def laplace():
        v = kernel_laplace_check(1.0, 1.0)
        err = abs(v - math.expm1(-1.0))
        return err < 1e-6, f"error {err:.2g}"

    def specfun():
        err = abs(bessel_j1(1.0) - 0.4400505857449335)
        zeros = float(np.max(np.abs(sinc(np.arange(1.0, 6.0)))))
        odd = bool(np.all(bessel_j1(-np.linspace(0, 50, 101)) == -bessel_j1(np.linspace(0, 50, 101))))
        return err < 1e-14 and zeros == 0.0 and odd, f"J1(1) error {err:.2g}"

    def quadrature():
        r = integrate_finite(lambda x: x**2, 0.0, 1.0, 1e-12)
        return abs(r.value - 1 / 3) < 1e-14, f"int x^2 = {r.value.real:.16g}"

    def reflection():
        g = Grid(4.0, 16)
        m = make_osc_multiplier(1.0)
        f = Signal.from_function(g, lambda x: np.exp(-x**2) * (1 + x))
        lhs = apply_multiplier(m, f.reflect()).reflect()
        rhs = apply_multiplier(reflect_multiplier(m), f)
        err = float(np.max(np.abs(lhs.samples - rhs.samples)))
        return err < 1e-12, f"error {err:.2g}"

    def duality():
        rep = ex.duality_transfer_check(4, seed=seed)
        return rep.agrees(), f"{rep.estimate_p:.6g} vs {rep.estimate_conjugate:.6g}"

    def riesz_thorin():
        rng = np.random.default_rng(seed)
        g = Grid(4.0, 16)
        worst = -math.inf
        for _ in range(5):
            sym = rng.uniform(0, 1, 16) * np.exp(2j * math.pi * rng.uniform(size=16))
            a = operator_matrix(Multiplier(lambda xi: 1.0, sampler=lambda _g, s=sym: s), g)
            p = float(rng.uniform(2.1, 8.0))
            est = estimate_matrix_norm(a, p, 200, seed=seed)
            worst = max(worst, est / riesz_thorin_bound(a, p) - 1)
        return worst <= 1e-6, f"max est/bound - 1 = {worst:.2g}"

    def oscillatory():
        I = coupled_interval(1e3)
        ys = np.array([-3.0, 0.0, 5.0, 40.0])
        batch = eval_G_batch(I, 1.0, ys)
        ref = np.array([eval_G(I, Phase(1.0, y)) for y in ys])
        err = float(np.max(np.abs(batch - ref)))
        return err < 1e-12, f"batch vs adaptive {err:.2g}"

    def blowup_p4():
        r = ex.blowup_record(1e2, 4.0)
        rel = abs(r.ratio / RATIO_P4_RHO100 - 1)
        return rel < 1e-6 and r.ratio >= ex.interpolation_lower_bound(r), f"ratio {r.ratio:.10g}"

    def semigroup():
        g = Grid(64.0, 1024)
        f = agreement_signals(g)[0]
        kp = KernelParams(1.0, 1.0)
        gap = lp_norm(regularized_semigroup_time(f, kp) - regularized_semigroup_freq(f, kp), 2) / lp_norm(f, 2)
        return gap < 1e-3, f"time vs frequency {gap:.2g}"

    def sweep_p2():
        g = Grid(512.0, 8192)
        rows = dichotomy_sweep(mexican_hat(g), [1.0], [2.0**-k for k in range(6)], 2)
        worst = max(r.ratio for r in rows)
        return worst <= 1 + 1e-10, f"max p=2 witness ratio {worst:.6g}"

    return [
        ("plancherel", plancherel), ("N_2 = 1", n2), ("kernel laplace (1,1)", laplace),
        ("special functions", specfun), ("quadrature", quadrature), ("reflection", reflection),
        ("duality", duality), ("riesz-thorin", riesz_thorin), ("oscillatory batch", oscillatory),
        ("blowup p=4 baseline", blowup_p4), ("semigroup routes", semigroup), ("witness contraction", sweep_p2),
    ]


def cmd_selftest(cfg: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    ok = True
    for name, check in _selftest_checks(cfg.seed):
        try:
            passed, detail = check()
        except Exception as exc:  # a crash is a failed check, keep going
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        _report(name, passed, detail)
        ok &= passed
    print(f"selftest finished in {time.perf_counter() - t0:.1f} s")
    return EXIT_OK if ok else EXIT_GATE


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="invgen", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, *, p="2,4", t="1", eps=DEFAULT_EPS, rho="1e2:1e6"):
        sp.add_argument("--p", type=_parse_list, default=_parse_list(p), help=f"exponents, comma list (default {p})")
        sp.add_argument("--rho", type=_parse_range, default=_parse_range(rho), help=f"rho range MIN:MAX (default {rho})")
        sp.add_argument("--points-per-decade", type=int, default=4, help="rho density (default 4)")
        sp.add_argument("--t", type=_parse_list, default=_parse_list(t), help=f"time values, comma list (default {t})")
        sp.add_argument("--eps", type=_parse_list, default=_parse_list(eps),
                        help="regularization values, comma list; a^b allowed (default 2^0..2^-12)")
        sp.add_argument("--grid-L", type=float, default=4096.0, help="half-width of the sweep window (default 4096)")
        sp.add_argument("--grid-N", type=int, default=2**17, help="grid points, a power of 2 (default 131072)")
        sp.add_argument("--tol", type=float, default=1e-6, help="relative tolerance for L^p quadrature (default 1e-6)")
        sp.add_argument("--out", type=Path, default=Path("."), help="output directory (default .)")
        sp.add_argument("--seed", type=int, default=0, help="seed for randomized estimators (default 0)")
        sp.add_argument("--workers", type=int, default=1, help="processes for the rho sweep (default 1)")
        sp.add_argument("--svg", action="store_true", help="also write blowup.svg")
        return sp

    common(sub.add_parser("blowup", help="norm-ratio sweep over rho and slope fit"))
    common(sub.add_parser("semigroup", help="regularized semigroup sweep over eps"), t="1,128")
    common(sub.add_parser("kernel", help="Bessel kernel table and Laplace identity"), t="0.5,1,2", eps="0.1,1,10")
    common(sub.add_parser("vdc", help="empirical van der Corput constant over rho"))
    common(sub.add_parser("selftest", help="reduced invariant suite (< 60 s)"))
    return parser


_COMMANDS = {
    "blowup": cmd_blowup,
    "semigroup": cmd_semigroup,
    "kernel": cmd_kernel,
    "vdc": cmd_vdc,
    "selftest": cmd_selftest,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        cfg = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    if cfg.workers < 1 or cfg.points_per_decade < 1 or cfg.tol <= 0:
        print("error: --workers, --points-per-decade and --tol must be positive", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg.out.mkdir(parents=True, exist_ok=True)
        return _COMMANDS[cfg.command](cfg)
    except (ConfigurationError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
