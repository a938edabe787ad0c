import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from invgen.fourier import inverse_ft, make_osc_multiplier
from invgen.oscillatory import (
    CurvatureBound,
    Phase,
    empirical_vdc_constant,
    eval_G,
    eval_G_batch,
    norm_TmfI,
    stationary_band,
    sup_G,
    vdc_bound,
)
from invgen.quad import ConvergenceError
from invgen.signals import Grid, Signal, lp_norm
from invgen.testfam import Interval, eval_f_I, coupled_interval

HALF = Interval(0.5, 1.0)
OSC_REF = 0.08904581770619907 + 0.47239917726895253j


def _autoconvolution_norm4(I: Interval, t: float = 1.0) -> float:
    """|G|_4 via Plancherel on G^2: the L^2 norm of the autoconvolution of m 1_I.

    Independent of the y-axis quadrature: only scipy's adaptive rule on
    the bounded frequency variables.
    """
    a, b = I.a, I.b

    def h2(z):
        lo, hi = max(a, z - b), min(b, z - a)
        ph = lambda x: t * (1 / x + 1 / (z - x))
        kw = dict(limit=2000, epsabs=0, epsrel=1e-11)
        re = quad(lambda x: math.cos(ph(x)), lo, hi, **kw)[0]
        im = quad(lambda x: math.sin(ph(x)), lo, hi, **kw)[0]
        return re * re + im * im

    return quad(h2, 2 * a, 2 * b, limit=2000, epsabs=0, epsrel=1e-10, points=[a + b])[0] ** 0.25


def test_eval_G_reference_value():
    assert abs(eval_G(HALF, Phase(1.0, 0.0)) - OSC_REF) <= 1e-12


@pytest.mark.parametrize("y", [-2.0, 0.1, 0.3, 4.0])
def test_eval_G_against_mpmath(y):
    with mpmath.workdps(25):
        ref = mpmath.quad(lambda x: mpmath.expj(1 / x + 2 * mpmath.pi * x * y), [0.5, 0.75, 1])
    assert abs(eval_G(HALF, Phase(1.0, y)) - complex(ref)) <= 1e-12


@given(st.floats(-500, 500))
@settings(max_examples=60, deadline=None)
def test_G_bounded_by_length(y):
    I = coupled_interval(1e3)
    assert abs(eval_G(I, Phase(1.0, y))) <= I.length * (1 + 1e-12)


def test_t_zero_reduces_to_sinc_witness():
    I = Interval(0.4, 1.3)
    for y in (-3.0, 0.0, 0.77, 12.0):
        assert abs(eval_G(I, Phase(0.0, y)) - eval_f_I(I, y)) <= 1e-13


def test_batch_matches_adaptive():
    for rho in (1e2, 1e4, 1e6):
        I = coupled_interval(rho)
        lo, hi = stationary_band(I, 1.0)
        ys = np.concatenate([np.linspace(-3 * hi, 3 * hi, 41), [0.0, lo, hi]])
        ref = np.array([eval_G(I, Phase(1.0, y)) for y in ys])
        assert np.max(np.abs(eval_G_batch(I, 1.0, ys) - ref)) <= 1e-12


def test_conjugate_symmetry():
    I = coupled_interval(1e3)
    for y in (-40.0, 0.0, 13.0, 80.0):
        assert eval_G(I, Phase(-1.0, -y)) == pytest.approx(np.conj(eval_G(I, Phase(1.0, y))), abs=1e-14)
    assert norm_TmfI(I, -1.0, 4) == norm_TmfI(I, 1.0, 4)


def test_domain_errors():
    with pytest.raises(ValueError):
        eval_G(Interval(0.0, 1.0), Phase(1.0, 0.0))
    with pytest.raises(ValueError):
        eval_G(Interval(-1.0, 1.0), Phase(1.0, 0.0))
    with pytest.raises(ValueError):
        Phase(math.inf, 0.0)
    with pytest.raises(ValueError):
        CurvatureBound(HALF, 0.0)
    with pytest.raises(ValueError):
        norm_TmfI(HALF, 1.0, 1.5)


def test_vdc_bound_examples():
    assert CurvatureBound(HALF, 1.0).rho == 2.0
    assert vdc_bound(HALF, Phase(1.0, 3.0)) == pytest.approx(2**-0.5)
    rho0 = 1e4
    assert vdc_bound(coupled_interval(rho0), Phase(1.0, 0.0)) == pytest.approx((2 * rho0) ** -0.5)
    doubled = Interval(0.5, 2.0)
    assert CurvatureBound(doubled, 1.0).rho == pytest.approx(CurvatureBound(HALF, 1.0).rho / 8)
    assert vdc_bound(doubled, Phase(1.0, 0.0)) == pytest.approx(vdc_bound(HALF, Phase(1.0, 0.0)) * math.sqrt(8))
    with pytest.raises(ValueError):
        vdc_bound(HALF, Phase(1.0, 0.0), k=3)


def test_sup_G_beats_dense_scan():
    I = coupled_interval(1e4)
    lo, hi = stationary_band(I, 1.0)
    ys = np.linspace(0.5 * lo, 1.5 * hi, 20001)
    scan = np.abs(eval_G_batch(I, 1.0, ys)).max()
    best, where = sup_G(I, 1.0)
    assert best >= scan * (1 - 1e-12)
    assert abs(eval_G(I, Phase(1.0, where))) == pytest.approx(best, rel=1e-10)
    assert lo * 0.5 <= where <= 2 * hi


def test_empirical_constant_stable():
    emp = [empirical_vdc_constant(coupled_interval(r), 1.0) for r in (1e2, 1e4, 1e6)]
    assert max(emp) / min(emp) < 2.0


def test_norm_p2_plancherel():
    for I in (HALF, coupled_interval(1e5)):
        assert norm_TmfI(I, 1.0, 2) == pytest.approx(math.sqrt(I.length), rel=1e-10)
    forced = norm_TmfI(HALF, 1.0, 2, tol=1e-3, force_quadrature=True)
    assert forced == pytest.approx(math.sqrt(0.5), rel=1e-3)


@pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
@pytest.mark.parametrize("rho", [1e2, 1e6])
def test_norm_p4_autoconvolution_oracle(rho):
    I = coupled_interval(rho)
    assert norm_TmfI(I, 1.0, 4, tol=1e-8) == pytest.approx(_autoconvolution_norm4(I), rel=1e-6)


def test_norm_p4_fft_pipeline():
    g = Grid(2048.0, 2**15)
    xi = g.frequencies
    ind = ((xi > HALF.a) & (xi < HALF.b)) + 0.5 * (np.isclose(xi, HALF.a) | np.isclose(xi, HALF.b))
    out = inverse_ft(Signal(g.dual(), ind * make_osc_multiplier(1.0).on_grid(g)))
    assert lp_norm(out, 4) == pytest.approx(norm_TmfI(HALF, 1.0, 4), rel=1e-2)


@pytest.mark.parametrize("p", [3.0, 4.0, 6.0])
def test_interpolation_chain(p):
    tol = 1e-4
    for rho in (1e2, 1e4):
        I = coupled_interval(rho)
        sup = sup_G(I, 1.0)[0]
        assert norm_TmfI(I, 1.0, p, tol) <= sup ** (1 - 2 / p) * I.length ** (1 / p) * (1 + tol)


def test_convergence_error_when_cutoff_capped():
    with pytest.raises(ConvergenceError) as info:
        # the far field starts beyond 4x the band, so the first doubling trips the cap
        norm_TmfI(coupled_interval(1e3), 1.0, 2.5, tol=1e-6, max_cutoff_factor=1e-9)
    assert info.value.result.value > 0
