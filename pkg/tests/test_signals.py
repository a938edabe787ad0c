import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from invgen.signals import (
    Grid,
    LebesgueExponent,
    Signal,
    interpolation_inequality_check,
    linf_norm,
    lp_norm,
)
from invgen.testfam import Interval, eval_f_I

GRID16 = Grid(4.0, 16)
complex_samples = arrays(
    np.complex128, 16,
    elements=st.complex_numbers(max_magnitude=1e3, allow_nan=False, allow_infinity=False),
)


def test_grid_geometry():
    g = Grid(4.0, 64)
    assert g.spacing * g.num_points == 2 * g.half_width
    assert g.points[0] == -4.0 and g.points[32] == 0.0
    assert g.frequency_spacing == 1 / 8
    assert g.frequencies[0] == -32 / 8 and g.frequencies[32] == 0.0
    d = g.dual()
    np.testing.assert_allclose(d.points, g.frequencies, rtol=0, atol=1e-15)
    assert d.dual() == g


@pytest.mark.parametrize("n", [0, 2, 3, 12, 100])
def test_grid_rejects_bad_sizes(n):
    with pytest.raises(ValueError):
        Grid(1.0, n)


def test_grid_rejects_bad_width():
    for L in (0.0, -1.0, math.inf):
        with pytest.raises(ValueError):
            Grid(L, 16)


def test_signal_validation_and_immutability():
    with pytest.raises(ValueError):
        Signal(GRID16, np.zeros(8))
    with pytest.raises(ValueError):
        Signal(GRID16, np.full(16, np.nan))
    s = Signal.zeros(GRID16)
    with pytest.raises(ValueError):
        s.samples[0] = 1.0


def test_exponent():
    e = LebesgueExponent(4.0)
    assert e.conjugate == pytest.approx(4 / 3)
    assert e.dual().dual().p == pytest.approx(4.0)
    for bad in (1.0, 0.5, math.inf, math.nan):
        with pytest.raises(ValueError):
            LebesgueExponent(bad)


def test_norm_examples():
    g = Grid(4.0, 64)
    box = Signal.from_function(g, lambda x: ((x >= 0) & (x < 1)).astype(float))
    assert lp_norm(box, 2) == pytest.approx(1.0, abs=g.spacing)
    assert lp_norm(Signal.zeros(g), 3) == 0.0
    assert linf_norm(Signal.zeros(g)) == 0.0
    assert linf_norm(box) == 1.0


def test_norm_of_sinc_witness():
    g = Grid(200.0, 2**15)
    f = Signal.from_function(g, lambda x: eval_f_I(Interval(0.0, 1.0), x))
    assert lp_norm(f, 4) == pytest.approx((2 / 3) ** 0.25, rel=0.01)
    assert linf_norm(f) == pytest.approx(1.0, abs=1e-15)


@given(complex_samples, st.floats(-100, 100), st.floats(1.1, 12))
@settings(max_examples=60, deadline=None)
def test_norm_scaling(z, c, p):
    f = Signal(GRID16, z)
    assert lp_norm(c * f, p) == pytest.approx(abs(c) * lp_norm(f, p), rel=1e-13, abs=1e-300)


@given(complex_samples, arrays(np.float64, 16, elements=st.floats(0, 1)), st.floats(1.1, 12))
@settings(max_examples=60, deadline=None)
def test_norm_monotone_under_domination(z, shrink, p):
    g = Signal(GRID16, z)
    f = Signal(GRID16, z * shrink)
    assert lp_norm(f, p) <= lp_norm(g, p) * (1 + 1e-14)


def test_window_refinement():
    h = lambda x: np.exp(-x**2) * np.cos(3 * x)
    fine = lp_norm(Signal.from_function(Grid(8.0, 4096), h), 3)
    errs = [abs(lp_norm(Signal.from_function(Grid(8.0, n), h), 3) - fine) for n in (64, 128, 256, 512)]
    assert all(b < a for a, b in zip(errs, errs[1:]))
    # |h|^4 is smooth, so the rectangle rule converges spectrally to the closed form
    exact = (math.sqrt(math.pi) / 2 * (3 / 8 + math.exp(-36 / 16) / 2 + math.exp(-144 / 16) / 8)) ** 0.25
    assert lp_norm(Signal.from_function(Grid(8.0, 256), h), 4) == pytest.approx(exact, abs=1e-14)


def test_large_p_does_not_overflow():
    f = Signal(GRID16, np.full(16, 1e200))
    assert lp_norm(f, 8) == pytest.approx(1e200 * (16 * 0.5) ** (1 / 8))


@given(complex_samples, st.floats(2.01, 20))
@settings(max_examples=60, deadline=None)
def test_interpolation_inequality(z, p):
    assert interpolation_inequality_check(Signal(GRID16, z), p).holds


def test_interpolation_spike_equality():
    z = np.zeros(16)
    z[3] = 1.0
    chk = interpolation_inequality_check(Signal(GRID16, z), 4)
    assert chk.holds
    assert chk.lhs == pytest.approx(chk.rhs, rel=1e-14)
    assert chk.lhs == pytest.approx(GRID16.spacing ** 0.25)


def test_interpolation_rejects_small_p():
    with pytest.raises(ValueError):
        interpolation_inequality_check(Signal.zeros(GRID16), 2)


def test_reflect_and_arithmetic():
    f = Signal.from_function(GRID16, lambda x: x + 1j)
    r = f.reflect()
    # x_j -> -x_j except the unpaired left edge, which maps to itself
    np.testing.assert_array_equal(r.samples[1:].real, -f.samples[1:].real)
    assert r.samples[0] == f.samples[0]
    np.testing.assert_array_equal((f + f - f).samples, f.samples)
    with pytest.raises(ValueError):
        f + Signal.zeros(Grid(4.0, 32))


def test_csv_round_trip(tmp_path):
    f = Signal.from_function(Grid(3.0, 32), lambda x: np.exp(-x**2) * (1 + 0.5j * np.sin(x)))
    path = tmp_path / "sig.csv"
    f.to_csv(path)
    assert path.read_text().splitlines()[0] == "x,re,im"
    g = Signal.from_csv(path)
    assert g.grid == f.grid
    np.testing.assert_array_equal(g.samples, f.samples)
