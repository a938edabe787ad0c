import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from invgen.quad import (
    ConvergenceError,
    QuadResult,
    damped_truncation_point,
    integrate_finite,
    integrate_semiinfinite_damped,
)
from invgen.semigroup import kernel_b, kernel_envelope

# int_{0.5}^{1} exp(i/x) dx at tol 1e-13, confirmed by mpmath at 30 digits
OSC_REF = 0.08904581770619907 + 0.47239917726895253j


def test_constant():
    r = integrate_finite(lambda x: np.ones_like(x), 0.0, 1.0, 1e-10)
    assert r.value == pytest.approx(1.0, abs=1e-14)
    assert r.error_estimate >= 0 and r.evaluations >= 1


def test_oscillatory_reference_value():
    r = integrate_finite(lambda x: np.exp(1j / x), 0.5, 1.0, 1e-10)
    assert abs(r.value - OSC_REF) <= 1e-10


def test_oscillatory_reference_mpmath():
    import mpmath

    with mpmath.workdps(30):
        re = mpmath.quad(lambda x: mpmath.cos(1 / x), [0.5, 1])
        im = mpmath.quad(lambda x: mpmath.sin(1 / x), [0.5, 1])
    assert abs(complex(float(re), float(im)) - OSC_REF) <= 1e-15


def test_sinc4_window_two_tolerances():
    from invgen.specfun import sinc

    vals = [
        integrate_finite(lambda x: sinc(x) ** 4, -50.0, 50.0, tol, breakpoints=range(-49, 50)).value.real
        for tol in (1e-9, 1e-12)
    ]
    tail = 2 / (math.pi**4 * 3 * 50.0**3)
    assert abs(vals[0] - vals[1]) <= 1e-9
    assert vals[1] <= 2 / 3 <= vals[1] + tail + 1e-12


def test_vector_integrand():
    r = integrate_finite(lambda x: np.stack([x, x**2], axis=1), 0.0, 2.0, 1e-12)
    np.testing.assert_allclose(r.value, [2.0, 8.0 / 3.0], atol=1e-13)


def test_breakpoint_kink():
    r = integrate_finite(lambda x: np.abs(x - 0.3), 0.0, 1.0, 1e-12, breakpoints=[0.3])
    assert r.value == pytest.approx(0.3**2 / 2 + 0.7**2 / 2, abs=1e-14)


@given(st.floats(-3, 3), st.floats(0.1, 3), st.floats(0.1, 3))
@settings(max_examples=40, deadline=None)
def test_additivity(a, w1, w2):
    f = lambda x: np.exp(1j * 3 * x) / (1 + x**2)
    b, c = a + w1, a + w1 + w2
    whole = integrate_finite(f, a, c, 1e-11)
    left = integrate_finite(f, a, b, 1e-11)
    right = integrate_finite(f, b, c, 1e-11)
    slack = whole.error_estimate + left.error_estimate + right.error_estimate + 1e-14
    assert abs(whole.value - (left.value + right.value)) <= slack


@pytest.mark.parametrize("f", [lambda x: np.sqrt(x), lambda x: np.exp(1j * 40 * x), lambda x: 1 / (1e-2 + x**2)])
def test_refinement_monotone(f):
    errs = [integrate_finite(f, 0.0, 1.0, tol).error_estimate for tol in (1e-4, 5e-5, 2.5e-5, 1e-6, 5e-7, 1e-9)]
    assert all(b <= a for a, b in zip(errs, errs[1:]))


def test_convergence_error_carries_estimate():
    with pytest.raises(ConvergenceError) as info:
        integrate_finite(lambda x: np.sin(1 / x), 1e-9, 1.0, 1e-14, limit=50)
    assert isinstance(info.value.result, QuadResult)
    assert math.isfinite(info.value.result.value.real)


def test_bad_arguments():
    with pytest.raises(ValueError):
        integrate_finite(lambda x: x, 1.0, 0.0, 1e-6)
    with pytest.raises(ValueError):
        integrate_finite(lambda x: x, 0.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        QuadResult(0.0, -1.0, 1)
    with pytest.raises(ValueError):
        QuadResult(0.0, 0.0, 0)


def test_damped_examples():
    r = integrate_semiinfinite_damped(lambda s: np.ones_like(s), 2.0, 1e-10)
    assert r.value == pytest.approx(0.5, abs=1e-10)
    assert r.truncation is not None and r.truncation > 0
    r = integrate_semiinfinite_damped(lambda s: s, 1.0, 1e-10, envelope_power=1.0)
    assert r.value == pytest.approx(1.0, abs=1e-10)
    r = integrate_semiinfinite_damped(
        lambda s: kernel_b(1.0, s), 1.0, 1e-10, envelope=kernel_envelope(1.0), envelope_power=-0.75
    )
    assert r.value == pytest.approx(math.exp(-1) - 1, abs=1e-10)


def test_damped_rejects_nonpositive_rate():
    for eps in (0.0, -1.0):
        with pytest.raises(ValueError):
            integrate_semiinfinite_damped(lambda s: s, eps, 1e-6)


def test_damped_truncation_sound():
    f = lambda s: np.cos(3 * s) * (1 + s) ** 0.5
    tol = 1e-8
    base = integrate_semiinfinite_damped(f, 0.5, tol, envelope_power=0.5)
    longer = integrate_finite(
        lambda s: f(s) * np.exp(-0.5 * s), 0.0, 3 * base.truncation, 1e-12, max_panel_width=1.0
    )
    assert abs(base.value - longer.value) < tol


def test_truncation_formula():
    S = damped_truncation_point(0.5, 1e-6, 3.0, 0.0)
    assert S == pytest.approx(math.log(3.0 / (0.5 * 0.5e-6)) / 0.5)
