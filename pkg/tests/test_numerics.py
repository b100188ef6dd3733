import math

import numpy as np
import pytest

from shockline.numerics import (
    BracketError,
    adaptive_simpson,
    bisect_root,
    cubic_interp,
    cumtrapz,
    expand_bracket,
    integrate_rk4,
)


def test_simpson_polynomial_exact():
    # Simpson is exact on cubics, so the adaptive error estimate is zero
    assert adaptive_simpson(lambda x: x**3 - 2 * x, 0.0, 2.0) == pytest.approx(0.0, abs=1e-14)


def test_simpson_exponential():
    val = adaptive_simpson(math.exp, 0.0, 1.0)
    assert val == pytest.approx(math.e - 1.0, rel=1e-12)


def test_simpson_long_interval_decaying_integrand():
    # integral of 1/(1+t)^2 over [0, 1e6] is 1 - 1/(1+1e6)
    val = adaptive_simpson(lambda t: (1.0 + t) ** -2, 0.0, 1e6)
    assert val == pytest.approx(1.0 - 1.0 / (1.0 + 1e6), rel=1e-9)


def test_simpson_orientation():
    assert adaptive_simpson(math.exp, 1.0, 0.0) == pytest.approx(1.0 - math.e, rel=1e-12)


def test_bisect_simple_root():
    root = bisect_root(lambda x: x * x - 2.0, 0.0, 2.0, rtol=1e-14)
    assert root == pytest.approx(math.sqrt(2.0), rel=1e-12)


def test_bisect_rejects_bad_bracket():
    with pytest.raises(BracketError):
        bisect_root(lambda x: x * x + 1.0, -1.0, 1.0)


def test_expand_bracket_finds_sign_change():
    lo, hi = expand_bracket(lambda t: t - 50.0, 0.0, 1.0, t_max=1e6)
    assert lo <= 50.0 <= hi


def test_expand_bracket_gives_up_at_t_max():
    assert expand_bracket(lambda t: -1.0, 0.0, 1.0, t_max=100.0) is None


def test_rk4_linear_system():
    # dy/dt = -y from 1: y(1) = 1/e
    y = integrate_rk4(lambda t, y: -y, 0.0, np.array([1.0]), 1.0, 64)
    assert y[0] == pytest.approx(math.exp(-1.0), rel=1e-8)


def test_cubic_interp_reproduces_cubic():
    # Catmull-Rom is exact on quadratics away from the clamped ends
    x = np.linspace(0.0, 1.0, 41)
    v = 3.0 * x**2 - x + 0.25
    xq = np.linspace(0.1, 0.9, 17)
    out = cubic_interp(0.0, x[1] - x[0], v, xq)
    assert np.allclose(out, 3.0 * xq**2 - xq + 0.25, atol=1e-12)


def test_cubic_interp_clamps_outside():
    x = np.linspace(0.0, 1.0, 11)
    v = x.copy()
    out = cubic_interp(0.0, 0.1, v, np.array([-0.5, 1.5]))
    assert out[0] == pytest.approx(0.0, abs=1e-12)
    assert out[1] == pytest.approx(1.0, abs=1e-12)


def test_cumtrapz_matches_closed_form():
    x = np.linspace(0.0, 2.0, 401)
    y = 2.0 * x
    out = cumtrapz(y, x)
    assert np.allclose(out, x**2, atol=1e-12)
