import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shockline import damping
from shockline.damping import DampingProfile

# one value frozen from a 40-digit quadrature of the defining integral
I_A1_LAM2_T1 = 0.7431380378903229


def test_coefficient_zero_strength():
    assert damping.coefficient(DampingProfile(a=0.0, lam=2.0), 5.0) == 0.0


def test_coefficient_at_origin():
    assert damping.coefficient(DampingProfile(a=1.0, lam=2.0), 0.0) == 1.0


def test_coefficient_direct_evaluation():
    assert damping.coefficient(DampingProfile(a=1.0, lam=2.0), 1.0) == pytest.approx(0.25)


def test_coefficient_vectorized():
    p = DampingProfile(a=2.0, lam=3.0)
    t = np.array([0.0, 1.0, 3.0])
    assert np.allclose(damping.coefficient(p, t), 2.0 / (1.0 + t) ** 3)


def test_profile_rejects_weak_decay():
    with pytest.raises(ValueError):
        DampingProfile(a=1.0, lam=1.0)


def test_accumulated_factor_zero_strength():
    p = DampingProfile(a=0.0, lam=3.0)
    for t in (0.0, 1.0, 17.5):
        assert damping.accumulated_factor(p, t) == 1.0


def test_accumulated_factor_limit():
    # a=1, lam=2: A(t) -> e^{a/(lam-1)} = e
    p = DampingProfile(a=1.0, lam=2.0)
    assert damping.accumulated_factor(p, 1e9) == pytest.approx(math.e, rel=1e-8)


def test_accumulated_factor_against_quadrature_oracle():
    p = DampingProfile(a=1.0, lam=2.0)
    closed = damping.accumulated_factor(p, 1.0)
    assert closed == pytest.approx(math.exp(0.5), rel=1e-12)
    quad = damping.accumulated_factor_quadrature(p, 1.0)
    assert quad == pytest.approx(closed, rel=1e-12)


def test_weight_integral_zero_strength():
    assert damping.weight_integral(DampingProfile(a=0.0, lam=2.0), 7.0) == 7.0


def test_weight_integral_at_zero():
    assert damping.weight_integral(DampingProfile(a=-1.5, lam=2.5), 0.0) == 0.0


def test_weight_integral_frozen_value():
    p = DampingProfile(a=1.0, lam=2.0)
    val = damping.weight_integral(p, 1.0)
    assert math.exp(-1.0) <= val <= 1.0
    assert val == pytest.approx(I_A1_LAM2_T1, rel=1e-10)


def test_weight_integral_grid_matches_scalar():
    p = DampingProfile(a=-0.7, lam=2.2)
    times = np.array([0.0, 0.3, 0.3, 1.7, 4.0])
    grid = damping.weight_integral_grid(p, times)
    for t, v in zip(times, grid):
        assert v == pytest.approx(damping.weight_integral(p, float(t)), rel=1e-10, abs=1e-13)


def test_c_bounds_zero_strength():
    assert damping.c_bounds(DampingProfile(a=0.0, lam=2.0)) == (1.0, 1.0)


def test_c_bounds_unit_beta():
    lo, hi = damping.c_bounds(DampingProfile(a=1.0, lam=2.0))
    assert lo == pytest.approx(math.exp(-1.0))
    assert hi == pytest.approx(math.e)


def test_c_bounds_sign_insensitive_width():
    lo, hi = damping.c_bounds(DampingProfile(a=-2.0, lam=3.0))
    assert lo == pytest.approx(math.exp(-1.0))
    assert hi == pytest.approx(math.e)


def test_c_bounds_rejects_custom_weight():
    p = DampingProfile(a=1.0, lam=2.0, custom_weight=lambda t: 1.0 / (1.0 + t) ** 2)
    with pytest.raises(ValueError):
        damping.c_bounds(p)


def test_custom_weight_reproduces_power_law():
    power = DampingProfile(a=0.8, lam=2.0)
    custom = DampingProfile(a=0.8, lam=2.0, custom_weight=lambda t: (1.0 + t) ** -2.0)
    for t in (0.5, 2.0):
        assert damping.accumulated_factor(custom, t) == pytest.approx(
            damping.accumulated_factor(power, t), rel=1e-9
        )
        assert damping.weight_integral(custom, t) == pytest.approx(
            damping.weight_integral(power, t), rel=1e-9
        )


def test_custom_weight_rejects_negative_values():
    p = DampingProfile(a=1.0, lam=2.0, custom_weight=lambda t: -1.0)
    with pytest.raises(ValueError):
        damping.accumulated_factor(p, 1.0)


@settings(max_examples=60, deadline=None)
@given(
    a=st.floats(-3.0, 3.0),
    lam=st.floats(1.05, 6.0),
    t=st.floats(0.0, 200.0),
)
def test_envelope_property(a, lam, t):
    p = DampingProfile(a=a, lam=lam)
    lo, hi = damping.c_bounds(p)
    val = damping.accumulated_factor(p, t)
    assert lo * (1.0 - 1e-12) <= val <= hi * (1.0 + 1e-12)
    assert lo <= 1.0 <= hi


@settings(max_examples=40, deadline=None)
@given(
    a=st.floats(-2.0, 2.0),
    lam=st.floats(1.5, 5.0),
    t1=st.floats(0.0, 50.0),
    dt=st.floats(1e-3, 50.0),
)
def test_weight_integral_monotone_and_lipschitz(a, lam, t1, dt):
    p = DampingProfile(a=a, lam=lam)
    i1 = damping.weight_integral(p, t1)
    i2 = damping.weight_integral(p, t1 + dt)
    assert i2 > i1
    assert i2 - i1 <= math.exp(p.beta) * dt * (1.0 + 1e-10)


@pytest.mark.parametrize("a,sign", [(1.0, 1), (-1.0, -1)])
def test_accumulated_factor_monotone_in_t(a, sign):
    p = DampingProfile(a=a, lam=2.0)
    ts = np.linspace(0.0, 20.0, 81)
    vals = np.array([damping.accumulated_factor(p, float(t)) for t in ts])
    assert np.all(sign * np.diff(vals) > 0.0)


def test_quadrature_closed_form_consistency_sampled():
    # spot-check relative agreement up to t = 1e3
    p = DampingProfile(a=1.3, lam=2.4)
    for t in (0.1, 1.0, 31.0, 1000.0):
        closed = damping.accumulated_factor(p, t)
        quad = damping.accumulated_factor_quadrature(p, t)
        assert abs(quad - closed) <= 1e-10 * closed
