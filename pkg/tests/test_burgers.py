import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shockline import burgers, damping
from shockline.burgers import BlowUpSignal, BurgersSeed, seed_from_callable
from shockline.damping import DampingProfile
from shockline.predict import Global, Inconclusive, Shock

# frozen from a 40-digit quadrature + root solve of I(T) = 1/c
T_STAR_A1_LAM2_C1 = 1.4443803427901759
I_A1_LAM2_T1 = 0.7431380378903229


def ramp_seed(c: float = 1.0, half_width: float = 2.0) -> BurgersSeed:
    return BurgersSeed(
        f=lambda u: -c * u,
        fprime=lambda u: -c,
        c=c,
        x_min_attained=0.0,
        domain=(-half_width, half_width),
    )


def sine_seed(c: float = 1.0) -> BurgersSeed:
    return BurgersSeed(
        f=lambda u: -c * math.sin(u),
        fprime=lambda u: -c * math.cos(u),
        c=c,
        x_min_attained=0.0,
        domain=(-math.pi, math.pi),
    )


def test_seed_rejects_inconsistent_minimum():
    with pytest.raises(ValueError):
        BurgersSeed(
            f=lambda u: -u,
            fprime=lambda u: -1.0,
            c=2.0,
            x_min_attained=0.0,
            domain=(-1.0, 1.0),
        )


def test_seed_from_callable_finds_compression():
    seed = seed_from_callable(lambda u: -math.sin(u), domain=(-math.pi, math.pi))
    assert seed.c == pytest.approx(1.0, rel=1e-6)
    assert seed.x_min_attained == pytest.approx(0.0, abs=1e-5)


def test_value_along_ray_undamped_constant():
    seed = ramp_seed()
    p = DampingProfile(a=0.0, lam=2.0)
    assert burgers.value_along_ray(seed, p, 2.0, 0.5) == pytest.approx(-0.5)


def test_value_along_ray_initial_time():
    seed = sine_seed()
    p = DampingProfile(a=1.0, lam=2.0)
    assert burgers.value_along_ray(seed, p, 0.0, math.pi / 2) == pytest.approx(-1.0)


def test_value_along_ray_damped():
    seed = ramp_seed()
    p = DampingProfile(a=1.0, lam=2.0)
    expected = -math.exp(-0.5)
    assert burgers.value_along_ray(seed, p, 1.0, 1.0) == pytest.approx(expected, rel=1e-12)


def test_value_along_ray_domain_error():
    with pytest.raises(ValueError):
        burgers.value_along_ray(ramp_seed(half_width=1.0), DampingProfile(a=0.0), 0.0, 2.0)


def test_mu_closed_form_initial():
    seed = sine_seed()
    p = DampingProfile(a=-0.5, lam=3.0)
    for u in (-1.0, 0.0, 0.7):
        assert burgers.mu_closed_form(seed, p, 0.0, u) == 1.0


def test_mu_closed_form_undamped_vanishes_at_unit_time():
    seed = ramp_seed(c=1.0)
    p = DampingProfile(a=0.0, lam=2.0)
    assert burgers.mu_closed_form(seed, p, 1.0, 0.0) == pytest.approx(0.0, abs=1e-14)


def test_mu_closed_form_damped_in_unit_interval():
    seed = ramp_seed(c=1.0)
    p = DampingProfile(a=1.0, lam=2.0)
    val = burgers.mu_closed_form(seed, p, 1.0, 0.0)
    assert val == pytest.approx(1.0 - I_A1_LAM2_T1, rel=1e-10)
    assert 0.0 < val < 1.0


def test_trace_fan_undamped_position():
    seed = ramp_seed()
    p = DampingProfile(a=0.0, lam=2.0)
    fan = burgers.trace_fan(seed, p, [0.5], [0.5])
    assert fan.positions[0, 0] == pytest.approx(0.25)


def test_trace_fan_initial_positions_are_labels():
    seed = sine_seed()
    p = DampingProfile(a=1.0, lam=2.0)
    u = np.linspace(-1.0, 1.0, 11)
    fan = burgers.trace_fan(seed, p, [0.0, 0.4], u)
    assert np.allclose(fan.positions[0], u)
    assert np.allclose(fan.mu[0], 1.0)


def test_trace_fan_damped_position_uses_weight_integral():
    seed = ramp_seed()
    p = DampingProfile(a=1.0, lam=2.0)
    fan = burgers.trace_fan(seed, p, [1.0], [1.0])
    assert fan.positions[0, 0] == pytest.approx(1.0 - I_A1_LAM2_T1, rel=1e-10)


def test_trace_fan_empty_grid_rejected():
    with pytest.raises(ValueError):
        burgers.trace_fan(ramp_seed(), DampingProfile(a=0.0), [], [0.0])


def test_trace_fan_flags_crossed_rays():
    seed = ramp_seed(c=1.0)
    p = DampingProfile(a=0.0, lam=2.0)
    fan = burgers.trace_fan(seed, p, [0.5, 1.001], np.linspace(-1, 1, 21))
    assert fan.crossed.all()
    assert fan.first_crossing_index == 1


def test_shock_time_undamped():
    result = burgers.shock_time(ramp_seed(c=1.0), DampingProfile(a=0.0, lam=2.0))
    assert isinstance(result, Shock)
    assert result.t_star == pytest.approx(1.0, abs=1e-9)


def test_shock_time_expansive_seed_global():
    seed = BurgersSeed(
        f=lambda u: 0.3 * u,
        fprime=lambda u: 0.3,
        c=-0.3,
        x_min_attained=0.0,
        domain=(-1.0, 1.0),
    )
    assert isinstance(burgers.shock_time(seed, DampingProfile(a=1.0, lam=2.0)), Global)


def test_shock_time_damped_frozen_value():
    result = burgers.shock_time(ramp_seed(c=1.0), DampingProfile(a=1.0, lam=2.0))
    assert isinstance(result, Shock)
    assert result.t_star == pytest.approx(T_STAR_A1_LAM2_C1, rel=1e-9)
    assert math.exp(-1.0) <= result.t_star <= math.e


def test_shock_time_custom_weight_absorbs_compression():
    # a strong constant weight makes I saturate at 1/a < 1/c
    p = DampingProfile(a=5.0, lam=2.0, custom_weight=lambda t: 1.0)
    result = burgers.shock_time(ramp_seed(c=1.0), p, t_max=200.0)
    assert isinstance(result, Global)
    assert "absorbs" in result.note


def test_shock_time_inconclusive_when_window_too_short():
    # undamped-equivalent custom weight, crossing at T=10 but window ends at 5
    p = DampingProfile(a=0.0, lam=2.0, custom_weight=lambda t: 1.0)
    result = burgers.shock_time(ramp_seed(c=0.1), p, t_max=5.0)
    assert isinstance(result, Inconclusive)
    assert result.t_max == 5.0


def test_crossing_time_matches_root_of_weight_integral():
    seed = ramp_seed(c=1.0)
    p = DampingProfile(a=1.0, lam=2.0)
    u = np.linspace(-1.0, 1.0, 201)
    t_cross = burgers.crossing_time(seed, p, u)
    assert t_cross == pytest.approx(T_STAR_A1_LAM2_C1, rel=1e-9)


def test_crossing_time_none_for_expansive_fan():
    seed = BurgersSeed(
        f=lambda u: 0.5 * u,
        fprime=lambda u: 0.5,
        c=-0.5,
        x_min_attained=0.0,
        domain=(-1.0, 1.0),
    )
    assert burgers.crossing_time(seed, DampingProfile(a=0.0), np.linspace(-1, 1, 11)) is None


def test_spatial_gradient_initial():
    seed = sine_seed()
    p = DampingProfile(a=1.0, lam=2.0)
    assert burgers.spatial_gradient(seed, p, 0.0, 0.0) == pytest.approx(-1.0)


def test_spatial_gradient_undamped_halfway():
    seed = ramp_seed(c=1.0)
    p = DampingProfile(a=0.0, lam=2.0)
    assert burgers.spatial_gradient(seed, p, 0.5, 0.0) == pytest.approx(-2.0)


def test_spatial_gradient_matches_finite_difference_fan():
    seed = sine_seed()
    p = DampingProfile(a=0.5, lam=2.0)
    t = 0.4
    u0 = 0.3
    du = 1e-6
    fan = burgers.trace_fan(seed, p, [t], [u0 - du, u0, u0 + du])
    phi = [burgers.value_along_ray(seed, p, t, u) for u in (u0 - du, u0 + du)]
    fd = (phi[1] - phi[0]) / (fan.positions[0, 2] - fan.positions[0, 0])
    assert burgers.spatial_gradient(seed, p, t, u0) == pytest.approx(fd, rel=1e-6)


def test_spatial_gradient_diverges_near_blowup():
    seed = ramp_seed(c=1.0)
    p = DampingProfile(a=0.0, lam=2.0)
    g1 = burgers.spatial_gradient(seed, p, 0.9, 0.0)
    g2 = burgers.spatial_gradient(seed, p, 0.999, 0.0)
    assert g2 < g1 < 0.0
    assert abs(g2) > 100.0
    with pytest.raises(BlowUpSignal):
        burgers.spatial_gradient(seed, p, 1.0, 0.0)


def test_conservation_along_rays():
    # mu * (Eulerian slope at the ray) equals f'(u)/A(t) for all t < T*
    seed = sine_seed()
    p = DampingProfile(a=0.7, lam=2.5)
    u = np.linspace(-0.2, 0.2, 4801)
    for t in (0.3, 0.6):
        fan = burgers.trace_fan(seed, p, [t], u)
        a_t = damping.accumulated_factor(p, t)
        phi = np.array([seed.f(x) for x in u]) / a_t
        slope = np.gradient(phi, fan.positions[0])
        product = fan.mu[0] * slope
        expected = np.array([seed.fprime(x) for x in u]) / a_t
        interior = slice(2, -2)
        assert np.max(np.abs(product[interior] - expected[interior])) < 1e-8


def test_crossing_converges_to_mu_zero_sine_seed():
    # curved datum: discrete crossing must approach the zero of min mu
    seed = sine_seed(c=1.0)
    p = DampingProfile(a=0.5, lam=2.0)
    exact = burgers.shock_time(seed, p).t_star
    u = np.linspace(-1.0, 1.0, 4097)
    t_cross = burgers.crossing_time(seed, p, u, rtol=1e-12)
    assert t_cross == pytest.approx(exact, rel=1e-6)


@settings(max_examples=25, deadline=None)
@given(
    a=st.floats(-1.0, 1.5),
    c=st.floats(0.2, 3.0),
    frac=st.floats(0.05, 0.9),
    x_frac=st.floats(-0.9, 0.9),
)
def test_eikonal_round_trip(a, c, frac, x_frac):
    seed = ramp_seed(c=c, half_width=4.0)
    p = DampingProfile(a=a, lam=2.0)
    t_star = burgers.shock_time(seed, p).t_star
    t = frac * t_star
    # the fan span shrinks toward collapse: query strictly inside it
    span = 4.0 * (1.0 - c * damping.weight_integral(p, t))
    x = x_frac * span
    u = burgers.ray_label(seed, p, t, x)
    fan = burgers.trace_fan(seed, p, [t], [u])
    assert abs(fan.positions[0, 0] - x) <= 1e-9


def test_damping_shift_in_a():
    ts = []
    for a in (-0.5, -0.25, 0.0, 0.5, 1.0):
        res = burgers.shock_time(ramp_seed(c=1.0), DampingProfile(a=a, lam=2.0))
        ts.append(res.t_star)
    assert all(x < y for x, y in zip(ts, ts[1:]))


def test_damping_shift_in_lam_positive_a():
    ts = []
    for lam in (1.6, 2.0, 3.0, 5.0):
        res = burgers.shock_time(ramp_seed(c=1.0), DampingProfile(a=1.0, lam=lam))
        ts.append(res.t_star)
    assert all(x > y for x, y in zip(ts, ts[1:]))
    assert all(t > 1.0 for t in ts)


def test_damping_shift_in_lam_negative_a():
    ts = []
    for lam in (1.6, 2.0, 3.0, 5.0):
        res = burgers.shock_time(ramp_seed(c=1.0), DampingProfile(a=-0.5, lam=lam))
        ts.append(res.t_star)
    assert all(x < y for x, y in zip(ts, ts[1:]))
    assert all(t < 1.0 for t in ts)


def test_bracket_property():
    for a, lam in ((1.0, 2.0), (-0.5, 3.0), (2.0, 1.7)):
        p = DampingProfile(a=a, lam=lam)
        c = 0.8
        res = burgers.shock_time(ramp_seed(c=c), p)
        lo, hi = damping.c_bounds(p)
        assert lo / c <= res.t_star <= hi / c
