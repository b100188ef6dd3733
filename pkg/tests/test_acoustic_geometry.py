import math

import numpy as np
import pytest

from shockline import acoustic_geometry as ag
from shockline import burgers, damping
from shockline.burgers import BurgersSeed
from shockline.damping import DampingProfile
from shockline.euler_radial import FluidField, PolytropicEos, Trajectory

EOS = PolytropicEos(gamma=1.4)


class ZeroSoundEos:
    """Test hook: sound speed identically zero, rays ride the velocity field."""

    gamma = 1.4

    def sound_speed(self, rho):
        return np.zeros_like(np.asarray(rho, dtype=float))

    def enthalpy(self, rho):
        return np.zeros_like(np.asarray(rho, dtype=float))


def quiescent_trajectory(times, r_lo=0.2, r_hi=4.0, n=512) -> Trajectory:
    dr = (r_hi - r_lo) / n
    r = r_lo + dr * (np.arange(n) + 0.5)
    traj = Trajectory(r=r)
    for t in times:
        traj.record(FluidField(r=r, rho=np.ones_like(r), v=np.zeros_like(r), t=float(t)))
    return traj


def burgers_surrogate_trajectory(seed_slope, p, times, r_lo=0.05, r_hi=1.5, n=2048) -> Trajectory:
    """Snapshots whose velocity is the exact damped-Burgers field of f(u) = slope*u.

    For a linear datum the characteristic map inverts in closed form:
    X = u (1 + slope*I) so v(t, x) = slope * x / ((1 + slope*I) A).
    """
    dr = (r_hi - r_lo) / n
    r = r_lo + dr * (np.arange(n) + 0.5)
    traj = Trajectory(r=r)
    integrals = damping.weight_integral_grid(p, np.asarray(times, dtype=float))
    for t, integral in zip(times, integrals):
        a_t = damping.accumulated_factor(p, float(t))
        v = seed_slope * r / ((1.0 + seed_slope * integral) * a_t)
        traj.record(FluidField(r=r, rho=np.ones_like(r), v=v, t=float(t)))
    return traj


def test_quiescent_rays_travel_at_sound_speed():
    times = np.linspace(0.0, 2.0, 41)
    traj = quiescent_trajectory(times)
    u = np.linspace(0.0, 0.25, 9)
    fan = ag.trace_rays(traj, EOS, u)
    for k, t in enumerate(times):
        assert np.allclose(fan.x[k], (1.0 - u) + t, atol=1e-12)
    assert np.allclose(fan.mu_jac, 1.0, atol=1e-12)
    assert all(s == "alive" for s in fan.status)


def test_quiescent_transport_density_stays_one():
    times = np.linspace(0.0, 2.0, 41)
    traj = quiescent_trajectory(times)
    u = np.linspace(0.0, 0.25, 5)
    fan = ag.trace_rays(traj, EOS, u)
    mu = ag.transport_fan(traj, EOS, DampingProfile(a=1.0, lam=2.0), fan)
    assert np.allclose(mu, 1.0, atol=1e-10)


def test_quiescent_detect_no_collapse():
    times = np.linspace(0.0, 1.0, 21)
    traj = quiescent_trajectory(times)
    fan = ag.trace_rays(traj, EOS, np.linspace(0.0, 0.25, 9))
    fan.mu_ode = ag.transport_fan(traj, EOS, DampingProfile(a=0.0, lam=2.0), fan)
    report = ag.detect_collapse(fan)
    assert not report.collapsed
    assert report.t_collapse_jac is None
    assert report.t_max == pytest.approx(1.0)
    assert report.discrepancy < 1e-10


def test_frozen_coefficient_exponential_growth():
    # uniform density, v(t) = c0*t: m = 0 and e = c0, so mu = exp(c0 t)
    c0 = 0.4
    times = np.linspace(0.0, 1.5, 31)
    dr = 3.8 / 512
    r = 0.2 + dr * (np.arange(512) + 0.5)
    traj = Trajectory(r=r)
    for t in times:
        traj.record(
            FluidField(r=r, rho=np.ones_like(r), v=c0 * float(t) * np.ones_like(r), t=float(t))
        )
    path = np.full(times.size, 1.0)  # any fixed probe point works for uniform fields
    mu = ag.mu_transport(traj, EOS, DampingProfile(a=0.0, lam=2.0), path, times)
    assert np.max(np.abs(mu - np.exp(c0 * times))) < 1e-8


def test_insufficient_fan_rejected():
    times = np.linspace(0.0, 1.0, 5)
    traj = quiescent_trajectory(times)
    with pytest.raises(ag.InsufficientFanError):
        ag.trace_rays(traj, EOS, np.array([0.0, 0.1]))


def test_escaped_ray_flagged():
    times = np.linspace(0.0, 4.0, 81)
    traj = quiescent_trajectory(times, r_hi=3.0)
    fan = ag.trace_rays(traj, EOS, np.linspace(0.0, 0.25, 5))
    assert all(s == "escaped" for s in fan.status)


def test_burgers_surrogate_positions_match_exact_fan():
    seed = BurgersSeed(
        f=lambda u: -u, fprime=lambda u: -1.0, c=1.0, x_min_attained=0.0, domain=(-4.0, 4.0)
    )
    p = DampingProfile(a=1.0, lam=2.0)
    times = np.linspace(0.0, 0.8, 801)
    traj = burgers_surrogate_trajectory(-1.0, p, times)
    u = np.linspace(0.0, 0.25, 9)
    fan = ag.trace_rays(traj, ZeroSoundEos(), u)
    exact = burgers.trace_fan(seed, p, times, 1.0 - u[::-1])
    assert np.max(np.abs(fan.x - exact.positions[:, ::-1])) < 1e-6


def test_burgers_surrogate_jacobian_matches_closed_form():
    p = DampingProfile(a=1.0, lam=2.0)
    times = np.linspace(0.0, 0.8, 801)
    traj = burgers_surrogate_trajectory(-1.0, p, times)
    fan = ag.trace_rays(traj, ZeroSoundEos(), np.linspace(0.0, 0.25, 17))
    integral = damping.weight_integral_grid(p, times)
    expected = (1.0 - integral)[:, None] * np.ones(17)[None, :]
    assert np.max(np.abs(fan.mu_jac - expected)) < 1e-5


def test_burgers_surrogate_collapse_time_approaches_exact():
    # focusing field v = (0.9 - x)/(1 - t): all rays meet at x = 0.9, t = 1,
    # and the fan density is exactly 1 - t
    times = np.linspace(0.0, 0.995, 2000)
    n = 1024
    dr = 0.6 / n
    r = 0.5 + dr * (np.arange(n) + 0.5)
    traj = Trajectory(r=r)
    for t in times:
        v = (0.9 - r) / (1.0 - float(t))
        traj.record(FluidField(r=r, rho=np.ones_like(r), v=v, t=float(t)))
    fan = ag.trace_rays(traj, ZeroSoundEos(), np.linspace(0.0, 0.25, 17))
    assert np.max(np.abs(fan.mu_jac - (1.0 - times)[:, None])) < 1e-5
    report = ag.detect_collapse(fan, threshold=0.01)
    assert report.collapsed
    assert report.t_collapse_jac == pytest.approx(0.99, abs=5e-3)
    assert report.t_zero_extrapolated == pytest.approx(1.0, rel=5e-3)


def test_detect_collapse_reports_minimizing_ray():
    # compress only the middle rays: mu dips first at the fan center
    times = np.linspace(0.0, 1.0, 51)
    n = 512
    dr = 3.8 / n
    r = 0.2 + dr * (np.arange(n) + 0.5)
    traj = Trajectory(r=r)
    for t in times:
        v = -0.8 * np.exp(-(((r - 0.875 - t)) ** 2) / 0.002)
        traj.record(FluidField(r=r, rho=np.ones_like(r), v=v, t=float(t)))
    fan = ag.trace_rays(traj, ZeroSoundEos(), np.linspace(0.0, 0.25, 33))
    report = ag.detect_collapse(fan, threshold=0.25)
    if report.collapsed:
        assert 0.0 < report.u_star < 0.25
