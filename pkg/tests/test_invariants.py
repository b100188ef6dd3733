"""Cross-module invariants that need a full solver + ray pipeline."""

import math

import numpy as np
import pytest

from shockline import acoustic_geometry as ag
from shockline.damping import DampingProfile
from shockline.euler_radial import PolytropicEos
from shockline.harness import euler_shock_run
from shockline.numerics import cubic_interp
from shockline.seeds import pulse_seed

EOS = PolytropicEos(gamma=3.0)
PROFILE = DampingProfile(a=0.0, lam=2.0)


@pytest.fixture(scope="module")
def shock_result():
    spec = pulse_seed("sine", delta=0.25, min_phi1_prime=-1.0)
    return euler_shock_run(spec, EOS, PROFILE, n_cells=2048, mu_stop=0.25, n_rays=65)


def test_mu_starts_at_one(shock_result):
    fan = shock_result.fan
    assert np.allclose(fan.mu_jac[0], 1.0, atol=1e-12)
    assert np.allclose(fan.mu_ode[0], 1.0, atol=1e-12)


def test_mu_decreasing_during_compression(shock_result):
    mins = shock_result.fan.mu_jac.min(axis=1)
    # sampled coarsely to ignore interpolation wiggles
    sampled = mins[:: max(1, mins.size // 30)]
    assert sampled[-1] < 0.3
    assert np.all(np.diff(sampled) < 0.01)


def test_methods_agree_on_shock_run(shock_result):
    assert shock_result.mu_report.discrepancy <= 0.05


def test_mu_times_gradient_stays_bounded(shock_result):
    """Along the minimizing ray, mu * dv/dr stays bounded while dv/dr grows.

    The pulse amplitude decays like 1/((1+t)A(t)), so growth is measured on
    the decay-compensated gradient; the compensated product mu * dv/dr must
    stay near its initial value while the compensated gradient blows up
    like 1/mu.
    """
    from shockline import damping as damping_mod

    fan = shock_result.fan
    traj = shock_result.trajectory
    j_star = int(np.argmin(fan.mu_jac[-1]))
    r0 = float(traj.r[0])
    dr = float(traj.r[1] - traj.r[0])
    comp_grads = []
    comp_products = []
    for k in range(0, fan.times.size, max(1, fan.times.size // 40)):
        t = float(fan.times[k])
        dv = np.gradient(traj.v[k], dr)
        g = abs(float(cubic_interp(r0, dr, dv, np.array([fan.x[k, j_star]]))[0]))
        comp = (1.0 + t) * damping_mod.accumulated_factor(PROFILE, t)
        comp_grads.append(g * comp)
        comp_products.append(g * comp * fan.mu_jac[k, j_star])
    assert max(comp_grads) > 2.0 * comp_grads[0]
    assert max(comp_products) <= 2.0 * comp_products[0]
    assert min(comp_products) >= 0.4 * comp_products[0]


def test_refinement_stability_of_collapse_time():
    """Halving ray spacing and snapshot stride moves the fit zero by < 1%."""
    spec = pulse_seed("sine", delta=0.25, min_phi1_prime=-1.0)
    coarse = euler_shock_run(
        spec, EOS, PROFILE, n_cells=4096, mu_stop=0.3, n_rays=65, snapshot_stride=8
    )
    fine = euler_shock_run(
        spec, EOS, PROFILE, n_cells=4096, mu_stop=0.3, n_rays=129, snapshot_stride=4
    )
    assert coarse.t_zero_fit is not None and fine.t_zero_fit is not None
    assert abs(coarse.t_zero_fit - fine.t_zero_fit) <= 0.01 * fine.t_zero_fit


def test_cross_method_collapse_consistency():
    """When both methods reach a moderate threshold, the times agree closely."""
    spec = pulse_seed("sine", delta=0.25, min_phi1_prime=-1.0)
    result = euler_shock_run(spec, EOS, PROFILE, n_cells=2048, mu_stop=0.25, n_rays=65)
    report = ag.detect_collapse(result.fan, threshold=0.4)
    assert report.t_collapse_jac is not None
    assert report.t_collapse_ode is not None
    assert report.methods_consistent
