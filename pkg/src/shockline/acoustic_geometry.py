"""Eikonal rays and the inverse foliation density, by two independent routes.

Rays follow the outgoing characteristic speed dX/dt = v + eta through the
recorded trajectory of a solver run (cubic interpolation in r, linear in t).
The density mu is computed two ways:

* mu_jacobian: mu = -dX/du across the fan of rays labelled u = 1 - r0, so
  mu(0) = 1 and ray merging drives mu to 0;
* mu_transport: per-ray integration of dmu/dt = m + mu*e, where in radial
  symmetry  m = (mu/eta) * ( -(dH/dh)/2 * dh/dr + w(t) * v )  with
  dH/dh = -(gamma+1), and  e = (gamma-1)/(2 eta^2) * Lh + Lv/eta  with
  L = d/dt along the ray.  Both right-hand sides stay regular as mu -> 0,
  and the equation is linear in mu, so it integrates as an exponential of a
  cumulative integral.

Collapse is declared when mu falls below a small threshold (exact zeros are
not resolvable in floating point on a finite grid); the zero time is then
extrapolated by a linear fit of mu against ln(1+t) over the final decade.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field
from typing import Optional

import numpy as np

from . import damping as damping_mod
from .damping import DampingProfile
from .euler_radial import PolytropicEos, Trajectory
from .numerics import cubic_interp, cumtrapz

DEFAULT_N_RAYS = 65
DEFAULT_COLLAPSE_THRESHOLD = 0.01
CROSS_VALIDATION_RTOL = 0.05


class InsufficientFanError(ValueError):
    """Fewer alive rays than the Jacobian stencil needs."""


@dataclass
class AcousticFan:
    """Traced ray family: positions and both density estimates per ray.

    u labels the launch radius through u = 1 - r0.  Arrays are indexed
    [time, ray]; status is "alive", "collapsed" or "escaped" per ray.
    """

    u_grid: np.ndarray
    times: np.ndarray
    x: np.ndarray
    mu_jac: Optional[np.ndarray] = None
    mu_ode: Optional[np.ndarray] = None
    status: Optional[np.ndarray] = None


@dataclass
class MuReport:
    """First-collapse summary for both density routes."""

    threshold: float
    t_max: float
    t_collapse_jac: Optional[float]
    t_collapse_ode: Optional[float]
    u_star: Optional[float]
    discrepancy: float
    t_zero_extrapolated: Optional[float] = None
    methods_consistent: Optional[bool] = None

    @property
    def collapsed(self) -> bool:
        return self.t_collapse_jac is not None


class _FieldSampler:
    """Cubic-in-r, linear-in-t evaluation of a trajectory's fields."""

    def __init__(self, trajectory: Trajectory, eos: PolytropicEos):
        self.r0 = float(trajectory.r[0])
        self.dr = float(trajectory.r[1] - trajectory.r[0])
        self.r_max = float(trajectory.r[-1])
        self.times = trajectory.time_array()
        self.eos = eos
        self.rho = trajectory.rho
        self.v = trajectory.v
        self._cache: dict[tuple[int, str], np.ndarray] = {}

    def _per_snapshot(self, k: int, name: str) -> np.ndarray:
        key = (k, name)
        if key not in self._cache:
            rho = self.rho[k]
            if name == "speed":
                arr = self.v[k] + self.eos.sound_speed(rho)
            elif name == "h":
                arr = self.eos.enthalpy(rho)
            elif name == "dh_dr":
                arr = np.gradient(self.eos.enthalpy(rho), self.dr)
            elif name == "v":
                arr = self.v[k]
            elif name == "eta":
                arr = self.eos.sound_speed(rho)
            else:
                raise KeyError(name)
            self._cache[key] = arr
            if len(self._cache) > 4096:
                self._cache.pop(next(iter(self._cache)))
        return self._cache[key]

    def bracket(self, t: float) -> tuple[int, int, float]:
        """Snapshot indices around t and the blend weight."""
        times = self.times
        k = int(np.searchsorted(times, t, side="right")) - 1
        k = max(0, min(k, times.size - 2))
        span = times[k + 1] - times[k]
        w = 0.0 if span == 0.0 else (t - times[k]) / span
        return k, k + 1, float(np.clip(w, 0.0, 1.0))

    def at(self, name: str, t: float, x: np.ndarray) -> np.ndarray:
        k0, k1, w = self.bracket(t)
        a = cubic_interp(self.r0, self.dr, self._per_snapshot(k0, name), x)
        if w == 0.0:
            return a
        b = cubic_interp(self.r0, self.dr, self._per_snapshot(k1, name), x)
        return (1.0 - w) * a + w * b

    def at_snapshot(self, name: str, k: int, x: np.ndarray) -> np.ndarray:
        return cubic_interp(self.r0, self.dr, self._per_snapshot(k, name), x)


class RayTracer:
    """Incremental RK4 integration of rays through recorded snapshots.

    Positions are stored at every snapshot time; advance() consumes any
    snapshots appended to the trajectory since the last call, taking two RK4
    substeps per snapshot interval.  A few guard rays are traced beyond each
    end of the requested label range so the fan Jacobian can use central
    differences everywhere (one-sided edge stencils bias mu by several
    percent near a collapsing edge ray); the guards never appear in the
    returned fan.
    """

    def __init__(
        self,
        trajectory: Trajectory,
        eos: PolytropicEos,
        u_grid: np.ndarray,
        guard_rays: int = 4,
    ):
        self.trajectory = trajectory
        self.eos = eos
        self.u_grid = np.asarray(u_grid, dtype=float)
        if self.u_grid.ndim != 1 or self.u_grid.size < 3:
            raise InsufficientFanError("need at least 3 rays")
        if np.any(np.diff(self.u_grid) <= 0.0):
            raise ValueError("ray labels must be strictly increasing")
        if trajectory.n_snapshots == 0:
            raise ValueError("trajectory has no snapshots")
        self.n_guard = int(guard_rays)
        h_lo = self.u_grid[1] - self.u_grid[0]
        h_hi = self.u_grid[-1] - self.u_grid[-2]
        lo = self.u_grid[0] - h_lo * np.arange(self.n_guard, 0, -1)
        hi = self.u_grid[-1] + h_hi * np.arange(1, self.n_guard + 1)
        self._u_ext = np.concatenate([lo, self.u_grid, hi])
        self.x = 1.0 - self._u_ext.copy()
        self.path: list[np.ndarray] = [self.x.copy()]
        self.consumed = 1
        self.escaped = np.zeros(self._u_ext.size, dtype=bool)

    @property
    def core(self) -> slice:
        return slice(self.n_guard, self._u_ext.size - self.n_guard)

    def advance(self) -> None:
        sampler = _FieldSampler(self.trajectory, self.eos)
        times = self.trajectory.time_array()
        while self.consumed < times.size:
            k = self.consumed
            t0, t1 = times[k - 1], times[k]
            x = self.x
            for t_lo, t_hi in ((t0, 0.5 * (t0 + t1)), (0.5 * (t0 + t1), t1)):
                h = t_hi - t_lo
                k1 = sampler.at("speed", t_lo, x)
                k2 = sampler.at("speed", t_lo + 0.5 * h, x + 0.5 * h * k1)
                k3 = sampler.at("speed", t_lo + 0.5 * h, x + 0.5 * h * k2)
                k4 = sampler.at("speed", t_hi, x + h * k3)
                x = x + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            self.escaped |= (x < sampler.r0) | (x > sampler.r_max)
            self.x = x
            self.path.append(x.copy())
            self.consumed += 1

    def _mu_ext(self, x_ext: np.ndarray) -> np.ndarray:
        """-dX/du on the extended fan: 4th-order central where the label
        spacing is uniform and the stencil fits, np.gradient elsewhere."""
        mu = -np.gradient(x_ext, self._u_ext, axis=1)
        du = np.diff(self._u_ext)
        uniform = np.isclose(du.min(), du.max(), rtol=1e-9)
        if uniform and x_ext.shape[1] >= 5:
            h = du[0]
            inner = slice(2, -2)
            mu[:, inner] = -(
                -x_ext[:, 4:] + 8.0 * x_ext[:, 3:-1] - 8.0 * x_ext[:, 1:-3] + x_ext[:, :-4]
            ) / (12.0 * h)
        return mu

    def mu_jac_core(self) -> np.ndarray:
        """Current-fan Jacobian density restricted to the requested labels."""
        x = np.vstack(self.path)
        return self._mu_ext(x)[:, self.core]

    def fan(self) -> AcousticFan:
        times = self.trajectory.time_array()[: self.consumed]
        x_ext = np.vstack(self.path)
        mu_ext = self._mu_ext(x_ext)
        x = x_ext[:, self.core]
        fan = AcousticFan(u_grid=self.u_grid, times=times, x=x)
        fan.mu_jac = mu_ext[:, self.core]
        status = np.full(self.u_grid.size, "alive", dtype=object)
        status[self.escaped[self.core]] = "escaped"
        collapsed = (fan.mu_jac <= DEFAULT_COLLAPSE_THRESHOLD).any(axis=0)
        inverted = (np.diff(x, axis=1) >= 0.0).any(axis=0)
        bad = collapsed.copy()
        bad[:-1] |= inverted
        bad[1:] |= inverted
        status[bad] = "collapsed"
        fan.status = status
        return fan


def trace_rays(
    trajectory: Trajectory, eos: PolytropicEos, u_grid: np.ndarray, guard_rays: int = 4
) -> AcousticFan:
    """Full-pass ray trace over an already recorded trajectory."""
    tracer = RayTracer(trajectory, eos, u_grid, guard_rays=guard_rays)
    tracer.advance()
    return tracer.fan()


def mu_jacobian(fan: AcousticFan) -> np.ndarray:
    """mu = -dX/du across the fan (2nd-order differences, one-sided edges).

    With the labelling u = 1 - r0 the launch positions decrease in u, so
    -dX/du starts at exactly 1 and hits 0 when adjacent rays merge.  Fans
    built by RayTracer carry a guard-ray-centered version already; this
    standalone form is for fans assembled by hand.
    """
    if fan.u_grid.size < 3:
        raise InsufficientFanError("Jacobian stencil needs at least 3 rays")
    return -np.gradient(fan.x, fan.u_grid, axis=1)


def default_fan_labels(delta: float, n_rays: int = DEFAULT_N_RAYS) -> np.ndarray:
    """Ray labels spanning the pulse annulus, u in [0, delta]."""
    return np.linspace(0.0, delta, n_rays)


def mu_transport(
    trajectory: Trajectory,
    eos: PolytropicEos,
    p: DampingProfile,
    ray_path: np.ndarray,
    times: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Integrate the density transport law along one ray path.

    ray_path holds the ray position at each snapshot time.  The law is
    linear in mu, dmu/dt = mu * G(t), so mu = exp(cumulative integral of G);
    a constant G reproduces exp(G t) exactly.
    """
    t = trajectory.time_array() if times is None else np.asarray(times, dtype=float)
    x = np.asarray(ray_path, dtype=float)
    if x.shape[0] != t.shape[0]:
        raise ValueError("ray path and time grid disagree")
    return _transport_paths(trajectory, eos, p, x[:, None], t)[:, 0]


def transport_fan(
    trajectory: Trajectory,
    eos: PolytropicEos,
    p: DampingProfile,
    fan: AcousticFan,
) -> np.ndarray:
    """mu_transport for every ray of a traced fan, shaped like fan.x."""
    return _transport_paths(trajectory, eos, p, fan.x, fan.times)


def _transport_paths(
    trajectory: Trajectory,
    eos: PolytropicEos,
    p: DampingProfile,
    x: np.ndarray,
    t: np.ndarray,
) -> np.ndarray:
    """Vectorized transport integration for paths stacked as columns of x."""
    sampler = _FieldSampler(trajectory, eos)
    n, n_rays = x.shape
    gamma = eos.gamma

    h_on = np.empty((n, n_rays))
    v_on = np.empty((n, n_rays))
    eta_on = np.empty((n, n_rays))
    dh_dr_on = np.empty((n, n_rays))
    for k in range(n):
        h_on[k] = sampler.at_snapshot("h", k, x[k])
        v_on[k] = sampler.at_snapshot("v", k, x[k])
        eta_on[k] = sampler.at_snapshot("eta", k, x[k])
        dh_dr_on[k] = sampler.at_snapshot("dh_dr", k, x[k])

    # L derivatives along a ray are plain time derivatives of on-ray samples
    lh = np.gradient(h_on, t, axis=0)
    lv = np.gradient(v_on, t, axis=0)

    w = np.asarray(damping_mod.coefficient(p, t))[:, None]
    m_over_mu = ((gamma + 1.0) / 2.0 * dh_dr_on + w * v_on) / eta_on
    e_term = (gamma - 1.0) / (2.0 * eta_on**2) * lh + lv / eta_on
    growth = m_over_mu + e_term
    log_mu = np.zeros_like(growth)
    log_mu[1:] = np.cumsum(0.5 * (growth[1:] + growth[:-1]) * np.diff(t)[:, None], axis=0)
    return np.exp(log_mu)


def detect_collapse(
    fan: AcousticFan,
    threshold: float = DEFAULT_COLLAPSE_THRESHOLD,
    window_floor: float = 0.2,
) -> MuReport:
    """First threshold crossing per method, discrepancy, and zero-time fit.

    The discrepancy is the largest relative gap |mu_jac - mu_ode| / mu_jac
    over all (time, ray) samples with mu_jac >= window_floor.
    """
    if fan.mu_jac is None:
        fan.mu_jac = mu_jacobian(fan)
    t = fan.times
    t_max = float(t[-1])

    def first_crossing(mu: np.ndarray) -> tuple[Optional[float], Optional[float]]:
        mins = mu.min(axis=1)
        below = np.nonzero(mins <= threshold)[0]
        if below.size == 0:
            return None, None
        k = int(below[0])
        u_at = float(fan.u_grid[int(np.argmin(mu[k]))])
        if k == 0:
            return float(t[0]), u_at
        # linear interpolation of the min-mu curve through the threshold
        m0, m1 = mins[k - 1], mins[k]
        frac = (m0 - threshold) / (m0 - m1)
        return float(t[k - 1] + frac * (t[k] - t[k - 1])), u_at

    t_jac, u_star = first_crossing(fan.mu_jac)
    t_ode = None
    if fan.mu_ode is not None:
        t_ode, _ = first_crossing(fan.mu_ode)

    discrepancy = 0.0
    if fan.mu_ode is not None:
        window = fan.mu_jac >= window_floor
        if window.any():
            gaps = np.abs(fan.mu_jac - fan.mu_ode)[window] / fan.mu_jac[window]
            discrepancy = float(gaps.max())

    t_zero = None
    mins = fan.mu_jac.min(axis=1)
    if t_jac is not None or mins[-1] <= 10.0 * threshold:
        t_zero = _extrapolate_zero(t, mins, threshold)

    consistent = None
    if t_jac is not None and t_ode is not None:
        consistent = abs(t_jac - t_ode) <= CROSS_VALIDATION_RTOL * max(t_jac, t_ode)

    return MuReport(
        threshold=threshold,
        t_max=t_max,
        t_collapse_jac=t_jac,
        t_collapse_ode=t_ode,
        u_star=u_star,
        discrepancy=discrepancy,
        t_zero_extrapolated=t_zero,
        methods_consistent=consistent,
    )


def _extrapolate_zero(t: np.ndarray, mu_min: np.ndarray, threshold: float) -> Optional[float]:
    """Zero time from a linear fit of min-mu against ln(1+t).

    Fits over the final decade [threshold, 10*threshold] of the decay (or
    the last quarter of samples when the decade is underpopulated).
    """
    mask = (mu_min <= 10.0 * threshold) & (mu_min >= threshold * 0.5)
    if mask.sum() < 4:
        k0 = max(0, t.size - max(4, t.size // 4))
        mask = np.zeros_like(mask)
        mask[k0:] = True
    if mask.sum() < 2:
        return None
    xs = np.log1p(t[mask])
    ys = mu_min[mask]
    slope, intercept = np.polyfit(xs, ys, 1)
    if slope >= 0.0:
        return None
    return float(math.expm1(-intercept / slope))
