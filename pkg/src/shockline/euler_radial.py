"""Finite-volume solver for radially symmetric isentropic flow with damping.

Conserved variables are (rho, rho*v) on a uniform grid of cell centers in r.
One step is Strang-split: half a source step (geometric terms -2*rho*v/r and
-2*rho*v^2/r plus the damping drag -a*w(t)*rho*v, integrated per cell with
RK4), a full hyperbolic step (minmod-limited MUSCL reconstruction of the
primitives, HLL interface flux, SSP-RK2 in time), then the second source
half-step.  A planar flag removes the geometric terms so the scheme can be
validated against the exact Riemann oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field
from typing import Callable, Optional

import numpy as np

from . import damping as damping_mod
from .damping import DampingProfile
from .numerics import adaptive_simpson

DEFAULT_CFL = 0.45
DEFAULT_CELLS = 4096
DEFAULT_R_IN = 0.2
# halt when the largest adjacent velocity jump exceeds this (gradient
# unresolvable at grid scale)
GRADIENT_STOP_JUMP = 0.5


class SolverFailure(RuntimeError):
    """Positivity loss or another unrecoverable solver condition."""

    def __init__(self, message: str, field: Optional["FluidField"] = None):
        super().__init__(message)
        self.field = field


class InvalidSeedError(ValueError):
    """Seed data would leave the equation of state's domain."""


@dataclass(frozen=True)
class PolytropicEos:
    """Polytropic gas normalized to rho0 = 1, eta0 = 1, h0 = 0.

    Sound speed eta = rho**((gamma-1)/2), enthalpy h = (rho**(gamma-1)-1)/(gamma-1),
    and the focusing coefficient dH/dh = -(gamma+1) is constant.
    """

    gamma: float = 1.4

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValueError(f"adiabatic exponent must exceed 1, got {self.gamma}")

    def pressure(self, rho):
        return rho**self.gamma / self.gamma

    def sound_speed(self, rho):
        return rho ** ((self.gamma - 1.0) / 2.0)

    def enthalpy(self, rho):
        return (rho ** (self.gamma - 1.0) - 1.0) / (self.gamma - 1.0)

    def rho_from_enthalpy(self, h):
        return (1.0 + (self.gamma - 1.0) * h) ** (1.0 / (self.gamma - 1.0))

    def dH_dh(self) -> float:
        return -(self.gamma + 1.0)


@dataclass(frozen=True)
class ShortPulseSpec:
    """Annulus pulse of thickness delta built from a seed profile phi1.

    phi0 is the antiderivative of phi1 with phi0(0) = 0, which makes the
    outgoing combination (d/dt + d/dr) of the potential vanish at t = 0.
    min_phi1_prime is the attained minimum of phi1' on [0, 1].
    """

    delta: float
    phi1: Callable[[float], float]
    phi1_prime: Callable[[float], float]
    phi0: Callable[[float], float]
    min_phi1_prime: float
    name: str = "custom"

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"pulse thickness must lie in (0,1), got {self.delta}")
        if abs(self.phi0(0.0)) > 1e-12:
            raise ValueError("phi0 must vanish at 0")
        scale = max(1.0, max(abs(self.phi1(float(s))) for s in np.linspace(0.0, 1.0, 65)))
        for s in np.linspace(0.0, 1.0, 33):
            fd = _phi0_derivative(self.phi0, float(s))
            if abs(fd - self.phi1(float(s))) > 1e-10 * scale:
                raise ValueError(
                    f"phi0' != phi1 at s={s:.4f}: {fd:.3e} vs {self.phi1(float(s)):.3e}"
                )


def _phi0_derivative(phi0: Callable[[float], float], s: float, h: float = 2e-5) -> float:
    # 4th-order stencils: central in the interior, one-sided at the ends
    if s - 2 * h < 0.0:
        return (
            -25 * phi0(s) + 48 * phi0(s + h) - 36 * phi0(s + 2 * h)
            + 16 * phi0(s + 3 * h) - 3 * phi0(s + 4 * h)
        ) / (12 * h)
    if s + 2 * h > 1.0:
        return (
            25 * phi0(s) - 48 * phi0(s - h) + 36 * phi0(s - 2 * h)
            - 16 * phi0(s - 3 * h) + 3 * phi0(s - 4 * h)
        ) / (12 * h)
    return (
        -phi0(s + 2 * h) + 8 * phi0(s + h) - 8 * phi0(s - h) + phi0(s - 2 * h)
    ) / (12 * h)


def spec_from_phi1(
    phi1: Callable[[float], float],
    phi1_prime: Callable[[float], float],
    delta: float,
    name: str = "custom",
    phi0: Optional[Callable[[float], float]] = None,
    min_phi1_prime: Optional[float] = None,
) -> ShortPulseSpec:
    """Assemble a pulse spec, integrating phi0 and scanning the slope if needed."""
    if phi0 is None:
        # cumulative composite Simpson on a dense fixed grid, then cubic
        # interpolation: smooth enough to differentiate back to phi1
        n_panels = 4096
        s_nodes = np.linspace(0.0, 1.0, 2 * n_panels + 1)
        f_nodes = np.array([phi1(float(s)) for s in s_nodes])
        h = s_nodes[2] - s_nodes[0]
        panels = (h / 6.0) * (f_nodes[0:-1:2] + 4.0 * f_nodes[1::2] + f_nodes[2::2])
        cum = np.concatenate([[0.0], np.cumsum(panels)])
        from .numerics import cubic_interp

        def phi0(s, _cum=cum, _h=h):
            return float(cubic_interp(0.0, _h, _cum, np.clip(s, 0.0, 1.0))[0])

    if min_phi1_prime is None:
        ss = np.linspace(0.0, 1.0, 2049)
        min_phi1_prime = float(min(phi1_prime(float(s)) for s in ss))
    return ShortPulseSpec(
        delta=delta,
        phi1=phi1,
        phi1_prime=phi1_prime,
        phi0=phi0,
        min_phi1_prime=min_phi1_prime,
        name=name,
    )


@dataclass
class FluidField:
    """Density and radial velocity on uniform cell centers at one time."""

    r: np.ndarray
    rho: np.ndarray
    v: np.ndarray
    t: float = 0.0

    @property
    def dr(self) -> float:
        return float(self.r[1] - self.r[0])

    def copy(self) -> "FluidField":
        return FluidField(self.r, self.rho.copy(), self.v.copy(), self.t)


def make_grid(r_in: float, r_out: float, n_cells: int) -> np.ndarray:
    """Uniform cell centers on [r_in, r_out]."""
    if not (r_out > r_in > 0.0 and n_cells >= 3):
        raise ValueError("grid needs r_out > r_in > 0 and at least 3 cells")
    dr = (r_out - r_in) / n_cells
    return r_in + dr * (np.arange(n_cells) + 0.5)


def build_short_pulse(
    spec: ShortPulseSpec,
    eos: PolytropicEos,
    p: DampingProfile,
    r_grid: np.ndarray,
) -> FluidField:
    """Seed the annulus [1-delta, 1] and the quiet state elsewhere.

    Inside the pulse, with s = (1-r)/delta:
      potential      phi   = delta^{5/2} phi0(s)
      time derivative dphi = delta^{3/2} phi1(s)
      radial slope         = -delta^{3/2} phi1(s)   (phi0' = phi1)
    so v = delta^{3/2} phi1(s) and the enthalpy follows from the momentum
    relation h = dphi - (slope)^2/2 + w(0)*phi.
    """
    r = np.asarray(r_grid, dtype=float)
    d = spec.delta
    dr = float(r[1] - r[0])
    if r[0] - 0.5 * dr > 1.0 - 2.0 * d + 1e-9 or r[-1] + 0.5 * dr < 1.05:
        raise ValueError(
            f"grid [{r[0]:.3f}, {r[-1]:.3f}] must span at least [{1 - 2 * d:.3f}, 1.05]"
        )
    rho = np.ones_like(r)
    v = np.zeros_like(r)
    inside = (r >= 1.0 - d) & (r <= 1.0)
    s = (1.0 - r[inside]) / d
    phi1_s = np.array([spec.phi1(float(x)) for x in s])
    phi0_s = np.array([spec.phi0(float(x)) for x in s])
    phi = d**2.5 * phi0_s
    dphi_dt = d**1.5 * phi1_s
    dphi_dr = -(d**1.5) * phi1_s
    w0 = damping_mod.coefficient(p, 0.0)
    h = dphi_dt - 0.5 * dphi_dr**2 + w0 * phi
    floor = -1.0 / (eos.gamma - 1.0)
    if np.any(h <= floor):
        raise InvalidSeedError(
            f"seed enthalpy reaches {h.min():.3e} <= vacuum limit {floor:.3e}"
        )
    rho[inside] = eos.rho_from_enthalpy(h)
    v[inside] = -dphi_dr
    return FluidField(r=r, rho=rho, v=v, t=0.0)


def _minmod(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return 0.5 * (np.sign(a) + np.sign(b)) * np.minimum(np.abs(a), np.abs(b))


def _hyperbolic_rhs(
    rho: np.ndarray, mom: np.ndarray, dr: float, eos: PolytropicEos
) -> tuple[np.ndarray, np.ndarray]:
    """Flux divergence of the planar conservation laws, MUSCL + HLL."""
    v = mom / rho
    # two ghost cells per side, zero-gradient (outflow)
    rho_p = np.concatenate(([rho[0], rho[0]], rho, [rho[-1], rho[-1]]))
    v_p = np.concatenate(([v[0], v[0]], v, [v[-1], v[-1]]))

    drho = rho_p[1:] - rho_p[:-1]
    dv = v_p[1:] - v_p[:-1]
    slope_rho = _minmod(drho[:-1], drho[1:])
    slope_v = _minmod(dv[:-1], dv[1:])

    # interface i sits between padded cells i+1 and i+2
    rho_l = rho_p[1:-2] + 0.5 * slope_rho[:-1]
    v_l = v_p[1:-2] + 0.5 * slope_v[:-1]
    rho_r = rho_p[2:-1] - 0.5 * slope_rho[1:]
    v_r = v_p[2:-1] - 0.5 * slope_v[1:]

    rho_l = np.maximum(rho_l, 1e-12)
    rho_r = np.maximum(rho_r, 1e-12)

    eta_l = eos.sound_speed(rho_l)
    eta_r = eos.sound_speed(rho_r)
    s_l = np.minimum(v_l - eta_l, v_r - eta_r)
    s_r = np.maximum(v_l + eta_l, v_r + eta_r)

    f_rho_l = rho_l * v_l
    f_rho_r = rho_r * v_r
    f_mom_l = rho_l * v_l**2 + eos.pressure(rho_l)
    f_mom_r = rho_r * v_r**2 + eos.pressure(rho_r)

    denom = s_r - s_l
    denom = np.where(np.abs(denom) < 1e-300, 1.0, denom)
    f_rho_mid = (s_r * f_rho_l - s_l * f_rho_r + s_l * s_r * (rho_r - rho_l)) / denom
    f_mom_mid = (
        s_r * f_mom_l - s_l * f_mom_r + s_l * s_r * (rho_r * v_r - rho_l * v_l)
    ) / denom

    f_rho = np.where(s_l >= 0.0, f_rho_l, np.where(s_r <= 0.0, f_rho_r, f_rho_mid))
    f_mom = np.where(s_l >= 0.0, f_mom_l, np.where(s_r <= 0.0, f_mom_r, f_mom_mid))

    return -(f_rho[1:] - f_rho[:-1]) / dr, -(f_mom[1:] - f_mom[:-1]) / dr


def _source_step(
    rho: np.ndarray,
    mom: np.ndarray,
    r: np.ndarray,
    t0: float,
    dt: float,
    p: DampingProfile,
    planar: bool,
) -> tuple[np.ndarray, np.ndarray]:
    """RK4 half/full step of the geometric and damping source ODEs."""
    if dt == 0.0:
        return rho, mom

    def rhs(t, rho_m, mom_m):
        w = damping_mod.coefficient(p, t)
        if planar:
            s_rho = np.zeros_like(rho_m)
            s_mom = -w * mom_m
        else:
            s_rho = -2.0 * mom_m / r
            s_mom = -2.0 * mom_m**2 / (rho_m * r) - w * mom_m
        return s_rho, s_mom

    k1r, k1m = rhs(t0, rho, mom)
    k2r, k2m = rhs(t0 + 0.5 * dt, rho + 0.5 * dt * k1r, mom + 0.5 * dt * k1m)
    k3r, k3m = rhs(t0 + 0.5 * dt, rho + 0.5 * dt * k2r, mom + 0.5 * dt * k2m)
    k4r, k4m = rhs(t0 + dt, rho + dt * k3r, mom + dt * k3m)
    rho_new = rho + (dt / 6.0) * (k1r + 2 * k2r + 2 * k3r + k4r)
    mom_new = mom + (dt / 6.0) * (k1m + 2 * k2m + 2 * k3m + k4m)
    return rho_new, mom_new


def cfl_dt(field: FluidField, eos: PolytropicEos, cfl: float = DEFAULT_CFL) -> float:
    """Largest stable step at the current state."""
    speed = np.max(np.abs(field.v) + eos.sound_speed(field.rho))
    return cfl * field.dr / float(speed)


def advance(
    field: FluidField,
    eos: PolytropicEos,
    p: DampingProfile,
    dt: float,
    planar: bool = False,
) -> FluidField:
    """One Strang-split conservative step of size dt."""
    rho = field.rho
    mom = field.rho * field.v
    r = field.r
    dr = field.dr
    t = field.t

    rho, mom = _source_step(rho, mom, r, t, 0.5 * dt, p, planar)

    # SSP-RK2 on the flux divergence
    d_rho1, d_mom1 = _hyperbolic_rhs(rho, mom, dr, eos)
    rho1 = rho + dt * d_rho1
    mom1 = mom + dt * d_mom1
    if np.any(rho1 <= 0.0):
        raise SolverFailure(f"negative density in predictor at t={t:.6g}", field)
    d_rho2, d_mom2 = _hyperbolic_rhs(rho1, mom1, dr, eos)
    rho = 0.5 * (rho + rho1 + dt * d_rho2)
    mom = 0.5 * (mom + mom1 + dt * d_mom2)

    rho, mom = _source_step(rho, mom, r, t + 0.5 * dt, 0.5 * dt, p, planar)

    if np.any(rho <= 0.0):
        raise SolverFailure(f"negative density after step at t={t:.6g}", field)
    return FluidField(r=r, rho=rho, v=mom / rho, t=t + dt)


def gradient_monitor(field: FluidField) -> dict:
    """Max |dv/dr| and |drho/dr| with their locations (central differences)."""
    if field.r.size < 3:
        raise ValueError("gradient monitor needs at least 3 cells")
    dv = np.gradient(field.v, field.r)
    drho = np.gradient(field.rho, field.r)
    iv = int(np.argmax(np.abs(dv)))
    ir = int(np.argmax(np.abs(drho)))
    return {
        "max_dv_dr": float(np.abs(dv[iv])),
        "max_drho_dr": float(np.abs(drho[ir])),
        "argmax_v": float(field.r[iv]),
        "argmax_rho": float(field.r[ir]),
    }


@dataclass
class Trajectory:
    """Snapshots (t, rho, v) of one run on a fixed grid."""

    r: np.ndarray
    times: list = dataclass_field(default_factory=list)
    rho: list = dataclass_field(default_factory=list)
    v: list = dataclass_field(default_factory=list)

    def record(self, field: FluidField) -> None:
        if self.times and field.t <= self.times[-1]:
            return
        self.times.append(field.t)
        self.rho.append(field.rho.copy())
        self.v.append(field.v.copy())

    @property
    def n_snapshots(self) -> int:
        return len(self.times)

    def time_array(self) -> np.ndarray:
        return np.asarray(self.times, dtype=float)


class SnapshotRecorder:
    """Monitor that stores every stride-th accepted step into a Trajectory."""

    def __init__(self, trajectory: Trajectory, stride: int = 8):
        if stride < 1 or stride > 8:
            raise ValueError("snapshot stride must lie in [1, 8]")
        self.trajectory = trajectory
        self.stride = stride
        self._counter = 0

    def __call__(self, field: FluidField) -> None:
        if self._counter % self.stride == 0:
            self.trajectory.record(field)
        self._counter += 1

    def flush(self, field: FluidField) -> None:
        self.trajectory.record(field)


class GradientHistory:
    """Monitor that tracks the gradient maxima over time."""

    def __init__(self, stride: int = 8):
        self.stride = stride
        self.times: list[float] = []
        self.max_dv_dr: list[float] = []
        self.max_drho_dr: list[float] = []
        self._counter = 0

    def __call__(self, field: FluidField) -> None:
        if self._counter % self.stride == 0:
            g = gradient_monitor(field)
            self.times.append(field.t)
            self.max_dv_dr.append(g["max_dv_dr"])
            self.max_drho_dr.append(g["max_drho_dr"])
        self._counter += 1


@dataclass
class RunResult:
    field: FluidField
    status: str  # "t_max" | "gradient_blowup" | "callback_stop"
    n_steps: int


def run_until(
    field: FluidField,
    eos: PolytropicEos,
    p: DampingProfile,
    t_max: float,
    monitors: tuple = (),
    planar: bool = False,
    cfl: float = DEFAULT_CFL,
    stop_condition: Optional[Callable[[FluidField], bool]] = None,
    max_steps: int = 2_000_000,
) -> RunResult:
    """CFL-controlled stepping to t_max, invoking monitors after each step.

    Stops early when the adjacent velocity jump exceeds the blow-up proxy or
    when stop_condition returns True; monitors see the initial state too.
    """
    for monitor in monitors:
        monitor(field)
    if field.t >= t_max:
        return RunResult(field=field, status="t_max", n_steps=0)
    n = 0
    while field.t < t_max and n < max_steps:
        dt = min(cfl_dt(field, eos, cfl), t_max - field.t)
        field = advance(field, eos, p, dt, planar=planar)
        n += 1
        for monitor in monitors:
            monitor(field)
        if np.max(np.abs(np.diff(field.v))) > GRADIENT_STOP_JUMP:
            return RunResult(field=field, status="gradient_blowup", n_steps=n)
        if stop_condition is not None and stop_condition(field):
            return RunResult(field=field, status="callback_stop", n_steps=n)
    if n >= max_steps and field.t < t_max:
        raise SolverFailure(f"step budget exhausted at t={field.t:.6g}", field)
    return RunResult(field=field, status="t_max", n_steps=n)
