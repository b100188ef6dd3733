"""Exact characteristic engine for the damped Burgers equation.

For u_t + u u_x = -a u / (1+t)**lam with datum f, the solution is explicit in
ray coordinates: the value on the ray labelled u is f(u)/A(t), the ray
position is X(t;u) = u + f(u) I(t), and the foliation density along the ray
is mu(t,u) = 1 + f'(u) I(t) (A and I from the damping module).  Everything in
this module is exact up to quadrature tolerance, which makes it the oracle
for the ray-tracing machinery used on finite-volume runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import damping
from .damping import DampingProfile
from .numerics import bisect_root, expand_bracket
from .predict import Global, Inconclusive, Shock, ShockClassification

DEFAULT_T_MAX = math.exp(40.0)


class BlowUpSignal(ArithmeticError):
    """Raised when a gradient is requested exactly at a degenerate ray."""


@dataclass(frozen=True)
class BurgersSeed:
    """Initial datum f with derivative, normalized so f(0) = 0.

    c = -min f' is the compression strength; positive c means the
    characteristics focus.  x_min_attained locates the minimizing point.
    """

    f: Callable[[float], float]
    fprime: Callable[[float], float]
    c: float
    x_min_attained: float
    domain: tuple[float, float]

    def __post_init__(self):
        lo, hi = self.domain
        if not lo < hi:
            raise ValueError("domain must be a nondegenerate interval")
        if not lo <= 0.0 <= hi:
            raise ValueError("domain must contain 0 (normalization point)")
        if abs(self.f(0.0)) > 1e-12:
            raise ValueError("datum must vanish at 0")
        if abs(self.fprime(self.x_min_attained) + self.c) > 1e-10:
            raise ValueError("x_min_attained inconsistent with c")

    def contains(self, u: float) -> bool:
        return self.domain[0] <= u <= self.domain[1]


def seed_from_callable(
    f: Callable[[float], float],
    domain: tuple[float, float],
    fprime: Optional[Callable[[float], float]] = None,
    scan_points: int = 4097,
) -> BurgersSeed:
    """Build a seed, deriving f' by 4th-order differences when not supplied.

    The compression strength is located by a dense scan of f' followed by a
    golden-section refinement around the best sample.
    """
    lo, hi = domain
    if fprime is None:
        h = 1e-5 * (hi - lo)

        def fprime(x, _f=f, _h=h):
            return (-_f(x + 2 * _h) + 8 * _f(x + _h) - 8 * _f(x - _h) + _f(x - 2 * _h)) / (
                12 * _h
            )

    xs = np.linspace(lo, hi, scan_points)
    slopes = np.array([fprime(float(x)) for x in xs])
    k = int(np.argmin(slopes))
    a = xs[max(k - 1, 0)]
    b = xs[min(k + 1, scan_points - 1)]
    x_min = _golden_min(fprime, float(a), float(b))
    c = -fprime(x_min)
    return BurgersSeed(f=f, fprime=fprime, c=c, x_min_attained=x_min, domain=domain)


def _golden_min(g: Callable[[float], float], a: float, b: float, tol: float = 1e-12) -> float:
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = b - inv_phi * (b - a)
    x2 = a + inv_phi * (b - a)
    g1, g2 = g(x1), g(x2)
    while b - a > tol * (1.0 + abs(a) + abs(b)):
        if g1 < g2:
            b, x2, g2 = x2, x1, g1
            x1 = b - inv_phi * (b - a)
            g1 = g(x1)
        else:
            a, x1, g1 = x1, x2, g2
            x2 = a + inv_phi * (b - a)
            g2 = g(x2)
    return 0.5 * (a + b)


@dataclass
class CharacteristicFan:
    """Traced family of rays: positions, per-ray density, crossing flags.

    positions and mu have shape (n_times, n_rays); crossed marks rays that
    participated in an adjacent-position inversion at some recorded time.
    """

    u_grid: np.ndarray
    times: np.ndarray
    positions: np.ndarray
    mu: np.ndarray
    crossed: np.ndarray

    @property
    def first_crossing_index(self) -> Optional[int]:
        """Index into times of the first recorded adjacency inversion."""
        bad = np.diff(self.positions, axis=1) <= 0.0
        rows = np.nonzero(bad.any(axis=1))[0]
        return int(rows[0]) if rows.size else None


def value_along_ray(seed: BurgersSeed, p: DampingProfile, t: float, u: float) -> float:
    """Solution value carried by ray u at time t: f(u)/A(t)."""
    if not seed.contains(u):
        raise ValueError(f"ray label {u} outside seed domain {seed.domain}")
    return seed.f(u) / damping.accumulated_factor(p, t)


def mu_closed_form(seed: BurgersSeed, p: DampingProfile, t: float, u: float) -> float:
    """Foliation density 1 + f'(u) I(t); equals the Jacobian dX/du."""
    return 1.0 + seed.fprime(u) * damping.weight_integral(p, t)


def trace_fan(
    seed: BurgersSeed,
    p: DampingProfile,
    times: Sequence[float],
    u_grid: Sequence[float],
) -> CharacteristicFan:
    """Exact fan over a sorted time list and strictly increasing ray labels."""
    u = np.asarray(u_grid, dtype=float)
    t = np.asarray(times, dtype=float)
    if u.size == 0 or t.size == 0:
        raise ValueError("ray grid and time list must be nonempty")
    if np.any(np.diff(u) <= 0.0):
        raise ValueError("ray labels must be strictly increasing")
    if np.any(u < seed.domain[0]) or np.any(u > seed.domain[1]):
        raise ValueError("ray labels must lie inside the seed domain")
    fu = np.array([seed.f(float(x)) for x in u])
    fpu = np.array([seed.fprime(float(x)) for x in u])
    integral = damping.weight_integral_grid(p, t)
    positions = u[None, :] + integral[:, None] * fu[None, :]
    mu = 1.0 + integral[:, None] * fpu[None, :]
    crossed = np.zeros(u.size, dtype=bool)
    gaps = np.diff(positions, axis=1) <= 0.0
    if gaps.any():
        cols = np.nonzero(gaps.any(axis=0))[0]
        crossed[cols] = True
        crossed[cols + 1] = True
    return CharacteristicFan(u_grid=u, times=t, positions=positions, mu=mu, crossed=crossed)


def crossing_time(
    seed: BurgersSeed,
    p: DampingProfile,
    u_grid: Sequence[float],
    rtol: float = 1e-10,
    t_max: float = DEFAULT_T_MAX,
) -> Optional[float]:
    """First time adjacent fan positions become non-increasing, by bisection.

    The minimum adjacent gap is strictly decreasing in time whenever some
    pair compresses, so bisection on the gap sign is exact.  Returns None
    when no pair compresses (gaps grow forever) or no crossing below t_max.
    """
    u = np.asarray(u_grid, dtype=float)
    fu = np.array([seed.f(float(x)) for x in u])
    du = np.diff(u)
    df = np.diff(fu)
    slopes = df / du
    if np.all(slopes >= 0.0):
        return None
    # crossing of pair i at I(t) = -du_i/df_i; the earliest wins
    target = np.min(-du[slopes < 0.0] / df[slopes < 0.0])

    def gap(t: float) -> float:
        return damping.weight_integral(p, t) - target

    bracket = expand_bracket(gap, 0.0, 1.0, t_max)
    if bracket is None:
        return None
    return bisect_root(gap, bracket[0], bracket[1], rtol=rtol)


def shock_time(
    seed: BurgersSeed,
    p: DampingProfile,
    t_max: float = DEFAULT_T_MAX,
) -> ShockClassification:
    """Classify the seed and locate the blow-up time when it exists.

    For compressive seeds (c > 0) the blow-up time is the root of
    I(T) = 1/c, found by bisection on the monotone integral.  Expansive
    seeds are global.  A compressive seed under a custom weight whose
    integral saturates below 1/c is also global (the damping absorbs the
    compression); an unresolved bracket inside [0, t_max] is inconclusive.
    """
    if seed.c <= 0.0:
        return Global(note="expansive seed: characteristics never intersect")
    target = 1.0 / seed.c

    def gap(t: float) -> float:
        return damping.weight_integral(p, t) - target

    if p.custom_weight is None:
        lo, hi = damping.c_bounds(p)
        bracket = (lo * target * 0.5, hi * target * 1.5)
        if gap(bracket[0]) > 0.0:
            bracket = (0.0, bracket[0])
    else:
        bracket = expand_bracket(gap, 0.0, min(1.0, t_max), t_max)
        if bracket is None:
            i_max = damping.weight_integral(p, t_max)
            slope = 1.0 / damping.accumulated_factor(p, t_max)
            if i_max + slope * 10.0 * t_max < target:
                return Global(note="damping absorbs compression")
            return Inconclusive(t_max=t_max)
    t_star = bisect_root(gap, bracket[0], bracket[1], rtol=1e-10)
    return Shock(t_star=t_star)


def spatial_gradient(seed: BurgersSeed, p: DampingProfile, t: float, u: float) -> float:
    """Eulerian slope along ray u: f'(u) / (A(t) mu(t,u)).

    Raises BlowUpSignal at mu = 0, where the slope diverges.
    """
    mu = mu_closed_form(seed, p, t, u)
    if mu == 0.0:
        raise BlowUpSignal(f"foliation density vanished on ray {u} at t={t}")
    return seed.fprime(u) / (damping.accumulated_factor(p, t) * mu)


def ray_label(
    seed: BurgersSeed, p: DampingProfile, t: float, x: float, rtol: float = 1e-12
) -> float:
    """Invert the characteristic map: the label u with X(t;u) = x.

    Valid while the map is monotone (before the first crossing).
    """
    integral = damping.weight_integral(p, t)
    lo, hi = seed.domain

    def position_gap(u: float) -> float:
        return u + seed.f(u) * integral - x

    glo, ghi = position_gap(lo), position_gap(hi)
    if glo > 0.0 or ghi < 0.0:
        raise ValueError(f"position {x} outside the fan at t={t}")
    return bisect_root(position_gap, lo, hi, rtol=rtol)
