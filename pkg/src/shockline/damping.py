"""Time-decaying damping weights and their integrals.

The default weight is w(t) = a / (1+t)**lam with lam > 1.  Two derived
quantities drive every lifespan prediction in the package:

* the accumulated factor  A(t) = exp( integral_0^t w(s) ds ), which has the
  closed form exp( (a/(lam-1)) * (1 - (1+t)**(1-lam)) ), and
* the reciprocal integral  I(t) = integral_0^t 1/A(s) ds, which is strictly
  increasing and sandwiched between t*exp(-beta) and t*exp(beta) with
  beta = |a/(lam-1)|.

A general positive weight f(t) may replace the power law; A and I are then
obtained by jointly integrating dA/dt = a*f*A, dI/dt = 1/A with a classical
RK4 stepper refined by step halving.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .numerics import adaptive_simpson, integrate_rk4

_QUAD_ATOL = 1e-12
_QUAD_RTOL = 1e-10
_ODE_RTOL = 1e-10


@dataclass(frozen=True)
class DampingProfile:
    """Damping strength a and decay exponent lam, or a custom weight f(t).

    With no custom weight the coefficient is a/(1+t)**lam and lam must be
    strictly greater than 1 (the closed forms assume it).  A custom weight
    only needs to be positive and evaluable on the simulated window.
    """

    a: float
    lam: float = 2.0
    custom_weight: Optional[Callable[[float], float]] = None

    def __post_init__(self):
        if self.custom_weight is None and not self.lam > 1.0:
            raise ValueError(f"decay exponent must exceed 1, got lam={self.lam}")

    @property
    def beta(self) -> float:
        """|a/(lam-1)|, the log-width of the A(t) envelope."""
        if self.custom_weight is not None:
            raise ValueError("beta is only defined for the power-law weight")
        return abs(self.a / (self.lam - 1.0))


def coefficient(p: DampingProfile, t):
    """Damping coefficient at time t >= 0 (vectorized over t)."""
    t = np.asarray(t, dtype=float)
    if p.custom_weight is not None:
        f = np.vectorize(p.custom_weight, otypes=[float])
        out = p.a * f(t)
    else:
        out = p.a * (1.0 + t) ** (-p.lam)
    return out if out.ndim else float(out)


def accumulated_factor(p: DampingProfile, t: float) -> float:
    """A(t) = exp(integral of the coefficient from 0 to t); A(0) = 1."""
    if t < 0.0:
        raise ValueError("time must be nonnegative")
    if p.custom_weight is not None:
        return _custom_a_and_i(p, t)[0]
    if p.a == 0.0:
        return 1.0
    return math.exp((p.a / (p.lam - 1.0)) * (1.0 - (1.0 + t) ** (1.0 - p.lam)))


def accumulated_factor_quadrature(p: DampingProfile, t: float) -> float:
    """A(t) by adaptive quadrature of the coefficient; oracle for the closed form."""
    if t == 0.0:
        return 1.0
    integral = adaptive_simpson(
        lambda s: coefficient(p, s), 0.0, t, atol=_QUAD_ATOL, rtol=_QUAD_RTOL
    )
    return math.exp(integral)


def reciprocal_factor(p: DampingProfile, t):
    """1/A(t), the decay weight along characteristics (vectorized over t)."""
    t = np.asarray(t, dtype=float)
    if p.custom_weight is not None:
        out = np.array([1.0 / _custom_a_and_i(p, float(tt))[0] for tt in np.atleast_1d(t)])
        out = out.reshape(t.shape)
    else:
        out = np.exp((p.a / (p.lam - 1.0)) * ((1.0 + t) ** (1.0 - p.lam) - 1.0))
    return out if out.ndim else float(out)


def weight_integral(p: DampingProfile, t: float) -> float:
    """I(t) = integral_0^t 1/A(s) ds; strictly increasing, I(0) = 0."""
    if t < 0.0:
        raise ValueError("time must be nonnegative")
    if t == 0.0:
        return 0.0
    if p.custom_weight is not None:
        return _custom_a_and_i(p, t)[1]
    if p.a == 0.0:
        return t
    return adaptive_simpson(
        lambda s: reciprocal_factor(p, s), 0.0, t, atol=_QUAD_ATOL, rtol=_QUAD_RTOL
    )


def weight_integral_grid(p: DampingProfile, times: np.ndarray) -> np.ndarray:
    """I evaluated on a sorted grid of times, accumulated panel by panel."""
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ValueError("times must be a nonempty 1-d array")
    if np.any(np.diff(times) < 0.0) or times[0] < 0.0:
        raise ValueError("times must be sorted and nonnegative")
    out = np.empty_like(times)
    acc = weight_integral(p, float(times[0]))
    out[0] = acc
    for k in range(1, times.size):
        if times[k] > times[k - 1]:
            if p.custom_weight is not None:
                acc = weight_integral(p, float(times[k]))
            else:
                acc += adaptive_simpson(
                    lambda s: reciprocal_factor(p, s),
                    float(times[k - 1]),
                    float(times[k]),
                    atol=_QUAD_ATOL,
                    rtol=_QUAD_RTOL,
                )
        out[k] = acc
    return out


def log_weight_integral(p: DampingProfile, t: float) -> float:
    """Y(t) = integral_0^t ds / ((1+s) A(s)); equals ln(1+t) when a = 0.

    This is the clock against which the foliation density decays linearly
    near collapse, so it is the natural fit variable for zero-time
    extrapolation under damping.
    """
    if t < 0.0:
        raise ValueError("time must be nonnegative")
    if t == 0.0:
        return 0.0
    if p.custom_weight is None and p.a == 0.0:
        return math.log1p(t)
    return adaptive_simpson(
        lambda s: 1.0 / ((1.0 + s) * accumulated_factor(p, s)),
        0.0,
        t,
        atol=_QUAD_ATOL,
        rtol=_QUAD_RTOL,
    )


def invert_log_weight_integral(p: DampingProfile, y: float, t_hint: float = 1.0) -> float:
    """Solve Y(t) = y for t (Y strictly increasing)."""
    if y < 0.0:
        raise ValueError("target must be nonnegative")
    if y == 0.0:
        return 0.0
    from .numerics import bisect_root, expand_bracket

    bracket = expand_bracket(
        lambda t: log_weight_integral(p, t) - y, 0.0, max(t_hint, 1.0), 1e30
    )
    if bracket is None:
        raise ValueError(f"no time reaches Y={y}")
    return bisect_root(lambda t: log_weight_integral(p, t) - y, *bracket, rtol=1e-12)


def c_bounds(p: DampingProfile) -> tuple[float, float]:
    """Envelope (exp(-beta), exp(beta)) sandwiching A(t) for all t >= 0."""
    if p.custom_weight is not None:
        raise ValueError("c_bounds requires the power-law weight")
    b = p.beta
    return math.exp(-b), math.exp(b)


def _custom_a_and_i(p: DampingProfile, t: float) -> tuple[float, float]:
    """Jointly integrate A and I for a custom weight, refining until stable.

    Integrates y = (ln A, I) with RK4, doubling the step count until two
    successive refinements agree to _ODE_RTOL in both components.
    """
    if t == 0.0:
        return 1.0, 0.0
    weight = p.custom_weight

    def rhs(s, y):
        f = weight(s)
        if f < 0.0:
            raise ValueError(f"custom weight must be positive, got f({s:g})={f:g}")
        return np.array([p.a * f, math.exp(-y[0])])

    n = max(32, int(min(t, 1e6)))
    prev = integrate_rk4(rhs, 0.0, np.array([0.0, 0.0]), t, n)
    for _ in range(20):
        n *= 2
        cur = integrate_rk4(rhs, 0.0, np.array([0.0, 0.0]), t, n)
        err = np.max(np.abs(cur - prev) / (1.0 + np.abs(cur)))
        prev = cur
        if err <= _ODE_RTOL:
            break
    log_a = float(prev[0])
    a_val = math.exp(log_a) if log_a < 709.0 else math.inf
    return a_val, float(prev[1])
