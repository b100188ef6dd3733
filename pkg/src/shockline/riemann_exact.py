"""Exact Riemann solver for the barotropic gas p(rho) = rho**gamma / gamma.

Independent validation oracle for the finite-volume solver in planar mode.
The isentropic system has two genuinely nonlinear wave families and no
contact; the middle state (rho*, v*) is found by matching the velocity
functions of the left and right waves (shock branches use the barotropic
Rankine-Hugoniot relations, rarefaction branches the Riemann invariants).
Kept free of any solver code so the comparison stays a true dual route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def _pressure(rho: float, gamma: float) -> float:
    return rho**gamma / gamma


def _sound_speed(rho: float, gamma: float) -> float:
    return rho ** ((gamma - 1.0) / 2.0)


def _wave_function(rho_star: float, rho0: float, gamma: float) -> float:
    """Signed velocity jump function f of one wave family.

    The middle state satisfies v* = v_l - f(rho*, rho_l) across the left
    wave and v* = v_r + f(rho*, rho_r) across the right one.  Compression
    (rho_star > rho0) takes the shock branch (f > 0), expansion the
    rarefaction branch (f < 0); f is strictly increasing in rho_star.
    """
    if rho_star > rho0:
        dp = _pressure(rho_star, gamma) - _pressure(rho0, gamma)
        dv2 = dp * (rho_star - rho0) / (rho_star * rho0)
        return math.sqrt(max(dv2, 0.0))
    eta_star = _sound_speed(rho_star, gamma)
    eta0 = _sound_speed(rho0, gamma)
    return 2.0 / (gamma - 1.0) * (eta_star - eta0)


@dataclass(frozen=True)
class RiemannSolution:
    """Middle state and wave metadata for one barotropic Riemann problem."""

    gamma: float
    rho_l: float
    v_l: float
    rho_r: float
    v_r: float
    rho_star: float
    v_star: float

    def sample(self, xi) -> tuple[np.ndarray, np.ndarray]:
        """Self-similar solution (rho, v) at speeds xi = x/t (vectorized)."""
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        rho = np.empty_like(xi)
        v = np.empty_like(xi)
        g = self.gamma
        eta_l = _sound_speed(self.rho_l, g)
        eta_r = _sound_speed(self.rho_r, g)
        eta_star = _sound_speed(self.rho_star, g)

        for i, s in enumerate(xi):
            if s <= self.v_star:
                # left wave region
                if self.rho_star > self.rho_l:
                    # left shock, speed from mass conservation
                    j = (
                        self.rho_star * self.v_star - self.rho_l * self.v_l
                    ) / (self.rho_star - self.rho_l)
                    if s < j:
                        rho[i], v[i] = self.rho_l, self.v_l
                    else:
                        rho[i], v[i] = self.rho_star, self.v_star
                else:
                    head = self.v_l - eta_l
                    tail = self.v_star - eta_star
                    if s < head:
                        rho[i], v[i] = self.rho_l, self.v_l
                    elif s > tail:
                        rho[i], v[i] = self.rho_star, self.v_star
                    else:
                        # inside the fan: v - eta = s and v + 2 eta/(g-1) const
                        r_inv = self.v_l + 2.0 * eta_l / (g - 1.0)
                        eta = (g - 1.0) / (g + 1.0) * (r_inv - s)
                        rho[i] = eta ** (2.0 / (g - 1.0))
                        v[i] = s + eta
            else:
                # right wave region
                if self.rho_star > self.rho_r:
                    j = (
                        self.rho_star * self.v_star - self.rho_r * self.v_r
                    ) / (self.rho_star - self.rho_r)
                    if s > j:
                        rho[i], v[i] = self.rho_r, self.v_r
                    else:
                        rho[i], v[i] = self.rho_star, self.v_star
                else:
                    head = self.v_r + eta_r
                    tail = self.v_star + eta_star
                    if s > head:
                        rho[i], v[i] = self.rho_r, self.v_r
                    elif s < tail:
                        rho[i], v[i] = self.rho_star, self.v_star
                    else:
                        r_inv = self.v_r - 2.0 * eta_r / (g - 1.0)
                        eta = (g - 1.0) / (g + 1.0) * (s - r_inv)
                        rho[i] = eta ** (2.0 / (g - 1.0))
                        v[i] = s - eta
        return rho, v


def solve(
    gamma: float,
    rho_l: float,
    v_l: float,
    rho_r: float,
    v_r: float,
    tol: float = 1e-14,
) -> RiemannSolution:
    """Solve one Riemann problem; raises on vacuum formation."""
    if rho_l <= 0.0 or rho_r <= 0.0:
        raise ValueError("states must have positive density")
    eta_l = _sound_speed(rho_l, gamma)
    eta_r = _sound_speed(rho_r, gamma)
    if v_r - v_l >= 2.0 / (gamma - 1.0) * (eta_l + eta_r):
        raise ValueError("initial states open a vacuum; not supported")

    def velocity_mismatch(rho_star: float) -> float:
        v_from_left = v_l - _wave_function(rho_star, rho_l, gamma)
        v_from_right = v_r + _wave_function(rho_star, rho_r, gamma)
        return v_from_left - v_from_right

    # mismatch is strictly decreasing in rho_star; bracket by doubling
    lo = 1e-12
    hi = max(rho_l, rho_r)
    while velocity_mismatch(hi) > 0.0:
        hi *= 2.0
        if hi > 1e12:
            raise RuntimeError("failed to bracket the middle density")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if velocity_mismatch(mid) > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol * hi:
            break
    rho_star = 0.5 * (lo + hi)
    v_star = 0.5 * (
        (v_l - _wave_function(rho_star, rho_l, gamma))
        + (v_r + _wave_function(rho_star, rho_r, gamma))
    )
    return RiemannSolution(
        gamma=gamma,
        rho_l=rho_l,
        v_l=v_l,
        rho_r=rho_r,
        v_r=v_r,
        rho_star=rho_star,
        v_star=v_star,
    )


def sample_profile(
    solution: RiemannSolution, x: np.ndarray, x0: float, t: float
) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate the solution on positions x at time t > 0 (interface at x0)."""
    if t <= 0.0:
        raise ValueError("sampling requires t > 0")
    return solution.sample((np.asarray(x, dtype=float) - x0) / t)
