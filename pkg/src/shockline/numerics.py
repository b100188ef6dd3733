"""Small numerical kernels shared across the package.

Everything here is deterministic 64-bit arithmetic: an adaptive Simpson
quadrature, a safeguarded bisection root finder, a classical fixed-step RK4
integrator, and cubic (Catmull-Rom) interpolation on uniform grids.
"""

from __future__ import annotations

from typing import Callable

import numpy as np


class QuadratureError(RuntimeError):
    """Raised when a quadrature fails to reach the requested tolerance."""


class BracketError(ValueError):
    """Raised when a root bracket does not contain a sign change."""


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    atol: float = 1e-12,
    rtol: float = 1e-10,
    max_depth: int = 60,
) -> float:
    """Integrate f on [a, b] with adaptive Simpson refinement.

    The interval is split until the Richardson error estimate of each panel
    drops below its share of max(atol, rtol*|total|).
    """
    if b < a:
        return -adaptive_simpson(f, b, a, atol, rtol, max_depth)
    if b == a:
        return 0.0

    def simpson(x0, f0, x2, f2):
        x1 = 0.5 * (x0 + x2)
        f1 = f(x1)
        return x1, f1, (x2 - x0) / 6.0 * (f0 + 4.0 * f1 + f2)

    fa, fb = f(a), f(b)
    m, fm, whole = simpson(a, fa, b, fb)

    def recurse(x0, f0, x1, f1, x2, f2, s, tol, depth):
        lm, flm, left = simpson(x0, f0, x1, f1)
        rm, frm, right = simpson(x1, f1, x2, f2)
        err = left + right - s
        if abs(err) <= 15.0 * tol or depth >= max_depth:
            if depth >= max_depth and abs(err) > 15.0 * tol * 16.0:
                raise QuadratureError(
                    f"adaptive Simpson hit depth {max_depth} on "
                    f"[{x0:g}, {x2:g}] with error estimate {abs(err):.3e}"
                )
            return left + right + err / 15.0
        return recurse(x0, f0, lm, flm, x1, f1, left, tol / 2.0, depth + 1) + recurse(
            x1, f1, rm, frm, x2, f2, right, tol / 2.0, depth + 1
        )

    # the whole-interval Simpson estimate can badly overestimate the scale on
    # long decaying integrands, so rerun once with the refined magnitude
    result = recurse(a, fa, m, fm, b, fb, whole, max(atol, rtol * abs(whole)), 0)
    if abs(result) < 0.25 * abs(whole):
        result = recurse(a, fa, m, fm, b, fb, whole, max(atol, rtol * abs(result)), 0)
    return result


def bisect_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    rtol: float = 1e-10,
    atol: float = 0.0,
    max_iter: int = 200,
) -> float:
    """Find the root of a monotone continuous f on [lo, hi] by bisection.

    f(lo) and f(hi) must have opposite signs (zero endpoints are accepted).
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise BracketError(f"no sign change on [{lo:g}, {hi:g}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if flo * fm < 0.0:
            hi, fhi = mid, fm
        else:
            lo, flo = mid, fm
        if hi - lo <= atol + rtol * abs(mid):
            break
    return 0.5 * (lo + hi)


def expand_bracket(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    t_max: float,
    growth: float = 4.0,
    max_steps: int = 200,
) -> tuple[float, float] | None:
    """Grow [lo, hi] geometrically until f changes sign or hi exceeds t_max."""
    flo = f(lo)
    fhi = f(hi)
    steps = 0
    while flo * fhi > 0.0:
        if hi >= t_max or steps >= max_steps:
            return None
        lo, flo = hi, fhi
        hi = min(hi * growth, t_max)
        fhi = f(hi)
        steps += 1
    return lo, hi


def integrate_rk4(
    rhs: Callable[[float, np.ndarray], np.ndarray],
    t0: float,
    y0: np.ndarray,
    t1: float,
    n_steps: int,
) -> np.ndarray:
    """Classical fixed-step RK4 from t0 to t1; y may be any float array."""
    y = np.asarray(y0, dtype=float).copy()
    h = (t1 - t0) / n_steps
    t = t0
    for _ in range(n_steps):
        k1 = rhs(t, y)
        k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
        k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
        k4 = rhs(t + h, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t += h
    return y


def cubic_interp(x0: float, dx: float, values: np.ndarray, xq) -> np.ndarray:
    """Catmull-Rom cubic interpolation of uniformly gridded values at xq.

    Queries outside the grid are clamped to the end values.
    """
    v = np.asarray(values, dtype=float)
    xq = np.atleast_1d(np.asarray(xq, dtype=float))
    n = v.shape[0]
    s = (xq - x0) / dx
    j = np.floor(s).astype(int)
    j = np.clip(j, 0, n - 2)
    t = s - j
    t = np.clip(t, 0.0, 1.0)
    jm = np.maximum(j - 1, 0)
    jp = np.minimum(j + 1, n - 1)
    jpp = np.minimum(j + 2, n - 1)
    p0, p1, p2, p3 = v[jm], v[j], v[jp], v[jpp]
    t2 = t * t
    t3 = t2 * t
    out = 0.5 * (
        2.0 * p1
        + (p2 - p0) * t
        + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * t2
        + (3.0 * p1 - p0 - 3.0 * p2 + p3) * t3
    )
    return out


def cumtrapz(y: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Cumulative trapezoid of samples y(x); result[0] = 0."""
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(y)
    out[1:] = np.cumsum(0.5 * (y[1:] + y[:-1]) * np.diff(x))
    return out
