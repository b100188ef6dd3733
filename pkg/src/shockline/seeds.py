"""Built-in seed library for the Burgers engine and the radial pulse solver.

Every seed carries analytic derivatives.  Burgers seeds are normalized so
f(0) = 0 and the compression strength c = -min f' is a direct parameter.
Pulse seeds are parameterized by the attained minimum slope of phi1 on
[0, 1]; shapes whose slope cannot reach the requested minimum raise.
"""

from __future__ import annotations

import math
from typing import Callable

from .burgers import BurgersSeed
from .euler_radial import ShortPulseSpec, spec_from_phi1

BURGERS_SEEDS = ("linear-ramp", "sine")
PULSE_SEEDS = ("sine", "bump", "ramp", "skew")


def _smooth_plateau(u: float, core: float, width: float) -> tuple[float, float]:
    """Quintic cutoff: 1 on |u| <= core, 0 at |u| >= width, C2 in between."""
    x = abs(u)
    if x <= core:
        return 1.0, 0.0
    if x >= width:
        return 0.0, 0.0
    z = (x - core) / (width - core)
    val = 1.0 - z * z * z * (10.0 - 15.0 * z + 6.0 * z * z)
    dval = -30.0 * z * z * (1.0 - z) ** 2 / (width - core)
    return val, (dval if u >= 0.0 else -dval)


def burgers_seed(name: str, c: float = 1.0, half_width: float = 2.0) -> BurgersSeed:
    """Named Burgers datum with compression strength c > 0 (or expansion c < 0)."""
    if name == "linear-ramp":
        # -c*u on the core, mollified to zero at the window edges; the
        # shoulders only add expansive slope, so min f' = -c stays at 0
        core = 0.6 * half_width

        def f(u: float) -> float:
            m, _ = _smooth_plateau(u, core, half_width)
            return -c * u * m

        def fprime(u: float) -> float:
            m, dm = _smooth_plateau(u, core, half_width)
            return -c * (m + u * dm)

        if c > 0.0:
            return BurgersSeed(f=f, fprime=fprime, c=c, x_min_attained=0.0,
                               domain=(-half_width, half_width))
        from .burgers import seed_from_callable

        return seed_from_callable(f, (-half_width, half_width), fprime=fprime)
    if name == "sine":
        return BurgersSeed(
            f=lambda u: -c * math.sin(u),
            fprime=lambda u: -c * math.cos(u),
            c=c,
            x_min_attained=0.0,
            domain=(-math.pi, math.pi),
        )
    raise KeyError(f"unknown Burgers seed {name!r}; have {BURGERS_SEEDS}")


def _cos2_bump(x: float) -> float:
    return math.cos(0.5 * math.pi * x) ** 2 if abs(x) < 1.0 else 0.0


def _cos2_bump_integral(x: float) -> float:
    """Integral of the cos^2 bump from -1 to x; total mass 1."""
    if x <= -1.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    return 0.5 * (x + 1.0) + math.sin(math.pi * x) / (2.0 * math.pi)


def _cos2_bump_integral2(x: float) -> float:
    """Second antiderivative: integral of _cos2_bump_integral from -1 to x."""
    if x <= -1.0:
        return 0.0
    if x >= 1.0:
        return x
    pi2 = math.pi * math.pi
    return 0.25 * x * x + 0.5 * x - math.cos(math.pi * x) / (2.0 * pi2) + 0.25 - 0.5 / pi2


def pulse_seed(name: str, delta: float, min_phi1_prime: float = -1.0) -> ShortPulseSpec:
    """Named short-pulse profile with the requested attained min of phi1'."""
    m = float(min_phi1_prime)
    if name == "sine":
        # phi1 = (m/pi) sin(pi s): slope m cos(pi s) attains its minimum m at
        # s=0 (m<0 required; a sine slope cannot have a positive minimum)
        if m >= 0.0:
            raise ValueError("sine pulse needs a negative minimum slope")
        amp = m / math.pi
        return spec_from_phi1(
            phi1=lambda s: amp * math.sin(math.pi * s),
            phi1_prime=lambda s: m * math.cos(math.pi * s),
            phi0=lambda s: amp * (1.0 - math.cos(math.pi * s)) / math.pi,
            delta=delta,
            min_phi1_prime=m,
            name="sine",
        )
    if name == "bump":
        # phi1 = A sin^2(pi s): compact with vanishing end slopes;
        # slope A pi sin(2 pi s) attains min -|A| pi at s=3/4 for A>0
        if m >= 0.0:
            raise ValueError("bump pulse needs a negative minimum slope")
        amp = -m / math.pi
        return spec_from_phi1(
            phi1=lambda s: amp * math.sin(math.pi * s) ** 2,
            phi1_prime=lambda s: amp * math.pi * math.sin(2.0 * math.pi * s),
            phi0=lambda s: amp * (0.5 * s - math.sin(2.0 * math.pi * s) / (4.0 * math.pi)),
            delta=delta,
            min_phi1_prime=m,
            name="bump",
        )
    if name == "ramp":
        # phi1 = m*s: constant slope m (the only shape in the library whose
        # minimum slope can be positive; necessarily jumps at s=1)
        return spec_from_phi1(
            phi1=lambda s: m * s,
            phi1_prime=lambda s: m,
            phi0=lambda s: 0.5 * m * s * s,
            delta=delta,
            min_phi1_prime=m,
            name="ramp",
        )
    if name == "skew":
        # asymmetric: a wide gentle rise (slope 0.225|m|) carrying a narrow
        # dip of slope -|m| near s=0.89; compact support with zero net area
        if m >= 0.0:
            raise ValueError("skew pulse needs a negative minimum slope")
        amp = -m
        p_up = 0.09 / 0.4

        def phi1_prime(s: float) -> float:
            return amp * (p_up * _cos2_bump((s - 0.4) / 0.4) - _cos2_bump((s - 0.89) / 0.09))

        def phi1(s: float) -> float:
            rise = p_up * 0.4 * _cos2_bump_integral((s - 0.4) / 0.4)
            dip = 0.09 * _cos2_bump_integral((s - 0.89) / 0.09)
            return amp * (rise - dip)

        def phi0(s: float) -> float:
            rise = p_up * 0.4**2 * _cos2_bump_integral2((s - 0.4) / 0.4)
            dip = 0.09**2 * _cos2_bump_integral2((s - 0.89) / 0.09)
            return amp * (rise - dip)

        return spec_from_phi1(
            phi1=phi1,
            phi1_prime=phi1_prime,
            phi0=phi0,
            delta=delta,
            min_phi1_prime=m,
            name="skew",
        )
    raise KeyError(f"unknown pulse seed {name!r}; have {PULSE_SEEDS}")
