"""Closed-form lifespan predictions, case classification, and shift analysis.

The headline formula: with pulse thickness delta and seed slope m <= -1, the
blow-up time satisfies  T* = exp( delta**(-1/2) * C / (2|m|) ) - 1  where the
constant C is pinned only inside the envelope returned by damping.c_bounds.
Predictions are therefore reported as intervals, never points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from . import damping
from .damping import DampingProfile


class HypothesisViolation(ValueError):
    """Inputs fall outside the hypotheses of the prediction formula."""


@dataclass(frozen=True)
class Shock:
    """Blow-up at a definite time t_star."""

    t_star: float

    def __post_init__(self):
        if not self.t_star > 0.0:
            raise ValueError("shock time must be positive")


@dataclass(frozen=True)
class ShockInterval:
    """Blow-up bracketed between lower and upper."""

    lower: float
    upper: float

    def __post_init__(self):
        if not (0.0 < self.lower <= self.upper):
            raise ValueError("interval must satisfy 0 < lower <= upper")

    @property
    def log_midpoint(self) -> float:
        """Midpoint of [ln(1+lower), ln(1+upper)]."""
        return 0.5 * (math.log1p(self.lower) + math.log1p(self.upper))


@dataclass(frozen=True)
class Global:
    """No blow-up; smooth solution persists."""

    note: str = ""


@dataclass(frozen=True)
class Inconclusive:
    """Search exhausted the window [0, t_max] without a verdict."""

    t_max: float


ShockClassification = Union[Shock, ShockInterval, Global, Inconclusive]


def t_star_interval(
    delta: float, min_phi1_prime: float, p: DampingProfile
) -> ShockInterval:
    """Predicted blow-up window for a compressive short pulse.

    Requires delta in (0,1), min_phi1_prime <= -1 (the largeness condition)
    and a power-law damping weight with lam > 1.
    """
    if not 0.0 < delta < 1.0:
        raise HypothesisViolation(f"pulse thickness must lie in (0,1), got {delta}")
    if min_phi1_prime > -1.0:
        raise HypothesisViolation(
            f"largeness condition unmet: min seed slope {min_phi1_prime} > -1"
        )
    c_low, c_high = damping.c_bounds(p)
    k = delta ** (-0.5) / (2.0 * abs(min_phi1_prime))
    return ShockInterval(math.expm1(k * c_low), math.expm1(k * c_high))


def classify_case(spec) -> ShockClassification:
    """Map a short-pulse seed to its predicted fate.

    spec is anything exposing delta, min_phi1_prime and a damping attribute
    (euler_radial.ShortPulseSpec qualifies), or classify by a bare slope via
    classify_min_slope.
    """
    return classify_min_slope(
        spec.min_phi1_prime, spec.delta, getattr(spec, "damping", None)
    )


def classify_min_slope(
    min_phi1_prime: float,
    delta: Optional[float] = None,
    p: Optional[DampingProfile] = None,
) -> ShockClassification:
    """Classification by the seed's minimum slope alone.

    Slope <= -1 is the compressive case (a shock interval when delta and the
    damping profile are known), slope > 0 the globally smooth case, and the
    band (-1, 0] is outside both hypotheses.
    """
    if min_phi1_prime <= -1.0:
        if delta is not None and p is not None and p.custom_weight is None:
            return t_star_interval(delta, min_phi1_prime, p)
        # compressive case with unspecified parameters: the trivial bracket
        return ShockInterval(math.ulp(0.0), math.inf)
    if min_phi1_prime > 0.0:
        return Global()
    return Inconclusive(t_max=math.inf)


def mu_asymptote(t: float, delta: float, phi1_prime_at_ray: float, a0: float) -> float:
    """Leading-order foliation density along a ray of seed slope phi1'.

    Returns 1 + 2*sqrt(delta)*phi1'*ln(1+t)/a0; a0 is the accumulated damping
    factor frozen at an intermediate time, so it must lie inside c_bounds.
    """
    if t < 0.0:
        raise ValueError("time must be nonnegative")
    return 1.0 + 2.0 * math.sqrt(delta) * phi1_prime_at_ray * math.log1p(t) / a0


def asymptote_zero_time(delta: float, phi1_prime_at_ray: float, a0: float = 1.0) -> float:
    """Time at which the leading-order density crosses zero (slope < 0 only)."""
    if phi1_prime_at_ray >= 0.0:
        raise ValueError("the asymptote only vanishes for negative seed slope")
    return math.expm1(a0 * delta ** (-0.5) / (2.0 * abs(phi1_prime_at_ray)))


def damping_central_factor(p: DampingProfile) -> float:
    """Signed representative exp(a/(lam-1)) of the damping constant.

    This is the limiting accumulated factor A(infinity): monotone increasing
    in a and tending to 1 as lam grows, so it orders predictions the way the
    true blow-up time shifts.  The arithmetic midpoint of c_bounds cannot do
    that (it is symmetric in |a|).
    """
    if p.custom_weight is not None:
        raise ValueError("central factor requires the power-law weight")
    return math.exp(p.a / (p.lam - 1.0))


@dataclass
class ShiftTable:
    """Grid of predicted blow-up windows over damping parameters.

    One row per (a, lam) cell: the interval, the central estimate built from
    the signed factor exp(a/(lam-1)), and the numerical blow-up time when one
    was supplied.  Monotonicity verdicts are computed, not assumed.
    """

    a_values: list[float]
    lam_values: list[float]
    delta: float
    min_phi1_prime: float
    rows: list[dict] = field(default_factory=list)
    monotone_in_a: bool = True
    monotone_in_lam: bool = True
    violations: list[str] = field(default_factory=list)

    def to_csv_rows(self) -> list[list]:
        header = ["a", "lambda", "t_lower", "t_upper", "t_numerical", "monotone_ok"]
        body = [
            [
                r["a"],
                r["lam"],
                r["t_lower"],
                r["t_upper"],
                r["t_numerical"] if r["t_numerical"] is not None else "",
                "yes" if self.monotone_in_a and self.monotone_in_lam else "no",
            ]
            for r in self.rows
        ]
        return [header] + body


def shift_analysis(
    a_values,
    lam_values,
    delta: float,
    min_phi1_prime: float,
    numerical_t_star: Optional[dict] = None,
) -> ShiftTable:
    """Tabulate predicted windows over an (a, lam) grid and check the shifts.

    Along a at fixed lam the central estimate must strictly increase; along
    lam at fixed a > 0 it must strictly decrease toward the undamped value.
    Violations are recorded in the table rather than raised.
    """
    a_values = [float(a) for a in a_values]
    lam_values = [float(l) for l in lam_values]
    if any(l <= 1.0 for l in lam_values):
        raise HypothesisViolation("all decay exponents must exceed 1")
    table = ShiftTable(a_values, lam_values, delta, min_phi1_prime)
    central = {}
    for lam in lam_values:
        for a in a_values:
            p = DampingProfile(a=a, lam=lam)
            iv = t_star_interval(delta, min_phi1_prime, p)
            k = delta ** (-0.5) / (2.0 * abs(min_phi1_prime))
            mid = math.expm1(k * damping_central_factor(p))
            central[(a, lam)] = mid
            t_num = None
            if numerical_t_star is not None:
                t_num = numerical_t_star.get((a, lam))
            table.rows.append(
                {
                    "a": a,
                    "lam": lam,
                    "t_lower": iv.lower,
                    "t_upper": iv.upper,
                    "t_central": mid,
                    "t_numerical": t_num,
                }
            )
    for lam in lam_values:
        seq = [central[(a, lam)] for a in sorted(a_values)]
        if not all(x < y for x, y in zip(seq, seq[1:])):
            table.monotone_in_a = False
            table.violations.append(f"central estimate not increasing in a at lam={lam}")
    undamped = {lam: central.get((0.0, lam)) for lam in lam_values}
    for a in a_values:
        if a <= 0.0:
            continue
        seq = [central[(a, lam)] for lam in sorted(lam_values)]
        if not all(x > y for x, y in zip(seq, seq[1:])):
            table.monotone_in_lam = False
            table.violations.append(f"central estimate not decreasing in lam at a={a}")
        for lam in lam_values:
            if undamped[lam] is not None and central[(a, lam)] <= undamped[lam]:
                table.monotone_in_lam = False
                table.violations.append(
                    f"damped estimate at (a={a}, lam={lam}) not above the undamped value"
                )
    return table


def chaplygin_flag(eos) -> bool:
    """True when the supplied equation of state has dH/dh = 0.

    Accepts either an object exposing dH_dh (or a gamma to derive it from)
    or a bare number standing for dH/dh.  A true flag overrides any
    compressive classification: the focusing mechanism is absent.
    """
    if hasattr(eos, "dH_dh"):
        value = eos.dH_dh() if callable(eos.dH_dh) else eos.dH_dh
    elif hasattr(eos, "gamma"):
        value = -(eos.gamma + 1.0)
    else:
        value = float(eos)
    return abs(value) < 1e-12


def apply_chaplygin_override(
    classification: ShockClassification, eos
) -> ShockClassification:
    """Replace any verdict by Global when the EOS is degenerate (dH/dh = 0)."""
    if chaplygin_flag(eos):
        return Global(note="degenerate equation of state: no focusing")
    return classification
