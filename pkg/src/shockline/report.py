"""Artifact writers: CSV with 17 significant digits, canonical JSON reports.

The acceptance suite demands byte-identical outputs across runs, so every
writer here is deterministic: sorted JSON keys, fixed float formatting, no
timestamps inside artifacts.  Wall-clock timings stay on the console only.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from typing import Optional

from .predict import Global, Inconclusive, Shock, ShockClassification, ShockInterval


def fmt_float(x) -> str:
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def write_csv(path: str, header: list[str], rows) -> str:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt_float(x) for x in row) + "\n")
    return path


def classification_to_dict(c: ShockClassification) -> dict:
    if isinstance(c, Shock):
        return {"variant": "shock", "t_star": c.t_star}
    if isinstance(c, ShockInterval):
        return {"variant": "shock_interval", "lower": c.lower, "upper": c.upper}
    if isinstance(c, Global):
        return {"variant": "global", "note": c.note}
    if isinstance(c, Inconclusive):
        return {"variant": "inconclusive", "t_max": c.t_max}
    raise TypeError(f"not a classification: {c!r}")


def _sanitize(value):
    """JSON-ready copy with non-finite floats made explicit strings."""
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if isinstance(value, dict):
        return {k: _sanitize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_sanitize(v) for v in value]
    return value


@dataclass
class ShockReport:
    """Single-run summary: configuration echo, verdicts, artifact paths."""

    config: dict
    classification: Optional[dict] = None
    predicted_interval: Optional[dict] = None
    t_collapse_jac: Optional[float] = None
    t_collapse_ode: Optional[float] = None
    t_zero_fit: Optional[float] = None
    mu_min_final: Optional[float] = None
    discrepancy: Optional[float] = None
    monotonicity: Optional[dict] = None
    files: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    status: str = "ok"
    wall_clock_seconds: Optional[float] = None

    def to_json(self, deterministic: bool = True) -> str:
        payload = {
            "config": self.config,
            "classification": self.classification,
            "predicted_interval": self.predicted_interval,
            "t_collapse_jac": self.t_collapse_jac,
            "t_collapse_ode": self.t_collapse_ode,
            "t_zero_fit": self.t_zero_fit,
            "mu_min_final": self.mu_min_final,
            "discrepancy": self.discrepancy,
            "monotonicity": self.monotonicity,
            "files": self.files,
            "notes": self.notes,
            "status": self.status,
        }
        if not deterministic:
            payload["wall_clock_seconds"] = self.wall_clock_seconds
        return json.dumps(_sanitize(payload), indent=2, sort_keys=True) + "\n"

    def write(self, path: str, deterministic: bool = True) -> str:
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        with open(path, "w") as fh:
            fh.write(self.to_json(deterministic=deterministic))
        return path


def write_snapshot_csv(path: str, field_state, eos) -> str:
    """Snapshot dump: t,r,rho,v,h,eta rows at 17 significant digits."""
    h = eos.enthalpy(field_state.rho)
    eta = eos.sound_speed(field_state.rho)
    rows = (
        [field_state.t, r, rho, v, hh, ee]
        for r, rho, v, hh, ee in zip(field_state.r, field_state.rho, field_state.v, h, eta)
    )
    return write_csv(path, ["t", "r", "rho", "v", "h", "eta"], rows)


def write_mu_history_csv(path: str, fan) -> str:
    """Density history dump: t,u,mu_jac,mu_ode per (time, ray) sample."""
    mu_ode = fan.mu_ode
    rows = []
    for k, t in enumerate(fan.times):
        for j, u in enumerate(fan.u_grid):
            rows.append(
                [
                    float(t),
                    float(u),
                    float(fan.mu_jac[k, j]),
                    float(mu_ode[k, j]) if mu_ode is not None else "",
                ]
            )
    return write_csv(path, ["t", "u", "mu_jac", "mu_ode"], rows)
