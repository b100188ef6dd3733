"""Run orchestration: configured single runs, parameter sweeps, artifacts.

The Euler shock driver sizes its own grid from the leading-order collapse
estimate, advances the solver in chunks while tracing rays online, and stops
as soon as the fan density reaches the requested floor, so domains stay as
small (and grids as fine) as the question being asked allows.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dataclass_field
from typing import Optional

import numpy as np

from . import acoustic_geometry as ag
from . import burgers as burgers_mod
from . import damping as damping_mod
from . import predict as predict_mod
from . import report as report_mod
from . import seeds as seeds_mod
from . import svgplot
from .damping import DampingProfile
from .euler_radial import (
    DEFAULT_CELLS,
    DEFAULT_CFL,
    DEFAULT_R_IN,
    GradientHistory,
    PolytropicEos,
    SnapshotRecorder,
    Trajectory,
    build_short_pulse,
    make_grid,
    run_until,
)


class ConfigError(ValueError):
    """Invalid run configuration (maps to exit code 2)."""


@dataclass
class RunConfig:
    """Validated configuration for one harness invocation."""

    mode: str = "predict"
    a: float = 0.0
    lam: float = 2.0
    seed: str = "sine"
    c: float = 1.0
    delta: float = 0.25
    min_phi1_prime: float = -1.0
    gamma: float = 1.4
    cells: int = DEFAULT_CELLS
    r_in: float = DEFAULT_R_IN
    cfl: float = DEFAULT_CFL
    t_max: Optional[float] = None
    mu_stop: float = 0.2
    n_rays: int = 65
    out_dir: str = "out"
    a_values: list = dataclass_field(default_factory=list)
    lam_values: list = dataclass_field(default_factory=list)
    workers: int = 0

    VALID_MODES = ("burgers", "euler", "predict", "sweep", "accept")

    def validate(self) -> "RunConfig":
        if self.mode not in self.VALID_MODES:
            raise ConfigError(f"mode must be one of {self.VALID_MODES}, got {self.mode!r}")
        if self.lam <= 1.0:
            raise ConfigError(f"decay exponent must exceed 1, got lam={self.lam}")
        for lam in self.lam_values:
            if lam <= 1.0:
                raise ConfigError(f"sweep decay exponent must exceed 1, got {lam}")
        if self.mode in ("euler",) and not 0.0 < self.delta < 1.0:
            raise ConfigError(f"pulse thickness must lie in (0,1), got {self.delta}")
        if self.gamma <= 1.0:
            raise ConfigError(f"adiabatic exponent must exceed 1, got {self.gamma}")
        if self.cells < 16:
            raise ConfigError("cells must be at least 16")
        if self.mode == "burgers" and self.seed not in seeds_mod.BURGERS_SEEDS:
            raise ConfigError(
                f"unknown Burgers seed {self.seed!r}; have {seeds_mod.BURGERS_SEEDS}"
            )
        if self.mode == "euler" and self.seed not in seeds_mod.PULSE_SEEDS:
            raise ConfigError(f"unknown pulse seed {self.seed!r}; have {seeds_mod.PULSE_SEEDS}")
        return self

    def echo(self) -> dict:
        return {
            "mode": self.mode,
            "a": self.a,
            "lam": self.lam,
            "seed": self.seed,
            "c": self.c,
            "delta": self.delta,
            "min_phi1_prime": self.min_phi1_prime,
            "gamma": self.gamma,
            "cells": self.cells,
            "r_in": self.r_in,
            "cfl": self.cfl,
            "t_max": self.t_max,
            "mu_stop": self.mu_stop,
            "n_rays": self.n_rays,
            "a_values": list(self.a_values),
            "lam_values": list(self.lam_values),
        }


def resolve_out_dir(cfg_dir: str) -> str:
    return os.environ.get("SHOCKLINE_OUT", cfg_dir)


@dataclass
class EulerShockResult:
    """Everything a report or acceptance check needs from one pulse run."""

    trajectory: Trajectory
    fan: ag.AcousticFan
    mu_report: ag.MuReport
    t_zero_fit: Optional[float]
    gradients: GradientHistory
    final_field: object
    status: str
    eos: PolytropicEos
    profile: DampingProfile


def collapse_fit_zero(
    times: np.ndarray,
    mu_min: np.ndarray,
    p: DampingProfile,
    window: tuple[float, float] = (0.55, 0.93),
) -> Optional[float]:
    """Zero time of the linear decay of min-mu against the damped log-clock.

    Fits mu_min over the early window (where the steepening core is still
    grid-resolved) against Y(t) = integral ds/((1+s)A(s)) and inverts Y at
    the extrapolated zero.  Returns None when the window is empty or the
    fitted slope is not a decay.
    """
    lo, hi = window
    mask = (mu_min <= hi) & (mu_min >= lo)
    if mask.sum() < 3:
        return None
    ys = np.array([damping_mod.log_weight_integral(p, float(t)) for t in times[mask]])
    slope, intercept = np.polyfit(ys, mu_min[mask], 1)
    if slope >= 0.0:
        return None
    y_zero = -intercept / slope
    return damping_mod.invert_log_weight_integral(p, y_zero, t_hint=float(times[-1]) + 1.0)


def pulse_strength(spec) -> float:
    """Largest |phi1'| over the seed, the rate that sets the collapse clock."""
    ss = np.linspace(0.0, 1.0, 2049)
    slopes = np.array([spec.phi1_prime(float(s)) for s in ss])
    return float(max(abs(slopes.min()), abs(slopes.max()), 1e-3))


def estimate_collapse_horizon(spec, eos: PolytropicEos, p: DampingProfile, mu_floor: float) -> float:
    """Leading-order time for min-mu to reach mu_floor, with safety margin."""
    k = 0.5 * (eos.gamma + 1.0) * math.sqrt(spec.delta) * pulse_strength(spec)
    y_target = (1.0 - 0.8 * mu_floor) / k
    t_est = damping_mod.invert_log_weight_integral(p, y_target)
    return 1.6 * t_est + 1.0


def euler_shock_run(
    spec,
    eos: PolytropicEos,
    p: DampingProfile,
    n_cells: int = DEFAULT_CELLS,
    r_in: float = DEFAULT_R_IN,
    mu_stop: float = 0.2,
    t_cap: Optional[float] = None,
    n_rays: int = 65,
    cfl: float = DEFAULT_CFL,
    snapshot_stride: int = 8,
    max_attempts: int = 3,
    collapse_threshold: float = ag.DEFAULT_COLLAPSE_THRESHOLD,
) -> EulerShockResult:
    """Chunked solver run with online ray tracing and early collapse stop.

    When t_cap is not given it comes from the leading-order collapse
    estimate; if the fan has not reached mu_stop by the cap, the run is
    retried from scratch on a longer (coarser) domain.
    """
    fixed_cap = t_cap is not None
    if t_cap is None:
        t_cap = estimate_collapse_horizon(spec, eos, p, mu_stop)
    status = "t_max"
    for attempt in range(max_attempts):
        grid = make_grid(r_in, 1.0 + 1.06 * t_cap + 0.5, n_cells)
        field = build_short_pulse(spec, eos, p, grid)
        trajectory = Trajectory(r=field.r)
        trajectory.record(field)
        recorder = SnapshotRecorder(trajectory, stride=snapshot_stride)
        gradients = GradientHistory(stride=snapshot_stride)
        tracer = ag.RayTracer(trajectory, eos, ag.default_fan_labels(spec.delta, n_rays))
        t = 0.0
        mu_min = 1.0
        status = "t_max"
        while t < t_cap:
            t = min(t + max(0.1, 0.06 * t), t_cap)
            res = run_until(field, eos, p, t_max=t, monitors=(recorder, gradients), cfl=cfl)
            field = res.field
            recorder.flush(field)
            tracer.advance()
            mu_min = float(tracer.mu_jac_core().min(axis=1)[-1])
            if res.status != "t_max":
                status = res.status
                break
            if mu_min <= mu_stop:
                status = "mu_stop"
                break
        if status in ("mu_stop", "gradient_blowup") or fixed_cap:
            break
        if mu_min > mu_stop and attempt + 1 < max_attempts:
            t_cap *= 1.8
            continue
        break
    fan = tracer.fan()
    fan.mu_ode = ag.transport_fan(trajectory, eos, p, fan)
    mu_report = ag.detect_collapse(fan, threshold=collapse_threshold)
    mins = fan.mu_jac.min(axis=1)
    t_zero = collapse_fit_zero(fan.times, mins, p)
    return EulerShockResult(
        trajectory=trajectory,
        fan=fan,
        mu_report=mu_report,
        t_zero_fit=t_zero,
        gradients=gradients,
        final_field=field,
        status=status,
        eos=eos,
        profile=p,
    )


def run_burgers(cfg: RunConfig) -> report_mod.ShockReport:
    """Burgers mode: exact classification plus a crossing-time cross-check."""
    start = time.perf_counter()
    out = resolve_out_dir(cfg.out_dir)
    p = DampingProfile(a=cfg.a, lam=cfg.lam)
    seed = seeds_mod.burgers_seed(cfg.seed, c=cfg.c)
    classification = burgers_mod.shock_time(seed, p)
    rep = report_mod.ShockReport(config=cfg.echo())
    rep.classification = report_mod.classification_to_dict(classification)
    if isinstance(classification, predict_mod.Shock):
        t_star = classification.t_star
        u_grid = np.linspace(seed.domain[0] / 2.0, seed.domain[1] / 2.0, 257)
        t_cross = burgers_mod.crossing_time(seed, p, u_grid)
        rep.t_collapse_jac = t_cross
        times = np.linspace(0.0, 0.98 * t_star, 33)
        fan = burgers_mod.trace_fan(seed, p, times, np.linspace(-0.5, 0.5, 33))
        rows = []
        for k, t in enumerate(times):
            for j, u in enumerate(fan.u_grid):
                rows.append([float(t), float(u), float(fan.mu[k, j])])
        rep.files["mu_history"] = report_mod.write_csv(
            os.path.join(out, "burgers_mu_history.csv"), ["t", "u", "mu"], rows
        )
        rep.files["mu_plot"] = svgplot.line_plot(
            os.path.join(out, "burgers_mu_vs_t.svg"),
            [
                (f"u={fan.u_grid[j]:.2f}", times, fan.mu[:, j])
                for j in range(0, fan.u_grid.size, 8)
            ],
            title="fan density along rays",
            xlabel="t",
            ylabel="mu",
        )
    rep.wall_clock_seconds = time.perf_counter() - start
    rep.files["report"] = os.path.join(out, "burgers_report.json")
    rep.write(rep.files["report"])
    return rep


def run_predict(cfg: RunConfig) -> report_mod.ShockReport:
    """Prediction mode: classification, interval, asymptote zero."""
    start = time.perf_counter()
    out = resolve_out_dir(cfg.out_dir)
    p = DampingProfile(a=cfg.a, lam=cfg.lam)
    classification = predict_mod.classify_min_slope(cfg.min_phi1_prime, cfg.delta, p)
    classification = predict_mod.apply_chaplygin_override(
        classification, PolytropicEos(gamma=cfg.gamma)
    )
    rep = report_mod.ShockReport(config=cfg.echo())
    rep.classification = report_mod.classification_to_dict(classification)
    if isinstance(classification, predict_mod.ShockInterval) and math.isfinite(
        classification.upper
    ):
        rep.predicted_interval = {
            "lower": classification.lower,
            "upper": classification.upper,
        }
        rep.notes.append(
            "asymptote zero (undamped constant): "
            f"{predict_mod.asymptote_zero_time(cfg.delta, cfg.min_phi1_prime, 1.0):.17g}"
        )
    rep.wall_clock_seconds = time.perf_counter() - start
    rep.files["report"] = os.path.join(out, "predict_report.json")
    rep.write(rep.files["report"])
    return rep


def run_euler(cfg: RunConfig) -> report_mod.ShockReport:
    """Euler mode: full pulse run with dual-method density and artifacts."""
    start = time.perf_counter()
    out = resolve_out_dir(cfg.out_dir)
    eos = PolytropicEos(gamma=cfg.gamma)
    p = DampingProfile(a=cfg.a, lam=cfg.lam)
    spec = seeds_mod.pulse_seed(cfg.seed, cfg.delta, cfg.min_phi1_prime)
    result = euler_shock_run(
        spec,
        eos,
        p,
        n_cells=cfg.cells,
        r_in=cfg.r_in,
        mu_stop=cfg.mu_stop,
        t_cap=cfg.t_max,
        n_rays=cfg.n_rays,
        cfl=cfg.cfl,
    )
    rep = report_mod.ShockReport(config=cfg.echo())
    classification = predict_mod.classify_min_slope(cfg.min_phi1_prime, cfg.delta, p)
    rep.classification = report_mod.classification_to_dict(classification)
    if isinstance(classification, predict_mod.ShockInterval):
        rep.predicted_interval = {
            "lower": classification.lower,
            "upper": classification.upper,
        }
    rep.t_collapse_jac = result.mu_report.t_collapse_jac
    rep.t_collapse_ode = result.mu_report.t_collapse_ode
    rep.t_zero_fit = result.t_zero_fit
    rep.mu_min_final = float(result.fan.mu_jac.min())
    rep.discrepancy = result.mu_report.discrepancy
    rep.status = result.status
    rep.files["mu_history"] = report_mod.write_mu_history_csv(
        os.path.join(out, "mu_history.csv"), result.fan
    )
    rep.files["final_snapshot"] = report_mod.write_snapshot_csv(
        os.path.join(out, "final_snapshot.csv"), result.final_field, eos
    )
    rep.files["gradient_history"] = report_mod.write_csv(
        os.path.join(out, "gradient_history.csv"),
        ["t", "max_dv_dr", "max_drho_dr"],
        zip(result.gradients.times, result.gradients.max_dv_dr, result.gradients.max_drho_dr),
    )
    fan = result.fan
    rep.files["mu_plot"] = svgplot.line_plot(
        os.path.join(out, "mu_vs_t.svg"),
        [
            (f"u={fan.u_grid[j]:.3f}", fan.times, fan.mu_jac[:, j])
            for j in range(0, fan.u_grid.size, max(1, fan.u_grid.size // 8))
        ],
        title="fan density along rays",
        xlabel="t",
        ylabel="mu",
    )
    rep.files["gradient_plot"] = svgplot.line_plot(
        os.path.join(out, "gradient_vs_t.svg"),
        [("max |dv/dr|", result.gradients.times, result.gradients.max_dv_dr)],
        title="largest velocity gradient",
        xlabel="t",
        ylabel="max |dv/dr|",
    )
    rep.wall_clock_seconds = time.perf_counter() - start
    rep.files["report"] = os.path.join(out, "euler_report.json")
    rep.write(rep.files["report"])
    return rep


def _sweep_cell(args: tuple) -> tuple:
    """One Burgers sweep cell; returns (key, t_star or None, error or None)."""
    a, lam, seed_name, c = args
    try:
        seed = seeds_mod.burgers_seed(seed_name, c=c)
        result = burgers_mod.shock_time(seed, DampingProfile(a=a, lam=lam))
        t_star = result.t_star if isinstance(result, predict_mod.Shock) else None
        return (a, lam), t_star, None
    except Exception as exc:  # noqa: BLE001 - per-cell failures must not kill the sweep
        return (a, lam), None, repr(exc)


def run_sweep(cfg: RunConfig) -> report_mod.ShockReport:
    """Cartesian sweep over (a, lam): numerical Burgers blow-up times merged
    with the predicted windows into a shift table."""
    start = time.perf_counter()
    out = resolve_out_dir(cfg.out_dir)
    a_values = list(cfg.a_values) if cfg.a_values else [cfg.a]
    lam_values = list(cfg.lam_values) if cfg.lam_values else [cfg.lam]
    cells = [(a, lam, cfg.seed, cfg.c) for lam in lam_values for a in a_values]
    workers = cfg.workers if cfg.workers > 0 else (os.cpu_count() or 1)
    numerical: dict = {}
    errors: dict = {}
    if workers == 1 or len(cells) == 1:
        outcomes = map(_sweep_cell, cells)
    else:
        with ProcessPoolExecutor(max_workers=min(workers, len(cells))) as pool:
            outcomes = list(pool.map(_sweep_cell, cells))
    for key, t_star, err in outcomes:
        numerical[key] = t_star
        if err is not None:
            errors[key] = err
    table = predict_mod.shift_analysis(
        a_values, lam_values, cfg.delta, cfg.min_phi1_prime, numerical_t_star=numerical
    )
    rep = report_mod.ShockReport(config=cfg.echo())
    rep.monotonicity = {
        "in_a": table.monotone_in_a,
        "in_lam": table.monotone_in_lam,
        "violations": table.violations,
    }
    rows = table.to_csv_rows()
    rep.files["shift_table"] = report_mod.write_csv(
        os.path.join(out, "shift_table.csv"), rows[0], rows[1:]
    )
    if errors:
        rep.notes.append(f"cell failures: {sorted((str(k), v) for k, v in errors.items())}")
        rep.status = "partial"
    numeric_by_a = [
        (a, numerical.get((a, lam_values[0]))) for a in sorted(a_values)
    ]
    if all(v is not None for _, v in numeric_by_a) and len(numeric_by_a) > 1:
        rep.files["t_star_vs_a"] = svgplot.line_plot(
            os.path.join(out, "t_star_vs_a.svg"),
            [("numerical", [x for x, _ in numeric_by_a], [y for _, y in numeric_by_a])],
            title=f"blow-up time vs damping strength (lam={lam_values[0]:g})",
            xlabel="a",
            ylabel="t*",
        )
    numeric_by_lam = [
        (lam, numerical.get((a_values[-1], lam))) for lam in sorted(lam_values)
    ]
    if all(v is not None for _, v in numeric_by_lam) and len(numeric_by_lam) > 1:
        rep.files["t_star_vs_lam"] = svgplot.line_plot(
            os.path.join(out, "t_star_vs_lam.svg"),
            [("numerical", [x for x, _ in numeric_by_lam], [y for _, y in numeric_by_lam])],
            title=f"blow-up time vs decay exponent (a={a_values[-1]:g})",
            xlabel="lambda",
            ylabel="t*",
        )
    rep.wall_clock_seconds = time.perf_counter() - start
    rep.files["report"] = os.path.join(out, "sweep_report.json")
    rep.write(rep.files["report"])
    return rep
