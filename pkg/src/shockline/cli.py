"""Command-line interface.

Subcommands: burgers, euler, predict, sweep, accept, version.  A YAML config
file supplies defaults; explicit flags win.  Exit codes: 0 success, 2 config
error, 3 solver failure, 4 acceptance failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

import yaml

from . import __version__
from . import acceptance as acceptance_mod
from . import harness
from .euler_radial import SolverFailure
from .harness import ConfigError, RunConfig


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="YAML config file; flags override its keys")
    sub.add_argument("--out", dest="out_dir", help="output directory (SHOCKLINE_OUT overrides)")
    sub.add_argument("--a", type=float, help="damping strength")
    sub.add_argument("--lam", type=float, help="damping decay exponent (> 1)")


def _add_seedish(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--seed", help="named seed from the built-in library")
    sub.add_argument("--delta", type=float, help="pulse thickness in (0,1)")
    sub.add_argument(
        "--min-phi1-prime", dest="min_phi1_prime", type=float, help="attained min of phi1'"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shockline",
        description="Shock-formation laboratory for damped compressible flow",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_burgers = subs.add_parser("burgers", help="exact characteristic engine")
    _add_common(p_burgers)
    p_burgers.add_argument("--seed", help="Burgers datum name (linear-ramp, sine)")
    p_burgers.add_argument("--c", type=float, help="compression strength -min f'")

    p_euler = subs.add_parser("euler", help="radial finite-volume pulse run")
    _add_common(p_euler)
    _add_seedish(p_euler)
    p_euler.add_argument("--gamma", type=float, help="adiabatic exponent")
    p_euler.add_argument("--cells", type=int, help="grid cells")
    p_euler.add_argument("--t-max", dest="t_max", type=float, help="fixed time horizon")
    p_euler.add_argument("--mu-stop", dest="mu_stop", type=float, help="density stop level")

    p_predict = subs.add_parser("predict", help="closed-form lifespan prediction")
    _add_common(p_predict)
    _add_seedish(p_predict)
    p_predict.add_argument("--gamma", type=float, help="adiabatic exponent")

    p_sweep = subs.add_parser("sweep", help="Cartesian (a, lambda) sweep")
    _add_common(p_sweep)
    _add_seedish(p_sweep)
    p_sweep.add_argument("--c", type=float, help="Burgers compression strength")
    p_sweep.add_argument(
        "--a-values", dest="a_values", help="comma-separated damping strengths"
    )
    p_sweep.add_argument(
        "--lam-values", dest="lam_values", help="comma-separated decay exponents"
    )
    p_sweep.add_argument("--workers", type=int, help="worker pool size (default: cores)")

    p_accept = subs.add_parser("accept", help="run the acceptance suite")
    p_accept.add_argument("--config", help="YAML config file")
    p_accept.add_argument("--out", dest="out_dir", help="output directory")

    subs.add_parser("version", help="print the version")
    return parser


def _parse_float_list(text) -> list[float]:
    if text is None:
        return []
    if isinstance(text, (list, tuple)):
        return [float(x) for x in text]
    return [float(x) for x in str(text).split(",") if x.strip()]


def config_from_args(args: argparse.Namespace) -> RunConfig:
    base: dict = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            loaded = yaml.safe_load(fh) or {}
        if not isinstance(loaded, dict):
            raise ConfigError(f"config file {args.config} must hold a mapping")
        base.update(loaded)
    for key in (
        "out_dir",
        "a",
        "lam",
        "seed",
        "c",
        "delta",
        "min_phi1_prime",
        "gamma",
        "cells",
        "t_max",
        "mu_stop",
        "workers",
    ):
        value = getattr(args, key, None)
        if value is not None:
            base[key] = value
    for key in ("a_values", "lam_values"):
        value = getattr(args, key, None)
        if value is not None:
            base[key] = value
    base["mode"] = args.command
    base["a_values"] = _parse_float_list(base.get("a_values"))
    base["lam_values"] = _parse_float_list(base.get("lam_values"))
    known = {f.name for f in dataclasses.fields(RunConfig)}
    unknown = sorted(set(base) - known)
    if unknown:
        raise ConfigError(f"unknown config keys: {unknown}")
    try:
        cfg = RunConfig(**base)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    return cfg.validate()


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "version":
        print(__version__)
        return 0
    try:
        cfg = config_from_args(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        if args.command == "burgers":
            rep = harness.run_burgers(cfg)
        elif args.command == "euler":
            rep = harness.run_euler(cfg)
        elif args.command == "predict":
            rep = harness.run_predict(cfg)
        elif args.command == "sweep":
            rep = harness.run_sweep(cfg)
        elif args.command == "accept":
            out = harness.resolve_out_dir(cfg.out_dir)
            results = acceptance_mod.run_acceptance(out)
            return 0 if all(r.passed for r in results) else 4
        else:  # pragma: no cover - argparse enforces the choices
            return 2
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except SolverFailure as exc:
        dump = ""
        if exc.field is not None:
            from .euler_radial import PolytropicEos
            from .report import write_snapshot_csv

            out = harness.resolve_out_dir(cfg.out_dir)
            dump = write_snapshot_csv(
                f"{out}/failure_state.csv", exc.field, PolytropicEos(gamma=cfg.gamma)
            )
        print(f"solver failure: {exc} (state dump: {dump or 'none'})", file=sys.stderr)
        return 3
    print(f"report: {rep.files.get('report', '(none)')}")
    if rep.wall_clock_seconds is not None:
        print(f"wall clock: {rep.wall_clock_seconds:.2f}s")
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
